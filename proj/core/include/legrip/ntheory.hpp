// Modular arithmetic, Legendre/Jacobi symbols, Miller-Rabin primality and
// Bertrand-interval prime search.
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "legrip/bignat.hpp"

namespace legrip {

enum class PrimeMethod { deterministic_small, miller_rabin };

// Records how a prime was certified. rounds is 0 for the deterministic
// witness set (exact below 2^64), otherwise the Miller-Rabin round count
// (error probability < 4^-rounds).
struct PrimeCert {
  BigNat p;
  PrimeMethod method = PrimeMethod::deterministic_small;
  int rounds = 0;
};

const char* prime_method_name(PrimeMethod m);

bool is_prime(const BigNat& n);

// nullopt if n is composite (or < 2).
std::optional<PrimeCert> try_certify_prime(const BigNat& n);

// Throws std::invalid_argument if p is not prime.
PrimeCert certify_prime(const BigNat& p);

// Smallest certified prime >= lower, lower >= 2. Ascending deterministic
// search; Bertrand guarantees the result is <= 2*lower.
PrimeCert next_prime_geq(const BigNat& lower);

// (a/p) for odd prime p. +1 for a nonzero quadratic residue mod p, -1 for a
// nonresidue, 0 when p | a. Validates that p is an odd certified prime and
// evaluates Euler's criterion a^((p-1)/2) mod p by square-and-multiply with
// reduction at every step. Throws std::invalid_argument for even or
// composite p.
int legendre_symbol(const BigNat& a, const BigNat& p);

// Same contract, primality already certified by the caller.
int legendre_symbol_euler(const BigNat& a, const BigNat& p);

// Jacobi symbol (a/n) for odd n >= 1 via quadratic reciprocity. Equals the
// Legendre symbol whenever n is prime. Throws std::invalid_argument for
// even n.
int jacobi_symbol(const BigNat& a, const BigNat& n);
int jacobi_symbol_u64(std::uint64_t a, std::uint64_t n);

// Dense table of (a/p) for a in [0,p). Entry a is -1/0/+1. Only sensible
// for word-sized p; refuses p >= kSymbolTableLimit to bound memory.
inline constexpr std::uint64_t kSymbolTableLimit = std::uint64_t{1} << 26;
std::vector<std::int8_t> legendre_table(std::uint64_t p);

// Bulk Legendre evaluator for one prime. Certifies p once at construction
// and picks the cheapest evaluation path: a dense residue table for small p,
// word-sized Jacobi below 2^63, big-integer Jacobi above. Instances are
// immutable and safe to share across threads.
class SymbolEngine {
 public:
  explicit SymbolEngine(const BigNat& p);
  explicit SymbolEngine(PrimeCert cert);

  int operator()(const BigNat& a) const;

  // Symbols of start, start+1, ..., start+len-1 into out.
  void stream(const BigNat& start, std::size_t len, std::int8_t* out) const;
  std::vector<std::int8_t> stream(const BigNat& start, std::size_t len) const;

  const BigNat& p() const { return cert_.p; }
  const PrimeCert& cert() const { return cert_; }

 private:
  int eval_u64(std::uint64_t residue) const;

  PrimeCert cert_;
  std::uint64_t p64_ = 0;  // 0 when p does not fit 63 bits
  std::vector<std::int8_t> table_;
};

}  // namespace legrip

#include "legrip/ntheory.hpp"

#include <boost/multiprecision/integer.hpp>

#include <array>
#include <stdexcept>

#include "legrip/rng.hpp"

namespace legrip {
namespace {

using boost::multiprecision::lsb;
using boost::multiprecision::msb;
using boost::multiprecision::powm;

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % m);
}

std::uint64_t powmod_u64(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  base %= m;
  while (exp) {
    if (exp & 1) r = mulmod_u64(r, base, m);
    base = mulmod_u64(base, base, m);
    exp >>= 1;
  }
  return r;
}

// One Miller-Rabin round; n odd > 2, n-1 = d * 2^s.
bool mr_round_u64(std::uint64_t n, std::uint64_t d, int s, std::uint64_t base) {
  base %= n;
  if (base == 0) return true;
  std::uint64_t x = powmod_u64(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod_u64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// Exact for every n < 3.3e24, in particular for all 64-bit n.
constexpr std::array<std::uint64_t, 12> kDetWitnesses = {2,  3,  5,  7,  11, 13,
                                                        17, 19, 23, 29, 31, 37};

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t q : kDetWitnesses) {
    if (n == q) return true;
    if (n % q == 0) return false;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t base : kDetWitnesses)
    if (!mr_round_u64(n, d, s, base)) return false;
  return true;
}

constexpr int kBigRounds = 64;

// Trial-division prefilter primes.
const std::vector<std::uint32_t>& small_primes() {
  static const std::vector<std::uint32_t> primes = [] {
    std::vector<std::uint32_t> ps;
    for (std::uint32_t n = 2; n < 1000; ++n) {
      bool ok = true;
      for (std::uint32_t q : ps) {
        if (q * q > n) break;
        if (n % q == 0) {
          ok = false;
          break;
        }
      }
      if (ok) ps.push_back(n);
    }
    return ps;
  }();
  return primes;
}

bool mr_round_big(const BigNat& n, const BigNat& d, unsigned s, const BigNat& base) {
  if (base % n == 0) return true;
  BigNat x = powm(base, d, n);
  if (x == 1 || x == n - 1) return true;
  for (unsigned i = 1; i < s; ++i) {
    x = (x * x) % n;
    if (x == n - 1) return true;
  }
  return false;
}

// Probabilistic test for n >= 2^64; bases are derived deterministically from
// n so certification is reproducible.
bool is_prime_big(const BigNat& n) {
  for (std::uint32_t q : small_primes())
    if (n % q == 0) return false;
  BigNat d = n - 1;
  unsigned s = lsb(d);
  d >>= s;
  const std::uint64_t key =
      (n & BigNat(UINT64_MAX)).convert_to<std::uint64_t>() ^ (msb(n) * SplitMix64::kGolden);
  const BigNat span = n - 3;
  for (int i = 0; i < kBigRounds; ++i) {
    BigNat base = 2 + BigNat(SplitMix64::at(key, static_cast<std::uint64_t>(i))) % span;
    if (!mr_round_big(n, d, s, base)) return false;
  }
  return true;
}

}  // namespace

const char* prime_method_name(PrimeMethod m) {
  switch (m) {
    case PrimeMethod::deterministic_small:
      return "deterministic-small";
    case PrimeMethod::miller_rabin:
      return "miller-rabin";
  }
  return "?";
}

std::optional<PrimeCert> try_certify_prime(const BigNat& n) {
  if (n < 2) return std::nullopt;
  if (fits_u64(n)) {
    if (!is_prime_u64(to_u64(n))) return std::nullopt;
    return PrimeCert{n, PrimeMethod::deterministic_small, 0};
  }
  if ((n & 1) == 0) return std::nullopt;
  if (!is_prime_big(n)) return std::nullopt;
  return PrimeCert{n, PrimeMethod::miller_rabin, kBigRounds};
}

bool is_prime(const BigNat& n) { return try_certify_prime(n).has_value(); }

PrimeCert certify_prime(const BigNat& p) {
  auto cert = try_certify_prime(p);
  if (!cert) throw std::invalid_argument("not a prime: " + p.str());
  return *cert;
}

PrimeCert next_prime_geq(const BigNat& lower) {
  if (lower < 2) throw std::invalid_argument("next_prime_geq requires lower >= 2");
  if (lower == 2) return certify_prime(BigNat(2));
  BigNat cand = lower;
  if ((cand & 1) == 0) ++cand;
  for (;; cand += 2) {
    if (auto cert = try_certify_prime(cand)) return *cert;
  }
}

int jacobi_symbol_u64(std::uint64_t a, std::uint64_t n) {
  if ((n & 1) == 0) throw std::invalid_argument("Jacobi symbol needs odd n");
  a %= n;
  int result = 1;
  while (a != 0) {
    int tz = __builtin_ctzll(a);
    a >>= tz;
    if ((tz & 1) && (n % 8 == 3 || n % 8 == 5)) result = -result;
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    std::uint64_t t = a;
    a = n % t;
    n = t;
  }
  return n == 1 ? result : 0;
}

int jacobi_symbol(const BigNat& a, const BigNat& n) {
  if (n < 1 || (n & 1) == 0) throw std::invalid_argument("Jacobi symbol needs odd n >= 1");
  if (fits_u64(n)) {
    BigNat r = a % n;
    if (r < 0) r += n;
    return jacobi_symbol_u64(to_u64(r), to_u64(n));
  }
  BigNat num = a % n;
  if (num < 0) num += n;
  BigNat den = n;
  int result = 1;
  while (num != 0) {
    unsigned tz = lsb(num);
    num >>= tz;
    const unsigned den_mod8 = (den & 7).convert_to<unsigned>();
    if ((tz & 1) && (den_mod8 == 3 || den_mod8 == 5)) result = -result;
    if ((num & 3) == 3 && (den & 3) == 3) result = -result;
    std::swap(num, den);
    num %= den;
  }
  return den == 1 ? result : 0;
}

int legendre_symbol_euler(const BigNat& a, const BigNat& p) {
  BigNat r = a % p;
  if (r < 0) r += p;
  if (r == 0) return 0;
  BigNat e = powm(r, (p - 1) >> 1, p);
  if (e == 1) return 1;
  if (e == p - 1) return -1;
  throw std::logic_error("Euler's criterion gave a nontrivial value; p is not prime");
}

int legendre_symbol(const BigNat& a, const BigNat& p) {
  if ((p & 1) == 0 || !is_prime(p))
    throw std::invalid_argument("Legendre symbol needs an odd prime, got " + p.str());
  return legendre_symbol_euler(a, p);
}

std::vector<std::int8_t> legendre_table(std::uint64_t p) {
  if (p >= kSymbolTableLimit)
    throw std::invalid_argument("legendre_table: p too large for a dense table");
  if ((p & 1) == 0 || !is_prime_u64(p))
    throw std::invalid_argument("legendre_table needs an odd prime");
  std::vector<std::int8_t> table(p, -1);
  table[0] = 0;
  // (x+1)^2 = x^2 + 2x + 1, so the running square needs additions only.
  std::uint64_t sq = 0;
  for (std::uint64_t x = 1; x <= (p - 1) / 2; ++x) {
    sq += 2 * x - 1;
    if (sq >= p) sq -= p;
    if (sq >= p) sq -= p;
    table[sq] = 1;
  }
  return table;
}

SymbolEngine::SymbolEngine(const BigNat& p) : SymbolEngine(certify_prime(p)) {}

SymbolEngine::SymbolEngine(PrimeCert cert) : cert_(std::move(cert)) {
  if ((cert_.p & 1) == 0) throw std::invalid_argument("SymbolEngine needs an odd prime");
  if (cert_.p < (BigNat(1) << 63)) p64_ = to_u64(cert_.p);
  if (p64_ != 0 && p64_ < kSymbolTableLimit) table_ = legendre_table(p64_);
}

int SymbolEngine::eval_u64(std::uint64_t residue) const {
  if (!table_.empty()) return table_[residue];
  return jacobi_symbol_u64(residue, p64_);
}

int SymbolEngine::operator()(const BigNat& a) const {
  if (p64_ != 0) {
    BigNat r = a % cert_.p;
    if (r < 0) r += cert_.p;
    return eval_u64(to_u64(r));
  }
  return jacobi_symbol(a, cert_.p);
}

void SymbolEngine::stream(const BigNat& start, std::size_t len, std::int8_t* out) const {
  if (p64_ != 0) {
    std::uint64_t r = to_u64(((start % cert_.p) + cert_.p) % cert_.p);
    for (std::size_t i = 0; i < len; ++i) {
      out[i] = static_cast<std::int8_t>(eval_u64(r));
      if (++r == p64_) r = 0;
    }
    return;
  }
  BigNat r = ((start % cert_.p) + cert_.p) % cert_.p;
  for (std::size_t i = 0; i < len; ++i) {
    out[i] = static_cast<std::int8_t>(jacobi_symbol(r, cert_.p));
    if (++r == cert_.p) r = 0;
  }
}

std::vector<std::int8_t> SymbolEngine::stream(const BigNat& start, std::size_t len) const {
  std::vector<std::int8_t> out(len);
  stream(start, len, out.data());
  return out;
}

}  // namespace legrip

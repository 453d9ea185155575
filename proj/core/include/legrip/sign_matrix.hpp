// Bit-packed M x N sign matrix with an implicit 1/sqrt(M) column scale,
// plus the RIPM v1 text format.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "legrip/bignat.hpp"

namespace legrip {

struct LegendreSeededProv {
  BigNat x;
  BigNat p;
};
struct LegendreDeterministicProv {
  BigNat p;
};
struct BernoulliProv {
  std::uint64_t rng_seed = 0;
  std::string algo;  // generator identifier, e.g. "splitmix64"
};

using Provenance = std::variant<LegendreSeededProv, LegendreDeterministicProv, BernoulliProv>;

std::string provenance_tag(const Provenance& prov);

// Entries are +-1 (a set bit means -1), packed column-major with each column
// starting on a fresh 64-bit word so column xors reduce to popcounts.
// Treat instances as immutable once filled; sharing across threads is then
// safe.
class SignMatrix {
 public:
  SignMatrix(std::size_t rows, std::size_t cols, Provenance prov);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  int sign(std::size_t m, std::size_t n) const;  // 0-based, returns +-1
  void set_sign(std::size_t m, std::size_t n, int s);

  // <col_a, col_b> without the 1/M scale; an integer in [-M, M].
  std::int64_t dot_raw(std::size_t a, std::size_t b) const;
  // <col_a, col_b> with unit-norm columns, i.e. dot_raw / M.
  double gram(std::size_t a, std::size_t b) const;
  // <phi_n, v> with the 1/sqrt(M) scale.
  double column_dot(std::size_t n, const double* v) const;

  double scale() const;  // 1/sqrt(M)

  const Provenance& provenance() const { return prov_; }
  std::string tag() const { return provenance_tag(prov_); }

  bool operator==(const SignMatrix& other) const;

  void write(std::ostream& os) const;
  std::string to_string() const;

  // Strict RIPM v1 parser; std::invalid_argument mentions the line number.
  static SignMatrix read(std::istream& is);
  static SignMatrix from_string(const std::string& text);

 private:
  std::size_t rows_, cols_;
  std::size_t words_per_col_;
  std::vector<std::uint64_t> bits_;
  Provenance prov_;
};

}  // namespace legrip

// Correspondence between small-bias sign-vector multisets and balanced
// binary linear codes, with exact exhaustive bias evaluation and the
// Welch-derived entropy lower bound.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "legrip/bignat.hpp"
#include "legrip/verify.hpp"  // BudgetError

namespace legrip {

inline constexpr unsigned kDefaultCodeDimBudget = 20;  // 2^n exhaustive work cap

// Multiset of q sign vectors over n coordinates. Vector j is an n-bit word;
// bit i set means coordinate i+1 equals -1 (same packing as SignMatrix).
struct BiasedSet {
  unsigned n = 0;
  std::vector<std::uint32_t> vectors;

  std::size_t q() const { return vectors.size(); }
  int coord(std::size_t j, unsigned i) const {  // 0-based vector, coordinate
    return (vectors[j] >> i) & 1u ? -1 : +1;
  }
};

struct BiasWitness {
  double bias = 0;                       // |numerator| / q, exact in double
  std::int64_t numerator = 0;            // signed coordinate-product sum at the worst set
  std::vector<std::uint32_t> index_set;  // 1-based ascending worst index set
};

// max over nonempty I of |(1/q) sum_x prod_{i in I} x_i| by Walsh-Hadamard
// transform of the vector multiplicity table; integer sums throughout, ties
// broken by lexicographically smallest index set.
BiasWitness exact_bias(const BiasedSet& set, unsigned n_budget = kDefaultCodeDimBudget);

// Binary linear code given by an n x q generator, stored column-major:
// columns[j] bit i is G[i][j]. Constructed through make_code, which checks
// row independence and enumerates the weight spectrum.
struct BinaryCode {
  unsigned n = 0;
  std::vector<std::uint32_t> columns;
  std::vector<std::uint32_t> weight_spectrum;  // weight of message u's codeword, size 2^n

  std::size_t q() const { return columns.size(); }
  int generator_bit(unsigned row, std::size_t col) const { return (columns[col] >> row) & 1u; }
};

// Rank over the binary field of the n x q matrix given column-major.
unsigned f2_rank(unsigned n, const std::vector<std::uint32_t>& columns);

BinaryCode make_code(unsigned n, std::vector<std::uint32_t> columns,
                     unsigned n_budget = kDefaultCodeDimBudget);

// A nonzero codeword fell outside the [(1-eps)q/2, (1+eps)q/2] window.
struct WeightWindowError : std::invalid_argument {
  std::uint32_t message;  // violating message, as an n-bit word
  std::uint32_t weight;
  WeightWindowError(std::uint32_t msg, std::uint32_t w, const std::string& text)
      : std::invalid_argument(text), message(msg), weight(w) {}
};

struct CertifiedSet {
  BiasedSet set;
  double eps = 0;     // certified bound: exact bias <= eps
  BiasWitness exact;  // exhaustive verification of that bound
};

// Columns of the generator as sign vectors (bit b -> (-1)^b). Requires every
// nonzero codeword weight inside the eps window; the smallest violating
// message is reported otherwise.
CertifiedSet code_to_biased(const BinaryCode& code, double eps,
                            unsigned n_budget = kDefaultCodeDimBudget);

// Rank-deficient direction: some nonempty set of coordinates is perfectly
// correlated (product identically +1), listed 1-based.
struct DegenerateCode {
  std::vector<std::uint32_t> index_set;
};

// Reads the generator back off the sign vectors, columns sorted ascending as
// n-bit words (canonical order; input column order is not recoverable from a
// multiset). Verifies the weight window at the set's exact bias.
std::variant<BinaryCode, DegenerateCode> biased_to_code(
    const BiasedSet& set, unsigned n_budget = kDefaultCodeDimBudget);

// min(log2(1/eps), n-1) bits, for 0 < eps <= 1.
double entropy_lower_bound(unsigned n, double eps);

struct WelchEntropyCheck {
  unsigned n = 0;
  std::uint64_t q = 0;
  std::int64_t numerator = 0;  // |S| at the worst index set; bias = numerator/q
  BigNat lhs, rhs;             // S^2 (2^n - 1)  vs  q (2^n - q)
  bool holds = false;
};

// eps*^2 >= (2^n - q)/(q(2^n - 1)) for the exact bias eps* = S/q, checked as
// the cross-multiplied integer inequality S^2(2^n-1) >= q(2^n-q).
WelchEntropyCheck welch_entropy_check(const BiasedSet& set,
                                      unsigned n_budget = kDefaultCodeDimBudget);

// Text formats. Generators: header `CODE v1 <n> <q>`, then n rows of q
// contiguous 0/1 characters. Sign-vector sets: header `SET v1 <n> <q>`, then
// q rows of n contiguous +/- characters (vector per row, coordinate 1 first).
void write_code(std::ostream& os, const BinaryCode& code);
BinaryCode read_code(std::istream& is, unsigned n_budget = kDefaultCodeDimBudget);
void write_biased_set(std::ostream& os, const BiasedSet& set);
BiasedSet read_biased_set(std::istream& is);

}  // namespace legrip

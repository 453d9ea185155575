// Exact and sampled verification: RIP constants, flat restricted
// orthogonality, coherence vs. Welch, truncated character-sum bounds, bias
// of the seeded symbol stream, and the matching-coloring identity.
#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "legrip/bignat.hpp"
#include "legrip/sign_matrix.hpp"

namespace legrip {

// Enumeration refusals (too many supports / pairs / seeds for exhaustive
// mode). The message names the sampled alternative where one exists.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint64_t kDefaultSupportBudget = 1'000'000;
inline constexpr unsigned kDefaultBiasBudgetBits = 24;
inline constexpr std::uint64_t kCharsumSoftP0 = 10'000;  // Theorem-3 checks below this are informational
inline constexpr std::uint64_t kDefaultCharsumWindowBudget = std::uint64_t{1} << 27;

struct RipOptions {
  std::uint64_t support_budget = kDefaultSupportBudget;
  int threads = 1;  // results are bit-identical for every thread count
};

struct RipReport {
  std::uint64_t k_checked = 0;
  std::optional<double> delta_exact;
  std::optional<double> delta_lower_bound;
  std::vector<std::uint32_t> worst_support;  // 1-based, ascending
  enum class Mode { exhaustive, sampled } mode = Mode::exhaustive;
  std::uint64_t n_samples = 0;
  std::uint64_t rng_seed = 0;

  double delta() const { return delta_exact ? *delta_exact : *delta_lower_bound; }
};

// Exact delta_K: max over supports |S| <= K of the spectral deviation of the
// Gram submatrix from the identity. Throws BudgetError when the support
// count exceeds the budget; ties broken by lexicographically smallest
// support so reports are byte-stable.
RipReport rip_constant(const SignMatrix& phi, std::uint64_t k, const RipOptions& opts = {});

// Lower bound from n_samples uniformly random size-K supports.
RipReport rip_constant_sampled(const SignMatrix& phi, std::uint64_t k, std::uint64_t n_samples,
                               std::uint64_t rng_seed, const RipOptions& opts = {});

struct FroReport {
  std::uint64_t k_checked = 0;
  double theta_emp = 0;
  std::vector<std::uint32_t> worst_i, worst_j;  // 1-based, ascending
  double delta_via_conversion = 0;                    // 150 * theta * max(log K, 1)
};

// Exact theta over all disjoint nonempty pairs I, J with |I|,|J| <= K.
FroReport fro_constant(const SignMatrix& phi, std::uint64_t k,
                       std::uint64_t pair_budget = kDefaultSupportBudget);

struct CoherenceResult {
  double mu = 0;
  double welch_floor = 0;
  std::uint32_t worst_a = 0, worst_b = 0;  // 1-based column pair attaining mu
};

CoherenceResult coherence(const SignMatrix& phi);

struct CharSumCheck {
  BigNat p;
  std::vector<std::uint64_t> offsets;
  std::uint64_t t = 0;
  std::int64_t sum_value = 0;
  double bound_value = 0;  // 9 k sqrt(p) ln p
  bool pass = false;
  bool soft = false;  // p below the effective-p0 cutoff; informational only
};

// Exact truncated sum of Legendre-symbol products against the 9k sqrt(p)ln p
// bound. Requires 0 < d_1 < ... < d_k < p and 1 <= t <= p - d_k.
CharSumCheck charsum_check(const BigNat& p, const std::vector<std::uint64_t>& offsets,
                           std::uint64_t t,
                           std::uint64_t window_budget = kDefaultCharsumWindowBudget);

struct BiasReport {
  BigNat p;
  unsigned h = 0;
  std::vector<std::uint64_t> index_set;
  // Exact bias is the rational exact_numerator / 2^h; the double value is
  // exact because the denominator is a power of two.
  std::optional<std::int64_t> exact_numerator;
  std::optional<double> exact_bias;
  std::optional<double> sampled_bias;
  std::optional<double> std_error;
  double bias_bound = 0;  // (1/2^h) |I| sqrt(p) ln p
  bool bias_bound_holds = false;
  std::optional<double> chain_bound;  // 4 n^2 2^(-h/3), when a column count is supplied
  std::optional<bool> chain_holds;
  std::uint64_t n_samples = 0;
  std::uint64_t rng_seed = 0;
};

// |(1/2^h) sum_x prod_{i in I} ((x+i)/p)| by full enumeration of the 2^h
// seeds with exact integer accumulation. Requires nonempty strictly
// increasing I with i >= 1 and max(I) + 2^h - 1 < p. Throws BudgetError for
// h above the enumeration budget.
BiasReport bias_exact(const BigNat& p, unsigned h, const std::vector<std::uint64_t>& index_set,
                      std::optional<std::uint64_t> chain_cols = std::nullopt,
                      unsigned h_budget = kDefaultBiasBudgetBits);

// Monte Carlo estimate of the same quantity over n_samples uniform seeds.
BiasReport bias_sampled(const BigNat& p, unsigned h, const std::vector<std::uint64_t>& index_set,
                        std::uint64_t n_samples, std::uint64_t rng_seed,
                        std::optional<std::uint64_t> chain_cols = std::nullopt);

struct MatchingCheck {
  unsigned q = 0;
  std::uint64_t colors = 0;
  unsigned long long brute = 0;    // sum over matchings of colors^(cycle count)
  unsigned long long formula = 0;  // (colors+q-2)!! / (colors-2)!!
  unsigned long long matchings = 0;
  bool pass = false;
};

// Brute-force check of the perfect-matching coloring identity; q even,
// 2 <= q <= 12, 1 <= colors <= 256.
MatchingCheck matching_coloring_count(unsigned q, std::uint64_t colors);

struct ScanRow {
  BigNat p;
  double delta = 0;
};

struct ScanReport {
  std::uint64_t m = 0, n = 0, k = 0;
  std::uint64_t k2 = 0;  // 2K actually checked
  std::vector<ScanRow> rows;  // ascending p
  double target_delta = 0;
  double fraction_meeting = 0;
  std::vector<std::pair<std::uint64_t, double>> baseline;  // (rng seed, delta_2K)
};

struct ScanOptions {
  double target_delta = 0.5;
  std::vector<std::uint64_t> baseline_seeds;
  std::uint64_t support_budget = kDefaultSupportBudget;
  int threads = 1;
};

// For each prime p > MN in the requested range, builds the deterministic
// matrix and records its exact delta_2K, with an iid-Bernoulli baseline for
// comparison. Descriptive output, sorted by p ascending.
ScanReport conjecture_scan(std::uint64_t m, std::uint64_t n, std::uint64_t k,
                           const BigNat& prime_lo, const std::optional<BigNat>& prime_hi,
                           std::optional<std::size_t> prime_count, const ScanOptions& opts = {});

// Number of supports of size 1..k over n columns, saturated at cap+1.
std::uint64_t support_count_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap);

}  // namespace legrip

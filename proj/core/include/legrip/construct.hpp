// Parameter planning from (N, K, delta) and construction of the seeded
// Legendre matrix, the deterministic variant, and an iid-Bernoulli baseline.
#pragma once

#include <cstdint>
#include <optional>

#include "legrip/bignat.hpp"
#include "legrip/ntheory.hpp"
#include "legrip/sign_matrix.hpp"

namespace legrip {

inline constexpr double kDefaultPlanC1 = 5760000.0;

// All logarithms natural throughout the planner and the bound checks.
inline constexpr const char* kLogConvention = "natural";

struct PlanOverrides {
  std::optional<std::uint64_t> m;
  std::optional<std::uint64_t> h;
  std::optional<double> c1;
};

struct DesignParams {
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  double delta = 0;
  std::uint64_t m = 0;  // row count
  std::uint64_t h = 0;  // entropy budget in bits
  double c1 = kDefaultPlanC1;
  // Bias budget exp(-40 K log((150/delta) K logK) log N). The exponent is
  // kept separately because the value itself underflows double for any
  // nontrivial instance.
  double eps_required = 0;
  double log_eps_required = 0;
  BigNat p_min;  // 2^h + m*n, exact
  bool m_overridden = false;
  bool h_overridden = false;
  bool logk_clamped = false;  // log K was clamped to 1 (K <= 2)
};

// M = ceil((c1/delta^2) K logK^2 logN) with logK clamped to >= 1, and the
// smallest H for which  log4 + 2logN - (H/3)log2 <= -40 K log((150/delta) K
// logK) logN. Overrides are taken verbatim and flagged.
DesignParams plan_parameters(std::uint64_t n, std::uint64_t k, double delta,
                             const PlanOverrides& overrides = {});

// Left side minus right side of the entropy sufficiency inequality at the
// given h; the planner picks the smallest h making this <= 0.
double entropy_slack(const DesignParams& params, std::uint64_t h);

struct Seed {
  BigNat x;
  unsigned h = 0;
  enum class Source { external_hex, generated } source = Source::external_hex;
};

// Uniform X in [0, 2^h) assembled from 64-bit counter draws.
Seed generate_seed(unsigned h, std::uint64_t rng_seed);

// Entry (m,n) = ((X + M(n-1) + m)/p), 1-based, consecutive symbols running
// down each column. Requires certified p >= 2^h + MN and x < 2^h, so no
// symbol argument is divisible by p and every entry is +-1.
SignMatrix build_legendre_seeded(std::uint64_t m, std::uint64_t n, unsigned h, const BigNat& x,
                                 const PrimeCert& p);
SignMatrix build_legendre_seeded(const DesignParams& params, const Seed& seed, const PrimeCert& p);

// Conjectured variant: entry (m,n) = ((M(n-1) + m)/p), requires p > MN.
SignMatrix build_legendre_deterministic(std::uint64_t m, std::uint64_t n, const PrimeCert& p);
SignMatrix build_legendre_deterministic(std::uint64_t m, std::uint64_t n, const BigNat& p);

// Fair-coin entries from the counter-based generator; identical (m,n,seed)
// always reproduce the same matrix.
SignMatrix build_bernoulli_baseline(std::uint64_t m, std::uint64_t n, std::uint64_t rng_seed);

}  // namespace legrip

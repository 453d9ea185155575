#include "legrip/construct.hpp"

#include <cmath>
#include <stdexcept>

#include "legrip/rng.hpp"

namespace legrip {
namespace {

double clamped_log_k(std::uint64_t k, bool* clamped) {
  const double lk = std::log(static_cast<double>(k));
  if (lk < 1.0) {
    if (clamped) *clamped = true;
    return 1.0;
  }
  return lk;
}

}  // namespace

double entropy_slack(const DesignParams& params, std::uint64_t h) {
  const double lk = clamped_log_k(params.k, nullptr);
  const double ln_n = std::log(static_cast<double>(params.n));
  const double rhs = -40.0 * static_cast<double>(params.k) *
                     std::log((150.0 / params.delta) * static_cast<double>(params.k) * lk) * ln_n;
  const double lhs = std::log(4.0) + 2.0 * ln_n - (static_cast<double>(h) / 3.0) * std::log(2.0);
  return lhs - rhs;
}

DesignParams plan_parameters(std::uint64_t n, std::uint64_t k, double delta,
                             const PlanOverrides& overrides) {
  if (n < 2) throw std::invalid_argument("plan_parameters requires N >= 2");
  if (k < 1 || k > n) throw std::invalid_argument("plan_parameters requires 1 <= K <= N");
  if (!(delta > 0.0) || delta > 1.0)
    throw std::invalid_argument("plan_parameters requires 0 < delta <= 1");

  DesignParams params;
  params.n = n;
  params.k = k;
  params.delta = delta;
  params.c1 = overrides.c1.value_or(kDefaultPlanC1);

  const double lk = clamped_log_k(k, &params.logk_clamped);
  const double ln_n = std::log(static_cast<double>(n));

  if (overrides.m) {
    params.m = *overrides.m;
    params.m_overridden = true;
  } else {
    const double m_raw =
        (params.c1 / (delta * delta)) * static_cast<double>(k) * lk * lk * ln_n;
    params.m = static_cast<std::uint64_t>(std::ceil(m_raw));
  }
  if (params.m < 1) throw std::invalid_argument("planned M must be >= 1");

  params.log_eps_required =
      -40.0 * static_cast<double>(k) * std::log((150.0 / delta) * static_cast<double>(k) * lk) * ln_n;
  params.eps_required = std::exp(params.log_eps_required);

  if (overrides.h) {
    params.h = *overrides.h;
    params.h_overridden = true;
  } else {
    // Smallest integer H with log4 + 2logN - (H/3)log2 <= log eps_required.
    const double h_raw =
        3.0 * (std::log(4.0) + 2.0 * ln_n - params.log_eps_required) / std::log(2.0);
    std::uint64_t h = static_cast<std::uint64_t>(std::ceil(std::max(h_raw, 1.0)));
    while (entropy_slack(params, h) > 0) ++h;
    while (h > 1 && entropy_slack(params, h - 1) <= 0) --h;
    params.h = h;
  }
  if (params.h < 1) throw std::invalid_argument("planned H must be >= 1");

  params.p_min = pow2(static_cast<unsigned>(params.h)) + BigNat(params.m) * BigNat(params.n);
  return params;
}

Seed generate_seed(unsigned h, std::uint64_t rng_seed) {
  Seed seed;
  seed.h = h;
  seed.source = Seed::Source::generated;
  BigNat x = 0;
  const unsigned words = (h + 63) / 64;
  for (unsigned w = 0; w < words; ++w) {
    x <<= 64;
    x |= BigNat(SplitMix64::at(rng_seed, w));
  }
  // keep the low h bits
  seed.x = x & (pow2(h) - 1);
  return seed;
}

SignMatrix build_legendre_seeded(std::uint64_t m, std::uint64_t n, unsigned h, const BigNat& x,
                                 const PrimeCert& p) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  const BigNat two_h = pow2(h);
  const BigNat p_min = two_h + BigNat(m) * BigNat(n);
  if (p.p < p_min)
    throw std::invalid_argument("p < 2^H + MN: a zero symbol would become possible (p=" +
                                p.p.str() + ", p_min=" + p_min.str() + ")");
  if (x >= two_h) throw std::invalid_argument("seed X must satisfy X < 2^H");
  if (x < 0) throw std::invalid_argument("seed X must be nonnegative");

  SymbolEngine chi(p);
  const std::size_t total = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  std::vector<std::int8_t> syms = chi.stream(x + 1, total);

  SignMatrix mat(m, n, LegendreSeededProv{x, p.p});
  std::size_t idx = 0;
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = 0; row < m; ++row, ++idx) {
      if (syms[idx] == 0) throw std::logic_error("zero Legendre symbol inside the no-zero window");
      mat.set_sign(row, col, syms[idx]);
    }
  return mat;
}

SignMatrix build_legendre_seeded(const DesignParams& params, const Seed& seed, const PrimeCert& p) {
  if (seed.h != params.h)
    throw std::invalid_argument("seed entropy does not match the planned H");
  return build_legendre_seeded(params.m, params.n, static_cast<unsigned>(params.h), seed.x, p);
}

SignMatrix build_legendre_deterministic(std::uint64_t m, std::uint64_t n, const PrimeCert& p) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  if (p.p <= BigNat(m) * BigNat(n))
    throw std::invalid_argument("p <= MN: a zero symbol would become possible");

  SymbolEngine chi(p);
  const std::size_t total = static_cast<std::size_t>(m) * static_cast<std::size_t>(n);
  std::vector<std::int8_t> syms = chi.stream(BigNat(1), total);

  SignMatrix mat(m, n, LegendreDeterministicProv{p.p});
  std::size_t idx = 0;
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = 0; row < m; ++row, ++idx) {
      if (syms[idx] == 0) throw std::logic_error("zero Legendre symbol inside the no-zero window");
      mat.set_sign(row, col, syms[idx]);
    }
  return mat;
}

SignMatrix build_legendre_deterministic(std::uint64_t m, std::uint64_t n, const BigNat& p) {
  return build_legendre_deterministic(m, n, certify_prime(p));
}

SignMatrix build_bernoulli_baseline(std::uint64_t m, std::uint64_t n, std::uint64_t rng_seed) {
  if (m < 1 || n < 1) throw std::invalid_argument("matrix dimensions must be >= 1");
  SignMatrix mat(m, n, BernoulliProv{rng_seed, kRngAlgoId});
  std::uint64_t idx = 0;
  for (std::size_t col = 0; col < n; ++col)
    for (std::size_t row = 0; row < m; ++row, ++idx)
      mat.set_sign(row, col, (SplitMix64::at(rng_seed, idx) >> 63) ? -1 : +1);
  return mat;
}

}  // namespace legrip

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <cstdint>
#include <vector>

#include "legrip/construct.hpp"
#include "legrip/verify.hpp"

using namespace legrip;

namespace {

// Independent oracle: delta over one support from singular values of the
// scaled M x s submatrix (no Gram matrix, no shared code path).
double svd_delta(const SignMatrix& phi, const std::vector<std::uint32_t>& sup0) {
  const auto m = static_cast<Eigen::Index>(phi.rows());
  Eigen::MatrixXd sub(m, static_cast<Eigen::Index>(sup0.size()));
  const double s = 1.0 / std::sqrt(static_cast<double>(phi.rows()));
  for (std::size_t j = 0; j < sup0.size(); ++j)
    for (std::size_t i = 0; i < phi.rows(); ++i)
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = s * phi.sign(i, sup0[j]);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub);
  const double hi = svd.singularValues().maxCoeff();
  const double lo = svd.singularValues().minCoeff();
  return std::max(hi * hi - 1.0, 1.0 - lo * lo);
}

// Max svd_delta over all supports of size 1..k, by mask enumeration.
double svd_rip_oracle(const SignMatrix& phi, unsigned k) {
  const unsigned n = static_cast<unsigned>(phi.cols());
  double worst = 0.0;
  for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
    if (static_cast<unsigned>(__builtin_popcount(mask)) > k) continue;
    std::vector<std::uint32_t> sup;
    for (unsigned i = 0; i < n; ++i)
      if (mask & (1u << i)) sup.push_back(i);
    worst = std::max(worst, svd_delta(phi, sup));
  }
  return worst;
}

double pair_value(const SignMatrix& phi, std::uint32_t mi, std::uint32_t mj) {
  std::int64_t acc = 0;
  for (unsigned a = 0; a < phi.cols(); ++a)
    if (mi & (1u << a))
      for (unsigned b = 0; b < phi.cols(); ++b)
        if (mj & (1u << b)) acc += phi.dot_raw(a, b);
  const double si = __builtin_popcount(mi), sj = __builtin_popcount(mj);
  return std::abs(double(acc)) / (double(phi.rows()) * std::sqrt(si * sj));
}

// Max over all disjoint nonempty mask pairs with popcounts <= k.
double fro_oracle(const SignMatrix& phi, unsigned k) {
  const unsigned n = static_cast<unsigned>(phi.cols());
  double worst = 0.0;
  for (std::uint32_t mi = 1; mi < (1u << n); ++mi) {
    if (static_cast<unsigned>(__builtin_popcount(mi)) > k) continue;
    for (std::uint32_t mj = 1; mj < (1u << n); ++mj) {
      if (mi & mj) continue;
      if (static_cast<unsigned>(__builtin_popcount(mj)) > k) continue;
      worst = std::max(worst, pair_value(phi, mi, mj));
    }
  }
  return worst;
}

std::uint32_t to_mask(const std::vector<std::uint32_t>& one_based) {
  std::uint32_t m = 0;
  for (auto i : one_based) m |= 1u << (i - 1);
  return m;
}

}  // namespace

TEST_CASE("exact RIP constant agrees with an SVD oracle") {
  SignMatrix phi = build_legendre_deterministic(8, 12, BigNat(97));
  for (unsigned k : {1u, 2u, 3u}) {
    RipReport r = rip_constant(phi, k);
    CHECK(r.mode == RipReport::Mode::exhaustive);
    CHECK(r.k_checked == k);
    CHECK(r.delta() == doctest::Approx(svd_rip_oracle(phi, k)).epsilon(1e-10));
    // the reported witness attains the reported value
    std::vector<std::uint32_t> sup0;
    for (auto i : r.worst_support) sup0.push_back(i - 1);
    CHECK(svd_delta(phi, sup0) == doctest::Approx(r.delta()).epsilon(1e-10));
  }
}

TEST_CASE("delta_1 of any sign matrix is zero") {
  CHECK(rip_constant(build_bernoulli_baseline(7, 9, 3), 1).delta() == 0.0);
  CHECK(rip_constant(build_legendre_deterministic(5, 5, BigNat(29)), 1).delta() == 0.0);
}

TEST_CASE("RIP result is bitwise independent of the thread count") {
  SignMatrix phi = build_legendre_deterministic(8, 14, BigNat(113));
  RipOptions one;
  one.threads = 1;
  RipOptions many;
  many.threads = 3;
  RipReport a = rip_constant(phi, 3, one);
  RipReport b = rip_constant(phi, 3, many);
  CHECK(*a.delta_exact == *b.delta_exact);  // exact bit equality intended
  CHECK(a.worst_support == b.worst_support);

  RipReport sa = rip_constant_sampled(phi, 3, 40, 99, one);
  RipReport sb = rip_constant_sampled(phi, 3, 40, 99, many);
  CHECK(*sa.delta_lower_bound == *sb.delta_lower_bound);
  CHECK(sa.worst_support == sb.worst_support);
}

TEST_CASE("sampled RIP lower-bounds the exact constant and reproduces") {
  SignMatrix phi = build_legendre_deterministic(8, 12, BigNat(97));
  RipReport exact = rip_constant(phi, 3);
  RipReport s1 = rip_constant_sampled(phi, 3, 60, 4242);
  RipReport s2 = rip_constant_sampled(phi, 3, 60, 4242);
  CHECK(s1.mode == RipReport::Mode::sampled);
  CHECK(s1.n_samples == 60);
  CHECK(s1.rng_seed == 4242);
  CHECK(*s1.delta_lower_bound <= *exact.delta_exact + 1e-12);
  CHECK(*s1.delta_lower_bound == *s2.delta_lower_bound);
  CHECK(s1.worst_support == s2.worst_support);
  // with enough samples on a tiny instance the bound is tight
  RipReport dense = rip_constant_sampled(phi, 2, 4000, 7);
  CHECK(*dense.delta_lower_bound == doctest::Approx(*rip_constant(phi, 2).delta_exact));
}

TEST_CASE("support budget refusal names the sampled alternative") {
  SignMatrix phi = build_bernoulli_baseline(4, 40, 1);
  RipOptions tight;
  tight.support_budget = 50;
  CHECK_THROWS_AS(rip_constant(phi, 5, tight), BudgetError);
  try {
    rip_constant(phi, 5, tight);
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("sampled") != std::string::npos);
  }
}

TEST_CASE("support counting is exact below the cap and saturates above") {
  CHECK(support_count_capped(32, 4, 1'000'000) == 32 + 496 + 4960 + 35960);
  CHECK(support_count_capped(12, 3, 1'000'000) == 12 + 66 + 220);
  CHECK(support_count_capped(4, 10, 1'000) == 15);  // k clamps to n
  CHECK(support_count_capped(100, 50, 1'000) == 1'001);
  CHECK(support_count_capped(1'000'000, 3, 1'000) == 1'001);  // no overflow
}

TEST_CASE("flat restricted orthogonality agrees with a mask oracle") {
  SignMatrix phi = build_legendre_deterministic(8, 8, BigNat(67));
  for (unsigned k : {1u, 2u, 3u}) {
    FroReport r = fro_constant(phi, k);
    CHECK(r.theta_emp == doctest::Approx(fro_oracle(phi, k)).epsilon(1e-12));
    CHECK(pair_value(phi, to_mask(r.worst_i), to_mask(r.worst_j)) ==
          doctest::Approx(r.theta_emp).epsilon(1e-12));
    CHECK((to_mask(r.worst_i) & to_mask(r.worst_j)) == 0);
    CHECK(r.delta_via_conversion ==
          doctest::Approx(150.0 * r.theta_emp * std::max(std::log(double(k)), 1.0)));
  }
}

TEST_CASE("theta_1 equals the coherence") {
  SignMatrix phi = build_legendre_deterministic(8, 10, BigNat(83));
  FroReport f = fro_constant(phi, 1);
  CoherenceResult c = coherence(phi);
  CHECK(f.theta_emp == doctest::Approx(c.mu).epsilon(1e-15));
  CHECK(f.worst_i.size() == 1);
  CHECK(f.worst_j.size() == 1);
}

TEST_CASE("FRO pair budget refusal") {
  SignMatrix phi = build_bernoulli_baseline(4, 30, 2);
  CHECK_THROWS_AS(fro_constant(phi, 4, 100), BudgetError);
}

TEST_CASE("coherence against a direct sign-loop oracle, plus the Welch floor") {
  SignMatrix phi = build_legendre_deterministic(16, 32, BigNat(521));
  double mu = 0.0;
  for (std::size_t a = 0; a < 32; ++a)
    for (std::size_t b = a + 1; b < 32; ++b) {
      std::int64_t d = 0;
      for (std::size_t m = 0; m < 16; ++m) d += phi.sign(m, a) * phi.sign(m, b);
      mu = std::max(mu, std::abs(double(d)) / 16.0);
    }
  CoherenceResult c = coherence(phi);
  CHECK(c.mu == doctest::Approx(mu).epsilon(1e-15));
  CHECK(c.mu == doctest::Approx(0.75));
  CHECK(c.worst_a == 6);
  CHECK(c.worst_b == 8);
  CHECK(c.welch_floor == doctest::Approx(std::sqrt(16.0 / (16.0 * 31.0))));
  CHECK(c.mu >= c.welch_floor);

  // square matrix: floor degenerates to zero and mu can reach it
  SignMatrix had(2, 2, BernoulliProv{0, "manual"});
  had.set_sign(0, 0, +1);
  had.set_sign(1, 0, +1);
  had.set_sign(0, 1, +1);
  had.set_sign(1, 1, -1);
  CoherenceResult hc = coherence(had);
  CHECK(hc.mu == 0.0);
  CHECK(hc.welch_floor == 0.0);
}

TEST_CASE("matching-coloring identity holds across q and color counts") {
  for (unsigned q : {2u, 4u, 6u, 8u, 10u}) {
    for (std::uint64_t colors : {1ull, 2ull, 3ull, 7ull, 256ull}) {
      MatchingCheck c = matching_coloring_count(q, colors);
      CHECK(c.pass);
      CHECK(c.brute == c.formula);
      unsigned long long dfact = 1;
      for (unsigned v = q - 1; v > 1; v -= 2) dfact *= v;
      CHECK(c.matchings == dfact);
    }
  }
  // the largest admissible instance stays in range
  MatchingCheck big = matching_coloring_count(12, 256);
  CHECK(big.pass);
  CHECK(big.matchings == 10395);
}

TEST_CASE("matching-coloring input validation") {
  CHECK_THROWS_AS(matching_coloring_count(3, 2), std::invalid_argument);
  CHECK_THROWS_AS(matching_coloring_count(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(matching_coloring_count(14, 2), std::invalid_argument);
  CHECK_THROWS_AS(matching_coloring_count(4, 0), std::invalid_argument);
  CHECK_THROWS_AS(matching_coloring_count(4, 257), std::invalid_argument);
}

TEST_CASE("conjecture scan rows match per-prime exhaustive RIP") {
  ScanOptions opts;
  opts.target_delta = 0.9;
  opts.baseline_seeds = {5, 6};
  ScanReport rep = conjecture_scan(2, 4, 1, BigNat(2), std::nullopt, 3, opts);
  CHECK(rep.k2 == 2);
  REQUIRE(rep.rows.size() == 3);
  CHECK(rep.rows[0].p == 11);  // first prime beyond MN = 8
  CHECK(rep.rows[1].p == 13);
  CHECK(rep.rows[2].p == 17);
  std::size_t meeting = 0;
  for (const auto& row : rep.rows) {
    SignMatrix phi = build_legendre_deterministic(2, 4, row.p);
    CHECK(row.delta == doctest::Approx(*rip_constant(phi, 2).delta_exact));
    meeting += row.delta <= opts.target_delta;
  }
  CHECK(rep.fraction_meeting == doctest::Approx(double(meeting) / 3.0));
  REQUIRE(rep.baseline.size() == 2);
  CHECK(rep.baseline[0].first == 5);
  SignMatrix bern = build_bernoulli_baseline(2, 4, 5);
  CHECK(rep.baseline[0].second == doctest::Approx(*rip_constant(bern, 2).delta_exact));
}

TEST_CASE("conjecture scan honors an upper prime limit") {
  ScanReport rep = conjecture_scan(2, 3, 1, BigNat(2), BigNat(13), std::nullopt);
  REQUIRE(rep.rows.size() == 3);  // 7, 11, 13 (lo clamps to MN+1 = 7)
  CHECK(rep.rows.front().p == 7);
  CHECK(rep.rows.back().p == 13);
}

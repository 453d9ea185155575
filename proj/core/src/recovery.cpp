#include "legrip/recovery.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <thread>

#include "legrip/construct.hpp"
#include "legrip/report.hpp"
#include "legrip/rng.hpp"

namespace legrip {
namespace {

Eigen::MatrixXd dense_scaled(const SignMatrix& phi) {
  Eigen::MatrixXd a(phi.rows(), phi.cols());
  const double s = phi.scale();
  for (std::size_t n = 0; n < phi.cols(); ++n)
    for (std::size_t m = 0; m < phi.rows(); ++m)
      a(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = s * phi.sign(m, n);
  return a;
}

}  // namespace

OmpResult omp_recover(const SignMatrix& phi, const std::vector<double>& y, std::uint64_t k,
                      double noise_tol) {
  if (y.size() != phi.rows())
    throw std::invalid_argument("measurement vector length must equal the row count");
  if (k > phi.rows()) throw std::invalid_argument("omp_recover requires K <= M");
  if (noise_tol < 0) throw std::invalid_argument("noise_tol must be nonnegative");

  const Eigen::MatrixXd a = dense_scaled(phi);
  const Eigen::VectorXd yv =
      Eigen::Map<const Eigen::VectorXd>(y.data(), static_cast<Eigen::Index>(y.size()));

  OmpResult result;
  result.signal.n = phi.cols();
  Eigen::VectorXd residual = yv;
  std::vector<std::uint32_t> support;  // 0-based, selection order
  Eigen::VectorXd coeffs;

  for (std::uint64_t it = 0; it < k; ++it) {
    if (residual.norm() <= noise_tol) break;

    // strict > keeps the smallest column index on exact ties
    double best = -1.0;
    std::size_t pick = 0;
    for (std::size_t j = 0; j < phi.cols(); ++j) {
      if (std::find(support.begin(), support.end(), j) != support.end()) continue;
      const double corr = std::abs(a.col(static_cast<Eigen::Index>(j)).dot(residual));
      if (corr > best) {
        best = corr;
        pick = j;
      }
    }
    support.push_back(static_cast<std::uint32_t>(pick));

    Eigen::MatrixXd sub(a.rows(), support.size());
    for (std::size_t i = 0; i < support.size(); ++i)
      sub.col(static_cast<Eigen::Index>(i)) = a.col(support[i]);
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(sub, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > kOmpConditionLimit) {
      support.pop_back();
      result.failed = true;
      result.failure_reason = "least-squares refit condition estimate above 1e12";
      break;
    }
    coeffs = svd.solve(yv);
    residual = yv - sub * coeffs;
    result.residual_norms.push_back(residual.norm());
  }

  // report in ascending column order, 1-based
  std::vector<std::size_t> order(support.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t z) { return support[x] < support[z]; });
  for (std::size_t i : order) {
    result.signal.support.push_back(support[i] + 1);
    result.signal.values.push_back(coeffs(static_cast<Eigen::Index>(i)));
  }
  result.final_residual = residual.norm();
  result.tol_reached = result.final_residual <= noise_tol;
  return result;
}

std::string SweepEnsemble::name() const {
  switch (kind) {
    case Kind::legendre_deterministic:
      return "legendre-deterministic";
    case Kind::legendre_seeded:
      return "legendre-seeded";
    case Kind::bernoulli:
      return "bernoulli-iid";
  }
  return "";
}

namespace {

struct Trial {
  std::vector<std::uint32_t> support;  // 0-based ascending
  std::vector<double> values;          // +-1 on the support
};

Trial draw_signal(std::uint64_t n, std::uint64_t k, std::uint64_t stream) {
  CounterRng rng(stream);
  std::vector<std::uint32_t> pool(n);
  std::iota(pool.begin(), pool.end(), 0u);
  for (std::uint64_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.next_below(n - i)]);
  Trial trial;
  trial.support.assign(pool.begin(), pool.begin() + k);
  std::sort(trial.support.begin(), trial.support.end());
  for (std::uint64_t i = 0; i < k; ++i) trial.values.push_back(rng.next_sign());
  return trial;
}

std::vector<double> measure(const SignMatrix& phi, const Trial& trial) {
  std::vector<double> y(phi.rows(), 0.0);
  const double s = phi.scale();
  for (std::size_t i = 0; i < trial.support.size(); ++i)
    for (std::size_t m = 0; m < phi.rows(); ++m)
      y[m] += trial.values[i] * s * phi.sign(m, trial.support[i]);
  return y;
}

bool exact_recovery(const OmpResult& res, const Trial& trial) {
  if (res.failed || res.signal.support.size() != trial.support.size()) return false;
  for (std::size_t i = 0; i < trial.support.size(); ++i) {
    if (res.signal.support[i] != trial.support[i] + 1) return false;
    if (std::abs(res.signal.values[i] - trial.values[i]) > 1e-8) return false;
  }
  return true;
}

}  // namespace

std::vector<SweepRow> phase_sweep(const SweepEnsemble& ensemble, std::uint64_t m, std::uint64_t n,
                                  const std::vector<std::uint64_t>& k_range, std::uint64_t trials,
                                  std::uint64_t rng_seed, int threads) {
  if (trials < 1) throw std::invalid_argument("phase_sweep needs trials >= 1");

  // Resolve the ensemble's prime once; matrices themselves may vary per trial.
  PrimeCert cert;
  SignMatrix fixed(1, 1, BernoulliProv{0, kRngAlgoId});
  bool have_fixed = false;
  const BigNat mn = BigNat(m) * BigNat(n);
  switch (ensemble.kind) {
    case SweepEnsemble::Kind::legendre_deterministic:
      cert = ensemble.p ? certify_prime(*ensemble.p) : next_prime_geq(mn + 1);
      fixed = build_legendre_deterministic(m, n, cert);
      have_fixed = true;
      break;
    case SweepEnsemble::Kind::legendre_seeded: {
      if (ensemble.h < 1) throw std::invalid_argument("seeded ensemble needs entropy bits h >= 1");
      cert = ensemble.p ? certify_prime(*ensemble.p) : next_prime_geq(pow2(ensemble.h) + mn);
      break;
    }
    case SweepEnsemble::Kind::bernoulli:
      break;
  }

  std::vector<SweepRow> rows;
  for (std::uint64_t k : k_range) {
    SweepRow row;
    row.ensemble = ensemble.name();
    row.k = k;
    row.trials = trials;
    if (k > m) {
      row.skipped = true;
      row.note = "skipped: K exceeds M=" + std::to_string(m);
      rows.push_back(std::move(row));
      continue;
    }
    if (k > n) {
      row.skipped = true;
      row.note = "skipped: K exceeds N=" + std::to_string(n);
      rows.push_back(std::move(row));
      continue;
    }

    const std::uint64_t k_stream = SplitMix64::derive(rng_seed, k);
    auto run_trial = [&](std::uint64_t t) -> bool {
      const std::uint64_t base = SplitMix64::derive(k_stream, t);
      const Trial trial = draw_signal(n, k, SplitMix64::derive(base, 0));
      const std::uint64_t matrix_stream = SplitMix64::derive(base, 1);
      SignMatrix local(1, 1, BernoulliProv{0, kRngAlgoId});
      const SignMatrix* phi = nullptr;
      if (have_fixed) {
        phi = &fixed;
      } else if (ensemble.kind == SweepEnsemble::Kind::legendre_seeded) {
        Seed seed = generate_seed(ensemble.h, matrix_stream);
        local = build_legendre_seeded(m, n, ensemble.h, seed.x, cert);
        phi = &local;
      } else {
        local = build_bernoulli_baseline(m, n, matrix_stream);
        phi = &local;
      }
      const std::vector<double> y = measure(*phi, trial);
      return exact_recovery(omp_recover(*phi, y, k, 1e-9), trial);
    };

    const int t_count = std::max(threads, 1);
    std::uint64_t successes = 0;
    if (t_count == 1) {
      for (std::uint64_t t = 0; t < trials; ++t) successes += run_trial(t) ? 1 : 0;
    } else {
      std::vector<std::uint64_t> partial(t_count, 0);
      std::vector<std::thread> pool;
      for (int tid = 0; tid < t_count; ++tid)
        pool.emplace_back([&, tid] {
          for (std::uint64_t t = tid; t < trials; t += t_count)
            partial[tid] += run_trial(t) ? 1 : 0;
        });
      for (auto& th : pool) th.join();
      for (std::uint64_t s : partial) successes += s;
    }
    row.successes = successes;
    row.success_rate = static_cast<double>(successes) / static_cast<double>(trials);
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows) {
  os << "ensemble,k,trials,successes,success_rate,note\n";
  for (const auto& row : rows) {
    os << row.ensemble << ',' << row.k << ',' << row.trials << ',';
    if (row.skipped)
      os << ",," << row.note << '\n';
    else
      os << row.successes << ',' << format_double(row.success_rate) << ',' << row.note << '\n';
  }
}

}  // namespace legrip

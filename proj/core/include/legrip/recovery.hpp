// Sparse recovery demonstration: orthogonal matching pursuit against
// constructed matrices, and success-rate sweeps across sparsity levels.
#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "legrip/bignat.hpp"
#include "legrip/sign_matrix.hpp"

namespace legrip {

struct SparseSignal {
  std::uint64_t n = 0;                 // ambient dimension
  std::vector<std::uint32_t> support;  // 1-based, ascending, distinct
  std::vector<double> values;          // aligned with support
};

struct OmpResult {
  SparseSignal signal;
  bool failed = false;  // least-squares system numerically singular
  std::string failure_reason;
  // Residual 2-norm after each completed refit; nonincreasing.
  std::vector<double> residual_norms;
  double final_residual = 0;
  bool tol_reached = false;  // stopped early with residual <= noise_tol
};

inline constexpr double kOmpConditionLimit = 1e12;

// K iterations of greedy selection by maximal absolute correlation with the
// residual (ties to the smallest column index), least-squares refit on the
// accumulated support each iteration, early stop at noise_tol. On a refit
// whose condition estimate exceeds kOmpConditionLimit the result carries the
// last well-posed support and values with failed set.
OmpResult omp_recover(const SignMatrix& phi, const std::vector<double>& y, std::uint64_t k,
                      double noise_tol);

struct SweepEnsemble {
  enum class Kind { legendre_deterministic, legendre_seeded, bernoulli } kind;
  // deterministic: the fixed prime (> MN). seeded: entropy bits h, with
  // p = next_prime_geq(2^h + MN) and a fresh X per trial.
  std::optional<BigNat> p;
  unsigned h = 0;

  std::string name() const;
};

struct SweepRow {
  std::string ensemble;
  std::uint64_t k = 0;
  std::uint64_t trials = 0;
  std::uint64_t successes = 0;
  double success_rate = 0;
  bool skipped = false;  // precondition K <= M failed
  std::string note;
};

// For each K: `trials` random K-sparse +-1 signals, y = phi x exactly, OMP
// recovery; success means exact support and values within 1e-8 max-norm.
// Per-trial randomness is counter-split from rng_seed, so the table is
// independent of scheduling and thread count.
std::vector<SweepRow> phase_sweep(const SweepEnsemble& ensemble, std::uint64_t m, std::uint64_t n,
                                  const std::vector<std::uint64_t>& k_range, std::uint64_t trials,
                                  std::uint64_t rng_seed, int threads = 1);

// Fixed-header CSV; skipped rows carry a trailing note column.
void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows);

}  // namespace legrip

#include "legrip/verify.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <thread>

#include "legrip/construct.hpp"
#include "legrip/ntheory.hpp"
#include "legrip/rng.hpp"

namespace legrip {
namespace {

// --- support enumeration (colex within a size, sizes ascending) ----------

bool colex_next(std::vector<std::uint32_t>& sup, std::size_t n) {
  const std::size_t s = sup.size();
  for (std::size_t i = 0; i < s; ++i) {
    const std::uint32_t limit = (i + 1 < s) ? sup[i + 1] : static_cast<std::uint32_t>(n);
    if (sup[i] + 1 < limit) {
      ++sup[i];
      for (std::size_t j = 0; j < i; ++j) sup[j] = static_cast<std::uint32_t>(j);
      return true;
    }
  }
  return false;
}

bool lex_less(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

// Order-independent (max, lex-smallest-support) reduction state.
struct BestSupport {
  bool valid = false;
  double value = -std::numeric_limits<double>::infinity();
  std::vector<std::uint32_t> support;

  void offer(double v, const std::vector<std::uint32_t>& sup) {
    if (!valid || v > value || (v == value && lex_less(sup, support))) {
      valid = true;
      value = v;
      support = sup;
    }
  }
  void merge(const BestSupport& other) {
    if (other.valid) offer(other.value, other.support);
  }
};

// --- Gram access ----------------------------------------------------------

// Integer Gram (column dots without the 1/M scale); precomputed when small
// enough, otherwise popcounted on demand.
class GramSource {
 public:
  explicit GramSource(const SignMatrix& phi) : phi_(phi), n_(phi.cols()) {
    if (n_ <= 2048) {
      dense_.resize(n_ * n_);
      for (std::size_t a = 0; a < n_; ++a) {
        dense_[a * n_ + a] = static_cast<std::int64_t>(phi.rows());
        for (std::size_t b = a + 1; b < n_; ++b)
          dense_[a * n_ + b] = dense_[b * n_ + a] = phi.dot_raw(a, b);
      }
    }
  }

  std::int64_t dot(std::size_t a, std::size_t b) const {
    return dense_.empty() ? phi_.dot_raw(a, b) : dense_[a * n_ + b];
  }

  double rows() const { return static_cast<double>(phi_.rows()); }

 private:
  const SignMatrix& phi_;
  std::size_t n_;
  std::vector<std::int64_t> dense_;
};

// Spectral deviation of the Gram submatrix on `sup` from the identity.
double support_delta(const GramSource& gram, const std::vector<std::uint32_t>& sup) {
  const std::size_t s = sup.size();
  if (s == 1) return 0.0;  // unit-norm columns
  Eigen::MatrixXd sub(s, s);
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = 0; j < s; ++j)
      sub(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          static_cast<double>(gram.dot(sup[i], sup[j])) / gram.rows();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double hi = es.eigenvalues().maxCoeff();
  return std::max(hi - 1.0, 1.0 - lo);
}

std::vector<std::uint32_t> one_based(const std::vector<std::uint32_t>& sup) {
  std::vector<std::uint32_t> out(sup.size());
  for (std::size_t i = 0; i < sup.size(); ++i) out[i] = sup[i] + 1;
  return out;
}

// Runs fn over every support of size 1..kmax, striped across threads;
// the reduction is associative and commutative so the result does not
// depend on the thread count.
template <typename Fn>
BestSupport reduce_over_supports(std::size_t n, std::size_t kmax, int threads, Fn&& fn) {
  const int t_count = std::max(threads, 1);
  auto worker = [&](int tid, BestSupport& out) {
    std::uint64_t ordinal = 0;
    std::vector<std::uint32_t> sup;
    for (std::size_t s = 1; s <= kmax; ++s) {
      sup.resize(s);
      for (std::size_t i = 0; i < s; ++i) sup[i] = static_cast<std::uint32_t>(i);
      while (true) {
        if (ordinal % static_cast<std::uint64_t>(t_count) == static_cast<std::uint64_t>(tid))
          out.offer(fn(sup), sup);
        ++ordinal;
        if (!colex_next(sup, n)) break;
      }
    }
  };
  if (t_count == 1) {
    BestSupport best;
    worker(0, best);
    return best;
  }
  std::vector<BestSupport> partials(t_count);
  std::vector<std::thread> pool;
  pool.reserve(t_count);
  for (int tid = 0; tid < t_count; ++tid)
    pool.emplace_back(worker, tid, std::ref(partials[tid]));
  for (auto& th : pool) th.join();
  BestSupport best;
  for (const auto& part : partials) best.merge(part);
  return best;
}

std::uint64_t checked_mul_capped(std::uint64_t a, std::uint64_t b, std::uint64_t cap) {
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  return prod > cap ? cap : static_cast<std::uint64_t>(prod);
}

// C(n, j) saturated at cap+1.
std::uint64_t binomial_capped(std::uint64_t n, std::uint64_t j, std::uint64_t cap) {
  if (j > n) return 0;
  j = std::min(j, n - j);
  unsigned __int128 c = 1;
  for (std::uint64_t i = 1; i <= j; ++i) {
    c = c * (n - j + i) / i;
    if (c > cap) return cap + 1;
  }
  return static_cast<std::uint64_t>(c);
}

double clamped_log(std::uint64_t k) { return std::max(std::log(static_cast<double>(k)), 1.0); }

}  // namespace

std::uint64_t support_count_capped(std::uint64_t n, std::uint64_t k, std::uint64_t cap) {
  std::uint64_t total = 0;
  for (std::uint64_t j = 1; j <= std::min(k, n); ++j) {
    total += binomial_capped(n, j, cap);
    if (total > cap) return cap + 1;
  }
  return total;
}

RipReport rip_constant(const SignMatrix& phi, std::uint64_t k, const RipOptions& opts) {
  if (k < 1) throw std::invalid_argument("rip_constant requires K >= 1");
  const std::uint64_t kmax = std::min<std::uint64_t>(k, phi.cols());
  const std::uint64_t count = support_count_capped(phi.cols(), kmax, opts.support_budget);
  if (count > opts.support_budget)
    throw BudgetError("exhaustive RIP enumeration exceeds the support budget (" +
                      std::to_string(opts.support_budget) + "); use sampled mode");

  GramSource gram(phi);
  BestSupport best = reduce_over_supports(
      phi.cols(), kmax, opts.threads,
      [&](const std::vector<std::uint32_t>& sup) { return support_delta(gram, sup); });

  RipReport report;
  report.k_checked = k;
  report.mode = RipReport::Mode::exhaustive;
  report.delta_exact = best.value;
  report.worst_support = one_based(best.support);
  return report;
}

RipReport rip_constant_sampled(const SignMatrix& phi, std::uint64_t k, std::uint64_t n_samples,
                               std::uint64_t rng_seed, const RipOptions& opts) {
  if (k < 1) throw std::invalid_argument("rip_constant requires K >= 1");
  if (n_samples < 1) throw std::invalid_argument("sampled mode requires n_samples >= 1");
  const std::size_t s = static_cast<std::size_t>(std::min<std::uint64_t>(k, phi.cols()));
  GramSource gram(phi);

  const int t_count = std::max(opts.threads, 1);
  auto sample_support = [&](std::uint64_t idx) {
    CounterRng rng(SplitMix64::derive(rng_seed, idx));
    std::vector<std::uint32_t> pool(phi.cols());
    for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<std::uint32_t>(i);
    for (std::size_t i = 0; i < s; ++i)
      std::swap(pool[i], pool[i + rng.next_below(pool.size() - i)]);
    std::vector<std::uint32_t> sup(pool.begin(), pool.begin() + s);
    std::sort(sup.begin(), sup.end());
    return sup;
  };
  auto worker = [&](int tid, BestSupport& out) {
    for (std::uint64_t idx = tid; idx < n_samples; idx += t_count) {
      auto sup = sample_support(idx);
      out.offer(support_delta(gram, sup), sup);
    }
  };
  BestSupport best;
  if (t_count == 1) {
    worker(0, best);
  } else {
    std::vector<BestSupport> partials(t_count);
    std::vector<std::thread> pool;
    for (int tid = 0; tid < t_count; ++tid)
      pool.emplace_back(worker, tid, std::ref(partials[tid]));
    for (auto& th : pool) th.join();
    for (const auto& part : partials) best.merge(part);
  }

  RipReport report;
  report.k_checked = k;
  report.mode = RipReport::Mode::sampled;
  report.delta_lower_bound = best.value;
  report.worst_support = one_based(best.support);
  report.n_samples = n_samples;
  report.rng_seed = rng_seed;
  return report;
}

FroReport fro_constant(const SignMatrix& phi, std::uint64_t k, std::uint64_t pair_budget) {
  if (k < 1) throw std::invalid_argument("fro_constant requires K >= 1");
  if (phi.cols() < 2) throw std::invalid_argument("fro_constant requires N >= 2");
  const std::uint64_t n = phi.cols();
  const std::uint64_t kmax = std::min(k, n);

  // Unordered disjoint pairs: sum_{i,j<=K} C(n,i) C(n-i,j) / 2.
  std::uint64_t ordered = 0;
  for (std::uint64_t i = 1; i <= kmax; ++i) {
    const std::uint64_t ci = binomial_capped(n, i, 2 * pair_budget);
    for (std::uint64_t j = 1; j <= kmax && j <= n - i; ++j) {
      ordered += checked_mul_capped(ci, binomial_capped(n - i, j, 2 * pair_budget), 2 * pair_budget);
      if (ordered > 2 * pair_budget)
        throw BudgetError("FRO pair enumeration exceeds the budget (" +
                          std::to_string(pair_budget) + ")");
    }
  }

  GramSource gram(phi);
  const double rows = gram.rows();

  // Orient each unordered pair so that I holds the smallest index overall.
  FroReport report;
  report.k_checked = k;
  bool have = false;
  std::vector<std::uint32_t> is, js;
  for (std::size_t si = 1; si <= kmax; ++si) {
    is.resize(si);
    for (std::size_t i = 0; i < si; ++i) is[i] = static_cast<std::uint32_t>(i);
    do {
      // candidate J indices: > min(I), not in I
      std::vector<std::uint32_t> pool;
      for (std::uint32_t c = is[0] + 1; c < n; ++c)
        if (!std::binary_search(is.begin(), is.end(), c)) pool.push_back(c);
      for (std::size_t sj = 1; sj <= std::min<std::size_t>(kmax, pool.size()); ++sj) {
        std::vector<std::uint32_t> pick(sj);
        for (std::size_t i = 0; i < sj; ++i) pick[i] = static_cast<std::uint32_t>(i);
        do {
          js.resize(sj);
          for (std::size_t i = 0; i < sj; ++i) js[i] = pool[pick[i]];
          std::int64_t acc = 0;
          for (std::uint32_t a : is)
            for (std::uint32_t b : js) acc += gram.dot(a, b);
          const double value = std::abs(static_cast<double>(acc)) /
                               (rows * std::sqrt(static_cast<double>(si * sj)));
          if (!have || value > report.theta_emp ||
              (value == report.theta_emp &&
               (lex_less(is, report.worst_i) ||
                (is == report.worst_i && lex_less(js, report.worst_j))))) {
            have = true;
            report.theta_emp = value;
            report.worst_i = is;
            report.worst_j = js;
          }
        } while (colex_next(pick, pool.size()));
      }
    } while (colex_next(is, n));
  }

  report.worst_i = one_based(report.worst_i);
  report.worst_j = one_based(report.worst_j);
  report.delta_via_conversion = 150.0 * report.theta_emp * clamped_log(k);
  return report;
}

CoherenceResult coherence(const SignMatrix& phi) {
  if (phi.cols() < 2) throw std::invalid_argument("coherence requires N >= 2");
  CoherenceResult res;
  std::int64_t best = -1;
  for (std::size_t a = 0; a + 1 < phi.cols(); ++a)
    for (std::size_t b = a + 1; b < phi.cols(); ++b) {
      const std::int64_t d = std::abs(phi.dot_raw(a, b));
      if (d > best) {
        best = d;
        res.worst_a = static_cast<std::uint32_t>(a + 1);
        res.worst_b = static_cast<std::uint32_t>(b + 1);
      }
    }
  res.mu = static_cast<double>(best) / static_cast<double>(phi.rows());
  const double m = static_cast<double>(phi.rows());
  const double n = static_cast<double>(phi.cols());
  res.welch_floor = std::sqrt(std::max(0.0, (n - m) / (m * (n - 1.0))));
  return res;
}

CharSumCheck charsum_check(const BigNat& p, const std::vector<std::uint64_t>& offsets,
                           std::uint64_t t, std::uint64_t window_budget) {
  if (offsets.empty()) throw std::invalid_argument("charsum_check needs at least one offset");
  for (std::size_t i = 0; i + 1 < offsets.size(); ++i)
    if (offsets[i] >= offsets[i + 1])
      throw std::invalid_argument("offsets must be strictly increasing");
  if (offsets.front() == 0) throw std::invalid_argument("offsets must be positive");
  if (BigNat(offsets.back()) >= p) throw std::invalid_argument("offsets must be < p");
  if (t < 1 || BigNat(t) > p - offsets.back())
    throw std::invalid_argument("t must satisfy 1 <= t <= p - d_k");

  const std::uint64_t spread = offsets.back() - offsets.front();
  if (t > window_budget || t + spread > window_budget)
    throw BudgetError("charsum window of " + std::to_string(t + spread) +
                      " symbols exceeds the budget");

  SymbolEngine chi(p);
  const std::vector<std::int8_t> syms = chi.stream(BigNat(offsets.front()), t + spread);

  std::int64_t sum = 0;
  const std::size_t k = offsets.size();
  std::vector<std::size_t> rel(k);
  for (std::size_t i = 0; i < k; ++i) rel[i] = offsets[i] - offsets.front();
  for (std::uint64_t n = 0; n < t; ++n) {
    int prod = 1;
    for (std::size_t i = 0; i < k; ++i) prod *= syms[n + rel[i]];
    sum += prod;
  }

  CharSumCheck check;
  check.p = p;
  check.offsets = offsets;
  check.t = t;
  check.sum_value = sum;
  const double pd = p.convert_to<double>();
  check.bound_value = 9.0 * static_cast<double>(k) * std::sqrt(pd) * std::log(pd);
  check.pass = std::abs(static_cast<double>(sum)) <= check.bound_value;
  check.soft = p < kCharsumSoftP0;
  return check;
}

namespace {

void validate_bias_inputs(const BigNat& p, unsigned h, const std::vector<std::uint64_t>& index_set) {
  if (h < 1) throw std::invalid_argument("bias checks need H >= 1");
  if (index_set.empty())
    throw std::invalid_argument("epsilon-bias is defined for nonempty index sets only");
  for (std::size_t i = 0; i + 1 < index_set.size(); ++i)
    if (index_set[i] >= index_set[i + 1])
      throw std::invalid_argument("index set must be strictly increasing");
  if (index_set.front() < 1) throw std::invalid_argument("index set entries must be >= 1");
  if (BigNat(index_set.back()) + pow2(h) - 1 >= p)
    throw std::invalid_argument("max(I) + 2^H - 1 >= p: a zero symbol would become possible");
}

void attach_bias_bounds(BiasReport& report, double bias_abs,
                        std::optional<std::uint64_t> chain_cols) {
  const double pd = report.p.convert_to<double>();
  const double two_h = std::ldexp(1.0, static_cast<int>(report.h));
  report.bias_bound =
      static_cast<double>(report.index_set.size()) * std::sqrt(pd) * std::log(pd) / two_h;
  report.bias_bound_holds = bias_abs <= report.bias_bound;
  if (chain_cols) {
    const double n = static_cast<double>(*chain_cols);
    report.chain_bound = 4.0 * n * n * std::exp2(-static_cast<double>(report.h) / 3.0);
    report.chain_holds = bias_abs <= *report.chain_bound;
  }
}

}  // namespace

BiasReport bias_exact(const BigNat& p, unsigned h, const std::vector<std::uint64_t>& index_set,
                      std::optional<std::uint64_t> chain_cols, unsigned h_budget) {
  validate_bias_inputs(p, h, index_set);
  if (h > h_budget)
    throw BudgetError("2^" + std::to_string(h) +
                      " seeds exceed the exact-bias budget; use bias_sampled");

  const std::size_t two_h = std::size_t{1} << h;
  const std::size_t span = static_cast<std::size_t>(index_set.back() - index_set.front());
  if (two_h + span > kDefaultCharsumWindowBudget)
    throw BudgetError("exact-bias symbol window of " + std::to_string(two_h + span) +
                      " exceeds the budget");
  SymbolEngine chi(p);
  const std::vector<std::int8_t> syms = chi.stream(BigNat(index_set.front()), two_h + span);

  std::vector<std::size_t> rel(index_set.size());
  for (std::size_t i = 0; i < rel.size(); ++i) rel[i] = index_set[i] - index_set.front();
  std::int64_t sum = 0;
  for (std::size_t x = 0; x < two_h; ++x) {
    int prod = 1;
    for (std::size_t r : rel) prod *= syms[x + r];
    sum += prod;
  }

  BiasReport report;
  report.p = p;
  report.h = h;
  report.index_set = index_set;
  report.exact_numerator = sum;
  report.exact_bias = static_cast<double>(sum) / std::ldexp(1.0, static_cast<int>(h));
  attach_bias_bounds(report, std::abs(*report.exact_bias), chain_cols);
  return report;
}

BiasReport bias_sampled(const BigNat& p, unsigned h, const std::vector<std::uint64_t>& index_set,
                        std::uint64_t n_samples, std::uint64_t rng_seed,
                        std::optional<std::uint64_t> chain_cols) {
  validate_bias_inputs(p, h, index_set);
  if (n_samples < 1) throw std::invalid_argument("bias_sampled needs n_samples >= 1");

  SymbolEngine chi(p);
  std::int64_t sum = 0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    BigNat x;
    if (h <= 64) {
      std::uint64_t bits = SplitMix64::at(rng_seed, i);
      if (h < 64) bits &= (std::uint64_t{1} << h) - 1;
      x = bits;
    } else {
      Seed s = generate_seed(h, SplitMix64::derive(rng_seed, i));
      x = s.x;
    }
    int prod = 1;
    for (std::uint64_t off : index_set) prod *= chi(x + off);
    sum += prod;
  }

  BiasReport report;
  report.p = p;
  report.h = h;
  report.index_set = index_set;
  report.n_samples = n_samples;
  report.rng_seed = rng_seed;
  const double mean = static_cast<double>(sum) / static_cast<double>(n_samples);
  report.sampled_bias = mean;
  report.std_error =
      std::sqrt(std::max(0.0, 1.0 - mean * mean) / static_cast<double>(n_samples));
  attach_bias_bounds(report, std::abs(mean), chain_cols);
  return report;
}

namespace {

unsigned long long double_factorial(long long n) {
  unsigned long long r = 1;
  for (; n > 1; n -= 2) r *= static_cast<unsigned long long>(n);
  return r;
}

}  // namespace

MatchingCheck matching_coloring_count(unsigned q, std::uint64_t colors) {
  if (q < 2 || q > 12 || (q % 2) != 0)
    throw std::invalid_argument("matching check needs even q with 2 <= q <= 12");
  if (colors < 1 || colors > 256)
    throw std::invalid_argument("matching check needs 1 <= colors <= 256");

  MatchingCheck check;
  check.q = q;
  check.colors = colors;

  std::vector<std::pair<unsigned, unsigned>> edges;  // current matching under construction
  unsigned long long brute = 0, matchings = 0;

  auto components_with_m0 = [&]() {
    std::vector<unsigned> parent(q);
    for (unsigned v = 0; v < q; ++v) parent[v] = v;
    auto find = [&](unsigned v) {
      while (parent[v] != v) v = parent[v] = parent[parent[v]];
      return v;
    };
    auto unite = [&](unsigned a, unsigned b) {
      a = find(a);
      b = find(b);
      if (a != b) parent[a] = b;
    };
    for (unsigned v = 0; v + 1 < q; v += 2) unite(v, v + 1);  // canonical matching
    for (auto [a, b] : edges) unite(a, b);
    unsigned comps = 0;
    for (unsigned v = 0; v < q; ++v)
      if (find(v) == v) ++comps;
    return comps;
  };

  auto rec = [&](auto&& self, std::uint32_t free_mask) -> void {
    if (free_mask == 0) {
      ++matchings;
      unsigned long long weight = 1;
      for (unsigned c = components_with_m0(); c > 0; --c) weight *= colors;
      brute += weight;
      return;
    }
    const unsigned a = static_cast<unsigned>(__builtin_ctz(free_mask));
    std::uint32_t rest = free_mask & ~(std::uint32_t{1} << a);
    std::uint32_t scan = rest;
    while (scan) {
      const unsigned b = static_cast<unsigned>(__builtin_ctz(scan));
      scan &= scan - 1;
      edges.emplace_back(a, b);
      self(self, rest & ~(std::uint32_t{1} << b));
      edges.pop_back();
    }
  };
  rec(rec, (std::uint32_t{1} << q) - 1);

  check.brute = brute;
  check.matchings = matchings;
  // (colors+q-2)!!/(colors-2)!! telescopes to a q/2-term product; the
  // separate factorials would overflow for colors near 256.
  unsigned long long formula = 1;
  for (unsigned j = 0; j < q / 2; ++j) formula *= colors + 2 * j;
  check.formula = formula;
  check.pass = (check.brute == check.formula) &&
               (check.matchings == double_factorial(static_cast<long long>(q) - 1));
  return check;
}

ScanReport conjecture_scan(std::uint64_t m, std::uint64_t n, std::uint64_t k,
                           const BigNat& prime_lo, const std::optional<BigNat>& prime_hi,
                           std::optional<std::size_t> prime_count, const ScanOptions& opts) {
  if (!prime_hi && !prime_count)
    throw std::invalid_argument("conjecture_scan needs an upper prime bound or a prime count");
  const std::uint64_t k2 = 2 * k;
  const std::uint64_t count = support_count_capped(n, std::min(k2, n), opts.support_budget);
  if (count > opts.support_budget)
    throw BudgetError("conjecture scan at 2K exceeds the support budget");

  ScanReport report;
  report.m = m;
  report.n = n;
  report.k = k;
  report.k2 = k2;
  report.target_delta = opts.target_delta;

  RipOptions rip_opts;
  rip_opts.support_budget = opts.support_budget;
  rip_opts.threads = opts.threads;

  BigNat lo = prime_lo;
  const BigNat mn = BigNat(m) * BigNat(n);
  if (lo <= mn) lo = mn + 1;
  BigNat cand = lo;
  std::size_t taken = 0;
  while (true) {
    if (prime_count && taken >= *prime_count) break;
    PrimeCert cert = next_prime_geq(cand);
    if (prime_hi && cert.p > *prime_hi) break;
    SignMatrix phi = build_legendre_deterministic(m, n, cert);
    RipReport rip = rip_constant(phi, k2, rip_opts);
    report.rows.push_back({cert.p, *rip.delta_exact});
    ++taken;
    cand = cert.p + 2;
  }

  std::size_t meeting = 0;
  for (const auto& row : report.rows)
    if (row.delta <= opts.target_delta) ++meeting;
  report.fraction_meeting =
      report.rows.empty() ? 0.0 : static_cast<double>(meeting) / static_cast<double>(report.rows.size());

  for (std::uint64_t seed : opts.baseline_seeds) {
    SignMatrix phi = build_bernoulli_baseline(m, n, seed);
    RipReport rip = rip_constant(phi, k2, rip_opts);
    report.baseline.emplace_back(seed, *rip.delta_exact);
  }
  return report;
}

}  // namespace legrip

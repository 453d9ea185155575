#include "legrip/codes.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

namespace legrip {
namespace {

void validate_set_shape(const BiasedSet& set) {
  if (set.n < 1 || set.n > 32)
    throw std::invalid_argument("biased set needs 1 <= n <= 32 coordinates");
  if (set.vectors.empty()) throw std::invalid_argument("biased set needs at least one vector");
  if (set.n < 32)
    for (std::uint32_t v : set.vectors)
      if (v >> set.n) throw std::invalid_argument("vector has bits beyond coordinate n");
}

void check_dim_budget(unsigned n, unsigned n_budget) {
  n_budget = std::min(n_budget, 26u);  // 2^26 transform entries = 512 MB; hard cap
  if (n > n_budget)
    throw BudgetError("exhaustive enumeration over 2^" + std::to_string(n) +
                      " messages exceeds the dimension budget (" + std::to_string(n_budget) + ")");
}

std::vector<std::uint32_t> mask_to_indices(std::uint32_t mask) {
  std::vector<std::uint32_t> idx;
  for (unsigned i = 0; mask; ++i, mask >>= 1)
    if (mask & 1u) idx.push_back(i + 1);
  return idx;
}

// transform[u] = sum_j (-1)^popcount(vectors[j] & u), for all u < 2^n.
std::vector<std::int64_t> product_transform(unsigned n, const std::vector<std::uint32_t>& vectors) {
  std::vector<std::int64_t> t(std::size_t{1} << n, 0);
  for (std::uint32_t v : vectors) ++t[v];
  for (std::size_t len = 1; len < t.size(); len <<= 1)
    for (std::size_t base = 0; base < t.size(); base += 2 * len)
      for (std::size_t i = base; i < base + len; ++i) {
        const std::int64_t a = t[i], b = t[i + len];
        t[i] = a + b;
        t[i + len] = a - b;
      }
  return t;
}

// Worst nonzero index over the transform: largest |t[u]|, ties by
// lexicographically smallest 1-based index list.
std::uint32_t worst_mask(const std::vector<std::int64_t>& t) {
  std::uint32_t best = 1;
  std::int64_t best_abs = std::abs(t[1]);
  for (std::uint32_t u = 2; u < t.size(); ++u) {
    const std::int64_t a = std::abs(t[u]);
    if (a > best_abs) {
      best = u;
      best_abs = a;
    } else if (a == best_abs && mask_to_indices(u) < mask_to_indices(best)) {
      best = u;
    }
  }
  return best;
}

[[noreturn]] void io_fail(const char* format, std::size_t line, const std::string& what) {
  throw std::invalid_argument(std::string(format) + " parse error at line " +
                              std::to_string(line) + ": " + what);
}

}  // namespace

BiasWitness exact_bias(const BiasedSet& set, unsigned n_budget) {
  validate_set_shape(set);
  check_dim_budget(set.n, n_budget);
  const auto t = product_transform(set.n, set.vectors);
  const std::uint32_t u = worst_mask(t);
  BiasWitness w;
  w.numerator = t[u];
  w.bias = std::abs(static_cast<double>(t[u])) / static_cast<double>(set.q());
  w.index_set = mask_to_indices(u);
  return w;
}

unsigned f2_rank(unsigned n, const std::vector<std::uint32_t>& columns) {
  std::vector<std::uint32_t> basis(n, 0);  // basis[b]: vector with leading bit b
  unsigned rank = 0;
  for (std::uint32_t col : columns) {
    for (unsigned b = n; b-- > 0;) {
      if (!((col >> b) & 1u)) continue;
      if (basis[b] == 0) {
        basis[b] = col;
        ++rank;
        col = 0;
        break;
      }
      col ^= basis[b];
    }
    if (col != 0) throw std::invalid_argument("column has bits beyond row n");
  }
  return rank;
}

BinaryCode make_code(unsigned n, std::vector<std::uint32_t> columns, unsigned n_budget) {
  if (n < 1 || n > 32) throw std::invalid_argument("code needs 1 <= n <= 32 generator rows");
  if (columns.empty()) throw std::invalid_argument("code needs length q >= 1");
  if (n < 32)
    for (std::uint32_t c : columns)
      if (c >> n) throw std::invalid_argument("column has bits beyond row n");
  check_dim_budget(n, n_budget);
  if (f2_rank(n, columns) != n)
    throw std::invalid_argument("generator rows are linearly dependent");

  BinaryCode code;
  code.n = n;
  code.columns = std::move(columns);
  const auto t = product_transform(n, code.columns);
  code.weight_spectrum.resize(t.size());
  const std::int64_t q = static_cast<std::int64_t>(code.columns.size());
  for (std::size_t u = 0; u < t.size(); ++u)
    code.weight_spectrum[u] = static_cast<std::uint32_t>((q - t[u]) / 2);
  return code;
}

CertifiedSet code_to_biased(const BinaryCode& code, double eps, unsigned n_budget) {
  if (eps < 0) throw std::invalid_argument("eps must be nonnegative");
  check_dim_budget(code.n, n_budget);
  const double q = static_cast<double>(code.q());
  for (std::uint32_t u = 1; u < code.weight_spectrum.size(); ++u) {
    const std::uint32_t w = code.weight_spectrum[u];
    if (std::abs(q - 2.0 * w) > eps * q) {
      std::ostringstream msg;
      msg << "codeword for message " << u << " has weight " << w << " outside [("
          << "1-eps)q/2, (1+eps)q/2] at eps=" << eps;
      throw WeightWindowError(u, w, msg.str());
    }
  }

  CertifiedSet out;
  out.set.n = code.n;
  out.set.vectors = code.columns;  // bit b -> (-1)^b is the identity on packed words
  out.eps = eps;
  out.exact = exact_bias(out.set, n_budget);
  if (out.exact.bias > eps)
    throw std::logic_error("exhaustive bias exceeded the certified window bound");
  return out;
}

std::variant<BinaryCode, DegenerateCode> biased_to_code(const BiasedSet& set, unsigned n_budget) {
  validate_set_shape(set);
  check_dim_budget(set.n, n_budget);

  const auto t = product_transform(set.n, set.vectors);
  const std::int64_t q = static_cast<std::int64_t>(set.q());
  // A coordinate set whose product is +1 on every vector (zero codeword)
  // witnesses dependent rows; report the lexicographically smallest.
  std::uint32_t dependent = 0;
  for (std::uint32_t u = 1; u < t.size(); ++u)
    if (t[u] == q &&
        (dependent == 0 || mask_to_indices(u) < mask_to_indices(dependent)))
      dependent = u;
  if (dependent != 0) return DegenerateCode{mask_to_indices(dependent)};

  std::vector<std::uint32_t> cols = set.vectors;
  std::sort(cols.begin(), cols.end());
  BinaryCode code = make_code(set.n, std::move(cols), n_budget);

  const double biasq = std::abs(static_cast<double>(t[worst_mask(t)]));
  for (std::uint32_t u = 1; u < code.weight_spectrum.size(); ++u)
    if (std::abs(static_cast<double>(q) - 2.0 * code.weight_spectrum[u]) > biasq)
      throw std::logic_error("codeword weight escaped the exact-bias window");
  return code;
}

double entropy_lower_bound(unsigned n, double eps) {
  if (n < 1) throw std::invalid_argument("entropy bound needs n >= 1");
  if (!(eps > 0.0) || eps > 1.0) throw std::invalid_argument("entropy bound needs 0 < eps <= 1");
  return std::min(std::log2(1.0 / eps), static_cast<double>(n - 1));
}

WelchEntropyCheck welch_entropy_check(const BiasedSet& set, unsigned n_budget) {
  const BiasWitness w = exact_bias(set, n_budget);
  WelchEntropyCheck check;
  check.n = set.n;
  check.q = set.q();
  check.numerator = std::abs(w.numerator);
  const BigNat two_n = pow2(check.n);
  check.lhs = BigNat(check.numerator) * BigNat(check.numerator) * (two_n - 1);
  check.rhs = BigNat(check.q) * (two_n - BigNat(check.q));
  check.holds = check.lhs >= check.rhs;
  return check;
}

void write_code(std::ostream& os, const BinaryCode& code) {
  os << "CODE v1 " << code.n << ' ' << code.q() << '\n';
  for (unsigned row = 0; row < code.n; ++row) {
    for (std::size_t col = 0; col < code.q(); ++col) os << char('0' + code.generator_bit(row, col));
    os << '\n';
  }
}

BinaryCode read_code(std::istream& is, unsigned n_budget) {
  std::size_t lineno = 1;
  std::string line;
  if (!std::getline(is, line)) io_fail("CODE", lineno, "missing header");
  std::istringstream hs(line);
  std::string magic, version;
  unsigned n = 0;
  std::uint64_t q = 0;
  if (!(hs >> magic >> version >> n >> q) || magic != "CODE")
    io_fail("CODE", lineno, "expected header 'CODE v1 <n> <q>'");
  if (version != "v1") io_fail("CODE", lineno, "unsupported CODE version");
  if (n < 1 || n > 32) io_fail("CODE", lineno, "n out of range [1, 32]");
  if (q < 1) io_fail("CODE", lineno, "q must be >= 1");

  std::vector<std::uint32_t> columns(q, 0);
  for (unsigned row = 0; row < n; ++row) {
    ++lineno;
    if (!std::getline(is, line)) io_fail("CODE", lineno, "missing generator row");
    if (line.size() != q) io_fail("CODE", lineno, "expected exactly q = " + std::to_string(q) + " characters");
    for (std::uint64_t col = 0; col < q; ++col) {
      if (line[col] == '1')
        columns[col] |= std::uint32_t{1} << row;
      else if (line[col] != '0')
        io_fail("CODE", lineno, "generator entries must be '0' or '1'");
    }
  }
  try {
    return make_code(n, std::move(columns), n_budget);
  } catch (const std::invalid_argument& e) {
    io_fail("CODE", lineno, e.what());
  }
}

void write_biased_set(std::ostream& os, const BiasedSet& set) {
  os << "SET v1 " << set.n << ' ' << set.q() << '\n';
  for (std::size_t j = 0; j < set.q(); ++j) {
    for (unsigned i = 0; i < set.n; ++i) os << (set.coord(j, i) > 0 ? '+' : '-');
    os << '\n';
  }
}

BiasedSet read_biased_set(std::istream& is) {
  std::size_t lineno = 1;
  std::string line;
  if (!std::getline(is, line)) io_fail("SET", lineno, "missing header");
  std::istringstream hs(line);
  std::string magic, version;
  unsigned n = 0;
  std::uint64_t q = 0;
  if (!(hs >> magic >> version >> n >> q) || magic != "SET")
    io_fail("SET", lineno, "expected header 'SET v1 <n> <q>'");
  if (version != "v1") io_fail("SET", lineno, "unsupported SET version");
  if (n < 1 || n > 32) io_fail("SET", lineno, "n out of range [1, 32]");
  if (q < 1) io_fail("SET", lineno, "q must be >= 1");

  BiasedSet set;
  set.n = n;
  set.vectors.assign(q, 0);
  for (std::uint64_t j = 0; j < q; ++j) {
    ++lineno;
    if (!std::getline(is, line)) io_fail("SET", lineno, "missing vector row");
    if (line.size() != n) io_fail("SET", lineno, "expected exactly n = " + std::to_string(n) + " characters");
    for (unsigned i = 0; i < n; ++i) {
      if (line[i] == '-')
        set.vectors[j] |= std::uint32_t{1} << i;
      else if (line[i] != '+')
        io_fail("SET", lineno, "vector entries must be '+' or '-'");
    }
  }
  return set;
}

}  // namespace legrip

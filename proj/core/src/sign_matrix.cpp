#include "legrip/sign_matrix.hpp"

#include <bit>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace legrip {
namespace {

constexpr const char* kSeededTag = "legendre-seeded";
constexpr const char* kDeterministicTag = "legendre-deterministic";
constexpr const char* kBernoulliTag = "bernoulli-iid";

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
  throw std::invalid_argument("RIPM parse error at line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::string provenance_tag(const Provenance& prov) {
  if (std::holds_alternative<LegendreSeededProv>(prov)) return kSeededTag;
  if (std::holds_alternative<LegendreDeterministicProv>(prov)) return kDeterministicTag;
  return kBernoulliTag;
}

SignMatrix::SignMatrix(std::size_t rows, std::size_t cols, Provenance prov)
    : rows_(rows),
      cols_(cols),
      words_per_col_((rows + 63) / 64),
      bits_(words_per_col_ * cols, 0),
      prov_(std::move(prov)) {
  if (rows == 0 || cols == 0) throw std::invalid_argument("SignMatrix needs rows, cols >= 1");
}

int SignMatrix::sign(std::size_t m, std::size_t n) const {
  const std::uint64_t w = bits_[n * words_per_col_ + m / 64];
  return (w >> (m % 64)) & 1 ? -1 : +1;
}

void SignMatrix::set_sign(std::size_t m, std::size_t n, int s) {
  if (s != 1 && s != -1) throw std::invalid_argument("sign entries must be +-1");
  std::uint64_t& w = bits_[n * words_per_col_ + m / 64];
  const std::uint64_t mask = std::uint64_t{1} << (m % 64);
  if (s < 0)
    w |= mask;
  else
    w &= ~mask;
}

std::int64_t SignMatrix::dot_raw(std::size_t a, std::size_t b) const {
  const std::uint64_t* wa = bits_.data() + a * words_per_col_;
  const std::uint64_t* wb = bits_.data() + b * words_per_col_;
  std::int64_t diff = 0;
  for (std::size_t w = 0; w < words_per_col_; ++w) diff += std::popcount(wa[w] ^ wb[w]);
  return static_cast<std::int64_t>(rows_) - 2 * diff;
}

double SignMatrix::gram(std::size_t a, std::size_t b) const {
  return static_cast<double>(dot_raw(a, b)) / static_cast<double>(rows_);
}

double SignMatrix::column_dot(std::size_t n, const double* v) const {
  double acc = 0;
  for (std::size_t m = 0; m < rows_; ++m) acc += sign(m, n) * v[m];
  return acc / std::sqrt(static_cast<double>(rows_));
}

double SignMatrix::scale() const { return 1.0 / std::sqrt(static_cast<double>(rows_)); }

bool SignMatrix::operator==(const SignMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && bits_ == other.bits_;
}

void SignMatrix::write(std::ostream& os) const {
  os << "RIPM 1 " << rows_ << ' ' << cols_ << ' ' << tag() << '\n';
  if (const auto* sp = std::get_if<LegendreSeededProv>(&prov_)) {
    os << "p " << to_hex(sp->p) << '\n';
    os << "x " << to_hex(sp->x) << '\n';
  } else if (const auto* dp = std::get_if<LegendreDeterministicProv>(&prov_)) {
    os << "p " << to_hex(dp->p) << '\n';
  } else {
    const auto& bp = std::get<BernoulliProv>(prov_);
    os << "rng " << bp.algo << ' ' << bp.rng_seed << '\n';
  }
  for (std::size_t m = 0; m < rows_; ++m) {
    for (std::size_t n = 0; n < cols_; ++n) {
      if (n) os << ' ';
      os << (sign(m, n) > 0 ? '+' : '-');
    }
    os << '\n';
  }
}

std::string SignMatrix::to_string() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

SignMatrix SignMatrix::read(std::istream& is) {
  std::size_t lineno = 0;
  std::string line;
  auto next_line = [&]() {
    if (!std::getline(is, line)) parse_fail(lineno + 1, "unexpected end of file");
    ++lineno;
  };

  next_line();
  std::istringstream hs(line);
  std::string magic, tag;
  int version = 0;
  std::size_t rows = 0, cols = 0;
  if (!(hs >> magic >> version >> rows >> cols >> tag) || magic != "RIPM")
    parse_fail(lineno, "expected header 'RIPM 1 <M> <N> <tag>'");
  if (version != 1) parse_fail(lineno, "unsupported RIPM version");
  if (rows == 0 || cols == 0) parse_fail(lineno, "M and N must be positive");

  Provenance prov;
  auto read_field = [&](const std::string& key) {
    next_line();
    std::istringstream fs(line);
    std::string k, v;
    if (!(fs >> k >> v) || k != key) parse_fail(lineno, "expected '" + key + " <value>'");
    return v;
  };
  if (tag == kSeededTag) {
    BigNat p = from_hex(read_field("p"));
    BigNat x = from_hex(read_field("x"));
    prov = LegendreSeededProv{x, p};
  } else if (tag == kDeterministicTag) {
    prov = LegendreDeterministicProv{from_hex(read_field("p"))};
  } else if (tag == kBernoulliTag) {
    next_line();
    std::istringstream fs(line);
    std::string k, algo;
    std::uint64_t seed = 0;
    if (!(fs >> k >> algo >> seed) || k != "rng") parse_fail(lineno, "expected 'rng <algo> <seed>'");
    prov = BernoulliProv{seed, algo};
  } else {
    parse_fail(lineno, "unknown provenance tag '" + tag + "'");
  }

  SignMatrix mat(rows, cols, prov);
  for (std::size_t m = 0; m < rows; ++m) {
    next_line();
    std::istringstream rs(line);
    for (std::size_t n = 0; n < cols; ++n) {
      std::string cell;
      if (!(rs >> cell) || cell.size() != 1 || (cell[0] != '+' && cell[0] != '-'))
        parse_fail(lineno, "expected " + std::to_string(cols) + " entries of '+' or '-'");
      mat.set_sign(m, n, cell[0] == '+' ? +1 : -1);
    }
    std::string extra;
    if (rs >> extra) parse_fail(lineno, "trailing tokens after " + std::to_string(cols) + " entries");
  }
  return mat;
}

SignMatrix SignMatrix::from_string(const std::string& text) {
  std::istringstream is(text);
  return read(is);
}

}  // namespace legrip

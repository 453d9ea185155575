// Command-line front end: parameter planning, matrix generation, bound
// verification, bias and character-sum checks, the conjecture scanner,
// code/set conversion, sparse recovery, and phase sweeps.
#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "legrip/codes.hpp"
#include "legrip/construct.hpp"
#include "legrip/ntheory.hpp"
#include "legrip/recovery.hpp"
#include "legrip/report.hpp"
#include "legrip/rng.hpp"
#include "legrip/verify.hpp"

namespace {

using namespace legrip;

constexpr const char* kVersion = "0.1.0";

struct Output {
  bool json = false;
  void emit(const Record& rec) const {
    std::cout << (json ? to_json(rec) : to_kv(rec)) << '\n';
  }
};

std::string dec(const BigNat& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Config header: the full resolved parameter set except --threads, which by
// design must not alter any output byte.
Record config_record(const std::string& command) {
  Record rec("config");
  rec.add("command", command).add("version", kVersion).add("log", kLogConvention);
  return rec;
}

std::vector<std::uint64_t> parse_u64_list(const std::string& text, const char* what) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    try {
      std::size_t pos = 0;
      out.push_back(std::stoull(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(std::string(what) + ": bad entry '" + item + "'");
    }
  }
  if (out.empty()) throw CLI::ValidationError(std::string(what) + ": empty list");
  return out;
}

std::vector<std::uint64_t> parse_k_range(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return parse_u64_list(text, "--k-range");
  try {
    const std::uint64_t lo = std::stoull(text.substr(0, colon));
    const std::uint64_t hi = std::stoull(text.substr(colon + 1));
    if (hi < lo) throw std::invalid_argument(text);
    std::vector<std::uint64_t> out;
    for (std::uint64_t k = lo; k <= hi; ++k) out.push_back(k);
    return out;
  } catch (const std::exception&) {
    throw CLI::ValidationError("--k-range: expected 'lo:hi' or a comma list");
  }
}

BigNat parse_bignat_dec(const std::string& text, const char* what) {
  try {
    return from_dec(text);
  } catch (const std::exception& e) {
    throw CLI::ValidationError(std::string(what) + ": " + e.what());
  }
}

SignMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open matrix file: " + path);
  return SignMatrix::read(in);
}

void add_prime_fields(Record& rec, const PrimeCert& cert) {
  rec.add("p", dec(cert.p))
      .add("prime_method", prime_method_name(cert.method))
      .add("prime_rounds", static_cast<std::uint64_t>(cert.rounds));
}

// ---------------------------------------------------------------- plan ---

int cmd_plan(const Output& out, std::uint64_t n, std::uint64_t k, double delta,
             std::optional<std::uint64_t> m_override, std::optional<std::uint64_t> h_override,
             double c1) {
  PlanOverrides ov;
  ov.m = m_override;
  ov.h = h_override;
  if (c1 > 0) ov.c1 = c1;
  DesignParams params = plan_parameters(n, k, delta, ov);

  Record cfg = config_record("plan");
  cfg.add("n", n).add("k", k).add("delta", delta).add("c1", params.c1);
  if (m_override) cfg.add("m_override", *m_override);
  if (h_override) cfg.add("h_override", *h_override);
  out.emit(cfg);

  Record rec("plan");
  rec.add("m", params.m)
      .add("h", params.h)
      .add("eps_required", params.eps_required)
      .add("log_eps_required", params.log_eps_required)
      .add("p_min", dec(params.p_min))
      .add("logk_clamped", params.logk_clamped)
      .add("m_overridden", params.m_overridden)
      .add("h_overridden", params.h_overridden);
  out.emit(rec);
  return 0;
}

// ----------------------------------------------------------------- gen ---

int cmd_gen(const Output& out, bool deterministic, std::uint64_t m, std::uint64_t n, unsigned h,
            const std::string& x_hex, std::optional<std::uint64_t> seed_rng,
            const std::string& prime, const std::string& out_path) {
  if (m < 1 || n < 1) throw CLI::ValidationError("--m and --n must be >= 1");

  PrimeCert cert;
  Seed seed;
  if (deterministic) {
    const BigNat mn = BigNat(m) * BigNat(n);
    cert = (prime == "auto") ? next_prime_geq(mn + 1)
                             : certify_prime(parse_bignat_dec(prime, "--prime"));
  } else {
    if (h < 1) throw CLI::ValidationError("seeded generation needs --h >= 1");
    if (x_hex.empty() == !seed_rng)
      throw CLI::ValidationError("give exactly one of --x (hex) or --seed-rng");
    if (seed_rng) {
      seed = generate_seed(h, *seed_rng);
    } else {
      seed.x = from_hex(x_hex);
      seed.h = h;
      seed.source = Seed::Source::external_hex;
      if (seed.x >= pow2(h)) throw CLI::ValidationError("--x must be below 2^h");
    }
    const BigNat p_min = pow2(h) + BigNat(m) * BigNat(n);
    cert = (prime == "auto") ? next_prime_geq(p_min)
                             : certify_prime(parse_bignat_dec(prime, "--prime"));
  }

  Record cfg = config_record("gen");
  cfg.add("mode", deterministic ? "deterministic" : "seeded").add("m", m).add("n", n);
  if (!deterministic) {
    cfg.add("h", static_cast<std::uint64_t>(h));
    cfg.add("x", to_hex(seed.x));
    cfg.add("seed_source", seed.source == Seed::Source::generated ? "rng" : "hex");
    if (seed_rng) cfg.add("seed_rng", *seed_rng).add("rng_algo", kRngAlgoId);
  }
  cfg.add("prime_flag", prime).add("out", out_path);
  out.emit(cfg);

  SignMatrix phi = deterministic ? build_legendre_deterministic(m, n, cert)
                                 : build_legendre_seeded(m, n, h, seed.x, cert);
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);
  phi.write(os);
  os.close();

  Record rec("gen");
  add_prime_fields(rec, cert);
  if (!deterministic) rec.add("x", to_hex(seed.x));
  rec.add("rows", m).add("cols", n).add("out", out_path);
  out.emit(rec);
  return 0;
}

// -------------------------------------------------------------- verify ---

int cmd_verify(const Output& out, const std::string& matrix_path, const std::string& checks_csv,
               std::uint64_t k, std::uint64_t support_budget, std::uint64_t pair_budget,
               bool sampled, std::uint64_t samples, std::uint64_t rng_seed, int threads) {
  std::vector<std::string> checks;
  {
    std::stringstream ss(checks_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      if (item.empty()) continue;
      if (item != "rip" && item != "fro" && item != "coherence")
        throw CLI::ValidationError("unknown check '" + item +
                                   "'; valid checks: rip, fro, coherence");
      checks.push_back(item);
    }
  }
  if (checks.empty()) throw CLI::ValidationError("--checks: empty list");

  Record cfg = config_record("verify");
  cfg.add("matrix", matrix_path).add("checks", checks_csv).add("k", k);
  cfg.add("support_budget", support_budget).add("pair_budget", pair_budget);
  cfg.add("mode", sampled ? "sampled" : "exhaustive");
  if (sampled) cfg.add("samples", samples).add("rng_seed", rng_seed).add("rng_algo", kRngAlgoId);
  out.emit(cfg);

  const SignMatrix phi = load_matrix(matrix_path);
  int status = 0;
  for (const std::string& check : checks) {
    if (check == "rip") {
      if (k < 1) throw CLI::ValidationError("rip check needs --k >= 1");
      RipOptions opts;
      opts.support_budget = support_budget;
      opts.threads = threads;
      RipReport rip = sampled ? rip_constant_sampled(phi, k, samples, rng_seed, opts)
                              : rip_constant(phi, k, opts);
      Record rec("rip");
      rec.add("k", rip.k_checked)
          .add("mode", rip.mode == RipReport::Mode::exhaustive ? "exhaustive" : "sampled");
      if (rip.delta_exact) rec.add("delta_exact", *rip.delta_exact);
      if (rip.delta_lower_bound) rec.add("delta_lower_bound", *rip.delta_lower_bound);
      rec.add("worst_support", join_indices(rip.worst_support));
      if (rip.mode == RipReport::Mode::sampled)
        rec.add("samples", rip.n_samples).add("rng_seed", rip.rng_seed);
      out.emit(rec);
    } else if (check == "fro") {
      if (k < 1) throw CLI::ValidationError("fro check needs --k >= 1");
      FroReport fro = fro_constant(phi, k, pair_budget);
      Record rec("fro");
      rec.add("k", fro.k_checked)
          .add("theta", fro.theta_emp)
          .add("delta_via_conversion", fro.delta_via_conversion)
          .add("worst_i", join_indices(fro.worst_i))
          .add("worst_j", join_indices(fro.worst_j));
      out.emit(rec);
    } else {
      CoherenceResult coh = coherence(phi);
      const bool pass = coh.mu >= coh.welch_floor - 1e-12;
      Record rec("coherence");
      rec.add("mu", coh.mu)
          .add("welch_floor", coh.welch_floor)
          .add("worst_pair", join_indices({coh.worst_a, coh.worst_b}))
          .add("pass", pass);
      out.emit(rec);
      if (!pass) status = 1;  // Welch bound is unconditional; violation is hard
    }
  }
  return status;
}

// ---------------------------------------------------------------- bias ---

int cmd_bias(const Output& out, const std::string& p_dec, unsigned h,
             const std::string& index_csv, bool sampled, std::uint64_t samples,
             std::uint64_t rng_seed, std::optional<std::uint64_t> chain_cols, unsigned h_budget) {
  const BigNat p = parse_bignat_dec(p_dec, "--p");
  const std::vector<std::uint64_t> index_set = parse_u64_list(index_csv, "--index-set");

  Record cfg = config_record("bias");
  cfg.add("p", p_dec).add("h", static_cast<std::uint64_t>(h)).add("index_set", index_csv);
  cfg.add("mode", sampled ? "sampled" : "exact");
  if (sampled) cfg.add("samples", samples).add("rng_seed", rng_seed).add("rng_algo", kRngAlgoId);
  if (chain_cols) cfg.add("chain_cols", *chain_cols);
  if (!sampled) cfg.add("h_budget", static_cast<std::uint64_t>(h_budget));
  out.emit(cfg);

  const BiasReport rep = sampled ? bias_sampled(p, h, index_set, samples, rng_seed, chain_cols)
                                 : bias_exact(p, h, index_set, chain_cols, h_budget);
  const bool soft = p < kCharsumSoftP0;
  Record rec("bias");
  if (rep.exact_numerator) rec.add("numerator", *rep.exact_numerator);
  if (rep.exact_bias) rec.add("bias", *rep.exact_bias);
  if (rep.sampled_bias) rec.add("bias_estimate", *rep.sampled_bias);
  if (rep.std_error) rec.add("std_error", *rep.std_error);
  rec.add("bound", rep.bias_bound).add("bound_holds", rep.bias_bound_holds);
  if (rep.chain_bound) rec.add("chain_bound", *rep.chain_bound);
  if (rep.chain_holds) rec.add("chain_holds", *rep.chain_holds);
  rec.add("soft", soft);
  out.emit(rec);
  // The character-sum bound is asymptotic; below the cutoff a violation is
  // informational only. Sampled estimates never gate the exit status.
  return (!rep.bias_bound_holds && !soft && !sampled) ? 1 : 0;
}

// ------------------------------------------------------------- charsum ---

int cmd_charsum(const Output& out, const std::string& p_dec, const std::string& offsets_csv,
                std::uint64_t t, std::uint64_t window_budget) {
  const BigNat p = parse_bignat_dec(p_dec, "--p");
  const std::vector<std::uint64_t> offsets = parse_u64_list(offsets_csv, "--offsets");

  Record cfg = config_record("charsum");
  cfg.add("p", p_dec).add("offsets", offsets_csv).add("t", t).add("window_budget", window_budget);
  out.emit(cfg);

  const CharSumCheck check = charsum_check(p, offsets, t, window_budget);
  Record rec("charsum");
  rec.add("sum", check.sum_value)
      .add("bound", check.bound_value)
      .add("pass", check.pass)
      .add("soft", check.soft);
  out.emit(rec);
  return (!check.pass && !check.soft) ? 1 : 0;
}

// ------------------------------------------------------ scan-conjecture ---

int cmd_scan(const Output& out, std::uint64_t m, std::uint64_t n, std::uint64_t k,
             const std::string& prime_lo, const std::string& prime_hi,
             std::optional<std::size_t> prime_count, double target_delta,
             const std::string& baseline_csv, std::uint64_t support_budget, int threads) {
  ScanOptions opts;
  opts.target_delta = target_delta;
  opts.support_budget = support_budget;
  opts.threads = threads;
  if (!baseline_csv.empty()) opts.baseline_seeds = parse_u64_list(baseline_csv, "--baseline-seeds");

  const BigNat lo =
      prime_lo == "auto" ? BigNat(m) * BigNat(n) + 1 : parse_bignat_dec(prime_lo, "--prime-lo");
  std::optional<BigNat> hi;
  if (!prime_hi.empty()) hi = parse_bignat_dec(prime_hi, "--prime-hi");

  Record cfg = config_record("scan-conjecture");
  cfg.add("m", m).add("n", n).add("k", k).add("prime_lo", prime_lo);
  if (hi) cfg.add("prime_hi", prime_hi);
  if (prime_count) cfg.add("prime_count", static_cast<std::uint64_t>(*prime_count));
  cfg.add("target_delta", target_delta);
  if (!baseline_csv.empty()) cfg.add("baseline_seeds", baseline_csv).add("rng_algo", kRngAlgoId);
  cfg.add("support_budget", support_budget);
  out.emit(cfg);

  const ScanReport rep = conjecture_scan(m, n, k, lo, hi, prime_count, opts);
  for (const auto& row : rep.rows) {
    Record rec("scan-row");
    rec.add("p", dec(row.p)).add("k2", rep.k2).add("delta", row.delta);
    rec.add("meets_target", row.delta <= rep.target_delta);
    out.emit(rec);
  }
  for (const auto& [seed, delta] : rep.baseline) {
    Record rec("scan-baseline");
    rec.add("rng_seed", seed).add("k2", rep.k2).add("delta", delta);
    rec.add("meets_target", delta <= rep.target_delta);
    out.emit(rec);
  }
  Record summary("scan-summary");
  summary.add("primes", static_cast<std::uint64_t>(rep.rows.size()))
      .add("fraction_meeting", rep.fraction_meeting)
      .add("target_delta", rep.target_delta);
  out.emit(summary);
  return 0;  // descriptive: the conjecture is open, no pass threshold
}

// --------------------------------------------------------- code-convert ---

int cmd_code_convert(const Output& out, const std::string& in_path, const std::string& direction,
                     double eps, const std::string& out_path) {
  Record cfg = config_record("code-convert");
  cfg.add("in", in_path).add("direction", direction);
  if (direction == "code-to-set") cfg.add("eps", eps);
  cfg.add("out", out_path);
  out.emit(cfg);

  std::ifstream in(in_path);
  if (!in) throw std::runtime_error("cannot open input file: " + in_path);
  std::ofstream os(out_path);
  if (!os) throw std::runtime_error("cannot open output file: " + out_path);

  if (direction == "code-to-set") {
    const BinaryCode code = read_code(in);
    const CertifiedSet cert = code_to_biased(code, eps);
    write_biased_set(os, cert.set);
    Record rec("code-to-set");
    rec.add("n", static_cast<std::uint64_t>(code.n))
        .add("q", static_cast<std::uint64_t>(code.q()))
        .add("eps", cert.eps)
        .add("exact_bias", cert.exact.bias)
        .add("worst_index_set", join_indices(cert.exact.index_set))
        .add("out", out_path);
    out.emit(rec);
    return 0;
  }

  const BiasedSet set = read_biased_set(in);
  const auto converted = biased_to_code(set);
  if (const auto* degen = std::get_if<DegenerateCode>(&converted)) {
    Record rec("set-to-code");
    rec.add("degenerate", true)
        .add("correlated_index_set", join_indices(degen->index_set))
        .add("note", "coordinate product identically +1; rows dependent");
    out.emit(rec);
    return 1;  // part-(b) precondition violated
  }
  const BinaryCode& code = std::get<BinaryCode>(converted);
  write_code(os, code);
  const BiasWitness bias = exact_bias(set);
  Record rec("set-to-code");
  rec.add("degenerate", false)
      .add("n", static_cast<std::uint64_t>(code.n))
      .add("q", static_cast<std::uint64_t>(code.q()))
      .add("exact_bias", bias.bias)
      .add("out", out_path);
  out.emit(rec);
  return 0;
}

// ------------------------------------------------------------- recover ---

int cmd_recover(const Output& out, const std::string& matrix_path, const std::string& y_csv,
                std::uint64_t k, double noise_tol) {
  Record cfg = config_record("recover");
  cfg.add("matrix", matrix_path).add("k", k).add("noise_tol", noise_tol);
  out.emit(cfg);

  const SignMatrix phi = load_matrix(matrix_path);
  std::vector<double> y;
  {
    std::stringstream ss(y_csv);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        y.push_back(std::stod(item));
      } catch (const std::exception&) {
        throw CLI::ValidationError("--y: bad entry '" + item + "'");
      }
    }
  }

  const OmpResult res = omp_recover(phi, y, k, noise_tol);
  Record rec("recover");
  rec.add("support", join_indices(res.signal.support));
  std::ostringstream vals;
  for (std::size_t i = 0; i < res.signal.values.size(); ++i) {
    if (i) vals << ',';
    vals << format_double(res.signal.values[i]);
  }
  rec.add("values", vals.str());
  rec.add("iterations", static_cast<std::uint64_t>(res.residual_norms.size()));
  rec.add("final_residual", res.final_residual).add("tol_reached", res.tol_reached);
  rec.add("failed", res.failed);
  if (res.failed) rec.add("failure_reason", res.failure_reason);
  out.emit(rec);
  return res.failed ? 1 : 0;
}

// --------------------------------------------------------------- sweep ---

int cmd_sweep(const Output& out, const std::string& ensemble_name, std::uint64_t m, std::uint64_t n,
              const std::string& k_range_text, std::uint64_t trials, std::uint64_t rng_seed,
              const std::string& prime, unsigned h, const std::string& out_path, int threads) {
  SweepEnsemble ens;
  if (ensemble_name == "legendre-deterministic")
    ens.kind = SweepEnsemble::Kind::legendre_deterministic;
  else if (ensemble_name == "legendre-seeded")
    ens.kind = SweepEnsemble::Kind::legendre_seeded;
  else if (ensemble_name == "bernoulli")
    ens.kind = SweepEnsemble::Kind::bernoulli;
  else
    throw CLI::ValidationError(
        "--ensemble must be legendre-deterministic, legendre-seeded, or bernoulli");
  if (prime != "auto") ens.p = parse_bignat_dec(prime, "--prime");
  ens.h = h;

  Record cfg = config_record("sweep");
  cfg.add("ensemble", ensemble_name).add("m", m).add("n", n).add("k_range", k_range_text);
  cfg.add("trials", trials).add("rng_seed", rng_seed).add("rng_algo", kRngAlgoId);
  cfg.add("prime_flag", prime);
  if (ens.kind == SweepEnsemble::Kind::legendre_seeded)
    cfg.add("h", static_cast<std::uint64_t>(h));
  if (!out_path.empty()) cfg.add("out", out_path);
  out.emit(cfg);

  const std::vector<std::uint64_t> k_range = parse_k_range(k_range_text);
  const std::vector<SweepRow> rows = phase_sweep(ens, m, n, k_range, trials, rng_seed, threads);
  if (out_path.empty()) {
    write_sweep_csv(std::cout, rows);
  } else {
    std::ofstream os(out_path);
    if (!os) throw std::runtime_error("cannot open output file: " + out_path);
    write_sweep_csv(os, rows);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Legendre-symbol restricted-isometry matrices: planning, construction, "
               "and exact verification"};
  app.set_help_flag("--help", "print usage");  // long-form flags only
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  Output out;
  app.add_flag("--json", out.json, "emit records as JSON lines instead of key=value");
  int threads = 1;
  app.add_option("--threads", threads, "worker threads (never changes output bytes)")
      ->check(CLI::Range(1, 256));

  // plan
  auto* plan = app.add_subcommand("plan", "plan (M, H, eps, p_min) from N, K, delta");
  plan->set_help_flag("--help", "print usage");
  std::uint64_t plan_n = 0, plan_k = 0;
  double plan_delta = 0, plan_c1 = 0;
  std::optional<std::uint64_t> plan_m_ov, plan_h_ov;
  plan->add_option("--n", plan_n, "signal dimension N")->required();
  plan->add_option("--k", plan_k, "sparsity K")->required();
  plan->add_option("--delta", plan_delta, "target RIP constant in (0, 1]")->required();
  plan->add_option("--m-override", plan_m_ov, "desk-scale row count override");
  plan->add_option("--h-override", plan_h_ov, "desk-scale entropy override");
  plan->add_option("--c1", plan_c1, "leading constant (default 5760000)");

  // gen
  auto* gen = app.add_subcommand("gen", "generate a matrix file (RIPM v1)");
  gen->set_help_flag("--help", "print usage");
  bool gen_det = false;
  std::uint64_t gen_m = 0, gen_n = 0;
  unsigned gen_h = 0;
  std::string gen_x, gen_prime = "auto", gen_out;
  std::optional<std::uint64_t> gen_seed_rng;
  gen->add_flag("--deterministic", gen_det, "conjectured variant (no seed)");
  gen->add_option("--m", gen_m, "rows M")->required();
  gen->add_option("--n", gen_n, "columns N")->required();
  gen->add_option("--h", gen_h, "entropy bits H (seeded mode)");
  gen->add_option("--x", gen_x, "seed X in lowercase hex, 0 <= X < 2^H");
  gen->add_option("--seed-rng", gen_seed_rng, "draw X from the counter rng with this seed");
  gen->add_option("--prime", gen_prime, "prime p (decimal) or 'auto' for the least admissible");
  gen->add_option("--out", gen_out, "output matrix path")->required();

  // verify
  auto* verify = app.add_subcommand("verify", "run checks against a matrix file");
  verify->set_help_flag("--help", "print usage");
  std::string ver_matrix, ver_checks;
  std::uint64_t ver_k = 0, ver_support_budget = kDefaultSupportBudget;
  std::uint64_t ver_pair_budget = kDefaultSupportBudget, ver_samples = 1000, ver_seed = 0;
  bool ver_sampled = false;
  verify->add_option("--matrix", ver_matrix, "RIPM v1 file")->required();
  verify->add_option("--checks", ver_checks, "comma list from: rip, fro, coherence")->required();
  verify->add_option("--k", ver_k, "sparsity K for rip/fro");
  verify->add_option("--support-budget", ver_support_budget, "max supports enumerated");
  verify->add_option("--pair-budget", ver_pair_budget, "max disjoint pairs enumerated");
  verify->add_flag("--sampled", ver_sampled, "sampled RIP lower bound instead of exhaustive");
  verify->add_option("--samples", ver_samples, "sample count for --sampled");
  verify->add_option("--rng-seed", ver_seed, "seed for --sampled");

  // bias
  auto* bias = app.add_subcommand("bias", "bias of the seeded symbol stream on an index set");
  bias->set_help_flag("--help", "print usage");
  std::string bias_p, bias_index;
  unsigned bias_h = 0, bias_h_budget = kDefaultBiasBudgetBits;
  bool bias_sampled_flag = false;
  std::uint64_t bias_samples = 100000, bias_seed = 0;
  std::optional<std::uint64_t> bias_chain_cols;
  bias->add_option("--p", bias_p, "prime p (decimal)")->required();
  bias->add_option("--h", bias_h, "entropy bits H")->required();
  bias->add_option("--index-set", bias_index, "comma list of offsets, 1-based")->required();
  bias->add_flag("--sampled", bias_sampled_flag, "Monte Carlo instead of 2^H enumeration");
  bias->add_option("--samples", bias_samples, "sample count for --sampled");
  bias->add_option("--rng-seed", bias_seed, "seed for --sampled");
  bias->add_option("--chain-cols", bias_chain_cols, "N for the 4N^2 2^(-H/3) chain bound");
  bias->add_option("--h-budget", bias_h_budget, "largest H enumerated exactly");

  // charsum
  auto* charsum = app.add_subcommand("charsum", "truncated character-sum bound check");
  charsum->set_help_flag("--help", "print usage");
  std::string cs_p, cs_offsets;
  std::uint64_t cs_t = 0, cs_window = kDefaultCharsumWindowBudget;
  charsum->add_option("--p", cs_p, "prime p (decimal)")->required();
  charsum->add_option("--offsets", cs_offsets, "comma list 0 < d_1 < ... < d_k < p")->required();
  charsum->add_option("--t", cs_t, "truncation length, 1 <= t <= p - d_k")->required();
  charsum->add_option("--window-budget", cs_window, "max symbols streamed");

  // scan-conjecture
  auto* scan = app.add_subcommand("scan-conjecture",
                                  "delta_2K of the deterministic variant across primes > MN");
  scan->set_help_flag("--help", "print usage");
  std::uint64_t scan_m = 0, scan_n = 0, scan_k = 0, scan_support_budget = kDefaultSupportBudget;
  std::string scan_lo = "auto", scan_hi, scan_baseline;
  std::optional<std::size_t> scan_count;
  double scan_target = 0.5;
  scan->add_option("--m", scan_m, "rows M")->required();
  scan->add_option("--n", scan_n, "columns N")->required();
  scan->add_option("--k", scan_k, "sparsity K (delta checked at 2K)")->required();
  scan->add_option("--prime-lo", scan_lo, "first candidate (decimal) or 'auto' = MN+1");
  scan->add_option("--prime-hi", scan_hi, "inclusive upper bound (decimal)");
  scan->add_option("--prime-count", scan_count, "number of primes to take");
  scan->add_option("--target-delta", scan_target, "threshold for the summary fraction");
  scan->add_option("--baseline-seeds", scan_baseline, "comma list of Bernoulli baseline seeds");
  scan->add_option("--support-budget", scan_support_budget, "max supports enumerated");

  // code-convert
  auto* convert = app.add_subcommand("code-convert",
                                     "generator matrix <-> sign-vector set (CODE/SET v1)");
  convert->set_help_flag("--help", "print usage");
  std::string cc_in, cc_dir, cc_out;
  double cc_eps = 0;
  convert->add_option("--in", cc_in, "input file")->required();
  convert->add_option("--direction", cc_dir, "code-to-set or set-to-code")
      ->required()
      ->check(CLI::IsMember({"code-to-set", "set-to-code"}));
  convert->add_option("--eps", cc_eps, "weight-window eps to certify (code-to-set)");
  convert->add_option("--out", cc_out, "output file")->required();

  // recover
  auto* recover = app.add_subcommand("recover", "orthogonal matching pursuit on y = phi x");
  recover->set_help_flag("--help", "print usage");
  std::string rec_matrix, rec_y;
  std::uint64_t rec_k = 0;
  double rec_tol = 1e-9;
  recover->add_option("--matrix", rec_matrix, "RIPM v1 file")->required();
  recover->add_option("--y", rec_y, "comma list of M measurements")->required();
  recover->add_option("--k", rec_k, "max support size, K <= M")->required();
  recover->add_option("--noise-tol", rec_tol, "early-stop residual norm");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "recovery success rates across sparsity levels");
  sweep->set_help_flag("--help", "print usage");
  std::string sw_ensemble, sw_krange, sw_prime = "auto", sw_out;
  std::uint64_t sw_m = 0, sw_n = 0, sw_trials = 100, sw_seed = 0;
  unsigned sw_h = 0;
  sweep->add_option("--ensemble", sw_ensemble,
                    "legendre-deterministic, legendre-seeded, or bernoulli")
      ->required();
  sweep->add_option("--m", sw_m, "rows M")->required();
  sweep->add_option("--n", sw_n, "columns N")->required();
  sweep->add_option("--k-range", sw_krange, "'lo:hi' or comma list")->required();
  sweep->add_option("--trials", sw_trials, "trials per K");
  sweep->add_option("--rng-seed", sw_seed, "master seed");
  sweep->add_option("--prime", sw_prime, "prime (decimal) or 'auto'");
  sweep->add_option("--h", sw_h, "entropy bits (legendre-seeded)");
  sweep->add_option("--out", sw_out, "CSV path (default stdout)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*plan) return cmd_plan(out, plan_n, plan_k, plan_delta, plan_m_ov, plan_h_ov, plan_c1);
    if (*gen)
      return cmd_gen(out, gen_det, gen_m, gen_n, gen_h, gen_x, gen_seed_rng, gen_prime, gen_out);
    if (*verify)
      return cmd_verify(out, ver_matrix, ver_checks, ver_k, ver_support_budget, ver_pair_budget,
                        ver_sampled, ver_samples, ver_seed, threads);
    if (*bias)
      return cmd_bias(out, bias_p, bias_h, bias_index, bias_sampled_flag, bias_samples, bias_seed,
                      bias_chain_cols, bias_h_budget);
    if (*charsum) return cmd_charsum(out, cs_p, cs_offsets, cs_t, cs_window);
    if (*scan)
      return cmd_scan(out, scan_m, scan_n, scan_k, scan_lo, scan_hi, scan_count, scan_target,
                      scan_baseline, scan_support_budget, threads);
    if (*convert) return cmd_code_convert(out, cc_in, cc_dir, cc_eps, cc_out);
    if (*recover) return cmd_recover(out, rec_matrix, rec_y, rec_k, rec_tol);
    if (*sweep)
      return cmd_sweep(out, sw_ensemble, sw_m, sw_n, sw_krange, sw_trials, sw_seed, sw_prime, sw_h,
                       sw_out, threads);
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const BudgetError& e) {
    std::cerr << "budget exceeded: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

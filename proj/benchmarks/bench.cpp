// Microbenchmarks for the hot paths: symbol evaluation in each engine mode,
// matrix construction, exhaustive RIP enumeration, the bias transform, and
// greedy recovery.
#include <benchmark/benchmark.h>

#include <cstdint>
#include <vector>

#include "legrip/codes.hpp"
#include "legrip/construct.hpp"
#include "legrip/ntheory.hpp"
#include "legrip/recovery.hpp"
#include "legrip/rng.hpp"
#include "legrip/verify.hpp"

using namespace legrip;

namespace {

void BM_SymbolStreamTable(benchmark::State& state) {
  SymbolEngine chi(BigNat(10007));  // dense-table mode
  std::vector<std::int8_t> out(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    chi.stream(BigNat(1), out.size(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SymbolStreamTable)->Arg(1 << 10)->Arg(1 << 14);

void BM_SymbolStreamJacobi(benchmark::State& state) {
  SymbolEngine chi(next_prime_geq(pow2(40)).p);  // word-sized Jacobi mode
  std::vector<std::int8_t> out(static_cast<std::size_t>(state.range(0)));
  for (auto _ : state) {
    chi.stream(BigNat(1), out.size(), out.data());
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SymbolStreamJacobi)->Arg(1 << 10)->Arg(1 << 14);

void BM_SymbolBignum(benchmark::State& state) {
  SymbolEngine chi(next_prime_geq(pow2(80)).p);  // big-integer Jacobi mode
  const BigNat base = pow2(70);
  std::uint64_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(chi(base + (i++ & 1023)));
  state.SetItemsProcessed(state.iterations());
}
BENCHMARK(BM_SymbolBignum);

void BM_BuildDeterministic(benchmark::State& state) {
  const std::uint64_t m = static_cast<std::uint64_t>(state.range(0));
  const std::uint64_t n = 4 * m;
  const PrimeCert cert = next_prime_geq(BigNat(m) * n + 1);
  for (auto _ : state) {
    SignMatrix phi = build_legendre_deterministic(m, n, cert);
    benchmark::DoNotOptimize(phi.sign(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * m * n);
}
BENCHMARK(BM_BuildDeterministic)->Arg(16)->Arg(64);

void BM_BuildSeeded(benchmark::State& state) {
  const std::uint64_t m = 64, n = 256;
  const unsigned h = 20;
  const PrimeCert cert = next_prime_geq(pow2(h) + BigNat(m) * n);
  const Seed seed = generate_seed(h, 7);
  for (auto _ : state) {
    SignMatrix phi = build_legendre_seeded(m, n, h, seed.x, cert);
    benchmark::DoNotOptimize(phi.sign(0, 0));
  }
  state.SetItemsProcessed(state.iterations() * m * n);
}
BENCHMARK(BM_BuildSeeded);

void BM_RipExhaustive(benchmark::State& state) {
  const SignMatrix phi = build_bernoulli_baseline(12, 24, 5);
  const std::uint64_t k = static_cast<std::uint64_t>(state.range(0));
  for (auto _ : state) {
    RipReport rep = rip_constant(phi, k);
    benchmark::DoNotOptimize(rep.delta());
  }
  state.SetItemsProcessed(state.iterations() * support_count_capped(24, k, ~std::uint64_t{0} >> 1));
}
BENCHMARK(BM_RipExhaustive)->Arg(2)->Arg(3);

void BM_CoherenceGram(benchmark::State& state) {
  const SignMatrix phi = build_bernoulli_baseline(64, 256, 5);
  for (auto _ : state) benchmark::DoNotOptimize(coherence(phi).mu);
}
BENCHMARK(BM_CoherenceGram);

void BM_BiasTransform(benchmark::State& state) {
  CounterRng rng(3);
  BiasedSet set;
  set.n = static_cast<unsigned>(state.range(0));
  for (int j = 0; j < 48; ++j)
    set.vectors.push_back(static_cast<std::uint32_t>(rng.next_below(std::uint64_t{1} << set.n)));
  for (auto _ : state) benchmark::DoNotOptimize(exact_bias(set).bias);
  state.SetItemsProcessed(state.iterations() * (std::int64_t{1} << set.n));
}
BENCHMARK(BM_BiasTransform)->Arg(12)->Arg(16);

void BM_OmpRecover(benchmark::State& state) {
  const SignMatrix phi = build_bernoulli_baseline(64, 128, 9);
  std::vector<double> y(64, 0.0);
  for (std::size_t m = 0; m < 64; ++m)
    y[m] = phi.scale() * (phi.sign(m, 3) - phi.sign(m, 40) + 2.0 * phi.sign(m, 100));
  for (auto _ : state) {
    OmpResult res = omp_recover(phi, y, 3, 1e-9);
    benchmark::DoNotOptimize(res.final_residual);
  }
}
BENCHMARK(BM_OmpRecover);

}  // namespace

BENCHMARK_MAIN();

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <vector>

#include "legrip/ntheory.hpp"
#include "legrip/verify.hpp"

using namespace legrip;

namespace {

// Plain table-lookup oracle for sum_{x=0}^{t-1} prod_i chi(x + d_i).
std::int64_t charsum_oracle(std::uint64_t p, const std::vector<std::uint64_t>& offsets,
                            std::uint64_t t) {
  const std::vector<std::int8_t> table = legendre_table(p);
  std::int64_t sum = 0;
  for (std::uint64_t x = 0; x < t; ++x) {
    int prod = 1;
    for (std::uint64_t d : offsets) prod *= table[(x + d) % p];
    sum += prod;
  }
  return sum;
}

}  // namespace

TEST_CASE("truncated character sums match the table oracle") {
  struct Case {
    std::uint64_t p;
    std::vector<std::uint64_t> offsets;
    std::uint64_t t;
  };
  for (const Case& c : {Case{101, {1, 3, 7}, 80}, Case{23, {1, 2}, 21}, Case{23, {5}, 18},
                        Case{1009, {2, 4, 8, 16}, 900}, Case{9973, {1, 100}, 5000}}) {
    CharSumCheck chk = charsum_check(BigNat(c.p), c.offsets, c.t);
    CHECK(chk.sum_value == charsum_oracle(c.p, c.offsets, c.t));
    const double pd = double(c.p);
    CHECK(chk.bound_value ==
          doctest::Approx(9.0 * double(c.offsets.size()) * std::sqrt(pd) * std::log(pd)));
    CHECK(chk.pass == (std::abs(double(chk.sum_value)) <= chk.bound_value));
    CHECK(chk.soft);  // all of these are below the hard cutoff
    CHECK(chk.t == c.t);
    CHECK(chk.p == c.p);
  }
}

TEST_CASE("the soft flag clears at the hard-regime cutoff") {
  CHECK(charsum_check(BigNat(9973), {1}, 100).soft);
  CHECK_FALSE(charsum_check(BigNat(10007), {1}, 100).soft);
  CHECK(charsum_check(BigNat(10007), {1, 2}, 5000).pass);  // bound far above any |sum| here
}

TEST_CASE("full-period single-offset sum vanishes") {
  // sum of chi over one full period is 0; t = p - 1 covers 1..p-1
  CharSumCheck chk = charsum_check(BigNat(23), {1}, 22);
  CHECK(chk.sum_value == 0);
  CHECK(chk.pass);
}

TEST_CASE("charsum input validation") {
  CHECK_THROWS_AS(charsum_check(BigNat(23), {}, 5), std::invalid_argument);
  CHECK_THROWS_AS(charsum_check(BigNat(23), {3, 3}, 5), std::invalid_argument);
  CHECK_THROWS_AS(charsum_check(BigNat(23), {5, 2}, 5), std::invalid_argument);
  CHECK_THROWS_AS(charsum_check(BigNat(23), {0, 2}, 5), std::invalid_argument);
  CHECK_THROWS_AS(charsum_check(BigNat(23), {1, 23}, 5), std::invalid_argument);
  CHECK_THROWS_AS(charsum_check(BigNat(23), {1, 2}, 0), std::invalid_argument);
  CHECK_THROWS_AS(charsum_check(BigNat(23), {1, 2}, 22), std::invalid_argument);  // t > p - d_k
  CHECK_NOTHROW(charsum_check(BigNat(23), {1, 2}, 21));
}

TEST_CASE("charsum window budget refusal") {
  PrimeCert cert = next_prime_geq(pow2(40));
  CHECK_THROWS_AS(
      charsum_check(cert.p, {1, std::uint64_t{1} << 30}, 10), BudgetError);
  // an explicit budget makes the same call pass
  CHECK_NOTHROW(charsum_check(cert.p, {1, 1 << 20}, 10, std::uint64_t{1} << 21));
}

TEST_CASE("exact bias matches the table oracle and the worked 16-seed case") {
  // p=23, H=4, I={1,2}: enumerate all 16 seeds
  BiasReport r = bias_exact(BigNat(23), 4, {1, 2});
  std::int64_t want = 0;
  const std::vector<std::int8_t> table = legendre_table(23);
  for (std::uint64_t x = 0; x < 16; ++x) want += table[(x + 1) % 23] * table[(x + 2) % 23];
  CHECK(*r.exact_numerator == want);
  CHECK(*r.exact_numerator == -2);
  CHECK(*r.exact_bias == -0.125);
  CHECK_FALSE(r.sampled_bias.has_value());

  BiasReport s = bias_exact(BigNat(1009), 8, {1, 5});
  std::int64_t acc = 0;
  const std::vector<std::int8_t> t9 = legendre_table(1009);
  for (std::uint64_t x = 0; x < 256; ++x) acc += t9[(x + 1) % 1009] * t9[(x + 5) % 1009];
  CHECK(*s.exact_numerator == acc);
  CHECK(*s.exact_bias == double(acc) / 256.0);
}

TEST_CASE("bias bounds are attached consistently") {
  BiasReport r = bias_exact(BigNat(1009), 8, {1, 5}, std::uint64_t{3});
  const double pd = 1009.0;
  CHECK(r.bias_bound == doctest::Approx(2.0 * std::sqrt(pd) * std::log(pd) / 256.0));
  CHECK(r.bias_bound_holds == (std::abs(*r.exact_bias) <= r.bias_bound));
  REQUIRE(r.chain_bound.has_value());
  CHECK(*r.chain_bound == doctest::Approx(4.0 * 9.0 * std::exp2(-8.0 / 3.0)));
  CHECK(*r.chain_holds == (std::abs(*r.exact_bias) <= *r.chain_bound));
  CHECK_FALSE(bias_exact(BigNat(1009), 8, {1, 5}).chain_bound.has_value());
}

TEST_CASE("bias input validation") {
  CHECK_THROWS_AS(bias_exact(BigNat(23), 0, {1}), std::invalid_argument);
  CHECK_THROWS_AS(bias_exact(BigNat(23), 4, {}), std::invalid_argument);
  CHECK_THROWS_AS(bias_exact(BigNat(23), 4, {2, 2}), std::invalid_argument);
  CHECK_THROWS_AS(bias_exact(BigNat(23), 4, {0, 1}), std::invalid_argument);
  // max(I) + 2^H - 1 >= p: 8 + 15 = 23
  CHECK_THROWS_AS(bias_exact(BigNat(23), 4, {1, 8}), std::invalid_argument);
  CHECK_NOTHROW(bias_exact(BigNat(23), 4, {1, 7}));
}

TEST_CASE("exact-bias budget refusals") {
  PrimeCert big = next_prime_geq(pow2(26));
  try {
    bias_exact(big.p, 25, {1});
    FAIL("expected a budget refusal");
  } catch (const BudgetError& e) {
    CHECK(std::string(e.what()).find("bias_sampled") != std::string::npos);
  }
  // h within the seed budget but the symbol window overflows
  PrimeCert wide = next_prime_geq(BigNat(160'000'000));
  CHECK_THROWS_AS(bias_exact(wide.p, 24, {1, 140'000'000}, std::nullopt, 24), BudgetError);
}

TEST_CASE("sampled bias reproduces and tracks the exact value") {
  BiasReport a = bias_sampled(BigNat(23), 4, {1, 2}, 2000, 5);
  BiasReport b = bias_sampled(BigNat(23), 4, {1, 2}, 2000, 5);
  CHECK(*a.sampled_bias == *b.sampled_bias);
  CHECK(a.n_samples == 2000);
  CHECK(a.rng_seed == 5);
  CHECK(*a.std_error >= 0.0);
  CHECK(std::abs(*a.sampled_bias - (-0.125)) < 0.1);
  CHECK(bias_sampled(BigNat(23), 4, {1, 2}, 2000, 6).sampled_bias != a.sampled_bias);
  CHECK_THROWS_AS(bias_sampled(BigNat(23), 4, {1, 2}, 0, 5), std::invalid_argument);
}

TEST_CASE("sampled bias handles seed widths beyond 64 bits") {
  PrimeCert p = next_prime_geq(pow2(70) + 100);
  BiasReport a = bias_sampled(p.p, 70, {1, 2}, 40, 9);
  BiasReport b = bias_sampled(p.p, 70, {1, 2}, 40, 9);
  CHECK(*a.sampled_bias == *b.sampled_bias);
  CHECK(std::abs(*a.sampled_bias) <= 1.0);
  CHECK(a.bias_bound > 0.0);
  CHECK(a.bias_bound_holds == (std::abs(*a.sampled_bias) <= a.bias_bound));
}

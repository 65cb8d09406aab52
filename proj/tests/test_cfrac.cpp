#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "critlab/cfrac.hpp"
#include "critlab/errors.hpp"

using namespace critlab;

namespace {

// Exact Euclid expansion of p/q in (0,1) with the 1/(r0 + 1/(r1 + ...)) convention.
std::vector<std::int64_t> euclid(std::int64_t p, std::int64_t q) {
  std::vector<std::int64_t> out;
  while (p != 0) {
    out.push_back(q / p);
    const std::int64_t t = q % p;
    q = p;
    p = t;
  }
  return out;
}

}  // namespace

TEST_CASE("golden convergents are Fibonacci ratios") {
  const auto cf = ContinuedFraction::golden(30);
  const auto c = convergents(cf, 30);
  std::int64_t a = 0, b = 1;  // F_0, F_1
  for (int m = 0; m <= 30; ++m) {
    CHECK(c.q[m] == b);
    CHECK(c.p[m] == a);
    const std::int64_t t = a + b;
    a = b;
    b = t;
  }
  CHECK(real_from_cf(ContinuedFraction::golden(40)) == doctest::Approx((std::sqrt(5.0) - 1) / 2).epsilon(1e-15));
}

TEST_CASE("cf_from_real recovers known expansions") {
  const auto g = cf_from_real((std::sqrt(5.0) - 1) / 2, 20);
  CHECK(g.size() == 20);
  for (std::size_t i = 0; i < g.size(); ++i) CHECK(g[i].value() == 1);
  const auto s = cf_from_real(std::sqrt(2.0) - 1, 15);
  for (std::size_t i = 0; i < s.size(); ++i) CHECK(s[i].value() == 2);
  const auto half = cf_from_real(0.5, 10);
  CHECK(half.exhausted());
  CHECK(half.finite_prefix() == std::vector<std::int64_t>{2});
  const auto r = cf_from_real(0.3, 10);
  CHECK(r.exhausted());
  CHECK(r.finite_prefix() == std::vector<std::int64_t>{3, 3});
  CHECK_THROWS_AS(cf_from_real(0.0, 5), DomainError);
  CHECK_THROWS_AS(cf_from_real(1.5, 5), DomainError);
}

TEST_CASE("random rationals expand exactly") {
  std::mt19937_64 rng(20240611);
  std::uniform_int_distribution<std::int64_t> den(2, 5000);
  for (int trial = 0; trial < 500; ++trial) {
    const std::int64_t q = den(rng);
    std::uniform_int_distribution<std::int64_t> num(1, q - 1);
    std::int64_t p = num(rng);
    const std::int64_t g = std::gcd(p, q);
    const auto expected = euclid(p / g, q / g);
    const auto cf = cf_from_real(static_cast<double>(p) / static_cast<double>(q), 40);
    REQUIRE(cf.finite_prefix() == expected);
    const auto c = convergents(cf, static_cast<int>(expected.size()));
    CHECK(c.p.back() == p / g);
    CHECK(c.q.back() == q / g);
  }
}

TEST_CASE("convergents satisfy the determinant identity") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::int64_t> quot(1, 9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<Quotient> qs;
    for (int i = 0; i < 12; ++i) qs.emplace_back(quot(rng));
    const ContinuedFraction cf(qs, false);
    const auto c = convergents(cf, 12);
    for (int m = 1; m <= 12; ++m) {
      const std::int64_t det = c.p[m] * c.q[m - 1] - c.p[m - 1] * c.q[m];
      CHECK(std::llabs(det) == 1);
    }
    CHECK(static_cast<double>(c.p[12]) / c.q[12] == doctest::Approx(real_from_cf(cf)).epsilon(1e-9));
  }
}

TEST_CASE("terminal symbol handling") {
  const ContinuedFraction cf({3, 3, kInfinity}, true);
  CHECK(cf.ends_in_infinity());
  CHECK(real_from_cf(cf) == doctest::Approx(0.3));
  CHECK(cf.to_string() == "[3,3,inf]");
  CHECK(parse_cf("3,3,inf", 10) == cf);
  CHECK_THROWS_AS(Quotient(0), DomainError);
  CHECK_THROWS_AS(ContinuedFraction({kInfinity, 2}, true), DomainError);
  CHECK(real_from_cf(ContinuedFraction{}) == 0.0);
}

TEST_CASE("gauss shift and boundedness") {
  const auto cf = ContinuedFraction::lead_then_golden(10, 8);
  CHECK(cf[0].value() == 10);
  const auto shifted = gauss_shift(cf);
  CHECK(shifted == ContinuedFraction::golden(7));
  CHECK(is_bounded_type(cf, 10));
  CHECK_FALSE(is_bounded_type(cf, 9));
  CHECK_THROWS_AS(gauss_shift(ContinuedFraction{}), DomainError);
  const auto x = 1.0 / (10.0 + (std::sqrt(5.0) - 1) / 2);
  CHECK(real_from_cf(ContinuedFraction::lead_then_golden(10, 40)) == doctest::Approx(x).epsilon(1e-15));
}

TEST_CASE("convergent overflow names the level") {
  const auto cf = ContinuedFraction::golden(120);
  try {
    convergents(cf, 120);
    FAIL("expected overflow");
  } catch (const OverflowError& e) {
    // F_92 is the largest Fibonacci number below 2^63, q_m = F_{m+1}.
    CHECK(e.level() == 92);
  }
}

TEST_CASE("parsing target notations") {
  CHECK(parse_cf("golden", 8) == ContinuedFraction::golden(8));
  CHECK(parse_cf("10,(1)", 6) == ContinuedFraction::lead_then_golden(10, 6));
  CHECK(parse_cf("(2,1)", 5) == ContinuedFraction({2, 1, 2, 1, 2}, false));
  CHECK(parse_cf("3/10", 10) == ContinuedFraction({3, 3}, true));
  CHECK(parse_cf("3,3", 10) == ContinuedFraction({3, 3}, true));
  CHECK(parse_cf(" 1 , 2 ", 10) == ContinuedFraction({1, 2}, true));
  CHECK(rational_cf(0, 1).empty());
  CHECK(real_from_cf(parse_cf("0.25", 10)) == doctest::Approx(0.25));
  CHECK_THROWS_AS(parse_cf("1,(inf)", 5), DomainError);
  CHECK_THROWS_AS(parse_cf("1,(2),3", 5), DomainError);
  CHECK_THROWS_AS(parse_cf("x", 5), DomainError);
  CHECK_THROWS_AS(parse_cf("5/3", 5), DomainError);
  std::mt19937_64 rng(99);
  for (int i = 0; i < 300; ++i) {
    const std::int64_t q = 2 + static_cast<std::int64_t>(rng() % 5000);
    const std::int64_t p = 1 + static_cast<std::int64_t>(rng() % (q - 1));
    const ContinuedFraction cf = rational_cf(p, q);
    const Convergents c = convergents(cf, static_cast<int>(cf.size()));
    const std::int64_t g = std::gcd(p, q);
    CHECK(c.p.back() == p / g);
    CHECK(c.q.back() == q / g);
  }
}

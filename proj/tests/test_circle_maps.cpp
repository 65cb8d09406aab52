#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "critlab/circle_maps.hpp"
#include "critlab/errors.hpp"
#include "critlab/rotation.hpp"

using namespace critlab;

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double golden_mean() { return (std::sqrt(5.0) - 1.0) / 2.0; }

// Plain long-orbit average, independent of the closest-return machinery.
double long_average(const Lift& F, std::int64_t n) {
  double x = 0.0;
  for (std::int64_t i = 0; i < n; ++i) x = F(x);
  return x / static_cast<double>(n);
}

}  // namespace

TEST_CASE("family lifts are critical at 0 with positive third derivative") {
  for (double c : {0.0, 0.1, 0.25}) {
    const Lift F = Lift::two_harmonic(0.37, c);
    const auto d = validate_lift(F);
    CHECK(d.pass);
    CHECK(std::abs(d.d1_at_0) < 1e-15);
    CHECK(std::abs(d.d2_at_0) < 1e-12);
    CHECK(d.d3_at_0 == doctest::Approx(kTwoPi * kTwoPi * (1 - 3 * c)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(Lift::two_harmonic(0.1, 0.3), ParameterError);
  CHECK_THROWS_AS(Lift::two_harmonic(0.1, -0.01), ParameterError);
}

TEST_CASE("validation rejects broken lifts") {
  CustomLift bad;
  bad.name = "x + 0.2 sin";
  bad.f = [](double x) { return x + 0.2 * std::sin(kTwoPi * x); };
  CHECK_FALSE(validate_lift(Lift::custom(bad)).pass);
  CustomLift nonperiodic;
  nonperiodic.name = "1.01x";
  nonperiodic.f = [](double x) { return 1.01 * x; };
  CHECK_FALSE(validate_lift(Lift::custom(nonperiodic)).pass);
}

TEST_CASE("analytic derivatives agree with difference quotients") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 2.0);
  const Lift F = Lift::two_harmonic(0.2, 0.15);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    const double h = 1e-6;
    CHECK(F.jet(x).d == doctest::Approx((F(x + h) - F(x - h)) / (2 * h)).epsilon(1e-8));
    CHECK(F.jet2(x).dd ==
          doctest::Approx((F.jet(x + h).d - F.jet(x - h).d) / (2 * h)).epsilon(1e-6).scale(1));
    const cplx z(x, 0.1);
    const auto cj = F.cjet(z);
    const cplx fd = (F(z + h) - F(z - h)) / (2 * h);
    CHECK(std::abs(cj.d - fd) < 1e-7);
  }
}

TEST_CASE("extended precision evaluation matches double") {
  const Lift F = Lift::arnold(0.3, Precision::Ext256);
  for (double x : {-0.3, 0.0, 0.125, 0.77}) {
    CHECK(static_cast<double>(F.eval<ext256>(ext256(x))) == doctest::Approx(F(x)).epsilon(1e-15));
    CHECK(static_cast<double>(F.eval<ext128>(ext128(x))) == doctest::Approx(F(x)).epsilon(1e-15));
  }
}

TEST_CASE("rotation of rigid maps") {
  const auto est = rotation_number_real(Lift::rigid(0.3), 1000);
  CHECK(std::abs(est.value - 0.3) <= est.bound);
  CHECK(est.bound == doctest::Approx(1e-3));
}

TEST_CASE("rotation estimate is monotone in theta (property)") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 40; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const auto ra = rotation_number_real(Lift::arnold(a), 4000);
    const auto rb = rotation_number_real(Lift::arnold(b), 4000);
    CHECK(ra.value <= rb.value + ra.bound + rb.bound);
  }
}

TEST_CASE("compare_rotation on rigid rotations") {
  const auto g = ContinuedFraction::golden(30);
  auto below = compare_rotation<double>([](double x) { return x + 0.6; }, g, 0, 0.0, 1000000);
  CHECK(below.side == RotationSide::Below);
  auto above = compare_rotation<double>([](double x) { return x + 0.62; }, g, 0, 0.0, 1000000);
  CHECK(above.side == RotationSide::Above);
  const double phi = golden_mean();
  auto undecided = compare_rotation<double>([&](double x) { return x + phi; }, g, 0, 0.0, 1000);
  CHECK(undecided.side == RotationSide::Undecided);
  CHECK(undecided.certified_bound < 1e-5);
}

TEST_CASE("solve_parameter for the golden mean") {
  const FamilySpec fam{Family::Arnold, 0.0, Precision::Double};
  const auto sol = solve_parameter(fam, ContinuedFraction::golden(60), 1e-12);
  CHECK(sol.rho_bound <= 1e-12);
  // Independent check with the slow averaging estimate.
  CHECK(long_average(Lift::arnold(sol.theta), 2000000) == doctest::Approx(golden_mean()).epsilon(2e-6));
  // Nearby parameters rotate visibly differently.
  CHECK(long_average(Lift::arnold(sol.theta + 1e-3), 200000) > golden_mean());
  CHECK(long_average(Lift::arnold(sol.theta - 1e-3), 200000) < golden_mean());
}

TEST_CASE("solve_parameter for rational targets is superstable") {
  const FamilySpec fam{Family::Arnold, 0.0, Precision::Double};
  const auto half = solve_parameter(fam, ContinuedFraction({2}, true), 1e-12);
  CHECK(half.theta == doctest::Approx(0.5).epsilon(1e-13));
  const auto third = solve_parameter(fam, ContinuedFraction({3}, true), 1e-12);
  const Lift F = Lift::arnold(third.theta);
  CHECK(std::abs(F(F(F(0.0))) - 1.0) < 1e-12);
}

TEST_CASE("solve_parameter in extended precision") {
  const FamilySpec fam{Family::TwoHarmonic, 0.1, Precision::Ext128};
  const auto sol = solve_parameter(fam, ContinuedFraction::golden(60), 1e-9);
  CHECK(sol.rho_bound <= 1e-9);
  const auto dbl = solve_parameter(FamilySpec{Family::TwoHarmonic, 0.1, Precision::Double},
                                   ContinuedFraction::golden(60), 1e-12);
  CHECK(sol.theta == doctest::Approx(dbl.theta).epsilon(1e-8));
}

TEST_CASE("0/1 tongue boundaries") {
  const FamilySpec fam{Family::Arnold, 0.0, Precision::Double};
  const auto right = tongue_boundary(fam, 0, 1, TongueSide::Right, 1e-10);
  CHECK(right.theta == doctest::Approx(1.0 / kTwoPi).epsilon(1e-10));
  CHECK(right.multiplier == doctest::Approx(1.0).epsilon(1e-9));
  const auto left = tongue_boundary(fam, 0, 1, TongueSide::Left, 1e-10);
  CHECK(left.theta == doctest::Approx(1.0 - 1.0 / kTwoPi).epsilon(1e-10));
}

TEST_CASE("1/2 tongue boundaries bracket the superstable parameter") {
  const FamilySpec fam{Family::Arnold, 0.0, Precision::Double};
  const auto l = tongue_boundary(fam, 1, 2, TongueSide::Left, 1e-10);
  const auto r = tongue_boundary(fam, 1, 2, TongueSide::Right, 1e-10);
  CHECK(l.theta < 0.5);
  CHECK(r.theta > 0.5);
  // Symmetry x -> -x, theta -> 1 - theta maps the tongue to itself.
  CHECK(l.theta + r.theta == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(l.residual) < 1e-9);
}

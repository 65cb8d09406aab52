#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "critlab/circle_maps.hpp"
#include "critlab/commuting_pairs.hpp"
#include "critlab/errors.hpp"
#include "critlab/parabolic.hpp"

using namespace critlab;

namespace {

const double kBoundary = 1.0 / (2.0 * std::numbers::pi);
const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

RealMap arnold_map(double theta) { return RealMap::lift_iterate(LiftIterate{Lift::arnold(theta), 1, 0}); }

RealMap mobius() {
  return RealMap::function(
      "z/(1-z)", [](double x) { return x / (1.0 - x); },
      [](double x) { return 1.0 / ((1.0 - x) * (1.0 - x)); }, [](cplx z) { return z / (1.0 - z); },
      [](cplx z) { return 1.0 / ((1.0 - z) * (1.0 - z)); });
}

const CommutingPair& boundary_pair() {
  static const CommutingPair z = normalize(circle_pair(Lift::arnold(kBoundary)));
  return z;
}

const ParabolicGerm& boundary_germ() {
  static const ParabolicGerm g = pair_germ(boundary_pair());
  return g;
}

}  // namespace

TEST_CASE("mobius germ has closed-form Fatou coordinates") {
  const ParabolicGerm g = find_parabolic_point(mobius(), -0.5, 0.5);
  CHECK(std::abs(g.p()) < 1e-12);
  CHECK(g.a() == doctest::Approx(1.0));
  CHECK(std::abs(g.beta()) < 1e-10);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.02, 0.4);
  double worst = 0.0;
  for (int i = 0; i < 50; ++i) {
    const double x = u(rng);
    worst = std::max(worst, std::abs(g.attracting_raw(-x) - 1.0 / x));
    worst = std::max(worst, std::abs(g.repelling_raw(x) + 1.0 / x));
    const cplx z(-x, 0.3 * x);
    worst = std::max(worst, std::abs(g.attracting_raw(z) + 1.0 / z));
  }
  CHECK(worst < 1e-10);
}

TEST_CASE("arnold boundary germ") {
  const ParabolicGerm g = find_parabolic_point(arnold_map(kBoundary), 0.0, 0.5);
  CHECK(g.p() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(g.multiplier() == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(g.a() == doctest::Approx(std::numbers::pi).epsilon(1e-10));
  CHECK(std::abs(g.b()) < 1e-9);
  CHECK(g.beta() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(g.attracting(g.a_pt()) == doctest::Approx(0.0));
  CHECK(g.repelling(g.r_pt()) == doctest::Approx(0.0));
}

TEST_CASE("Abel residual on sector points") {
  const ParabolicGerm g = find_parabolic_point(arnold_map(kBoundary), 0.0, 0.5);
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ang(-0.6, 0.6), rad(20.0, 200.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx w = std::polar(rad(rng), ang(rng));
    const cplx za = g.z_of(w), zr = g.z_of(-w);
    worst = std::max(worst, std::abs(g.attracting(g.host()(za)) - g.attracting(za) - 1.0));
    worst = std::max(worst, std::abs(g.repelling(g.host()(zr)) - g.repelling(zr) - 1.0));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("inside a tongue there is no tangency") {
  CHECK_THROWS_AS(find_parabolic_point(arnold_map(0.3), 0.0, 1.0), DomainError);
  CHECK_THROWS_AS(find_parabolic_point(arnold_map(0.1), 0.0, 1.0), DomainError);
}

TEST_CASE("inverses and transit normalization") {
  const ParabolicGerm& g = boundary_germ();
  CHECK(transit_map(g, 0.0, g.a_pt()) == doctest::Approx(g.r_pt()).epsilon(1e-10));
  for (double s : {-3.5, -0.25, 0.0, 0.7, 2.0}) {
    CHECK(g.attracting(g.attracting_inverse(s)) == doctest::Approx(s).epsilon(1e-10));
    CHECK(g.repelling(g.repelling_inverse(s)) == doctest::Approx(s).epsilon(1e-10));
  }
  // Equivariance: the transit commutes with eta.
  const RealMap& eta = g.host();
  for (double th : {0.1, 0.45, 0.8}) {
    const double x = 0.5 * (g.a_pt() + 1.0);
    CHECK(transit_map(g, th, eta(x)) == doctest::Approx(eta(transit_map(g, th, x))).epsilon(1e-8));
  }
  // Monotone in theta.
  double prev = transit_map(g, 0.0, g.a_pt());
  for (int i = 1; i < 16; ++i) {
    const double v = transit_map(g, i / 16.0, g.a_pt());
    CHECK((v - prev) * (g.r_pt() - g.p()) < 0.0);
    prev = v;
  }
}

TEST_CASE("equator map is a monotone degree-one lift") {
  const ParabolicGerm& g = boundary_germ();
  const EquatorMap E = equator_circle_map(boundary_pair(), g, 0.37);
  double prev = E(0.0);
  for (int i = 1; i <= 64; ++i) {
    const double v = E(i / 64.0);
    CHECK(v >= prev);
    prev = v;
  }
  CHECK(E(1.0) == doctest::Approx(E(0.0) + 1.0).epsilon(1e-10));
  CHECK(E(0.3) == E(0.3));
  // psi(theta) = rho(E_theta) is nondecreasing with degree one.
  double last = -1e300;
  for (int i = 0; i <= 16; ++i) {
    const double r = equator_circle_map(boundary_pair(), g, i / 16.0).rotation(3000);
    CHECK(r >= last - 1e-3);
    last = r;
  }
  const double r0 = equator_circle_map(boundary_pair(), g, 0.0).rotation(3000);
  CHECK(last == doctest::Approx(r0 + 1.0).epsilon(1e-3));
}

TEST_CASE("parabolic renormalization matches the equator map") {
  const ParabolicGerm& g = boundary_germ();
  for (double th : {0.1, 0.3, 0.55}) {
    const CommutingPair P = parabolic_renormalize(boundary_pair(), g, th);
    CHECK(check_pair(P).pass);
    const double rho_p = real_from_cf(pair_rotation_cf(P, 10));
    const double rho_e = equator_circle_map(boundary_pair(), g, th).rotation(20000);
    CHECK(circle_distance(rho_p, rho_e) < 1e-3);
  }
}

TEST_CASE("transit solver hits the golden mean") {
  const ParabolicGerm& g = boundary_germ();
  const TransitSolution sol = solve_transit(boundary_pair(), g, ContinuedFraction::golden(60), 1e-8);
  CHECK(sol.rho_bound <= 1e-8);
  const CommutingPair P = parabolic_renormalize(boundary_pair(), g, sol.theta);
  const ContinuedFraction cf = pair_rotation_cf(P, 12);
  for (std::size_t i = 0; i < 12; ++i) CHECK(cf[i] == Quotient(1));
  CHECK(real_from_cf(cf) == doctest::Approx(kGolden).epsilon(1e-4));
}

TEST_CASE("rational transit targets give ordered plateau ends") {
  const ParabolicGerm& g = boundary_germ();
  const ContinuedFraction half = ContinuedFraction({Quotient(2)}, true);
  const double left = solve_transit(boundary_pair(), g, half, 1e-9, PlateauSide::Left).theta;
  const double right = solve_transit(boundary_pair(), g, half, 1e-9, PlateauSide::Right).theta;
  CHECK(left < right);
  const double mid = 0.5 * (left + right);
  CHECK(equator_circle_map(boundary_pair(), g, mid).rotation(4000) - 2.0 ==
        doctest::Approx(0.5).epsilon(1e-3));
}

TEST_CASE("renormalizations near the boundary approach the parabolic renormalization") {
  const ParabolicGerm& g = boundary_germ();
  const double theta = solve_transit(boundary_pair(), g, ContinuedFraction::golden(60), 1e-10).theta;
  const CommutingPair P = parabolic_renormalize(boundary_pair(), g, theta);
  double prev = 1e300;
  for (std::int64_t n : {10, 20, 40}) {
    const double t =
        solve_parameter(FamilySpec{}, ContinuedFraction::lead_then_golden(n, 60), 1e-13).theta;
    const CommutingPair R = renormalize(normalize(circle_pair(Lift::arnold(t))));
    const double d = pair_distance(R, P);
    CHECK(d < prev);
    prev = d;
  }
}

TEST_CASE("multiplier data past the tongue boundary") {
  const ParabolicGerm g = find_parabolic_point(arnold_map(kBoundary), 0.0, 0.5);
  double prev = 1.0;
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const RealMap host = arnold_map(kBoundary + eps);
    const PerturbedGermData md = multiplier_data(host, g.p(), g.a());
    CHECK(md.fixed_point.imag() > 0.0);
    CHECK(std::abs(host(std::conj(md.fixed_point)) - std::conj(md.fixed_point)) < 1e-12);
    CHECK(std::abs(std::arg(md.alpha)) < std::numbers::pi / 4);
    const double d = circle_distance(md.theta_pred, measured_transit_phase(host, g));
    CHECK(d < prev);
    prev = d;
  }
  CHECK_THROWS_AS(multiplier_data(arnold_map(kBoundary - 1e-3), g.p(), g.a()), DomainError);
}

TEST_CASE("circle distance") {
  CHECK(circle_distance(0.05, 0.95) == doctest::Approx(0.1));
  CHECK(circle_distance(0.2, 1.2) == doctest::Approx(0.0));
}

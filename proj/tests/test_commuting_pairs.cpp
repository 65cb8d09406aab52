#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "critlab/circle_maps.hpp"
#include "critlab/commuting_pairs.hpp"
#include "critlab/errors.hpp"

using namespace critlab;

namespace {

const double kGolden = (std::sqrt(5.0) - 1.0) / 2.0;

double golden_theta() {
  static const double theta =
      solve_parameter(FamilySpec{}, ContinuedFraction::golden(60), 1e-12).theta;
  return theta;
}

}  // namespace

TEST_CASE("rigid golden pair") {
  const CommutingPair z = base_pair(Lift::rigid(kGolden), 1);
  CHECK(z.xi0 == doctest::Approx(kGolden));
  CHECK(z.eta0 == doctest::Approx(kGolden - 1.0));
  CHECK(height(z).chi == Quotient(1));
  const CommutingPair p = prerenormalize(z);
  CHECK(p.eta(0.0) == doctest::Approx(2 * kGolden - 1));
  CHECK(p.xi(0.0) == doctest::Approx(kGolden - 1));
  // Self-similar: ratio |I_xi|/|I_eta| = g at every level.
  const OrbitLog log = renorm_orbit(z, 8);
  for (const auto& row : log.rows) CHECK(row.ratio == doctest::Approx(kGolden).epsilon(1e-9));
  CHECK(glue(z).rotation(100000) == doctest::Approx(kGolden).epsilon(1e-4));
}

TEST_CASE("rigid 3/10 terminates after [3,3]") {
  const CommutingPair z = base_pair(Lift::rigid(0.3), 3);
  CHECK(z.eta(0.0) == doctest::Approx(-0.1));
  const Height h = height(z);
  CHECK(h.chi == Quotient(3));
  CHECK(h.lands_on_zero());
  const auto cf = rotation_number_cf(Lift::rigid(0.3), 10);
  CHECK(cf == ContinuedFraction({3, 3, kInfinity}, true));
}

TEST_CASE("rho = 0 inside the 0-tongue") {
  const auto cf = rotation_number_cf(Lift::arnold(0.1), 5);
  CHECK(cf == ContinuedFraction({kInfinity}, true));
}

TEST_CASE("infinite height inside the 1/2 tongue") {
  const CommutingPair z = base_pair(Lift::arnold(0.49), 2);
  CHECK(height(z).chi.is_infinite());
  const auto cf = pair_rotation_cf(z, 4);
  CHECK(cf == ContinuedFraction({kInfinity}, true));
  const OrbitLog log = renorm_orbit(z, 5);
  CHECK(log.parabolic_stop);
  CHECK(log.rows.size() == 1);
}

TEST_CASE("superstable parameter is rejected by the base pair") {
  CHECK_THROWS_AS(base_pair(Lift::arnold(0.5), 2), InvariantError);
  CHECK_THROWS_AS(base_pair(Lift::arnold(0.3), 5), InvariantError);
}

TEST_CASE("circle pair renormalizes to the base pair") {
  const Lift F = Lift::arnold(golden_theta());
  const CommutingPair c = circle_pair(F);
  CHECK(c.xi0 == 1.0);
  CHECK(c.eta(0.3) == doctest::Approx(-F(-0.3)));
  CHECK(height(c).chi == Quotient(1));
  const CommutingPair r = renormalize(c);
  const CommutingPair b = normalize(base_pair(F, 1));
  CHECK(pair_distance(r, b) < 1e-14);
}

TEST_CASE("golden heights along the orbit") {
  const Lift F = Lift::arnold(golden_theta());
  const auto cf = rotation_number_cf(F, 13);
  REQUIRE(cf.size() == 13);
  for (std::size_t i = 0; i < cf.size(); ++i) CHECK(cf[i] == Quotient(1));
}

TEST_CASE("heights reproduce a [2,1,2,1,...] target") {
  const auto target = ContinuedFraction::periodic({2, 1}, 60);
  const double theta = solve_parameter(FamilySpec{}, target, 1e-12).theta;
  const auto cf = rotation_number_cf(Lift::arnold(theta), 11);
  for (std::size_t i = 0; i < 11; ++i) CHECK(cf[i] == target[i]);
}

TEST_CASE("symbolic and generic renormalization agree") {
  const Lift F = Lift::arnold(golden_theta());
  CommutingPair sym = normalize(base_pair(F, 1));
  CommutingPair gen = sym;
  gen.symbolic.reset();
  for (int m = 1; m <= 8; ++m) {
    sym = renormalize(sym, RenormPath::Symbolic);
    gen = renormalize(gen, RenormPath::Generic);
    REQUIRE(sym.symbolic);
    REQUIRE_FALSE(gen.symbolic);
    double err = 0.0;
    for (int i = 0; i < 256; ++i) {
      const double t = static_cast<double>(i) / 255;
      err = std::max(err, std::abs(sym.eta(t) - gen.eta(t)));
      err = std::max(err, std::abs(sym.xi(t * sym.eta0) - gen.xi(t * sym.eta0)));
    }
    CHECK(err <= 1e-10);
  }
}

TEST_CASE("normalization contract") {
  const Lift F = Lift::two_harmonic(0.61, 0.2);
  const CommutingPair z = base_pair(F, 1);
  const CommutingPair n = normalize(z);
  CHECK(n.xi0 == 1.0);
  CHECK(n.eta0 == doctest::Approx(z.eta0 / z.xi0));
  CHECK(pair_distance(normalize(n), n) == 0.0);
  // Generic normalization of a pair with negative xi(0).
  CommutingPair g = CommutingPair::from_maps(
      RealMap::function("x+0.1", [](double x) { return x + 0.1; }),
      RealMap::function("x-0.25", [](double x) { return x - 0.25; }), 0, "test");
  const CommutingPair gn = normalize(g);
  CHECK(gn.xi0 == 1.0);
  CHECK(gn.eta0 == doctest::Approx(-0.4));
}

TEST_CASE("pair invariants along the golden orbit") {
  const Lift F = Lift::arnold(golden_theta());
  const OrbitLog log = renorm_orbit(base_pair(F, 1), 12);
  REQUIRE(log.rows.size() == 12);
  for (std::size_t i = 0; i < log.pairs.size(); ++i) {
    const auto d = check_pair(log.pairs[i]);
    CHECK(d.pass);
    CHECK(log.rows[i].height == Quotient(1));
    if (i > 0) CHECK(log.rows[i].len_eta < log.rows[i - 1].len_eta);
  }
  const auto m = epstein_metrics(log.pairs);
  CHECK(std::isfinite(m.K));
  CHECK(m.K > 1.0);
}

TEST_CASE("gauss shift law on sampled parameters (property)") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.2, 0.8);
  for (int trial = 0; trial < 10; ++trial) {
    const Lift F = Lift::arnold(u(rng));
    const auto cf = rotation_number_cf(F, 6);
    if (cf[0].is_infinite()) continue;
    if (cf.size() < 2) continue;
    const auto rest = pair_rotation_cf(base_pair(F, cf[0].value()), 5);
    const auto shifted = gauss_shift(cf);
    for (std::size_t i = 0; i < std::min(rest.size(), shifted.size()); ++i)
      CHECK(rest[i] == shifted[i]);
  }
}

TEST_CASE("glued rotation matches the height expansion") {
  const Lift F = Lift::two_harmonic(golden_theta(), 0.1);
  const CommutingPair z = normalize(base_pair(F, 1));
  const auto cf = pair_rotation_cf(z, 10);
  if (!cf.exhausted()) {
    const auto c = convergents(cf, 10);
    const double bound = 1.0 / (static_cast<double>(c.q[9]) * static_cast<double>(c.q[10]));
    CHECK(std::abs(glue(z).rotation(1000000) - real_from_cf(cf)) <= bound + 2e-6);
  }
}

TEST_CASE("pair_distance is a symmetric premetric") {
  const CommutingPair a = normalize(base_pair(Lift::arnold(golden_theta()), 1));
  const CommutingPair b = normalize(base_pair(Lift::two_harmonic(0.6, 0.2), 1));
  CHECK(pair_distance(a, a) == 0.0);
  CHECK(pair_distance(a, b) == pair_distance(b, a));
  CHECK(pair_distance(a, b) > 0.0);
}

TEST_CASE("orbit csv") {
  const OrbitLog log = renorm_orbit(base_pair(Lift::rigid(kGolden), 1), 2);
  std::ostringstream os;
  write_orbit_csv(os, log);
  const std::string s = os.str();
  CHECK(s.rfind("m,height,len_eta,len_xi,ratio,distance\n", 0) == 0);
  CHECK(s.find("0,1,0.6180339887498949") != std::string::npos);
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "critlab/circle_maps.hpp"
#include "critlab/complex_ext.hpp"
#include "critlab/errors.hpp"

using namespace critlab;

namespace {

double golden_theta() {
  static const double theta =
      solve_parameter(FamilySpec{}, ContinuedFraction::golden(60), 1e-12).theta;
  return theta;
}

double interval_length(const Lift& F, int n) {
  const Convergents cv = convergents(rotation_number_cf(F, n + 3), n + 1);
  return std::abs(LiftIterate{F, cv.q[n], cv.p[n]}(0.0));
}

}  // namespace

TEST_CASE("complex iterate restricts to the real iterate") {
  const Lift F = Lift::arnold(golden_theta());
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0), v(-0.3, 0.3);
  for (int i = 0; i < 200; ++i) {
    const double x = u(rng);
    const ComplexOrbit o = complex_iterate(F, 13, 8, cplx(x, 0.0));
    CHECK(std::abs(o.value.real() - LiftIterate{F, 13, 8}(x)) <= 1e-12);
    CHECK(o.value.imag() == 0.0);
    const cplx z(x, v(rng));
    const ComplexOrbit a = complex_iterate(F, 5, 3, z), b = complex_iterate(F, 5, 3, std::conj(z));
    CHECK(std::abs(a.value - std::conj(b.value)) <= 1e-12 * (1.0 + std::abs(a.value)));
    CHECK(std::abs(a.derivative - std::conj(b.derivative)) <= 1e-12 * (1.0 + std::abs(a.derivative)));
  }
  CHECK(complex_iterate(F, 3, 2, cplx(0.3, 10.0)).escaped);
  CHECK(complex_iterate(F, 3, 2, cplx(0.3, 10.0)).steps <= 1);
  CHECK_FALSE(complex_iterate(F, 3, 2, cplx(0.3, 0.01)).escaped);
}

TEST_CASE("gamma curves solve the defining equation") {
  std::vector<double> ys;
  for (int i = 1; i <= 60; ++i) ys.push_back(0.05 * i);
  for (std::int64_t k : {-1, 0, 2})
    for (int sign : {1, -1}) {
      const GammaCurve c = gamma_curve(golden_theta(), k, sign, ys);
      REQUIRE(c.x.size() == ys.size());
      for (std::size_t i = 0; i < c.x.size(); ++i) {
        CHECK(c.residual[i] < 1e-9);
        CHECK(c.x[i] == doctest::Approx(gamma_closed_form(k, sign, ys[i])).epsilon(1e-9));
      }
      CHECK(std::abs(c.x.back() - (k + 0.25 * sign)) < 5e-3);
      // Tends to the critical point k as Im -> 0.
      CHECK(std::abs(c.x.front() - k) < 0.1);
    }
  // Conjugate symmetry: the curve for -y has the same abscissae.
  std::vector<double> neg;
  for (auto it = ys.rbegin(); it != ys.rend(); ++it) neg.push_back(-*it);
  const GammaCurve up = gamma_curve(0.2, 1, 1, ys), down = gamma_curve(0.2, 1, 1, neg);
  for (std::size_t i = 0; i < ys.size(); ++i) CHECK(down.x[ys.size() - 1 - i] == up.x[i]);
  // The alternative closed form agrees only far from the axis.
  CHECK(std::abs(gamma_closed_form_alt(0, 1, 3.0) - gamma_closed_form(0, 1, 3.0)) < 1e-6);
  CHECK(std::abs(gamma_closed_form_alt(0, 1, 1e-6) - 0.5) < 1e-3);
  CHECK_THROWS_AS(gamma_curve(0.2, 0, 1, {0.5, 0.4}), DomainError);
  CHECK_THROWS_AS(gamma_curve(0.2, 0, 2, {0.5}), DomainError);
  std::ostringstream os;
  write_gamma_csv(os, gamma_curve(0.2, 0, 1, {1.0}));
  CHECK(os.str().rfind("y,x\n1,", 0) == 0);
}

TEST_CASE("julia grid classification and determinism") {
  const Lift F = Lift::arnold(golden_theta());
  ComplexWindow w;
  w.center = cplx(0.5, 0.0);
  w.width = 1.0;
  w.height = 24.0;
  w.resolution = 48;
  const LabeledGrid g = julia_grid(F, w, 100, kJuliaEscapeIm, 3);
  // Top row sits at Im ~ 11.75: escaped before any iterate.
  for (int c = 0; c < w.resolution; ++c) {
    CHECK(g.at(c, 0) == PixelLabel::Escaped);
    CHECK(g.escape_iter[g.index(c, 0)] == 0);
  }
  // The real circle is invariant.
  ComplexWindow axis;
  axis.center = cplx(0.5, 0.0);
  axis.width = 1.0;
  axis.height = 1e-12;
  axis.resolution = 64;
  const LabeledGrid ga = julia_grid(F, axis, 500);
  for (int c = 0; c < axis.resolution; ++c)
    CHECK(ga.at(c, axis.resolution / 2) == PixelLabel::Bounded);
  const LabeledGrid g1 = julia_grid(F, w, 100, kJuliaEscapeIm, 1);
  CHECK(g1.labels == g.labels);
  CHECK(g1.escape_iter == g.escape_iter);
  std::ostringstream a, b;
  write_ppm(a, g);
  write_ppm(b, g1);
  CHECK(a.str() == b.str());
  CHECK(a.str().rfind("P6\n48 48\n255\n", 0) == 0);
  CHECK(a.str().size() == std::string("P6\n48 48\n255\n").size() + 48 * 48 * 3);
  CHECK_THROWS_AS(julia_grid(F, w, 0), DomainError);
}

TEST_CASE("holomorphic pair domains") {
  const Lift F = Lift::arnold(golden_theta());
  const int n = 4;
  const double R0 = kDomainRadiusFactor * interval_length(F, n);
  double prev = -1.0;
  for (double k : {1.0, 2.0, 4.0}) {
    const double R = k * R0;
    const DomainGrid d = domain_grid(F, n, R, default_domain_window(R, 240));
    CHECK(d.margin > 0.0);
    CHECK(d.margin > prev);
    prev = d.margin;
    CHECK(d.count_u > 0);
    CHECK(d.count_v > 0);
    CHECK(d.overlap_radius_px <= 2.0);
    // Real symmetry of the labels.
    const int res = d.grid.window.resolution;
    for (int r = 0; r < res; ++r)
      for (int c = 0; c < res; ++c) CHECK(d.grid.at(c, r) == d.grid.at(c, res - 1 - r));
  }
  // Resolution doubling changes labels only near boundaries.
  const DomainGrid coarse = domain_grid(F, n, R0, default_domain_window(R0, 120));
  const DomainGrid fine = domain_grid(F, n, R0, default_domain_window(R0, 240));
  int bad = 0;
  for (int r = 0; r < 120; ++r)
    for (int c = 0; c < 120; ++c) {
      const PixelLabel l = coarse.grid.at(c, r);
      bool differs = false;
      for (int dr = 0; dr < 2; ++dr)
        for (int dc = 0; dc < 2; ++dc) differs |= fine.grid.at(2 * c + dc, 2 * r + dr) != l;
      if (!differs) continue;
      bool near_boundary = false;
      for (int dr = -2; dr <= 2; ++dr)
        for (int dc = -2; dc <= 2; ++dc) {
          const int r2 = r + dr, c2 = c + dc;
          if (r2 >= 0 && r2 < 120 && c2 >= 0 && c2 < 120 && coarse.grid.at(c2, r2) != l) near_boundary = true;
        }
      bad += !near_boundary;
    }
  CHECK(bad == 0);
  CHECK_THROWS_AS(domain_grid(F, n, R0, default_domain_window(0.05 * R0, 64)), DomainError);
}

TEST_CASE("hyperbolic norm") {
  const cplx z(0.3, 0.2);
  CHECK(hyperbolic_norm(z, z, 1.0) == doctest::Approx(1.0));
  CHECK(hyperbolic_norm(z, 2.0 * z, 2.0) == doctest::Approx(1.0));
  CHECK_THROWS_AS(hyperbolic_norm(cplx(0.3, 0.0), z, 1.0), DomainError);
  // Chain rule: the norm of a composition is the product along the orbit.
  const Lift F = Lift::arnold(0.4);
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-0.5, 0.5), v(0.01, 0.2);
  for (int i = 0; i < 100; ++i) {
    const cplx z0(u(rng), v(rng));
    const ComplexOrbit one = complex_iterate(F, 1, 0, z0);
    const ComplexOrbit two = complex_iterate(F, 1, 0, one.value);
    const ComplexOrbit both = complex_iterate(F, 2, 0, z0);
    if (one.value.imag() == 0.0 || two.value.imag() == 0.0) continue;
    const double prod = hyperbolic_norm(z0, one.value, one.derivative) *
                        hyperbolic_norm(one.value, two.value, two.derivative);
    CHECK(hyperbolic_norm(z0, both.value, both.derivative) == doctest::Approx(prod).epsilon(1e-10));
  }
}

TEST_CASE("pair maps expand the hyperbolic metric on their domains") {
  const Lift F = Lift::arnold(golden_theta());
  const double R = kDomainRadiusFactor * interval_length(F, 4);
  const DomainGrid d = domain_grid(F, 4, R, default_domain_window(R, 240));
  const ExpansionReport rep = expansion_check(F, d, 1000, 0);
  CHECK(rep.samples >= 1000);
  CHECK(rep.violations == 0);
  CHECK(rep.min_norm > 1.0);
  const ExpansionReport again = expansion_check(F, d, 1000, 0);
  CHECK(again.min_norm == rep.min_norm);
}

TEST_CASE("offset power-law fit recovers synthetic exponents") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> u(std::log(0.5), std::log(5.0));
  for (double s : {1.0, 3.0}) {
    for (double d0 : {0.0, 0.1}) {
      std::vector<double> lx, ys;
      for (int i = 0; i < 300; ++i) {
        lx.push_back(u(rng));
        ys.push_back(2.0 * std::exp(s * lx.back()) - d0);
      }
      const CubicFit f = fit_offset_power_law(lx, ys);
      CHECK(f.slope == doctest::Approx(s).epsilon(1e-4));
      CHECK(f.offset == doctest::Approx(d0).epsilon(1e-4));
      CHECK(f.rms < 1e-6);
    }
  }
}

TEST_CASE("cubic estimate harness") {
  const CubicFit rigid = cubic_estimate_fit(Lift::rigid(golden_theta()), 6, 200, 0, 200);
  CHECK(rigid.slope == doctest::Approx(1.0).epsilon(1e-6));
  const Lift F = Lift::arnold(golden_theta());
  const CubicFit a = cubic_estimate_fit(F, 6, 200, 0, 300), b = cubic_estimate_fit(F, 6, 800, 0, 300);
  CHECK(std::abs(a.slope - b.slope) <= 0.2);
  CHECK(a.slope > 2.0);
  const CubicFit again = cubic_estimate_fit(F, 6, 200, 0, 300);
  CHECK(again.slope == a.slope);
}

// Acceptance run: one PASS/FAIL line per criterion. A criterion passes when its
// numerical check holds and it finishes within its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "critlab/cfrac.hpp"
#include "critlab/circle_maps.hpp"
#include "critlab/commuting_pairs.hpp"
#include "critlab/complex_ext.hpp"
#include "critlab/errors.hpp"
#include "critlab/lab.hpp"
#include "critlab/parabolic.hpp"

using namespace critlab;

namespace {

const double kBoundary = 1.0 / (2.0 * std::numbers::pi);
using lab::format_number;

struct Outcome {
  bool ok = false;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double limit_seconds;
  std::function<Outcome()> run;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

RealMap arnold_map(double theta) { return RealMap::lift_iterate(LiftIterate{Lift::arnold(theta), 1, 0}); }

double golden_theta() {
  static const double theta = solve_parameter(FamilySpec{}, ContinuedFraction::golden(64), 1e-12).theta;
  return theta;
}

double interval_length(const Lift& F, int n) {
  const Convergents cv = convergents(rotation_number_cf(F, n + 3), n + 1);
  return std::abs(LiftIterate{F, cv.q[n], cv.p[n]}(0.0));
}

const CommutingPair& boundary_pair() {
  static const CommutingPair z = normalize(circle_pair(Lift::arnold(kBoundary)));
  return z;
}

const ParabolicGerm& boundary_germ() {
  static const ParabolicGerm g = pair_germ(boundary_pair());
  return g;
}

Outcome convergents_fibonacci() {
  const Convergents c = convergents(ContinuedFraction::golden(30), 30);
  std::int64_t a = 1, b = 1;  // q_0 = q_1 = 1
  for (int m = 0; m <= 30; ++m) {
    const std::int64_t want = m == 0 ? 1 : b;
    if (c.q[m] != want) return {false, "q_" + std::to_string(m) + " = " + std::to_string(c.q[m])};
    if (m >= 1) {
      const std::int64_t t = a + b;
      a = b;
      b = t;
    }
  }
  return {true, "q_0..q_30 exact, q_30 = " + std::to_string(c.q[30])};
}

Outcome tongue_boundary_check() {
  const TongueBoundary b = tongue_boundary(FamilySpec{}, 0, 1, TongueSide::Right, 1e-13);
  const double err = std::abs(b.theta - kBoundary);
  const double mult = Lift::arnold(b.theta).jet(b.orbit_point).d;
  const double merr = std::abs(mult - 1.0);
  return {err <= 1e-10 && merr <= 1e-8, "|theta - 1/(2pi)| = " + fmt(err) + " (tol 1e-10), |F' - 1| = " +
                                            fmt(merr) + " (tol 1e-8)"};
}

Outcome gauss_shift_law() {
  const OrbitLog golden = renorm_orbit(base_pair(Lift::arnold(golden_theta()), 1), 12);
  std::size_t bad = golden.rows.size() == 12 ? 0 : 1;
  for (const auto& r : golden.rows) bad += !(r.height == Quotient(1));
  const ContinuedFraction target = ContinuedFraction::periodic({2, 1}, 64);
  const double theta = solve_parameter(FamilySpec{}, target, 1e-12).theta;
  const OrbitLog alt = renorm_orbit(base_pair(Lift::arnold(theta), target[0].value()), 10);
  std::size_t bad2 = alt.rows.size() == 10 ? 0 : 1;
  for (std::size_t i = 0; i < alt.rows.size(); ++i) bad2 += !(alt.rows[i].height == target[i + 1]);
  return {bad == 0 && bad2 == 0, "golden r_1..r_12 mismatches " + std::to_string(bad) +
                                     ", [2,1,...] r_1..r_10 mismatches " + std::to_string(bad2)};
}

Outcome symbolic_generic() {
  CommutingPair sym = normalize(base_pair(Lift::arnold(golden_theta()), 1));
  CommutingPair gen = sym;
  gen.symbolic.reset();
  double worst = 0.0;
  for (int m = 1; m <= 8; ++m) {
    sym = renormalize(sym, RenormPath::Symbolic);
    gen = renormalize(gen, RenormPath::Generic);
    for (int i = 0; i < 256; ++i) {
      const double t = static_cast<double>(i) / 255;
      worst = std::max(worst, std::abs(sym.eta(t) - gen.eta(t)));
      worst = std::max(worst, std::abs(sym.xi(t * sym.eta0) - gen.xi(t * sym.eta0)));
    }
  }
  return {worst <= 1e-10, "max pointwise difference " + fmt(worst) + " (tol 1e-10)"};
}

Outcome universality() {
  const ContinuedFraction golden = ContinuedFraction::golden(64);
  const FamilySpec arnold{}, two{Family::TwoHarmonic, 0.2, Precision::Double};
  const Lift Fa = arnold.at(solve_parameter(arnold, golden, 1e-12).theta);
  const Lift Fb = two.at(solve_parameter(two, golden, 1e-12).theta);
  const OrbitLog ref = renorm_orbit(base_pair(Fb, 1), 11);
  const OrbitLog log = renorm_orbit(base_pair(Fa, 1), 11, &ref);
  bool monotone = log.rows.size() == 11;
  for (int m = 5; m <= 10 && monotone; ++m) monotone = *log.rows[m].distance <= *log.rows[m - 1].distance;
  const double ratio = monotone ? *log.rows[10].distance / *log.rows[4].distance : INFINITY;

  const FamilySpec arnold_x{Family::Arnold, 0.0, Precision::Ext128};
  const FamilySpec two_x{Family::TwoHarmonic, 0.2, Precision::Ext128};
  const OrbitLog xa = renorm_orbit(base_pair(arnold_x.at(solve_parameter(arnold_x, golden, 1e-12).theta_ext), 1), 14);
  const OrbitLog xb = renorm_orbit(base_pair(two_x.at(solve_parameter(two_x, golden, 1e-12).theta_ext), 1), 14);
  const double sa = xa.rows.at(13).len_eta / xa.rows.at(12).len_eta;
  const double sb = xb.rows.at(13).len_eta / xb.rows.at(12).len_eta;
  const double sdiff = std::abs(sa - sb);
  return {monotone && ratio < 0.1 && sdiff <= 1e-3,
          "d10/d4 = " + fmt(ratio) + " (need < 0.1), d_m nonincreasing on [4,10]: " + (monotone ? "yes" : "no") +
              ", |scaling_a - scaling_b| at m = 12 = " + fmt(sdiff) + " (tol 1e-3, ext128)"};
}

Outcome fatou_coordinates() {
  const ParabolicGerm& g = boundary_germ();
  std::mt19937_64 rng(0);
  std::uniform_real_distribution<double> ang(-0.6, 0.6), rad(20.0, 200.0);
  double abel = 0.0;
  for (int i = 0; i < 100; ++i) {
    const cplx w = std::polar(rad(rng), ang(rng));
    const cplx za = g.z_of(w), zr = g.z_of(-w);
    abel = std::max(abel, std::abs(g.attracting(g.host()(za)) - g.attracting(za) - 1.0));
    abel = std::max(abel, std::abs(g.repelling(g.host()(zr)) - g.repelling(zr) - 1.0));
  }
  const RealMap mobius = RealMap::function(
      "z/(1-z)", [](double x) { return x / (1.0 - x); },
      [](double x) { return 1.0 / ((1.0 - x) * (1.0 - x)); }, [](cplx z) { return z / (1.0 - z); },
      [](cplx z) { return 1.0 / ((1.0 - z) * (1.0 - z)); });
  const ParabolicGerm m = find_parabolic_point(mobius, -0.5, 0.5);
  std::uniform_real_distribution<double> u(0.02, 0.4);
  double merr = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double x = u(rng);
    merr = std::max(merr, std::abs(m.attracting_raw(-x) - 1.0 / x));
    merr = std::max(merr, std::abs(m.repelling_raw(x) + 1.0 / x));
    const cplx z(-x, 0.3 * x);
    merr = std::max(merr, std::abs(m.attracting_raw(z) + 1.0 / z));
  }
  return {abel < 1e-8 && merr < 1e-10,
          "Abel residual " + fmt(abel) + " (tol 1e-8), Mobius error " + fmt(merr) + " (tol 1e-10)"};
}

Outcome douady_phase() {
  const ParabolicGerm g = find_parabolic_point(arnold_map(kBoundary), 0.0, 0.5);
  std::vector<double> disc;
  std::string detail = "discrepancies";
  for (double eps : {1e-2, 1e-3, 1e-4}) {
    const RealMap host = arnold_map(kBoundary + eps);
    const PerturbedGermData md = multiplier_data(host, g.p(), g.a());
    disc.push_back(circle_distance(md.theta_pred, measured_transit_phase(host, g)));
    detail += " " + fmt(disc.back());
  }
  return {disc[1] < disc[0] && disc[2] < disc[1], detail + " (strictly decreasing)"};
}

Outcome transit_solver() {
  const ParabolicGerm& g = boundary_germ();
  const TransitSolution sol = solve_transit(boundary_pair(), g, ContinuedFraction::golden(64), 1e-8);
  const std::int64_t n = 4000;
  const double slack = 2.0 / static_cast<double>(n);
  double prev = -INFINITY, first = 0.0, last = 0.0, worst_drop = 0.0;
  for (int i = 0; i <= 64; ++i) {
    const double r = equator_circle_map(boundary_pair(), g, i / 64.0).rotation(n);
    if (i == 0) first = r;
    last = r;
    worst_drop = std::max(worst_drop, prev - r);
    prev = r;
  }
  const double degree_err = std::abs(last - first - 1.0);
  return {sol.rho_bound <= 1e-8 && worst_drop <= slack && degree_err <= slack,
          "certified |rho(E) - golden| <= " + fmt(sol.rho_bound) + " (tol 1e-8), largest drop of psi " +
              fmt(std::max(worst_drop, 0.0)) + ", |psi(1) - psi(0) - 1| = " + fmt(degree_err) +
              " (estimate slack " + fmt(slack) + ")"};
}

Outcome parabolic_consistency() {
  const ParabolicGerm& g = boundary_germ();
  const double theta = solve_transit(boundary_pair(), g, ContinuedFraction::golden(64), 1e-10).theta;
  const CommutingPair P = parabolic_renormalize(boundary_pair(), g, theta);
  std::vector<double> d;
  std::string detail = "distances";
  for (std::int64_t n : {10, 20, 40}) {
    const double t = solve_parameter(FamilySpec{}, ContinuedFraction::lead_then_golden(n, 64), 1e-13).theta;
    d.push_back(pair_distance(renormalize(normalize(circle_pair(Lift::arnold(t)))), P));
    detail += " " + fmt(d.back());
  }
  return {d[1] < d[0] && d[2] < d[1], detail + " for N = 10, 20, 40 (strictly decreasing)"};
}

Outcome gamma_curves() {
  std::vector<double> ys;
  for (int i = 1; i <= 60; ++i) ys.push_back(0.05 * i);
  double worst = 0.0, asym = 0.0;
  for (std::int64_t k : {-1, 0, 1})
    for (int sign : {-1, 1}) {
      const GammaCurve c = gamma_curve(golden_theta(), k, sign, ys);
      for (double r : c.residual) worst = std::max(worst, r);
      asym = std::max(asym, std::abs(c.x.back() - (static_cast<double>(k) + 0.25 * sign)));
    }
  return {worst < 1e-9 && asym < 5e-3,
          "max residual " + fmt(worst) + " (tol 1e-9), asymptote deviation at Im = 3 " + fmt(asym) + " (tol 5e-3)"};
}

Outcome holomorphic_domains() {
  const Lift F = Lift::arnold(golden_theta());
  const double R0 = kDomainRadiusFactor * interval_length(F, 4);
  std::vector<double> margins;
  std::string detail = "margins";
  for (double f : {1.0, 2.0, 4.0}) {
    const DomainGrid d = domain_grid(F, 4, f * R0, default_domain_window(f * R0, 800));
    margins.push_back(d.margin);
    detail += " " + fmt(d.margin);
  }
  const bool ok = margins[0] > 0.0 && margins[1] >= margins[0] && margins[2] >= margins[1];
  return {ok, detail + " at R, 2R, 4R with R = 4|I_4| (positive, monotone), 800^2"};
}

Outcome expansion() {
  const Lift F = Lift::arnold(golden_theta());
  const double R = kDomainRadiusFactor * interval_length(F, 4);
  const DomainGrid d = domain_grid(F, 4, R, default_domain_window(R, 400));
  const ExpansionReport rep = expansion_check(F, d, 1000, 0);
  return {rep.samples == 1000 && rep.violations == 0,
          std::to_string(rep.violations) + " violations in " + std::to_string(rep.samples) +
              " samples, min forward norm " + fmt(rep.min_norm)};
}

Outcome cubic_estimate() {
  const CubicFit fit = cubic_estimate_fit(Lift::arnold(golden_theta()), 6, 800, 0);
  return {fit.slope >= 2.7 && fit.slope <= 3.3,
          "slope " + fmt(fit.slope) + " (band [2.7, 3.3]), offset " + fmt(fit.offset) + ", " +
              std::to_string(fit.samples) + " samples"};
}

Outcome determinism() {
  const Lift F = Lift::arnold(golden_theta());
  auto julia = [&] {
    std::ostringstream os;
    write_ppm(os, julia_grid(F, ComplexWindow{cplx(0.5, 0.0), 1.2, 1.2, 400}, 200));
    return os.str();
  };
  const double R = kDomainRadiusFactor * interval_length(F, 4);
  auto domains = [&] {
    std::ostringstream os;
    write_ppm(os, domain_grid(F, 4, R, default_domain_window(R, 400)).grid);
    return os.str();
  };
  const bool j = julia() == julia();
  const bool d = domains() == domains();
  return {j && d, std::string("julia ") + (j ? "identical" : "differs") + ", domains " +
                      (d ? "identical" : "differs") + " (400^2, two runs each)"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria = {
      {1, "convergents", 0.001, convergents_fibonacci},
      {2, "tongue boundary", 1.0, tongue_boundary_check},
      {3, "Gauss shift law", 30.0, gauss_shift_law},
      {4, "symbolic/generic agreement", 30.0, symbolic_generic},
      {5, "universality", 300.0, universality},
      {6, "Fatou coordinates", 10.0, fatou_coordinates},
      {7, "Douady phase", 60.0, douady_phase},
      {8, "transit solver", 120.0, transit_solver},
      {9, "parabolic renormalization consistency", 300.0, parabolic_consistency},
      {10, "gamma curves", 1.0, gamma_curves},
      {11, "holomorphic domains", 120.0, holomorphic_domains},
      {12, "expansion", 30.0, expansion},
      {13, "cubic estimate", 120.0, cubic_estimate},
      {14, "determinism", 120.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.limit_seconds;
    const bool pass = o.ok && in_time;
    failed += !pass;
    std::printf("%s  %2d %s: %s; %.3f s (limit %s s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, format_number(c.limit_seconds).c_str(), in_time ? "" : ", exceeded");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}

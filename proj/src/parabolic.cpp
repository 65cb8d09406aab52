#include "critlab/parabolic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "critlab/errors.hpp"
#include "critlab/rotation.hpp"

namespace critlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double re(double x) { return x; }
double re(cplx z) { return z.real(); }

double host_value(const RealMap& f, double x) { return f(x); }
cplx host_value(const RealMap& f, cplx z) { return f(z); }
std::pair<double, double> host_jet(const RealMap& f, double x) {
  const Jet j = f.jet(x);
  return {j.v, j.d};
}
std::pair<cplx, cplx> host_jet(const RealMap& f, cplx z) {
  const ComplexJet j = f.cjet(z);
  return {j.v, j.d};
}

// Truncated power series in t, coefficients 0..n-1.
using Series = std::vector<double>;

Series mul(const Series& x, const Series& y) {
  Series out(x.size(), 0.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; i + j < out.size(); ++j) out[i + j] += x[i] * y[j];
  return out;
}

// 1/(1 + x) for x with x[0] = 0.
Series inv_one_plus(const Series& x) {
  Series out(x.size(), 0.0);
  out[0] = 1.0;
  for (std::size_t n = 1; n < x.size(); ++n) {
    double s = 0.0;
    for (std::size_t k = 1; k <= n; ++k) s += x[k] * out[n - k];
    out[n] = -s;
  }
  return out;
}

// log(1 + x) for x with x[0] = 0, via (log(1+x))' = x'/(1+x).
Series log_one_plus(const Series& x) {
  const Series inv = inv_one_plus(x);
  Series dx(x.size(), 0.0);
  for (std::size_t k = 1; k < x.size(); ++k) dx[k - 1] = static_cast<double>(k) * x[k];
  const Series q = mul(dx, inv);
  Series out(x.size(), 0.0);
  for (std::size_t k = 1; k < x.size(); ++k) out[k] = q[k - 1] / static_cast<double>(k);
  return out;
}

}  // namespace

template <class T>
T ParabolicGerm::phi_asym_impl(T w, int sign) const {
  using std::log;
  T out = w - beta_ * log(static_cast<double>(sign) * w);
  const T t = 1.0 / w;
  T tk = t;
  for (double ck : series_) {
    out += ck * tk;
    tk *= t;
  }
  return out;
}

template <class T>
T ParabolicGerm::phi_asym_deriv(T w) const {
  const T t = 1.0 / w;
  T out = 1.0 - beta_ * t;
  T tk = t * t;
  for (std::size_t k = 0; k < series_.size(); ++k) {
    out -= static_cast<double>(k + 1) * series_[k] * tk;
    tk *= t;
  }
  return out;
}

double ParabolicGerm::phi_asym(double w, int sign) const { return phi_asym_impl(w, sign); }
cplx ParabolicGerm::phi_asym(cplx w, int sign) const { return phi_asym_impl(w, sign); }

template <class T>
T ParabolicGerm::attracting_impl(T z, T* deriv) const {
  T d = 1.0;
  for (std::int64_t n = 0; n <= budget_; ++n) {
    const T w = w_of(z);
    if (!std::isfinite(std::abs(w))) throw NumericalError("Fatou coordinate: orbit hit the fixed point");
    if (std::abs(w) >= W_ && re(w) > 0.0) {
      if (deriv) *deriv = d * phi_asym_deriv(w) * a() * w * w;
      return phi_asym_impl(w, +1) - static_cast<double>(n);
    }
    if (deriv) {
      const auto [v, dv] = host_jet(host_, z);
      d *= dv;
      z = v;
    } else {
      z = host_value(host_, z);
    }
    if (!std::isfinite(std::abs(z))) throw NumericalError("Fatou coordinate: orbit escaped");
  }
  throw BudgetError("attracting Fatou coordinate: point did not enter the petal within budget");
}

template <class T>
T ParabolicGerm::repelling_impl(T z, T* deriv) const {
  T d = 1.0;
  for (std::int64_t n = 0; n <= budget_; ++n) {
    const T w = w_of(z);
    if (!std::isfinite(std::abs(w))) throw NumericalError("Fatou coordinate: orbit hit the fixed point");
    if (std::abs(w) >= W_ && re(w) < 0.0) {
      if (deriv) *deriv = d * phi_asym_deriv(w) * a() * w * w;
      return phi_asym_impl(w, -1) + static_cast<double>(n);
    }
    const T y = host_inverse(z);
    if (deriv) d /= host_jet(host_, y).second;
    z = y;
  }
  throw BudgetError("repelling Fatou coordinate: point did not enter the petal within budget");
}

double ParabolicGerm::attracting_raw(double z) const { return attracting_impl<double>(z, nullptr); }
cplx ParabolicGerm::attracting_raw(cplx z) const { return attracting_impl<cplx>(z, nullptr); }
double ParabolicGerm::repelling_raw(double z) const { return repelling_impl<double>(z, nullptr); }
cplx ParabolicGerm::repelling_raw(cplx z) const { return repelling_impl<cplx>(z, nullptr); }

Jet ParabolicGerm::attracting_jet(double z) const {
  double d = 0.0;
  const double v = attracting_impl<double>(z, &d);
  return {v - base_A_, d};
}

Jet ParabolicGerm::repelling_jet(double z) const {
  double d = 0.0;
  const double v = repelling_impl<double>(z, &d);
  return {v - base_R_, d};
}

template <class T>
T ParabolicGerm::solve_asym(T target, int sign) const {
  using std::log;
  // phi_asym(w) ~ w - beta log(sign w); start from the first two terms.
  T w = target;
  if (std::abs(w) > 1.0) w = target + beta_ * log(static_cast<double>(sign) * target);
  for (int it = 0; it < 100; ++it) {
    const T f = phi_asym_impl(w, sign) - target;
    const T step = f / phi_asym_deriv(w);
    w -= step;
    if (std::abs(step) <= 1e-15 * std::abs(w)) return w;
  }
  throw ConvergenceError("Fatou coordinate inverse: Newton did not converge");
}

namespace {

template <class T>
std::int64_t deep_shift(double target_re, double W, double beta, bool attracting) {
  const double margin = W + std::abs(beta) * std::log(W) + 2.0;
  double n = attracting ? std::ceil(margin - target_re) : std::ceil(target_re + margin);
  return static_cast<std::int64_t>(std::max(0.0, n));
}

}  // namespace

double ParabolicGerm::attracting_inverse(double s) const {
  const double S = s + base_A_;
  const std::int64_t n = deep_shift<double>(S, W_, beta_, true);
  double z = z_of(solve_asym<double>(S + static_cast<double>(n), +1));
  for (std::int64_t k = 0; k < n; ++k) z = host_inverse(z);
  return z;
}

cplx ParabolicGerm::attracting_inverse(cplx s) const {
  const cplx S = s + base_A_;
  const std::int64_t n = deep_shift<cplx>(S.real(), W_, beta_, true);
  cplx z = z_of(solve_asym<cplx>(S + static_cast<double>(n), +1));
  for (std::int64_t k = 0; k < n; ++k) z = host_inverse(z);
  return z;
}

double ParabolicGerm::repelling_inverse(double s) const {
  const double S = s + base_R_;
  const std::int64_t n = deep_shift<double>(S, W_, beta_, false);
  double z = z_of(solve_asym<double>(S - static_cast<double>(n), -1));
  for (std::int64_t k = 0; k < n; ++k) z = host_(z);
  return z;
}

cplx ParabolicGerm::repelling_inverse(cplx s) const {
  const cplx S = s + base_R_;
  const std::int64_t n = deep_shift<cplx>(S.real(), W_, beta_, false);
  cplx z = z_of(solve_asym<cplx>(S - static_cast<double>(n), -1));
  for (std::int64_t k = 0; k < n; ++k) z = host_(z);
  return z;
}

namespace {

template <class T>
T newton_inverse(const RealMap& f, T z) {
  // host(y) ~ y + a (y - p)^2 near p, so 2z - host(z) is a second-order guess.
  T y = 2.0 * z - host_value(f, z);
  for (int it = 0; it < 60; ++it) {
    const auto [v, d] = host_jet(f, y);
    if (d == 0.0) break;
    const T step = (v - z) / d;
    y -= step;
    if (std::abs(step) <= 4e-16 * (1.0 + std::abs(y))) return y;
  }
  if (std::abs(host_value(f, y) - z) <= 1e-13 * (1.0 + std::abs(z))) return y;
  throw ConvergenceError("inverse branch: Newton did not converge");
}

}  // namespace

double ParabolicGerm::host_inverse(double z) const { return newton_inverse<double>(host_, z); }
cplx ParabolicGerm::host_inverse(cplx z) const { return newton_inverse<cplx>(host_, z); }

ParabolicGerm find_parabolic_point(const RealMap& host, double lo, double hi,
                                   const GermOptions& opts) {
  if (!(hi > lo)) throw DomainError("find_parabolic_point: empty interval");
  if (!host.has_complex_extension())
    throw DomainError("find_parabolic_point: host map needs a complex extension");
  const double width = hi - lo;
  constexpr int kGrid = 2000;
  std::vector<double> g(kGrid + 1);
  double scale = 1.0;
  for (int i = 0; i <= kGrid; ++i) {
    const double x = lo + width * i / kGrid;
    const double v = host(x);
    g[i] = v - x;
    scale = std::max(scale, std::abs(v));
  }
  const double tol = 1e-10 * scale;
  const double gmax = *std::max_element(g.begin(), g.end());
  const double gmin = *std::min_element(g.begin(), g.end());
  if (gmax > tol && gmin < -tol)
    throw DomainError("find_parabolic_point: host has a transverse fixed point on the interval");
  // Extremum of host(x) - x closest to 0.
  int best = 0;
  for (int i = 1; i <= kGrid; ++i)
    if (std::abs(g[i]) < std::abs(g[best])) best = i;
  auto dg = [&](double x) { return host.jet(x).d - 1.0; };
  double a_lo = lo + width * std::max(0, best - 1) / kGrid;
  double a_hi = lo + width * std::min(kGrid, best + 1) / kGrid;
  double p = lo + width * best / kGrid;
  double d_lo = dg(a_lo), d_hi = dg(a_hi);
  if (d_lo * d_hi <= 0.0) {
    for (int it = 0; it < 200 && a_hi - a_lo > 1e-16 * (1.0 + std::abs(p)); ++it) {
      const double mid = 0.5 * (a_lo + a_hi);
      if (mid == a_lo || mid == a_hi) break;
      const double dm = dg(mid);
      if ((dm <= 0.0) == (d_lo <= 0.0)) {
        a_lo = mid;
        d_lo = dm;
      } else {
        a_hi = mid;
      }
    }
    p = 0.5 * (a_lo + a_hi);
  }
  const double residual = host(p) - p;
  if (std::abs(residual) > tol)
    throw DomainError("find_parabolic_point: no tangency (min |host(x) - x| = " +
                      std::to_string(std::abs(residual)) + ")");

  ParabolicGerm germ;
  germ.host_ = host;
  germ.p_ = p;
  germ.residual_ = residual;
  germ.multiplier_ = host.jet(p).d;
  germ.budget_ = opts.budget;

  // Taylor coefficients by the Cauchy integral on |z - p| = r.
  const int order = std::max(4, opts.series_order + 2);
  const double r = opts.cauchy_radius > 0.0 ? opts.cauchy_radius : 0.1 * width;
  constexpr int kNodes = 128;
  std::vector<cplx> values(kNodes);
  for (int j = 0; j < kNodes; ++j) {
    const cplx e = std::polar(1.0, kTwoPi * j / kNodes);
    values[j] = host(cplx(p) + r * e) - p;
  }
  germ.coeffs_.assign(order + 1, 0.0);
  for (int k = 0; k <= order; ++k) {
    cplx s = 0.0;
    for (int j = 0; j < kNodes; ++j) s += values[j] * std::polar(1.0, -kTwoPi * j * k / kNodes);
    germ.coeffs_[k] = (s / static_cast<double>(kNodes)).real() / std::pow(r, k);
  }
  germ.coeffs_[0] = 0.0;
  germ.coeffs_[1] = 1.0;
  const double a = germ.coeffs_[2];
  if (std::abs(a) < 1e-8 * scale)
    throw DomainError("find_parabolic_point: vanishing quadratic term (multiplicity > 2)");

  // w-map series: w' - w = 1 + e_1/w + e_2/w^2 + ..., in t = 1/w.
  const int M = opts.series_order + 2;
  Series X(M + 1, 0.0);  // host(p+h) = p + h (1 + X), h = -t/a
  for (int k = 2; k <= order && k - 1 <= M; ++k)
    X[k - 1] = germ.coeffs_[k] * std::pow(-1.0 / a, k - 1);
  Series Y = inv_one_plus(X);
  Y[0] -= 1.0;  // (1+X)^{-1} - 1 = sum y_j t^j, y_1 = 1
  // delta = (w' - w)/w = t * (1 + e_1 t + ...)
  Series delta(M + 1, 0.0);
  for (int j = 1; j <= M; ++j) delta[j] = Y[j];
  const double beta = delta[2];  // e_1
  germ.beta_ = beta;
  const Series L = log_one_plus(delta);
  const Series P = inv_one_plus(delta);
  std::vector<Series> Pk{Series(M + 1, 0.0)};
  Pk[0][0] = 1.0;
  std::vector<double> c;
  for (int j = 2; j <= M; ++j) {
    // order t^j: e_j - beta L_j + sum_{k=1}^{j-2} c_k [P^k]_{j-k} - (j-1) c_{j-1} = 0
    const double e_j = j + 1 <= M ? delta[j + 1] : 0.0;
    if (j + 1 > M) break;
    double s = e_j - beta * L[j];
    for (int k = 1; k <= j - 2; ++k) {
      while (static_cast<int>(Pk.size()) <= k) Pk.push_back(mul(Pk.back(), P));
      s += c[k - 1] * Pk[k][j - k];
    }
    c.push_back(s / static_cast<double>(j - 1));
  }
  germ.series_ = c;

  // Switch radius: smallest |w| with Abel residual of the expansion < 1e-12.
  if (opts.switch_radius > 0.0) {
    germ.W_ = opts.switch_radius;
  } else {
    const double radii[] = {10, 15, 20, 30, 45, 60, 90, 130, 200};
    germ.W_ = radii[std::size(radii) - 1];
    for (double W : radii) {
      double worst = 0.0;
      for (double ang : {0.0, 0.5, -0.5, 1.2, -1.2}) {
        const cplx w = std::polar(W, ang);
        const cplx z = germ.z_of(w);
        const cplx w1 = germ.w_of(host(z));
        worst = std::max(worst, std::abs(germ.phi_asym(w1, +1) - germ.phi_asym(w, +1) - 1.0));
        const cplx wr = -w;
        const cplx zr = germ.z_of(wr);
        const cplx wr1 = germ.w_of(host(zr));
        worst = std::max(worst, std::abs(germ.phi_asym(wr1, -1) - germ.phi_asym(wr, -1) - 1.0));
      }
      if (worst < 1e-12) {
        germ.W_ = W;
        break;
      }
    }
  }

  const double off = opts.base_offset > 0.0 ? opts.base_offset : 0.25 * width;
  const double sa = a > 0.0 ? 1.0 : -1.0;
  germ.a_pt_ = p - sa * off;
  germ.r_pt_ = p + sa * off;
  germ.base_A_ = germ.attracting_raw(germ.a_pt_);
  germ.base_R_ = germ.repelling_raw(germ.r_pt_);
  return germ;
}

ParabolicGerm pair_germ(const CommutingPair& z, const GermOptions& opts) {
  const double lo = std::min(0.0, z.xi0), hi = std::max(0.0, z.xi0);
  GermOptions o = opts;
  if (o.base_offset <= 0.0) o.base_offset = 0.25 * z.len_eta();
  return find_parabolic_point(z.eta, lo, hi, o);
}

double transit_map(const ParabolicGerm& germ, double theta, double x) {
  return germ.repelling_inverse(germ.attracting(x) - theta);
}

EquatorMap::EquatorMap(CommutingPair pair, const ParabolicGerm& germ, double theta)
    : pair_(std::move(pair)), germ_(&germ), theta_(theta) {}

double EquatorMap::operator()(double u) const {
  const double k = std::floor(u);
  const double f = u - k;
  const double x = germ_->repelling_inverse(-f);
  return theta_ - germ_->attracting(pair_.xi(x)) + k;
}

double EquatorMap::rotation(std::int64_t n) const {
  return rotation_average([this](double u) { return (*this)(u); }, n, 0.0);
}

EquatorMap equator_circle_map(const CommutingPair& z, const ParabolicGerm& germ, double theta) {
  return EquatorMap(z, germ, theta);
}

CommutingPair parabolic_renormalize(const CommutingPair& z, const ParabolicGerm& germ,
                                    double theta) {
  // Fundamental domain [0, eta^{-1}(0)) of the repelling trace in Phi^R
  // values: Phi^R is monotone along the trace and eta adds 1.
  const double v0 = germ.repelling(0.0);
  const double v1 = germ.repelling(germ.host_inverse(0.0));
  const double target = germ.attracting(z.xi(0.0)) - theta;
  // Want target + M in the half-open interval between v1 and v0 with the
  // end at 0 included.
  const double lo = std::min(v0, v1), hi = std::max(v0, v1);
  double M = std::ceil(lo - target);
  if (v0 < v1) {
    // Phi^R increasing toward eta^{-1}(0): include lo = v0.
    M = std::ceil(v0 - target);
  } else {
    // Phi^R decreasing: include hi = v0, exclude lo = v1.
    M = std::floor(v0 - target);
  }
  (void)hi;
  const ParabolicGerm* g = &germ;
  const RealMap xi = z.xi;
  auto gamma = [g, xi, theta, M](double x) {
    return g->repelling_inverse(g->attracting(xi(x)) - theta + M);
  };
  auto dgamma = [g, xi, theta, M](double x) {
    const Jet jx = xi.jet(x);
    const Jet ja = g->attracting_jet(jx.v);
    const double y = g->repelling_inverse(ja.v - theta + M);
    const Jet jr = g->repelling_jet(y);
    return jx.d * ja.d / jr.d;
  };
  auto gamma_z = [g, xi, theta, M](cplx x) {
    return g->repelling_inverse(g->attracting(xi(x)) - theta + M);
  };
  RealMap gm = RealMap::function("parabolic transit", gamma, dgamma, gamma_z);
  CommutingPair pre = CommutingPair::from_maps(gm, z.eta, z.level + 1, z.origin + " (parabolic)");
  pre.scale = z.scale;
  if (pre.eta0 * pre.xi0 >= 0.0)
    throw InvariantError("parabolic_renormalize: gamma(0) is not opposite to eta(0)");
  return normalize(pre);
}

namespace {

template <class Step>
double plateau_defect(Step&& E, std::int64_t p, std::int64_t q, bool want_max) {
  constexpr int kGrid = 128;
  double best = want_max ? -1e300 : 1e300;
  for (int i = 0; i < kGrid; ++i) {
    double u = static_cast<double>(i) / kGrid;
    const double u0 = u;
    for (std::int64_t k = 0; k < q; ++k) u = E(u);
    const double v = u - u0 - static_cast<double>(p);
    best = want_max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

}  // namespace

TransitSolution solve_transit(const CommutingPair& z, const ParabolicGerm& germ,
                              const ContinuedFraction& target, double tol, PlateauSide side) {
  if (!(tol > 0.0)) throw DomainError("solve_transit: tol must be positive");
  const double value = real_from_cf(target);
  if (!(value > 0.0 && value < 1.0)) throw DomainError("solve_transit: target must lie in (0,1)");
  TransitSolution sol;
  // The lift E_theta gains exactly 1 when theta does, so rho(E_theta) - theta
  // is 1-periodic; fix the integer part from theta = 0.
  const double rho0 = EquatorMap(z, germ, 0.0).rotation(2000);
  const std::int64_t k0 = static_cast<std::int64_t>(std::floor(rho0));
  double lo = 0.0, hi = 1.0;
  std::int64_t shift = k0;
  if (rho0 - static_cast<double>(k0) > value) {
    // rho(E_0) is already past the target in this unit interval.
    shift = k0 + 1;
  }
  if (target.exhausted()) {
    const auto r = target.finite_prefix();
    const Convergents c = convergents(target, static_cast<int>(r.size()));
    const std::int64_t p = c.p.back() + shift * c.q.back(), q = c.q.back();
    // Left end: last theta with rho < p/q; right end: first theta with rho > p/q.
    for (; sol.steps < 200 && hi - lo > tol; ++sol.steps) {
      const double mid = 0.5 * (lo + hi);
      const EquatorMap E(z, germ, mid);
      const bool before =
          side == PlateauSide::Left ? plateau_defect(E, p, q, true) < 0.0
                                    : plateau_defect(E, p, q, false) <= 0.0;
      if (before)
        lo = mid;
      else
        hi = mid;
    }
    sol.theta = 0.5 * (lo + hi);
    sol.rho_bound = 0.0;
    return sol;
  }
  std::int64_t budget = 1;
  {
    const auto r = target.finite_prefix();
    double q_prev = 0, q_cur = 1;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double q_next = static_cast<double>(r[k]) * q_cur + q_prev;
      q_prev = q_cur;
      q_cur = q_next;
      budget = static_cast<std::int64_t>(q_cur);
      if (1.0 / (q_cur * q_prev) <= tol || q_cur > 1e7) break;
    }
  }
  RotationComparison last;
  double mid = 0.5;
  for (; sol.steps < 200; ++sol.steps) {
    mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const EquatorMap E(z, germ, mid);
    last = compare_rotation<double>(E, target, shift, 0.0, budget);
    if (last.side == RotationSide::Undecided) break;
    if (last.side == RotationSide::Below)
      lo = mid;
    else
      hi = mid;
  }
  if (last.side != RotationSide::Undecided || last.certified_bound > tol)
    throw ConvergenceError("solve_transit: could not certify the target within tolerance");
  sol.theta = mid;
  sol.rho_bound = last.certified_bound;
  return sol;
}

PerturbedGermData multiplier_data(const RealMap& host, double p0, double a) {
  // Depth of the gap: min of host(x) - x near p0.
  double x = p0;
  double lo = p0 - 0.1, hi = p0 + 0.1;
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  auto g = [&](double y) { return (host(y) - y) * (a > 0 ? 1.0 : -1.0); };
  double c = hi - ratio * (hi - lo), d = lo + ratio * (hi - lo);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
    if (gc < gd) {
      hi = d;
      d = c;
      gd = gc;
      c = hi - ratio * (hi - lo);
      gc = g(c);
    } else {
      lo = c;
      c = d;
      gc = gd;
      d = lo + ratio * (hi - lo);
      gd = g(d);
    }
  }
  x = 0.5 * (lo + hi);
  const double eps = std::abs(host(x) - x);
  cplx zf(x, std::sqrt(eps / std::abs(a)));
  bool ok = false;
  for (int it = 0; it < 100; ++it) {
    const ComplexJet j = host.cjet(zf);
    const cplx step = (j.v - zf) / (j.d - 1.0);
    zf -= step;
    if (std::abs(step) <= 1e-15 * (1.0 + std::abs(zf))) {
      ok = true;
      break;
    }
  }
  if (!ok || !(std::abs(host(zf) - zf) <= 1e-12 * (1.0 + std::abs(zf))))
    throw ConvergenceError("multiplier_data: Newton did not converge to a complex fixed point");
  if (zf.imag() < 0.0) zf = std::conj(zf);
  if (zf.imag() <= 0.0) throw DomainError("multiplier_data: fixed point is real (inside the tongue)");
  PerturbedGermData out;
  out.fixed_point = zf;
  out.multiplier = host.cjet(zf).d;
  out.alpha = std::log(out.multiplier) / cplx(0.0, kTwoPi);
  if (!(std::abs(std::arg(out.alpha)) < std::numbers::pi / 4))
    throw DomainError("multiplier_data: |arg alpha| >= pi/4, outside the Douady regime");
  const double inv = (1.0 / out.alpha).real();
  out.theta_pred = inv - std::floor(inv);
  return out;
}

double measured_transit_phase(const RealMap& perturbed, const ParabolicGerm& germ,
                              std::int64_t budget) {
  const double dir = germ.r_pt() > germ.a_pt() ? 1.0 : -1.0;
  double x = germ.a_pt();
  std::int64_t n = 0;
  while (dir * (x - germ.r_pt()) < 0.0) {
    x = perturbed(x);
    if (++n > budget) throw BudgetError("measured_transit_phase: orbit did not pass the gate");
  }
  const double v = germ.attracting_raw(germ.a_pt()) - germ.repelling_raw(x);
  return v - std::floor(v);
}

double circle_distance(double a, double b) {
  double d = std::fmod(std::abs(a - b), 1.0);
  return std::min(d, 1.0 - d);
}

}  // namespace critlab

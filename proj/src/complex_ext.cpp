#include "critlab/complex_ext.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <cmath>
#include <numbers>
#include <ostream>
#include <thread>

#include "critlab/cfrac.hpp"
#include "critlab/errors.hpp"

namespace critlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

double im_arnold(double theta, cplx z) { return (z + theta - std::sin(kTwoPi * z) / kTwoPi).imag(); }

int thread_count(int requested) {
  if (requested > 0) return requested;
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

template <class Row>
void for_each_row(int rows, int threads, Row&& row) {
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int r = next++; r < rows; r = next++) row(r);
  };
  const int n = std::min(thread_count(threads), rows);
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
}

}  // namespace

ComplexOrbit complex_iterate(const Lift& F, std::int64_t q, std::int64_t p, cplx z,
                             double escape_im) {
  ComplexOrbit out;
  std::int64_t whole = 0;
  cplx d = 1.0;
  for (std::int64_t k = 0; k < q; ++k) {
    if (std::abs(z.imag()) > escape_im) {
      out.value = z + static_cast<double>(whole - p);
      out.derivative = d;
      out.escaped = true;
      out.steps = k;
      return out;
    }
    d *= F.derivative<cplx>(z);
    z = F(z);
    const double f = std::floor(z.real());
    whole += static_cast<std::int64_t>(f);
    z -= f;
  }
  out.value = z + static_cast<double>(whole - p);
  out.derivative = d;
  out.escaped = std::abs(z.imag()) > escape_im;
  out.steps = q;
  return out;
}

double gamma_closed_form(std::int64_t k, int sign, double y) {
  const double t = kTwoPi * std::abs(y);
  const double c = t == 0.0 ? 1.0 : t / std::sinh(t);
  return static_cast<double>(k) + sign * std::acos(c) / kTwoPi;
}

double gamma_closed_form_alt(std::int64_t k, int sign, double y) {
  const double t = kTwoPi * y;
  const double c = t == 0.0 ? -1.0 : -kTwoPi * std::abs(y) / std::sinh(t);
  return static_cast<double>(k) + sign * std::acos(std::clamp(c, -1.0, 1.0)) / kTwoPi;
}

namespace {

// Im A_theta(k + sign/4 + u + iy) with the asymptote split off, so that the
// cancellation near the asymptote happens in u rather than in x.
double gamma_defect(int sign, double u, double y) {
  return y + sign * std::sin(kTwoPi * u) * std::sinh(kTwoPi * y) / kTwoPi;
}

}  // namespace

GammaCurve gamma_curve(double theta, std::int64_t k, int sign, const std::vector<double>& im_values) {
  if (sign != 1 && sign != -1) throw DomainError("gamma_curve: sign must be +1 or -1");
  (void)theta;  // Im A_theta does not depend on the real parameter theta
  GammaCurve curve;
  curve.k = k;
  curve.sign = sign;
  for (std::size_t i = 0; i < im_values.size(); ++i) {
    const double y = im_values[i];
    if (y == 0.0) throw DomainError("gamma_curve: Im values must be nonzero");
    if (i > 0 && !(y > im_values[i - 1])) throw DomainError("gamma_curve: Im values must ascend");
    if (!std::isfinite(std::sinh(kTwoPi * y))) throw NumericalError("gamma_curve: |Im| too large");
    // x in [k, k + sign/2] is u in [-1/4, 1/4].
    double a = -0.25, b = 0.25;
    auto g = [&](double u) { return gamma_defect(sign, u, y); };
    double fa = g(a), fb = g(b);
    if (!(fa * fb < 0.0))
      throw NumericalError("gamma_curve: no sign change at Im = " + std::to_string(y));
    // Illinois variant of regula falsi.
    double u = a;
    for (int it = 0; it < 300; ++it) {
      u = (a * fb - b * fa) / (fb - fa);
      const double fu = g(u);
      if (fu == 0.0) break;
      if (fu * fb < 0.0) {
        a = b;
        fa = fb;
      } else {
        fa *= 0.5;
      }
      b = u;
      fb = fu;
      if (std::abs(b - a) <= 4e-17 || std::abs(fu) < 1e-15 * std::max(1.0, std::abs(y))) break;
    }
    curve.y.push_back(y);
    curve.offset.push_back(u);
    curve.x.push_back(static_cast<double>(k) + 0.25 * sign + u);
    curve.residual.push_back(std::abs(g(u)));
  }
  return curve;
}

double gamma_residual_direct(double theta, double x, double y) { return std::abs(im_arnold(theta, cplx(x, y))); }

void write_gamma_csv(std::ostream& os, const GammaCurve& curve) {
  const auto old = os.precision(17);
  os << "y,x\n";
  for (std::size_t i = 0; i < curve.y.size(); ++i) os << curve.y[i] << ',' << curve.x[i] << '\n';
  os.precision(old);
}

void ComplexWindow::validate() const {
  if (!(width > 0.0) || !(height > 0.0)) throw DomainError("window: extents must be positive");
  if (resolution < 1) throw DomainError("window: resolution must be positive");
}

cplx ComplexWindow::point(int col, int row) const {
  return {center.real() - 0.5 * width + (col + 0.5) * dx(),
          center.imag() + 0.5 * height - (row + 0.5) * dy()};
}

LabeledGrid julia_grid(const Lift& F, const ComplexWindow& window, std::int64_t budget,
                       double escape_im, int threads) {
  window.validate();
  if (budget < 1) throw DomainError("julia_grid: budget must be >= 1");
  if (!(escape_im > 0.0)) throw DomainError("julia_grid: escape threshold must be positive");
  LabeledGrid grid;
  grid.window = window;
  grid.budget = budget;
  grid.escape_im = escape_im;
  const int n = window.resolution;
  grid.labels.assign(static_cast<std::size_t>(n) * n, PixelLabel::Bounded);
  grid.escape_iter.assign(grid.labels.size(), -1);
  for_each_row(n, threads, [&](int row) {
    for (int col = 0; col < n; ++col) {
      cplx z = window.point(col, row);
      z -= std::floor(z.real());
      const std::size_t idx = grid.index(col, row);
      for (std::int64_t k = 0; k <= budget; ++k) {
        if (std::abs(z.imag()) > escape_im) {
          grid.labels[idx] = PixelLabel::Escaped;
          grid.escape_iter[idx] = static_cast<std::int32_t>(k);
          break;
        }
        if (k == budget) break;
        z = F(z);
        z -= std::floor(z.real());
      }
    }
  });
  return grid;
}

ComplexOrbit DomainGrid::map_u(const Lift& F, cplx z) const { return complex_iterate(F, q_n, p_n, z); }
ComplexOrbit DomainGrid::map_v(const Lift& F, cplx z) const { return complex_iterate(F, q_n1, p_n1, z); }

ComplexWindow default_domain_window(double R, int resolution) {
  ComplexWindow w;
  w.center = 0.0;
  w.width = w.height = 3.0 * R;
  w.resolution = resolution;
  return w;
}

namespace {

// Critical points of F^q on [lo, hi]: x with F^j(x) an integer, 0 <= j < q.
std::vector<double> real_critical_points(const Lift& F, std::int64_t q, double lo, double hi) {
  std::vector<double> out;
  for (std::int64_t j = 0; j < q; ++j) {
    const LiftIterate it{F, j, 0};
    const double va = it(lo), vb = it(hi);
    for (double m = std::ceil(va); m <= vb; m += 1.0) {
      double a = lo, b = hi;
      for (int s = 0; s < 100 && b - a > 1e-16 * (1.0 + std::abs(a)); ++s) {
        const double mid = 0.5 * (a + b);
        if (it(mid) < m)
          a = mid;
        else
          b = mid;
      }
      out.push_back(0.5 * (a + b));
    }
  }
  return out;
}

// Upper-half component of {Im F^q > 0} touching the real axis at `marked`,
// intersected with {|T^{-p} F^q| < R}, and reflected.
std::vector<std::uint8_t> domain_mask(const Lift& F, std::int64_t q, std::int64_t p, double marked,
                                      double R, const ComplexWindow& w, int threads) {
  const int n = w.resolution;
  const auto idx = [n](int c, int r) { return static_cast<std::size_t>(r) * n + c; };
  std::vector<std::int8_t> positive(static_cast<std::size_t>(n) * n, 0);
  std::vector<std::uint8_t> inside(positive.size(), 0);
  std::vector<cplx> value(positive.size()), deriv(positive.size());
  for_each_row(n, threads, [&](int row) {
    for (int col = 0; col < n; ++col) {
      const cplx z = w.point(col, row);
      if (z.imag() <= 0.0) continue;
      const ComplexOrbit o = complex_iterate(F, q, p, z);
      const std::size_t i = idx(col, row);
      positive[i] = !o.escaped && o.value.imag() > 0.0;
      inside[i] = !o.escaped && std::abs(o.value) < R;
      value[i] = o.value;
      deriv[i] = o.derivative;
    }
  });
  // Critical points of F^q block thin wedges near the axis that pixel
  // centers would otherwise step over.
  const double lo = w.center.real() - 0.5 * w.width, hi = w.center.real() + 0.5 * w.width;
  for (double c : real_critical_points(F, q, lo, hi)) {
    for (int row = 0; row < n; ++row) {
      const cplx z0 = w.point(0, row);
      if (z0.imag() <= 0.0 || z0.imag() > 4.0 * w.dy()) continue;
      for (int col = 0; col < n; ++col)
        if (std::abs(w.point(col, row).real() - c) <= 1.5 * w.dx()) positive[idx(col, row)] = 0;
    }
  }
  // Seed: lowest upper-half pixel above the marked point.
  const int seed_col = static_cast<int>(std::floor((marked - lo) / w.dx()));
  if (seed_col < 0 || seed_col >= n) throw DomainError("domain_grid: marked point is off the grid");
  int seed_row = -1;
  for (int row = n - 1; row >= 0; --row)
    if (w.point(seed_col, row).imag() > 0.0) {
      seed_row = row;
      break;
    }
  if (seed_row < 0) throw DomainError("domain_grid: window does not meet the upper half-plane");
  if (!positive[idx(seed_col, seed_row)])
    throw DomainError("domain_grid: component not found at the marked point");
  std::vector<std::uint8_t> comp(positive.size(), 0);
  std::vector<std::pair<int, int>> stack{{seed_col, seed_row}};
  comp[idx(seed_col, seed_row)] = 1;
  while (!stack.empty()) {
    const auto [c, r] = stack.back();
    stack.pop_back();
    const int dc[] = {1, -1, 0, 0}, dr[] = {0, 0, 1, -1};
    for (int k = 0; k < 4; ++k) {
      const int c2 = c + dc[k], r2 = r + dr[k];
      if (c2 < 0 || c2 >= n || r2 < 0 || r2 >= n) continue;
      const std::size_t i2 = idx(c2, r2);
      if (comp[i2] || !positive[i2]) continue;
      // Only step where F^q is close to its linearization: near critical
      // points, where components of the preimage touch, it is not.
      const std::size_t i1 = idx(c, r);
      const cplx dz = w.point(c2, r2) - w.point(c, r);
      const cplx dw = value[i2] - value[i1];
      if (std::abs(dw - deriv[i1] * dz) > 0.5 * std::abs(deriv[i1] * dz) ||
          std::abs(dw - deriv[i2] * dz) > 0.5 * std::abs(deriv[i2] * dz))
        continue;
      comp[i2] = 1;
      stack.emplace_back(c2, r2);
    }
  }
  std::vector<std::uint8_t> mask(positive.size(), 0);
  for (std::size_t i = 0; i < mask.size(); ++i) mask[i] = comp[i] && inside[i];
  // Reflection: a lower pixel belongs when its mirror image does.
  for (int row = 0; row < n; ++row)
    for (int col = 0; col < n; ++col) {
      const cplx z = w.point(col, row);
      if (z.imag() > 0.0) continue;
      const double mirror = -z.imag();
      const int r2 = static_cast<int>(std::lround((w.center.imag() + 0.5 * w.height - mirror) / w.dy() - 0.5));
      if (r2 >= 0 && r2 < n && std::abs(w.point(col, r2).imag() - mirror) < 1e-9 * w.dy())
        mask[idx(col, row)] = mask[idx(col, r2)];
      else
        mask[idx(col, row)] = 0;
    }
  // Pixels straddling the axis: the closed domain contains the real interval.
  return mask;
}

}  // namespace

DomainGrid domain_grid(const Lift& F, int n, double R, const ComplexWindow& window, int threads) {
  window.validate();
  if (n < 0) throw DomainError("domain_grid: level must be >= 0");
  if (!(R > 0.0)) throw DomainError("domain_grid: R must be positive");
  if (std::abs(window.center.imag()) > 1e-15)
    throw DomainError("domain_grid: window must be centered on the real axis");
  const ContinuedFraction cf = rotation_number_cf(F, n + 3);
  if (cf.size() < static_cast<std::size_t>(n + 2) || (cf.ends_in_infinity() && cf.size() < static_cast<std::size_t>(n + 3)))
    throw DomainError("domain_grid: rotation number has fewer than n + 2 quotients");
  const Convergents cv = convergents(cf, n + 1);
  DomainGrid d;
  d.level = n;
  d.R = R;
  d.p_n = cv.p[n];
  d.q_n = cv.q[n];
  d.p_n1 = cv.p[n + 1];
  d.q_n1 = cv.q[n + 1];
  d.end_n = LiftIterate{F, d.q_n, d.p_n}(0.0);
  d.end_n1 = LiftIterate{F, d.q_n1, d.p_n1}(0.0);
  const auto u = domain_mask(F, d.q_n, d.p_n, d.end_n1, R, window, threads);
  const auto v = domain_mask(F, d.q_n1, d.p_n1, d.end_n, R, window, threads);
  LabeledGrid& g = d.grid;
  g.window = window;
  const int res = window.resolution;
  g.labels.assign(u.size(), PixelLabel::Outside);
  g.escape_iter.assign(u.size(), -1);
  double rmax = 0.0;
  for (int row = 0; row < res; ++row)
    for (int col = 0; col < res; ++col) {
      const std::size_t i = g.index(col, row);
      if (!u[i] && !v[i]) continue;
      if (row == 0 || col == 0 || row == res - 1 || col == res - 1)
        throw DomainError("domain_grid: domain touches the window edge (enlarge the window)");
      const cplx z = window.point(col, row);
      rmax = std::max(rmax, std::abs(z));
      if (u[i] && v[i]) {
        g.labels[i] = PixelLabel::DomainBoth;
        ++d.count_both;
        d.overlap_radius_px = std::max(d.overlap_radius_px, std::abs(z) / window.dx());
      } else if (u[i]) {
        g.labels[i] = PixelLabel::DomainU;
      } else {
        g.labels[i] = PixelLabel::DomainV;
      }
      if (u[i]) ++d.count_u;
      if (v[i]) ++d.count_v;
    }
  if (d.count_u == 0 || d.count_v == 0) throw DomainError("domain_grid: empty domain (resolution too coarse)");
  d.margin = (R - rmax) / R;
  return d;
}

double hyperbolic_norm(cplx z, cplx value, cplx derivative) {
  if (z.imag() == 0.0 || value.imag() == 0.0)
    throw DomainError("hyperbolic_norm: point or image on the real axis");
  return std::abs(derivative) * std::abs(z.imag()) / std::abs(value.imag());
}

double hyperbolic_norm(const std::function<ComplexOrbit(cplx)>& h, cplx z) {
  const ComplexOrbit o = h(z);
  return hyperbolic_norm(z, o.value, o.derivative);
}

ExpansionReport expansion_check(const Lift& F, const DomainGrid& d, std::size_t samples,
                                std::uint64_t seed) {
  const ComplexWindow& w = d.grid.window;
  std::vector<std::size_t> pool;
  for (int row = 0; row < w.resolution; ++row)
    for (int col = 0; col < w.resolution; ++col) {
      const PixelLabel l = d.grid.at(col, row);
      if (l == PixelLabel::Outside) continue;
      if (std::abs(w.point(col, row).imag()) < w.dy()) continue;
      pool.push_back(d.grid.index(col, row));
    }
  if (pool.empty()) throw DomainError("expansion_check: no off-axis domain pixels");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  ExpansionReport rep;
  rep.min_norm = 1e300;
  for (std::size_t s = 0; s < samples; ++s) {
    const std::size_t i = pool[pick(rng)];
    const int row = static_cast<int>(i / w.resolution), col = static_cast<int>(i % w.resolution);
    const cplx z = w.point(col, row);
    const PixelLabel l = d.grid.labels[i];
    auto check = [&](const ComplexOrbit& o) {
      ++rep.samples;
      const double h = o.escaped || o.value.imag() == 0.0 ? 0.0 : hyperbolic_norm(z, o.value, o.derivative);
      rep.min_norm = std::min(rep.min_norm, h);
      if (!(h > 1.0)) ++rep.violations;
    };
    if (l == PixelLabel::DomainU || l == PixelLabel::DomainBoth) check(d.map_u(F, z));
    if (l == PixelLabel::DomainV || l == PixelLabel::DomainBoth) check(d.map_v(F, z));
  }
  return rep;
}

namespace {

void linear_fit(const std::vector<double>& x, const std::vector<double>& y, double& slope,
                double& intercept, double& rms) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  intercept = (sy - slope * sx) / n;
  double ss = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (slope * x[i] + intercept);
    ss += r * r;
  }
  rms = std::sqrt(ss / n);
}

}  // namespace

CubicFit cubic_estimate_fit(const Lift& F, int m, std::size_t sample_count, std::uint64_t seed,
                            int resolution) {
  if (sample_count < 10) throw DomainError("cubic_estimate_fit: need at least 10 samples");
  const ContinuedFraction cf = rotation_number_cf(F, m + 3);
  const Convergents cv = convergents(cf, m + 1);
  const std::int64_t q = cv.q[m + 1], p = cv.p[m + 1];
  const double end = LiftIterate{F, cv.q[m], cv.p[m]}(0.0);
  const double len = std::abs(end);
  const LiftIterate eta{F, q, p};
  const double e0 = eta(0.0);
  const double image_len = std::abs(eta(end) - e0);
  // Omega_m: the level-m pair domain with R = 4 |I_m|; only V, where
  // T^{-p_{m+1}} F^{q_{m+1}} is the pair map.
  const double R = kDomainRadiusFactor * len;
  const DomainGrid d = domain_grid(F, m, R, default_domain_window(R, resolution));
  const ComplexWindow& w = d.grid.window;
  std::vector<cplx> pool;
  for (int row = 0; row < w.resolution; ++row)
    for (int col = 0; col < w.resolution; ++col) {
      const PixelLabel l = d.grid.at(col, row);
      if (l != PixelLabel::DomainV && l != PixelLabel::DomainBoth) continue;
      const cplx z = w.point(col, row);
      const double r = std::abs(z) / len;
      if (r >= 0.5 && r <= 5.0) pool.push_back(z);
    }
  if (pool.size() < 10) throw DomainError("cubic_estimate_fit: insufficient samples in the domain");
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
  std::uniform_real_distribution<double> jitter(-0.5, 0.5);
  CubicFit fit;
  std::vector<double> ys;
  while (fit.log_x.size() < sample_count) {
    const cplx z = pool[pick(rng)] + cplx(jitter(rng) * w.dx(), jitter(rng) * w.dy());
    const double r = std::abs(z) / len;
    if (r < 0.5 || r > 5.0) continue;
    const ComplexOrbit o = complex_iterate(F, q, p, z);
    if (o.escaped) continue;
    fit.log_x.push_back(std::log(r));
    ys.push_back(std::abs(o.value - e0) / image_len);
  }
  CubicFit out = fit_offset_power_law(fit.log_x, ys);
  return out;
}

CubicFit fit_offset_power_law(const std::vector<double>& log_x, const std::vector<double>& ys) {
  if (log_x.size() != ys.size() || ys.size() < 3) throw DomainError("fit: need at least 3 points");
  for (double v : ys)
    if (!(v > 0.0)) throw DomainError("fit: values must be positive");
  CubicFit fit;
  fit.log_x = log_x;
  fit.samples = ys.size();
  const double ymin = *std::min_element(ys.begin(), ys.end());
  // Model y = exp(a) x^s - d0 with residuals in log y, so the response does
  // not depend on d0. Gauss-Newton in (a, s) for each d0, then a scan and
  // golden-section search over d0.
  std::vector<double> ly(ys.size());
  for (std::size_t i = 0; i < ys.size(); ++i) ly[i] = std::log(ys[i]);
  double a0 = 0.0, s0 = 0.0, rms0 = 0.0;
  linear_fit(fit.log_x, ly, s0, a0, rms0);
  auto sse = [&](double d0, double a, double sl) {
    double out = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double m = std::exp(a + sl * fit.log_x[i]) - d0;
      if (!(m > 0.0)) return std::numeric_limits<double>::infinity();
      const double r = ly[i] - std::log(m);
      out += r * r;
    }
    return out;
  };
  auto solve = [&](double d0, double& a, double& sl) {
    a = a0;
    sl = s0;
    double cur = sse(d0, a, sl);
    for (int it = 0; it < 50 && std::isfinite(cur); ++it) {
      double jaa = 0, jas = 0, jss = 0, ga = 0, gs = 0;
      for (std::size_t i = 0; i < ys.size(); ++i) {
        const double e = std::exp(a + sl * fit.log_x[i]);
        const double m = e - d0;
        const double r = ly[i] - std::log(m);
        const double da = e / m, ds = e * fit.log_x[i] / m;
        jaa += da * da;
        jas += da * ds;
        jss += ds * ds;
        ga += da * r;
        gs += ds * r;
      }
      const double det = jaa * jss - jas * jas;
      if (!(std::abs(det) > 0.0)) break;
      double step_a = (jss * ga - jas * gs) / det, step_s = (jaa * gs - jas * ga) / det;
      double t = 1.0, next = sse(d0, a + step_a, sl + step_s);
      while (!(next <= cur) && t > 1e-6) {
        t *= 0.5;
        next = sse(d0, a + t * step_a, sl + t * step_s);
      }
      if (!(next <= cur)) break;
      a += t * step_a;
      sl += t * step_s;
      const bool done = cur - next <= 1e-14 * (1.0 + cur);
      cur = next;
      if (done) break;
    }
    return cur;
  };
  double aa = 0.0, ss = 0.0;
  const double lo = -0.9 * ymin, hi = 1.0;
  double best = 0.0, best_sse = std::numeric_limits<double>::infinity();
  for (int k = 0; k <= 100; ++k) {
    const double d0 = lo + (hi - lo) * k / 100.0;
    const double v = solve(d0, aa, ss);
    if (v < best_sse) {
      best_sse = v;
      best = d0;
    }
  }
  const double step = (hi - lo) / 100.0;
  double left = std::max(lo, best - step), right = std::min(hi, best + step);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 50; ++it) {
    const double x1 = right - g * (right - left), x2 = left + g * (right - left);
    if (solve(x1, aa, ss) < solve(x2, aa, ss))
      right = x2;
    else
      left = x1;
  }
  fit.offset = 0.5 * (left + right);
  const double final_sse = solve(fit.offset, fit.intercept, fit.slope);
  fit.rms = std::sqrt(final_sse / static_cast<double>(ys.size()));
  double mean = 0.0, var = 0.0;
  for (double v : ly) mean += v;
  mean /= static_cast<double>(ly.size());
  for (double v : ly) var += (v - mean) * (v - mean);
  fit.r2 = 1.0 - final_sse / var;
  fit.log_y = ly;
  return fit;
}

void write_ppm(std::ostream& os, const LabeledGrid& grid) {
  const int n = grid.window.resolution;
  os << "P6\n" << n << ' ' << n << "\n255\n";
  std::vector<unsigned char> buf(static_cast<std::size_t>(n) * n * 3);
  for (std::size_t i = 0; i < grid.labels.size(); ++i) {
    unsigned char rgb[3] = {255, 255, 255};
    switch (grid.labels[i]) {
      case PixelLabel::Escaped: {
        const double h = std::fmod(grid.escape_iter[i] / 24.0, 1.0) * 6.0;
        const int sector = static_cast<int>(h);
        const double f = h - sector;
        const auto c = [](double v) { return static_cast<unsigned char>(std::lround(40.0 + 215.0 * v)); };
        const unsigned char hi = c(1.0), lo = c(0.0), up = c(f), dn = c(1.0 - f);
        const unsigned char table[6][3] = {{hi, up, lo}, {dn, hi, lo}, {lo, hi, up},
                                           {lo, dn, hi}, {up, lo, hi}, {hi, lo, dn}};
        std::copy(table[sector % 6], table[sector % 6] + 3, rgb);
        break;
      }
      case PixelLabel::Bounded: rgb[0] = rgb[1] = rgb[2] = 0; break;
      case PixelLabel::DomainU: rgb[0] = 230; rgb[1] = 150; rgb[2] = 30; break;
      case PixelLabel::DomainV: rgb[0] = 30; rgb[1] = 120; rgb[2] = 220; break;
      case PixelLabel::DomainBoth: rgb[0] = 200; rgb[1] = 20; rgb[2] = 40; break;
      case PixelLabel::Outside: break;
    }
    std::copy(rgb, rgb + 3, buf.begin() + static_cast<std::ptrdiff_t>(3 * i));
  }
  os.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
}

}  // namespace critlab

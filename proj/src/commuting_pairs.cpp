#include "critlab/commuting_pairs.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>

#include "critlab/errors.hpp"

namespace critlab {

namespace {

RealMap symbolic_map(const Lift& F, std::int64_t q, std::int64_t p, const ext256& s) {
  return RealMap::lift_iterate(LiftIterate{F, q, p}, s);
}

// T^{-p} F^q (0) in the lift's working precision.
ext256 raw_orbit_value(const Lift& F, std::int64_t q, std::int64_t p) {
  return with_precision(F.precision(), [&](auto zero) {
    using T = decltype(zero);
    return ext256(LiftIterate{F, q, p}.eval<T>(T(0)));
  });
}

double sign_of(double x) { return x < 0.0 ? -1.0 : 1.0; }

// Largest value of s * (eta(y) - y) on the segment between 0 and y_end; the
// orbit of xi(0) stalls at a fixed point only if this reaches 0.
double max_displacement(const RealMap& eta, double y_end, double s) {
  constexpr int kGrid = 2000;
  auto g = [&](double y) { return s * (eta(y) - y); };
  int best_i = kGrid;
  double best = g(y_end);
  for (int i = 0; i < kGrid; ++i) {
    const double v = g(y_end * i / kGrid);
    if (v > best) {
      best = v;
      best_i = i;
    }
  }
  double a = y_end * std::max(0, best_i - 1) / kGrid;
  double b = y_end * std::min(kGrid, best_i + 1) / kGrid;
  if (a > b) std::swap(a, b);
  const double ratio = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - ratio * (b - a), d = a + ratio * (b - a);
  double gc = g(c), gd = g(d);
  for (int it = 0; it < 200 && b - a > 1e-16 * std::abs(y_end); ++it) {
    if (gc > gd) {
      b = d;
      d = c;
      gd = gc;
      c = b - ratio * (b - a);
      gc = g(c);
    } else {
      a = c;
      c = d;
      gc = gd;
      d = a + ratio * (b - a);
      gd = g(d);
    }
  }
  return std::max({best, gc, gd});
}

CommutingPair prerenormalize_at(const CommutingPair& z, const Height& h, RenormPath path) {
  if (h.chi.is_infinite())
    throw DomainError("prerenormalize: the pair has infinite height");
  const std::int64_t r = h.chi.value();
  const bool symbolic = path == RenormPath::Symbolic || (path == RenormPath::Auto && z.symbolic);
  CommutingPair out;
  if (symbolic) {
    if (!z.symbolic) throw DomainError("prerenormalize: pair is not lift-backed");
    const SymbolicPair& s = *z.symbolic;
    SymbolicPair n = s;
    n.q_eta = r * s.q_eta + s.q_xi;
    n.p_eta = r * s.p_eta + s.p_xi;
    n.q_xi = s.q_eta;
    n.p_xi = s.p_eta;
    out = CommutingPair::from_symbolic(std::move(n), z.level + 1, z.origin);
  } else {
    RealMap eta = RealMap::compose({RealMap::power(z.eta, r), z.xi});
    out = CommutingPair::from_maps(std::move(eta), z.eta, z.level + 1, z.origin);
  }
  out.scale = z.scale;
  return out;
}

}  // namespace

CommutingPair CommutingPair::from_maps(RealMap eta, RealMap xi, int level, std::string origin) {
  CommutingPair z;
  z.eta0 = eta(0.0);
  z.xi0 = xi(0.0);
  z.eta = std::move(eta);
  z.xi = std::move(xi);
  z.level = level;
  z.origin = std::move(origin);
  return z;
}

CommutingPair CommutingPair::from_symbolic(SymbolicPair sym, int level, std::string origin) {
  CommutingPair z = from_maps(symbolic_map(sym.lift, sym.q_eta, sym.p_eta, sym.scale),
                              symbolic_map(sym.lift, sym.q_xi, sym.p_xi, sym.scale), level,
                              std::move(origin));
  z.scale = static_cast<double>(sym.scale);
  z.symbolic = std::move(sym);
  return z;
}

CommutingPair circle_pair(const Lift& F) {
  SymbolicPair s{F, 1, 0, 0, 1, ext256(1)};
  return normalize(CommutingPair::from_symbolic(std::move(s), -1, F.describe()));
}

CommutingPair base_pair(const Lift& F, std::int64_t r0) {
  if (r0 < 1) throw DomainError("base_pair: r0 must be >= 1");
  SymbolicPair s{F, r0, 1, 1, 0, ext256(1)};
  CommutingPair z = CommutingPair::from_symbolic(std::move(s), 0, F.describe());
  if (z.eta0 == 0.0)
    throw InvariantError("base_pair: the critical orbit hits 0 (eta(0) = 0)");
  if (!(z.eta0 < 0.0 && z.xi0 > 0.0))
    throw InvariantError("base_pair: r0 = " + std::to_string(r0) +
                         " does not put eta(0) and xi(0) on opposite sides of 0");
  return z;
}

PairDiagnostics check_pair(const CommutingPair& z, double tol) {
  PairDiagnostics d;
  d.opposite_sides = z.eta0 * z.xi0 < 0.0;
  const double len = z.len_eta();
  const double delta = 0.05 * std::min(std::abs(z.eta0), std::abs(z.xi0));
  double res = 0.0;
  constexpr int kSamples = 33;
  for (int i = 0; i < kSamples; ++i) {
    const double x = -delta + 2.0 * delta * i / (kSamples - 1);
    res = std::max(res, std::abs(z.eta(z.xi(x)) - z.xi(z.eta(x))));
  }
  d.commutation_residual = len > 0.0 ? res / len : res;
  const double back = z.xi(z.eta0);
  const double s = sign_of(z.xi0);
  d.return_in_domain = s * back >= 0.0 && s * back <= s * z.xi0;
  d.pass = d.opposite_sides && d.return_in_domain && d.commutation_residual <= tol;
  return d;
}

Height height(const CommutingPair& z, const HeightOptions& opts) {
  const double s = sign_of(z.xi0);
  const double len = z.len_eta();
  if (len == 0.0) throw DomainError("height: degenerate pair (xi(0) = 0)");
  // Points within zero_tol of 0 count as landing on 0.
  const double at_zero = opts.zero_tol * len;
  double y = z.xi0;
  int stalled = 0;
  for (std::int64_t r = 0; r <= opts.cap; ++r) {
    const double next = z.eta(y);
    if (!std::isfinite(next)) throw NumericalError("height: orbit left the finite range");
    if (s * next < -at_zero) {
      if (r == 0) throw InvariantError("height: eta(xi(0)) already lies past 0");
      return {Quotient(r), std::abs(y) <= at_zero ? 0.0 : y};
    }
    const double step = std::abs(next - y);
    if (step < opts.stall_fraction * len)
      ++stalled;
    else
      stalled = 0;
    if (stalled >= opts.stall_steps) {
      if (step == 0.0 || max_displacement(z.eta, next, s) >= -1e-13 * len) return {kInfinity, next};
      stalled = 0;
    }
    y = next;
  }
  throw BudgetError("height: orbit did not cross 0 within " + std::to_string(opts.cap) + " steps");
}

CommutingPair prerenormalize(const CommutingPair& z, RenormPath path, const HeightOptions& opts) {
  return prerenormalize_at(z, height(z, opts), path);
}

CommutingPair normalize(const CommutingPair& z) {
  if (z.xi0 == 0.0) throw DomainError("normalize: degenerate pair (xi(0) = 0)");
  if (z.xi0 == 1.0) return z;
  if (z.symbolic) {
    SymbolicPair n = *z.symbolic;
    n.scale = raw_orbit_value(n.lift, n.q_xi, n.p_xi);
    if (n.scale == 0) throw DomainError("normalize: degenerate pair (xi(0) = 0)");
    CommutingPair out = CommutingPair::from_symbolic(std::move(n), z.level, z.origin);
    return out;
  }
  const double l = z.xi0;
  CommutingPair out = CommutingPair::from_maps(RealMap::affine_conjugate(z.eta, l),
                                               RealMap::affine_conjugate(z.xi, l), z.level,
                                               z.origin);
  out.xi0 = 1.0;
  out.scale = z.scale * l;
  return out;
}

CommutingPair renormalize(const CommutingPair& z, RenormPath path, const HeightOptions& opts) {
  return normalize(prerenormalize(z, path, opts));
}

ContinuedFraction pair_rotation_cf(const CommutingPair& z, int depth, const HeightOptions& opts) {
  if (depth < 1) throw DomainError("pair_rotation_cf: depth must be >= 1");
  std::vector<Quotient> out;
  CommutingPair cur = z;
  for (int k = 0; k < depth; ++k) {
    const Height h = height(cur, opts);
    out.push_back(h.chi);
    if (h.chi.is_infinite()) return ContinuedFraction(std::move(out), true);
    if (h.lands_on_zero()) {
      if (k + 1 < depth) out.push_back(kInfinity);
      return ContinuedFraction(std::move(out), k + 1 < depth);
    }
    if (k + 1 < depth) cur = normalize(prerenormalize_at(cur, h, RenormPath::Auto));
  }
  return ContinuedFraction(std::move(out), false);
}

GluedMap::GluedMap(CommutingPair z) : pair_(normalize(z)) {
  left_ = pair_.eta0;
  length_ = pair_.xi(pair_.eta0) - left_;
  if (!(length_ > 0.0)) throw InvariantError("glue: xi(eta(0)) does not lie past eta(0)");
}

double GluedMap::lift(double x) const {
  if (x < 0.0) return pair_.eta(pair_.xi(x)) - length_;
  return pair_.eta(x);
}

double GluedMap::operator()(double x) const {
  double y = lift(x);
  while (y < left_) y += length_;
  while (y >= left_ + length_) y -= length_;
  return y;
}

double GluedMap::rotation(std::int64_t n) const {
  if (n < 1) throw DomainError("rotation: n must be >= 1");
  double x = 0.0;
  double total = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double y = lift(x);
    total += y - x;
    while (y < left_) y += length_;
    while (y >= left_ + length_) y -= length_;
    x = y;
  }
  return -total / (static_cast<double>(n) * length_);
}

GluedMap glue(const CommutingPair& z) { return GluedMap(z); }

double pair_distance(const CommutingPair& a, const CommutingPair& b, int grid) {
  if (grid < 2) throw DomainError("pair_distance: grid must be >= 2");
  double d_eta = 0.0, d_xi = 0.0;
  const double lo = std::max(a.eta0, b.eta0);
  for (int i = 0; i < grid; ++i) {
    const double t = static_cast<double>(i) / (grid - 1);
    d_eta = std::max(d_eta, std::abs(a.eta(t) - b.eta(t)));
    const double x = lo * (1.0 - t);
    d_xi = std::max(d_xi, std::abs(a.xi(x) - b.xi(x)));
  }
  return std::max(d_eta, d_xi) + std::abs(a.eta0 - b.eta0);
}

EpsteinMetrics epstein_metrics(const std::vector<CommutingPair>& orbit) {
  if (orbit.size() < 2) throw DomainError("epstein_metrics: need at least two levels");
  EpsteinMetrics m;
  m.min_ratio = std::numeric_limits<double>::infinity();
  m.max_ratio = 0.0;
  double k_all = 0.0, k_late = 0.0;
  bool any_late = false;
  for (const auto& z : orbit) {
    const double r = z.len_xi() / z.len_eta();
    m.ratios.push_back(r);
    m.min_ratio = std::min(m.min_ratio, r);
    m.max_ratio = std::max(m.max_ratio, r);
    const double k = std::max(r, 1.0 / r);
    k_all = std::max(k_all, k);
    if (z.level >= 3) {
      k_late = std::max(k_late, k);
      any_late = true;
    }
  }
  m.K = any_late ? k_late : k_all;
  return m;
}

OrbitLog renorm_orbit(const CommutingPair& z, int n, const OrbitLog* reference, RenormPath path,
                      const HeightOptions& opts) {
  if (n < 1) throw DomainError("renorm_orbit: n must be >= 1");
  OrbitLog log;
  CommutingPair cur = normalize(z);
  for (int k = 0; k < n; ++k) {
    const Height h = height(cur, opts);
    OrbitRow row;
    row.m = cur.level;
    row.height = h.chi;
    row.len_eta = std::abs(cur.scale) * cur.len_eta();
    row.len_xi = std::abs(cur.scale) * cur.len_xi();
    row.ratio = cur.len_xi() / cur.len_eta();
    if (reference && k < static_cast<int>(reference->pairs.size()))
      row.distance = pair_distance(cur, reference->pairs[static_cast<std::size_t>(k)]);
    log.rows.push_back(row);
    log.pairs.push_back(cur);
    if (h.chi.is_infinite()) {
      log.parabolic_stop = true;
      break;
    }
    if (h.lands_on_zero()) {
      log.degenerate_stop = true;
      break;
    }
    if (k + 1 < n) cur = normalize(prerenormalize_at(cur, h, path));
  }
  return log;
}

void write_orbit_csv(std::ostream& os, const OrbitLog& log) {
  const auto old_flags = os.flags();
  const auto old_prec = os.precision();
  os << std::setprecision(17);
  os << "m,height,len_eta,len_xi,ratio,distance\n";
  for (const auto& r : log.rows) {
    os << r.m << ',';
    if (r.height.is_infinite())
      os << "inf";
    else
      os << r.height.value();
    os << ',' << r.len_eta << ',' << r.len_xi << ',' << r.ratio << ',';
    if (r.distance) os << *r.distance;
    os << '\n';
  }
  os.flags(old_flags);
  os.precision(old_prec);
}

ContinuedFraction rotation_number_cf(const Lift& F, int depth) {
  if (depth < 1) throw DomainError("rotation_number_cf: depth must be >= 1");
  // r0: from the averaged estimate, verified by F^{r0}(0) <= 1 < F^{r0+1}(0).
  const RotationEstimate first = rotation_number_real(F, 100'000);
  std::int64_t r0 = 0;
  RotationEstimate est = first;
  if (first.value > 2.0 * first.bound) {
    const double guess = std::floor(1.0 / first.value);
    const std::int64_t n = std::max<std::int64_t>(100'000, static_cast<std::int64_t>(100 * guess * guess));
    if (n > 100'000) est = rotation_number_real(F, n);
    r0 = std::max<std::int64_t>(1, static_cast<std::int64_t>(std::floor(1.0 / est.value)));
    auto orbit = [&](std::int64_t k) { return LiftIterate{F, k, 0}(0.0); };
    for (int adjust = 0; adjust < 4; ++adjust) {
      if (orbit(r0) > 1.0 && r0 > 1) {
        --r0;
      } else if (orbit(r0 + 1) <= 1.0) {
        ++r0;
      } else {
        break;
      }
    }
    if (!(orbit(r0) <= 1.0 && orbit(r0 + 1) > 1.0)) r0 = 0;
  }
  std::vector<Quotient> qs;
  if (r0 == 0) {
    // Too close to 0 for the estimate: the height of the circle pair decides.
    const Height h = height(circle_pair(F));
    if (h.chi.is_infinite()) return ContinuedFraction({kInfinity}, true);
    r0 = h.chi.value();
  }
  qs.emplace_back(r0);
  bool exhausted = false;
  if (depth > 1) {
    const LiftIterate it{F, r0, 1};
    if (it(0.0) == 0.0) {
      qs.emplace_back(kInfinity);
      exhausted = true;
    } else {
      const ContinuedFraction rest = pair_rotation_cf(base_pair(F, r0), depth - 1);
      for (const auto& q : rest.quotients()) qs.push_back(q);
      exhausted = rest.exhausted();
    }
  }
  ContinuedFraction cf(std::move(qs), exhausted);
  // Cross-check the certified leading quotients against the real estimate.
  if (est.value - est.bound > 0.0 && est.value + est.bound < 1.0) {
    const auto lo = cf_from_real(est.value - est.bound, depth);
    const auto hi = cf_from_real(est.value + est.bound, depth);
    for (std::size_t i = 0; i < cf.size() && i + 1 < lo.size() && i + 1 < hi.size(); ++i) {
      if (lo[i].is_infinite() || hi[i].is_infinite() || !(lo[i] == hi[i])) break;
      if (cf[i].is_infinite() || !(cf[i] == lo[i]))
        throw NumericalError("rotation_number_cf: quotient " + std::to_string(i) +
                             " disagrees with the averaged estimate");
    }
  }
  return cf;
}

}  // namespace critlab

#include "critlab/circle_maps.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/math/constants/constants.hpp>

#include "critlab/errors.hpp"
#include "critlab/rotation.hpp"

namespace critlab {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

template <class T>
T two_pi() {
  if constexpr (std::is_same_v<T, double>)
    return kTwoPi;
  else
    return boost::math::constants::two_pi<T>();
}

double central_difference(const std::function<double(double)>& f, double x) {
  const double h = 1e-5;
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::Arnold:
      return "arnold";
    case Family::TwoHarmonic:
      return "two_harmonic";
    case Family::Custom:
      return "custom";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "arnold") return Family::Arnold;
  if (s == "two_harmonic" || s == "two-harmonic") return Family::TwoHarmonic;
  throw DomainError("unknown family '" + s + "'");
}

void Lift::set_theta(const ext256& theta) {
  using boost::multiprecision::floor;
  theta_ext_ = theta - floor(theta);
  theta_ = static_cast<double>(theta_ext_);
}

Lift Lift::arnold(double theta, Precision precision) {
  return arnold(ext256(theta), precision);
}

Lift Lift::arnold(const ext256& theta, Precision precision) {
  Lift F;
  F.family_ = Family::Arnold;
  F.precision_ = precision;
  F.set_theta(theta);
  return F;
}

Lift Lift::two_harmonic(double theta, double c, Precision precision) {
  return two_harmonic(ext256(theta), c, precision);
}

Lift Lift::two_harmonic(const ext256& theta, double c, Precision precision) {
  if (!(c >= 0.0 && c <= 0.25))
    throw ParameterError("two_harmonic: c must lie in [0, 1/4], got " + std::to_string(c));
  Lift F;
  F.family_ = Family::TwoHarmonic;
  F.c_ = c;
  F.precision_ = precision;
  F.set_theta(theta);
  return F;
}

Lift Lift::custom(CustomLift spec) {
  if (!spec.f) throw DomainError("custom lift needs an evaluator");
  Lift F;
  F.family_ = Family::Custom;
  F.custom_ = std::make_shared<const CustomLift>(std::move(spec));
  return F;
}

Lift Lift::rigid(double shift) {
  CustomLift spec;
  std::ostringstream name;
  name.precision(17);
  name << "rigid(" << shift << ")";
  spec.name = name.str();
  spec.f = [shift](double x) { return x + shift; };
  spec.df = [](double) { return 1.0; };
  spec.d2f = [](double) { return 0.0; };
  spec.d3f = [](double) { return 0.0; };
  spec.fz = [shift](cplx z) { return z + shift; };
  spec.dfz = [](cplx) { return cplx(1.0); };
  Lift F = custom(std::move(spec));
  F.theta_ = shift;
  F.theta_ext_ = shift;
  return F;
}

Lift Lift::with_precision(Precision p) const {
  Lift F = *this;
  F.precision_ = p;
  return F;
}

Lift Lift::with_theta(const ext256& theta) const {
  if (family_ == Family::Custom) throw DomainError("custom lifts have no theta parameter");
  Lift F = *this;
  F.set_theta(theta);
  return F;
}

std::string Lift::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (family_) {
    case Family::Arnold:
      os << "arnold(theta=" << theta_ << ")";
      break;
    case Family::TwoHarmonic:
      os << "two_harmonic(theta=" << theta_ << ", c=" << c_ << ")";
      break;
    case Family::Custom:
      os << custom_->name;
      break;
  }
  return os.str();
}

template <class T>
T Lift::eval(const T& x) const {
  using std::sin;
  using boost::multiprecision::sin;
  if (family_ == Family::Custom) return T(custom_->f(static_cast<double>(x)));
  const T tp = two_pi<T>();
  const T th = [&] {
    if constexpr (std::is_same_v<T, double>)
      return theta_;
    else
      return static_cast<T>(theta_ext_);
  }();
  const T s1 = sin(tp * x);
  if (family_ == Family::Arnold) return x + th - s1 / tp;
  const T c = T(c_);
  return x + th - (T(1) + c) * s1 / tp + c * sin(T(2) * tp * x) / (T(2) * tp);
}

template <class T>
T Lift::derivative(const T& x) const {
  using std::cos;
  using boost::multiprecision::cos;
  if (family_ == Family::Custom) return T(jet(static_cast<double>(x)).d);
  const T tp = two_pi<T>();
  const T c1 = cos(tp * x);
  if (family_ == Family::Arnold) return T(1) - c1;
  const T c = T(c_);
  return T(1) - (T(1) + c) * c1 + c * cos(T(2) * tp * x);
}

template double Lift::derivative<double>(const double&) const;
template ext128 Lift::derivative<ext128>(const ext128&) const;
template ext256 Lift::derivative<ext256>(const ext256&) const;

template <>
cplx Lift::derivative<cplx>(const cplx& z) const {
  if (family_ == Family::Custom) {
    if (!custom_->dfz) throw DomainError(custom_->name + " has no complex derivative");
    return custom_->dfz(z);
  }
  const cplx c1 = std::cos(kTwoPi * z);
  if (family_ == Family::Arnold) return 1.0 - c1;
  return 1.0 - (1.0 + c_) * c1 + c_ * std::cos(2.0 * kTwoPi * z);
}

template double Lift::eval<double>(const double&) const;
template ext128 Lift::eval<ext128>(const ext128&) const;
template ext256 Lift::eval<ext256>(const ext256&) const;

cplx Lift::operator()(cplx z) const {
  if (family_ == Family::Custom) {
    if (!custom_->fz) throw DomainError(custom_->name + " has no complex extension");
    return custom_->fz(z);
  }
  const cplx s1 = std::sin(kTwoPi * z);
  if (family_ == Family::Arnold) return z + theta_ - s1 / kTwoPi;
  return z + theta_ - (1.0 + c_) * s1 / kTwoPi + c_ * std::sin(2.0 * kTwoPi * z) / (2.0 * kTwoPi);
}

bool Lift::has_complex_extension() const {
  return family_ != Family::Custom || static_cast<bool>(custom_->fz);
}

Jet Lift::jet(double x) const {
  if (family_ == Family::Custom) {
    const double d = custom_->df ? custom_->df(x) : central_difference(custom_->f, x);
    return {custom_->f(x), d};
  }
  const double a = kTwoPi * x;
  if (family_ == Family::Arnold) return {eval<double>(x), 1.0 - std::cos(a)};
  return {eval<double>(x), 1.0 - (1.0 + c_) * std::cos(a) + c_ * std::cos(2.0 * a)};
}

Jet2 Lift::jet2(double x) const {
  if (family_ == Family::Custom) {
    const Jet j = jet(x);
    double dd = 0.0;
    if (custom_->d2f) {
      dd = custom_->d2f(x);
    } else {
      const double h = 1e-4;
      dd = (custom_->f(x + h) - 2 * custom_->f(x) + custom_->f(x - h)) / (h * h);
    }
    return {j.v, j.d, dd};
  }
  const double a = kTwoPi * x;
  const Jet j = jet(x);
  if (family_ == Family::Arnold) return {j.v, j.d, kTwoPi * std::sin(a)};
  return {j.v, j.d, kTwoPi * (1.0 + c_) * std::sin(a) - 2.0 * kTwoPi * c_ * std::sin(2.0 * a)};
}

double Lift::d3(double x) const {
  if (family_ == Family::Custom) {
    if (custom_->d3f) return custom_->d3f(x);
    const double h = 1e-3;
    const auto& f = custom_->f;
    return (f(x + 2 * h) - 2 * f(x + h) + 2 * f(x - h) - f(x - 2 * h)) / (2 * h * h * h);
  }
  const double a = kTwoPi * x;
  const double k2 = kTwoPi * kTwoPi;
  if (family_ == Family::Arnold) return k2 * std::cos(a);
  return k2 * (1.0 + c_) * std::cos(a) - 4.0 * k2 * c_ * std::cos(2.0 * a);
}

ComplexJet Lift::cjet(cplx z) const {
  if (family_ == Family::Custom) {
    if (!custom_->fz) throw DomainError(custom_->name + " has no complex extension");
    cplx d;
    if (custom_->dfz) {
      d = custom_->dfz(z);
    } else {
      const double h = 1e-6;
      d = (custom_->fz(z + h) - custom_->fz(z - h)) / (2 * h);
    }
    return {custom_->fz(z), d};
  }
  const cplx a = kTwoPi * z;
  if (family_ == Family::Arnold) return {(*this)(z), 1.0 - std::cos(a)};
  return {(*this)(z), 1.0 - (1.0 + c_) * std::cos(a) + c_ * std::cos(2.0 * a)};
}

Lift arnold_lift(double theta) { return Lift::arnold(theta); }
Lift two_harmonic_lift(double theta, double c) { return Lift::two_harmonic(theta, c); }

LiftDiagnostics validate_lift(const Lift& F) {
  LiftDiagnostics d;
  constexpr int kGrid = 4096;
  double scale = 1.0;
  double min_deriv = std::numeric_limits<double>::infinity();
  double defect = 0.0;
  for (int i = 0; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double fx = F(x);
    scale = std::max(scale, std::abs(fx));
    defect = std::max(defect, std::abs(F(x + 1.0) - fx - 1.0));
    min_deriv = std::min(min_deriv, F.jet(x).d);
  }
  d.periodicity_defect = defect;
  d.min_derivative = min_deriv;
  const Jet2 j0 = F.jet2(0.0);
  d.d1_at_0 = j0.d;
  d.d2_at_0 = j0.dd;
  d.d3_at_0 = F.d3(0.0);
  d.pass = defect <= 1e-12 * scale && min_deriv >= -1e-12 && d.d3_at_0 > 0.0;
  return d;
}

double LiftIterate::operator()(double x) const {
  return with_precision(base.precision(), [&](auto zero) {
    using T = decltype(zero);
    return static_cast<double>(eval<T>(T(x)));
  });
}

cplx LiftIterate::operator()(cplx z) const {
  for (std::int64_t i = 0; i < q; ++i) z = base(z);
  return z - static_cast<double>(p);
}

Jet LiftIterate::jet(double x) const {
  double d = 1.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const Jet j = base.jet(x);
    d *= j.d;
    x = j.v;
  }
  return {x - static_cast<double>(p), d};
}

Jet2 LiftIterate::jet2(double x) const {
  double d = 1.0, dd = 0.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const Jet2 j = base.jet2(x);
    dd = j.dd * d * d + j.d * dd;
    d *= j.d;
    x = j.v;
  }
  return {x - static_cast<double>(p), d, dd};
}

ComplexJet LiftIterate::cjet(cplx z) const {
  cplx d = 1.0;
  for (std::int64_t i = 0; i < q; ++i) {
    const ComplexJet j = base.cjet(z);
    d *= j.d;
    z = j.v;
  }
  return {z - static_cast<double>(p), d};
}

RotationEstimate rotation_number_real(const Lift& F, std::int64_t n) {
  if (n < 1) throw DomainError("rotation_number_real: n must be >= 1");
  const double a = rotation_average([&](double x) { return F(x); }, n, 0.0);
  const double seed = 1e-9;
  const double b = rotation_average([&](double x) { return F(x); }, n, seed);
  if (!std::isfinite(a) || !std::isfinite(b))
    throw NumericalError("rotation_number_real: orbit is not finite");
  // Two orbits of a monotone degree-one lift started less than 1 apart stay
  // less than 1 apart, so their averages differ by < 1/n plus rounding.
  const double bound = 1.0 / static_cast<double>(n);
  if (std::abs(a - b) > 2.0 * bound + 1e-12)
    throw NumericalError("rotation_number_real: precision loss along the orbit");
  return {a, bound};
}

Lift FamilySpec::at(double theta) const { return at(ext256(theta)); }

Lift FamilySpec::at(const ext256& theta) const {
  switch (family) {
    case Family::Arnold:
      return Lift::arnold(theta, precision);
    case Family::TwoHarmonic:
      return Lift::two_harmonic(theta, c, precision);
    case Family::Custom:
      break;
  }
  throw DomainError("FamilySpec: custom lifts cannot be reparametrized");
}

namespace {

// theta enters the family lifts additively, so F_{theta+1} = F_theta + 1 and
// every monotone predicate below is evaluated on an unreduced parameter.
template <class T>
T family_eval(const FamilySpec& fam, const T& theta, const T& x) {
  using std::sin;
  using boost::multiprecision::sin;
  const T tp = two_pi<T>();
  const T s1 = sin(tp * x);
  if (fam.family == Family::Arnold) return x + theta - s1 / tp;
  const T c = T(fam.c);
  return x + theta - (T(1) + c) * s1 / tp + c * sin(T(2) * tp * x) / (T(2) * tp);
}

template <class T>
ParameterSolution solve_parameter_impl(const FamilySpec& fam, const ContinuedFraction& target,
                                       double tol, int max_steps, double seed_lo = 0.0,
                                       double seed_hi = 1.0) {
  ParameterSolution sol;
  T lo = seed_lo, hi = seed_hi;
  if (target.exhausted()) {
    // Rational target: the parameter with a periodic critical orbit,
    // F^q(0) = p, which is strictly increasing in theta.
    const auto r = target.finite_prefix();
    const Convergents c = convergents(target, static_cast<int>(r.size()));
    const std::int64_t q = c.q.back(), p = c.p.back();
    auto g = [&](const T& th) {
      T x = 0;
      for (std::int64_t i = 0; i < q; ++i) x = family_eval<T>(fam, th, x);
      return x - T(p);
    };
    int step = 0;
    for (; step < max_steps; ++step) {
      const T mid = (lo + hi) / 2;
      if (mid == lo || mid == hi) break;
      if (g(mid) < 0)
        lo = mid;
      else
        hi = mid;
      if (static_cast<double>(hi - lo) < tol * 1e-6 && step > 60) break;
    }
    sol.theta_ext = ext256((lo + hi) / 2);
    sol.theta = static_cast<double>(sol.theta_ext);
    sol.rho_bound = 0.0;
    sol.bisection_steps = step;
    return sol;
  }
  // Irrational-type target: bisection on the closest-return comparison.
  // Iterate just far enough that an undecided comparison certifies tol.
  std::int64_t budget = 1;
  {
    const auto r = target.finite_prefix();
    double q_prev = 0, q_cur = 1;
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double q_next = static_cast<double>(r[k]) * q_cur + q_prev;
      q_prev = q_cur;
      q_cur = q_next;
      if (q_cur > 1e9) break;
      budget = static_cast<std::int64_t>(q_cur);
      if (1.0 / (q_cur * q_prev) <= tol) break;
    }
  }
  RotationComparison last;
  int step = 0;
  T mid = (lo + hi) / 2;
  for (; step < max_steps; ++step) {
    mid = (lo + hi) / 2;
    if (mid == lo || mid == hi) break;
    last = compare_rotation<T>([&](const T& x) { return family_eval<T>(fam, mid, x); }, target, 0,
                               T(0), budget);
    if (last.side == RotationSide::Undecided) break;
    if (last.side == RotationSide::Below)
      lo = mid;
    else
      hi = mid;
  }
  if (last.side != RotationSide::Undecided || last.certified_bound > tol) {
    // Bracket collapsed before the comparison certified the target; accept it
    // only if the collapsed bracket itself certifies the tolerance.
    const RotationComparison at = compare_rotation<T>(
        [&](const T& x) { return family_eval<T>(fam, mid, x); }, target, 0, T(0), budget);
    if (at.side != RotationSide::Undecided || at.certified_bound > tol)
      throw ConvergenceError("solve_parameter: could not certify " + target.to_string() +
                             " within tolerance (target too short or budget exhausted)");
    last = at;
  }
  sol.theta_ext = ext256(mid);
  sol.theta = static_cast<double>(sol.theta_ext);
  sol.rho_bound = last.certified_bound;
  sol.bisection_steps = step;
  return sol;
}

// min (or max) over one period of F^q(x) - x - p, located on a grid then
// refined by Newton on the derivative (F^q)' - 1.
struct Extremum {
  double x = 0.0;
  double value = 0.0;
};

Extremum periodic_extremum(const LiftIterate& it, bool find_min) {
  constexpr int kGrid = 2048;
  double best_x = 0.0;
  double best = find_min ? std::numeric_limits<double>::infinity()
                         : -std::numeric_limits<double>::infinity();
  for (int i = 0; i < kGrid; ++i) {
    const double x = static_cast<double>(i) / kGrid;
    const double v = it(x) - x;
    if (find_min ? v < best : v > best) {
      best = v;
      best_x = x;
    }
  }
  double x = best_x;
  const double h = 1.0 / kGrid;
  for (int k = 0; k < 60; ++k) {
    const Jet2 j = it.jet2(x);
    const double g = j.d - 1.0;
    if (j.dd == 0.0) break;
    double dx = -g / j.dd;
    dx = std::clamp(dx, -h, h);
    x += dx;
    if (std::abs(dx) < 1e-15) break;
  }
  const double vx = it(x) - x;
  if (find_min ? vx <= best : vx >= best) return {x, vx};
  return {best_x, best};
}

}  // namespace

ParameterSolution solve_parameter(const FamilySpec& family, const ContinuedFraction& target,
                                  double tol, int max_steps) {
  if (!(tol > 0.0)) throw DomainError("solve_parameter: tol must be positive");
  if (family.family == Family::Custom) throw DomainError("solve_parameter: family lifts only");
  const double value = real_from_cf(target);
  if (!(value > 0.0 && value < 1.0))
    throw DomainError("solve_parameter: target value must lie in (0,1)");
  if (family.precision == Precision::Double || target.exhausted())
    return with_precision(family.precision, [&](auto zero) {
      using T = decltype(zero);
      return solve_parameter_impl<T>(family, target, tol, max_steps);
    });
  // Extended arithmetic is slow; locate a coarse bracket in double first and
  // confirm its ends in the working precision before refining.
  double seed_lo = 0.0, seed_hi = 1.0;
  try {
    const double coarse = solve_parameter_impl<double>(family, target, 1e-8, max_steps).theta;
    seed_lo = std::max(0.0, coarse - 1e-6);
    seed_hi = std::min(1.0, coarse + 1e-6);
  } catch (const ConvergenceError&) {
  }
  return with_precision(family.precision, [&](auto zero) {
    using T = decltype(zero);
    auto side_at = [&](double th) {
      const T theta(th);
      return compare_rotation<T>([&](const T& x) { return family_eval<T>(family, theta, x); },
                                 target, 0, T(0), 1'000'000)
          .side;
    };
    if (side_at(seed_lo) != RotationSide::Below || side_at(seed_hi) != RotationSide::Above) {
      seed_lo = 0.0;
      seed_hi = 1.0;
    }
    return solve_parameter_impl<T>(family, target, tol, max_steps, seed_lo, seed_hi);
  });
}

TongueBoundary tongue_boundary(const FamilySpec& family, std::int64_t p, std::int64_t q,
                               TongueSide side, double tol) {
  if (q < 1 || p < 0 || p >= q) throw DomainError("tongue_boundary: need p/q in [0,1)");
  if (!(tol > 0.0)) throw DomainError("tongue_boundary: tol must be positive");
  // Parameter inside the tongue: periodic critical orbit F^q(0) = p.
  double inside = 0.0;
  if (p > 0) {
    std::vector<Quotient> quotients;
    std::int64_t a = q, b = p;  // expand p/q
    while (b != 0) {
      quotients.emplace_back(a / b);
      const std::int64_t t = a % b;
      a = b;
      b = t;
    }
    inside = solve_parameter(FamilySpec{family.family, family.c, Precision::Double},
                             ContinuedFraction(std::move(quotients), true), 1e-15)
                 .theta;
  }
  // Right side: the tongue ends where min_x (F^q(x) - x - p) becomes positive;
  // left side: where max_x becomes negative. Both extrema are monotone in theta.
  const bool right = side == TongueSide::Right;
  double lo = right ? inside : inside - 1.0;
  double hi = right ? inside + 1.0 : inside;
  auto defect = [&](double theta) {
    const LiftIterate it{FamilySpec{family.family, family.c, Precision::Double}.at(0.0), q, p};
    LiftIterate shifted = it;
    // theta is kept unreduced through an integer shift of p.
    const double fl = std::floor(theta);
    shifted.base = FamilySpec{family.family, family.c, Precision::Double}.at(theta - fl);
    // F_theta = F_{theta - fl} + fl, so F_theta^q = F_{theta-fl}^q + q*fl.
    shifted.p = p - q * static_cast<std::int64_t>(fl);
    return periodic_extremum(shifted, right);
  };
  int steps = 0;
  while (hi - lo > 0.25 * tol * 1e-3 && steps < 200) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double v = defect(mid).value;
    const bool outside = right ? v > 0.0 : v < 0.0;
    if (right == outside)
      hi = mid;
    else
      lo = mid;
    ++steps;
  }
  const double theta = right ? lo : hi;  // the side still carrying the orbit
  const Extremum e = defect(theta);
  const double fl = std::floor(theta);
  const LiftIterate it{FamilySpec{family.family, family.c, Precision::Double}.at(theta - fl), q,
                       p - q * static_cast<std::int64_t>(fl)};
  const Jet j = it.jet(e.x);
  TongueBoundary out;
  out.theta = theta - fl;
  out.orbit_point = e.x;
  out.multiplier = j.d;
  out.residual = j.v - e.x;
  if (std::abs(out.multiplier - 1.0) > 10.0 * tol || std::abs(out.residual) > 10.0 * tol)
    throw ConvergenceError("tongue_boundary: verification failed (multiplier " +
                           std::to_string(out.multiplier) + ")");
  return out;
}

}  // namespace critlab

#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>

#include "critlab/cfrac.hpp"
#include "critlab/precision.hpp"

namespace critlab {

using cplx = std::complex<double>;

// Value with first (and optionally second) derivative.
struct Jet {
  double v = 0.0;
  double d = 0.0;
};
struct Jet2 {
  double v = 0.0;
  double d = 0.0;
  double dd = 0.0;
};
struct ComplexJet {
  cplx v;
  cplx d;
};

enum class Family { Arnold, TwoHarmonic, Custom };

std::string to_string(Family f);
Family parse_family(const std::string& s);

// Hand-written lift, used for test evaluators (rigid rotations, deliberately
// broken maps). Missing derivatives are taken by central differences; missing
// complex extension makes complex evaluation throw.
struct CustomLift {
  std::string name;
  std::function<double(double)> f;
  std::function<double(double)> df;
  std::function<double(double)> d2f;
  std::function<double(double)> d3f;
  std::function<cplx(cplx)> fz;
  std::function<cplx(cplx)> dfz;
};

// Lift F of a circle map with F(x+1) = F(x) + 1. Family lifts have a cubic
// critical point at 0:
//   arnold:        F(x) = x + theta - sin(2 pi x) / (2 pi)
//   two_harmonic:  F(x) = x + theta - (1+c) sin(2 pi x)/(2 pi) + c sin(4 pi x)/(4 pi)
class Lift {
 public:
  static Lift arnold(double theta, Precision precision = Precision::Double);
  static Lift arnold(const ext256& theta, Precision precision);
  static Lift two_harmonic(double theta, double c, Precision precision = Precision::Double);
  static Lift two_harmonic(const ext256& theta, double c, Precision precision);
  static Lift custom(CustomLift spec);
  // x + shift; no critical point.
  static Lift rigid(double shift);

  Family family() const { return family_; }
  double theta() const { return theta_; }
  const ext256& theta_ext() const { return theta_ext_; }
  double c() const { return c_; }
  Precision precision() const { return precision_; }
  Lift with_precision(Precision p) const;
  Lift with_theta(const ext256& theta) const;
  std::string describe() const;

  // Evaluation in the scalar type T (double, ext128 or ext256).
  template <class T>
  T eval(const T& x) const;

  // F'(x) in the scalar type T.
  template <class T>
  T derivative(const T& x) const;

  double operator()(double x) const { return eval<double>(x); }
  cplx operator()(cplx z) const;
  Jet jet(double x) const;
  Jet2 jet2(double x) const;
  ComplexJet cjet(cplx z) const;
  double d3(double x) const;
  bool has_complex_extension() const;

 private:
  Lift() = default;
  void set_theta(const ext256& theta);

  Family family_ = Family::Arnold;
  double theta_ = 0.0;
  ext256 theta_ext_ = 0;
  double c_ = 0.0;
  Precision precision_ = Precision::Double;
  std::shared_ptr<const CustomLift> custom_;
};

template <>
cplx Lift::derivative<cplx>(const cplx& z) const;

Lift arnold_lift(double theta);
Lift two_harmonic_lift(double theta, double c);

struct LiftDiagnostics {
  double periodicity_defect = 0.0;  // max |F(x+1) - F(x) - 1|
  double min_derivative = 0.0;      // min F' on the grid
  double d1_at_0 = 0.0;
  double d2_at_0 = 0.0;
  double d3_at_0 = 0.0;
  bool pass = false;
};

LiftDiagnostics validate_lift(const Lift& F);

// T^{-p} o F^q.
struct LiftIterate {
  Lift base;
  std::int64_t q = 1;
  std::int64_t p = 0;

  // The integer part of the orbit is carried separately so that long
  // iterates keep the absolute precision of points in [0,1).
  template <class T>
  T eval(T x) const {
    using std::floor;
    std::int64_t whole = 0;
    for (std::int64_t i = 0; i < q; ++i) {
      x = base.eval<T>(x);
      const T f = floor(x);
      whole += static_cast<std::int64_t>(f);
      x -= f;
    }
    return x + T(whole - p);
  }
  // Value and derivative of T^{-p} F^q at x in the scalar type T.
  template <class T>
  std::pair<T, T> eval_jet(T x) const {
    using std::floor;
    T d = 1;
    std::int64_t whole = 0;
    for (std::int64_t i = 0; i < q; ++i) {
      d *= base.derivative<T>(x);
      x = base.eval<T>(x);
      const T f = floor(x);
      whole += static_cast<std::int64_t>(f);
      x -= f;
    }
    return {x + T(whole - p), d};
  }
  double operator()(double x) const;  // evaluated in base.precision()
  cplx operator()(cplx z) const;
  Jet jet(double x) const;
  Jet2 jet2(double x) const;
  ComplexJet cjet(cplx z) const;
};

struct RotationEstimate {
  double value = 0.0;
  double bound = 0.0;  // |value - rho| <= bound
};

// F^n(0)/n with the bound 1/n. Throws NumericalError when the orbit is not
// finite or two nearby seeds disagree beyond the bound (precision loss).
RotationEstimate rotation_number_real(const Lift& F, std::int64_t n);

// Partial quotients of rho(F): r_0 from the real estimate checked by the
// closest-return bracket, r_1, r_2, ... as heights along the renormalization
// orbit of the base pair. Terminates with the symbol on a height-inf pair.
ContinuedFraction rotation_number_cf(const Lift& F, int depth);

struct FamilySpec {
  Family family = Family::Arnold;
  double c = 0.0;
  Precision precision = Precision::Double;

  Lift at(double theta) const;
  Lift at(const ext256& theta) const;
};

struct ParameterSolution {
  double theta = 0.0;
  ext256 theta_ext = 0;
  // Certified |rho(theta) - value(target)|; 0 for rational targets (exact
  // periodic critical orbit).
  double rho_bound = 0.0;
  int bisection_steps = 0;
};

// Bisection on theta. Rational (exhausted) targets p/q are located at the
// parameter with F^q(0) = p; irrational targets are bracketed by closest-return
// sign tests at the convergents of the target.
ParameterSolution solve_parameter(const FamilySpec& family, const ContinuedFraction& target,
                                  double tol, int max_steps = 400);

enum class TongueSide { Left, Right };

struct TongueBoundary {
  double theta = 0.0;      // reduced mod 1
  double orbit_point = 0.0;
  double multiplier = 0.0; // (F^q)' at the periodic orbit
  double residual = 0.0;   // F^q(x) - x - p at the periodic orbit
};

TongueBoundary tongue_boundary(const FamilySpec& family, std::int64_t p, std::int64_t q,
                               TongueSide side, double tol);

}  // namespace critlab

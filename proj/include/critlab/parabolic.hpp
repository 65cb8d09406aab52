#pragma once

#include <cstdint>
#include <vector>

#include "critlab/cfrac.hpp"
#include "critlab/commuting_pairs.hpp"
#include "critlab/interval_map.hpp"

namespace critlab {

struct GermOptions {
  // Radius of the circle used for the Taylor coefficients; 0 picks
  // 0.1 * (hi - lo).
  double cauchy_radius = 0.0;
  // Terms of the asymptotic expansion of the Fatou coordinate.
  int series_order = 12;
  // Switch radius |w| beyond which the expansion is used; 0 picks the
  // smallest radius whose Abel residual is below 1e-12.
  double switch_radius = 0.0;
  std::int64_t budget = 1'000'000;
  // Base points sit at p -+ base_offset; 0 picks (hi - lo) / 4.
  double base_offset = 0.0;
};

// Parabolic fixed point p of a host map with h = z - p,
//   host(p + h) = p + h + a h^2 + b h^3 + c h^4 + ...
// In w = -1/(a (z - p)) the attracting direction is Re w > 0 and
//   Phi(w) ~ w - beta log(+-w) + sum_k c_k w^-k,  beta = 1 - b/a^2.
// Fatou coordinates are normalized by Phi^A(a_pt) = 0 and Phi^R(r_pt) = 0.
class ParabolicGerm {
 public:
  const RealMap& host() const { return host_; }
  double p() const { return p_; }
  double a() const { return coeffs_[2]; }
  double b() const { return coeffs_[3]; }
  double c() const { return coeffs_[4]; }
  double beta() const { return beta_; }
  const std::vector<double>& taylor() const { return coeffs_; }
  const std::vector<double>& series() const { return series_; }
  double switch_radius() const { return W_; }
  double a_pt() const { return a_pt_; }
  double r_pt() const { return r_pt_; }
  // Phi^R_raw(r_pt) - Phi^A_raw(a_pt): the translation relating the two raw
  // coordinates at the base points.
  double base_constant() const { return base_R_ - base_A_; }
  double fixed_point_residual() const { return residual_; }
  double multiplier() const { return multiplier_; }

  double w_of(double z) const { return -1.0 / (a() * (z - p_)); }
  cplx w_of(cplx z) const { return -1.0 / (a() * (z - p_)); }
  double z_of(double w) const { return p_ - 1.0 / (a() * w); }
  cplx z_of(cplx w) const { return p_ - 1.0 / (a() * w); }

  // Asymptotic expansion; sign = +1 attracting, -1 repelling.
  double phi_asym(double w, int sign) const;
  cplx phi_asym(cplx w, int sign) const;

  // Unnormalized coordinates (asymptotic normalization only).
  double attracting_raw(double z) const;
  cplx attracting_raw(cplx z) const;
  double repelling_raw(double z) const;
  cplx repelling_raw(cplx z) const;

  double attracting(double z) const { return attracting_raw(z) - base_A_; }
  cplx attracting(cplx z) const { return attracting_raw(z) - base_A_; }
  double repelling(double z) const { return repelling_raw(z) - base_R_; }
  cplx repelling(cplx z) const { return repelling_raw(z) - base_R_; }
  Jet attracting_jet(double z) const;
  Jet repelling_jet(double z) const;

  double attracting_inverse(double s) const;
  cplx attracting_inverse(cplx s) const;
  double repelling_inverse(double s) const;
  cplx repelling_inverse(cplx s) const;

  // host^{-1} near the real trace / in the repelling petal (Newton).
  double host_inverse(double z) const;
  cplx host_inverse(cplx z) const;

 private:
  friend ParabolicGerm find_parabolic_point(const RealMap&, double, double, const GermOptions&);
  template <class T>
  T attracting_impl(T z, T* deriv) const;
  template <class T>
  T repelling_impl(T z, T* deriv) const;
  template <class T>
  T solve_asym(T target, int sign) const;
  template <class T>
  T phi_asym_impl(T w, int sign) const;
  template <class T>
  T phi_asym_deriv(T w) const;

  RealMap host_;
  double p_ = 0.0;
  std::vector<double> coeffs_;  // Taylor coefficients of host at p
  double beta_ = 0.0;
  std::vector<double> series_;  // c_1, c_2, ...
  double W_ = 0.0;
  double a_pt_ = 0.0, r_pt_ = 0.0;
  double base_A_ = 0.0, base_R_ = 0.0;
  double residual_ = 0.0, multiplier_ = 0.0;
  std::int64_t budget_ = 0;
};

// Locates the double root of host(x) - x on [lo, hi] and builds the germ.
// Throws DomainError when host(x) - x has a transverse zero or none, or the
// quadratic coefficient vanishes.
ParabolicGerm find_parabolic_point(const RealMap& host, double lo, double hi,
                                   const GermOptions& opts = {});

// Germ of eta for a pair with infinite height, on I_eta.
ParabolicGerm pair_germ(const CommutingPair& z, const GermOptions& opts = {});

// (Phi^R)^{-1}(Phi^A(x) - theta): the transit map that adds -theta in Fatou
// coordinates (normalized coordinates, so theta = 0 sends a_pt to r_pt).
double transit_map(const ParabolicGerm& germ, double theta, double x);

// Circle map on the equator of the repelling cylinder,
//   E(u) = theta - Phi^A(xi((Phi^R)^{-1}(-u))),
// a degree-one lift whose rotation number equals that of the parabolic
// renormalization with the same theta.
class EquatorMap {
 public:
  EquatorMap(CommutingPair pair, const ParabolicGerm& germ, double theta);
  double operator()(double u) const;
  double theta() const { return theta_; }
  double rotation(std::int64_t n) const;

 private:
  CommutingPair pair_;
  const ParabolicGerm* germ_;
  double theta_;
};

EquatorMap equator_circle_map(const CommutingPair& z, const ParabolicGerm& germ, double theta);

// Pair (gamma on [eta(0), 0], eta on [0, gamma(0)]) normalized, where
// gamma(x) = (Phi^R)^{-1}(Phi^A(xi(x)) - theta + M) and the integer M puts
// gamma(0) in [0, eta^{-1}(0)).
CommutingPair parabolic_renormalize(const CommutingPair& z, const ParabolicGerm& germ,
                                    double theta);

enum class PlateauSide { Left, Right };

struct TransitSolution {
  double theta = 0.0;
  double rho_bound = 0.0;
  int steps = 0;
};

// theta in [0,1) with rho(E_theta) = value(target) (within tol). Rational
// targets return the left or right end of the plateau.
TransitSolution solve_transit(const CommutingPair& z, const ParabolicGerm& germ,
                              const ContinuedFraction& target, double tol,
                              PlateauSide side = PlateauSide::Left);

struct PerturbedGermData {
  cplx fixed_point;  // upper half-plane
  cplx multiplier;
  cplx alpha;        // multiplier = exp(2 pi i alpha)
  double theta_pred = 0.0;  // frac(Re 1/alpha)
};

// Complex fixed point near a former parabolic point p0 of the host.
PerturbedGermData multiplier_data(const RealMap& host, double p0, double a);

// frac(Phi^A_raw(a_pt) - Phi^R_raw(x_n)) where x_n is the first iterate of
// a_pt under `perturbed` past r_pt; Fatou coordinates of the unperturbed germ.
double measured_transit_phase(const RealMap& perturbed, const ParabolicGerm& germ,
                              std::int64_t budget = 10'000'000);

// Distance on the circle R/Z.
double circle_distance(double a, double b);

}  // namespace critlab

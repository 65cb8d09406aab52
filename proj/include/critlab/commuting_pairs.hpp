#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "critlab/cfrac.hpp"
#include "critlab/circle_maps.hpp"
#include "critlab/interval_map.hpp"

namespace critlab {

// Lift-backed pair data: eta(x) = (T^{-p_eta} F^{q_eta}(s x)) / s and
// xi(x) = (T^{-p_xi} F^{q_xi}(s x)) / s, where s is the physical xi(0).
struct SymbolicPair {
  Lift lift;
  std::int64_t q_eta = 0, p_eta = 0;
  std::int64_t q_xi = 0, p_xi = 0;
  ext256 scale = 1;
};

// A critical commuting pair: eta on I_eta = [0, xi(0)], xi on I_xi = [eta(0), 0].
struct CommutingPair {
  RealMap eta;
  RealMap xi;
  double eta0 = 0.0;  // eta(0)
  double xi0 = 0.0;   // xi(0)
  // Physical coordinate of the point x is scale * x.
  double scale = 1.0;
  // Renormalization level; -1 is the circle pair, 0 the base pair.
  int level = 0;
  std::optional<SymbolicPair> symbolic;
  std::string origin;

  double len_eta() const { return std::abs(xi0); }
  double len_xi() const { return std::abs(eta0); }
  bool normalized() const { return xi0 == 1.0; }

  static CommutingPair from_maps(RealMap eta, RealMap xi, int level, std::string origin);
  static CommutingPair from_symbolic(SymbolicPair sym, int level, std::string origin);
};

// (eta, xi) = (F, T^{-1}) normalized: eta(x) = -F(-x), xi(x) = x + 1. Its
// height is r_0 and its renormalization is the base pair.
CommutingPair circle_pair(const Lift& F);

// (T^{-1} F^{r0}, F), not normalized. Throws InvariantError unless
// eta(0) < 0 < xi(0).
CommutingPair base_pair(const Lift& F, std::int64_t r0);

struct PairDiagnostics {
  double commutation_residual = 0.0;  // relative to |I_eta|
  bool opposite_sides = false;
  bool return_in_domain = false;      // xi(eta(0)) in I_eta
  bool pass = false;
};
PairDiagnostics check_pair(const CommutingPair& z, double tol = 1e-10);

struct HeightOptions {
  std::int64_t cap = 1'000'000;
  // Step-size threshold (relative to |I_eta|) that triggers the fixed-point test.
  double stall_fraction = 1e-7;
  int stall_steps = 50;
  // Orbit points within zero_tol * |I_eta| of 0 are taken as landing on 0.
  double zero_tol = 1e-12;
};

struct Height {
  Quotient chi = kInfinity;
  // eta^chi(xi(0)); exactly 0 means the next pair is degenerate.
  double landing = 0.0;
  bool lands_on_zero() const { return !chi.is_infinite() && landing == 0.0; }
};

// Smallest r >= 0 such that eta^r(xi(0)) lies on xi(0)'s side of 0 (or at 0)
// and eta^{r+1}(xi(0)) lies strictly past 0. Infinite when the orbit converges
// to a fixed point of eta inside I_eta. Throws BudgetError past the cap.
Height height(const CommutingPair& z, const HeightOptions& opts = {});

enum class RenormPath { Auto, Symbolic, Generic };

// (eta^r o xi on I_xi, eta on [0, eta^r(xi(0))]), not rescaled.
CommutingPair prerenormalize(const CommutingPair& z, RenormPath path = RenormPath::Auto,
                             const HeightOptions& opts = {});
// Divides by the signed xi(0) so the result has xi(0) = 1.
CommutingPair normalize(const CommutingPair& z);
CommutingPair renormalize(const CommutingPair& z, RenormPath path = RenormPath::Auto,
                          const HeightOptions& opts = {});

// Heights of z, R z, R^2 z, ...; ends with the terminal symbol on an infinite
// height or on a degenerate (zero-length) renormalization.
ContinuedFraction pair_rotation_cf(const CommutingPair& z, int depth,
                                   const HeightOptions& opts = {});

// The circle map obtained by identifying the ends of [eta(0), xi(eta(0))]:
// eta o xi on [eta(0), 0), eta on [0, xi(eta(0))).
class GluedMap {
 public:
  explicit GluedMap(CommutingPair z);
  double left() const { return left_; }
  double length() const { return length_; }
  // Lift of the glued map: continuous, increasing, G(x + L) = G(x) + L
  // after restriction to the fundamental domain.
  double lift(double x) const;
  // Point of the fundamental domain after one step.
  double operator()(double x) const;
  // Rotation number measured in the pair's own orientation (rigid pair with
  // eta = x - a, xi = x + b gives a/b).
  double rotation(std::int64_t n) const;

 private:
  CommutingPair pair_;
  double left_;
  double length_;
};

GluedMap glue(const CommutingPair& z);

// max(sup |eta1 - eta2| on [0,1], sup |xi1 - xi2| on [max(eta1(0), eta2(0)), 0])
// plus |eta1(0) - eta2(0)|, sampled on `grid` points each.
double pair_distance(const CommutingPair& a, const CommutingPair& b, int grid = 256);

struct EpsteinMetrics {
  std::vector<double> ratios;  // |I_xi|/|I_eta| per level
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double K = 0.0;              // max(ratio, 1/ratio) over levels >= 3
};
EpsteinMetrics epstein_metrics(const std::vector<CommutingPair>& orbit);

struct OrbitRow {
  int m = 0;
  Quotient height = kInfinity;
  double len_eta = 0.0;  // physical |I_eta|
  double len_xi = 0.0;   // physical |I_xi|
  double ratio = 0.0;
  std::optional<double> distance;
};

struct OrbitLog {
  std::vector<CommutingPair> pairs;  // normalized
  std::vector<OrbitRow> rows;
  bool parabolic_stop = false;       // stopped at an infinite height
  bool degenerate_stop = false;      // stopped at a zero-length renormalization
};

// Up to n levels starting at z (level recorded as z.level). Distances are to
// the matching level of `reference` when given.
OrbitLog renorm_orbit(const CommutingPair& z, int n, const OrbitLog* reference = nullptr,
                      RenormPath path = RenormPath::Auto, const HeightOptions& opts = {});

void write_orbit_csv(std::ostream& os, const OrbitLog& log);

}  // namespace critlab

#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <random>
#include <vector>

#include "critlab/circle_maps.hpp"

namespace critlab {

// T^{-p} F^q(z) with |Im| > escape_im short-circuiting as escaped.
struct ComplexOrbit {
  cplx value;
  cplx derivative = 1.0;
  bool escaped = false;
  std::int64_t steps = 0;  // iterates taken before stopping
};

constexpr double kOverflowIm = 50.0;

ComplexOrbit complex_iterate(const Lift& F, std::int64_t q, std::int64_t p, cplx z,
                             double escape_im = kOverflowIm);

// Preimage of the real axis under A_theta: curve x(y) near k + sign/4.
struct GammaCurve {
  std::int64_t k = 0;
  int sign = 1;
  std::vector<double> y;
  std::vector<double> x;
  // Vertex i is exactly k + sign/4 + offset[i]; x[i] is that sum rounded.
  std::vector<double> offset;
  std::vector<double> residual;  // |Im A_theta| at the exact vertex
};

// im_values must be nonzero and ascending; negative values give the
// conjugate branch. Throws NumericalError if a bracket fails.
GammaCurve gamma_curve(double theta, std::int64_t k, int sign, const std::vector<double>& im_values);

// x = k + sign arccos(2 pi |y| / sinh(2 pi |y|)) / (2 pi): the root of the
// defining equation in closed form. Tends to k as y -> 0.
double gamma_closed_form(std::int64_t k, int sign, double y);
// k + sign arccos(-2 pi |y| / sinh(2 pi y)) / (2 pi): the variant with the
// opposite sign inside arccos, which tends to k + sign/2 as y -> 0 and agrees
// with the other form only for large |y|.
double gamma_closed_form_alt(std::int64_t k, int sign, double y);

// |Im A_theta(x + iy)| evaluated directly at the rounded abscissa.
double gamma_residual_direct(double theta, double x, double y);

void write_gamma_csv(std::ostream& os, const GammaCurve& curve);

struct ComplexWindow {
  cplx center = 0.0;
  double width = 1.0;
  double height = 1.0;
  int resolution = 256;  // pixels per axis

  void validate() const;
  double dx() const { return width / resolution; }
  double dy() const { return height / resolution; }
  // Pixel centers; row 0 is the top edge.
  cplx point(int col, int row) const;
};

enum class PixelLabel : std::uint8_t { Escaped, Bounded, DomainU, DomainV, DomainBoth, Outside };

struct LabeledGrid {
  ComplexWindow window;
  std::vector<PixelLabel> labels;        // row-major
  std::vector<std::int32_t> escape_iter;  // -1 when not escaped
  std::int64_t budget = 0;
  double escape_im = 0.0;

  PixelLabel at(int col, int row) const { return labels[index(col, row)]; }
  std::size_t index(int col, int row) const {
    return static_cast<std::size_t>(row) * window.resolution + col;
  }
};

constexpr double kJuliaEscapeIm = 4.0;

// Escape-time classification of the cylinder map of F. Rows are computed in
// parallel; the result does not depend on the thread count.
LabeledGrid julia_grid(const Lift& F, const ComplexWindow& window, std::int64_t budget,
                       double escape_im = kJuliaEscapeIm, int threads = 0);

struct DomainGrid {
  LabeledGrid grid;
  int level = 0;
  double R = 0.0;
  std::int64_t p_n = 0, q_n = 1, p_n1 = 0, q_n1 = 1;
  // Endpoints of I_n and I_{n+1}: T^{-p_n} F^{q_n}(0) and T^{-p_{n+1}} F^{q_{n+1}}(0).
  double end_n = 0.0, end_n1 = 0.0;
  // (R - max |z| over labeled pixels) / R.
  double margin = 0.0;
  std::size_t count_u = 0, count_v = 0, count_both = 0;
  // Max distance from 0 of pixels labeled both U and V, in pixels.
  double overlap_radius_px = 0.0;

  // U pixels are mapped by T^{-p_n} F^{q_n}, V pixels by T^{-p_{n+1}} F^{q_{n+1}}.
  ComplexOrbit map_u(const Lift& F, cplx z) const;
  ComplexOrbit map_v(const Lift& F, cplx z) const;
};

// U: component of (F^{q_n})^{-1}(H) whose boundary contains the endpoint of
// I_{n+1}, V: component of (F^{q_{n+1}})^{-1}(H) whose boundary contains the
// endpoint of I_n; each intersected with the preimage of D_R under its map
// and reflected in the real axis. Throws DomainError if a marked point is off
// the grid or a domain touches the window edge.
DomainGrid domain_grid(const Lift& F, int n, double R, const ComplexWindow& window,
                       int threads = 0);

// Square window centered at 0 with half-side 1.5 R.
ComplexWindow default_domain_window(double R, int resolution);

// |h'(z)| |Im z| / |Im h(z)|: the derivative of h in the hyperbolic metric
// of C \ R. Throws DomainError on the real axis.
double hyperbolic_norm(cplx z, cplx value, cplx derivative);
double hyperbolic_norm(const std::function<ComplexOrbit(cplx)>& h, cplx z);

struct ExpansionReport {
  std::size_t samples = 0;
  std::size_t violations = 0;  // forward norms <= 1
  double min_norm = 0.0;
};

// Forward hyperbolic norms of the pair maps at points sampled from the
// labeled domains (off the real axis).
ExpansionReport expansion_check(const Lift& F, const DomainGrid& d, std::size_t samples,
                                std::uint64_t seed);

struct CubicFit {
  double slope = 0.0;
  double intercept = 0.0;
  double offset = 0.0;  // d0
  double rms = 0.0;
  double r2 = 0.0;
  std::size_t samples = 0;
  std::vector<double> log_x, log_y;
};

// Caller-independent default for R in units of |I_n|.
constexpr double kDomainRadiusFactor = 4.0;

// Samples z in V of the level-m domain grid (R = 4 |I_m|) with |z|/|I_m| in
// [0.5, 5] and fits log(y + d0) = a + s log x, x = |z| / |I_m|,
// y = |eta(z) - eta(0)| / |eta(I_m)|, by least squares in log y.
CubicFit cubic_estimate_fit(const Lift& F, int m, std::size_t sample_count, std::uint64_t seed,
                            int resolution = 600);

// Least squares in log y for y = exp(a) x^s - d0 (slope s, intercept a,
// offset d0 in [-0.9 min y, 1]).
CubicFit fit_offset_power_law(const std::vector<double>& log_x, const std::vector<double>& ys);

// Binary P6: escaped -> hue ramp, bounded -> black, U/V -> fixed colors.
void write_ppm(std::ostream& os, const LabeledGrid& grid);

}  // namespace critlab

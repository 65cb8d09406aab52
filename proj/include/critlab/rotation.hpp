#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "critlab/cfrac.hpp"

namespace critlab {

namespace detail {

// Moves the integer part of x into `whole`. Keeping the orbit in [0,1)
// preserves absolute precision over long lift orbits.
template <class Real>
void shed_integer_part(Real& x, std::int64_t& whole) {
  using std::floor;
  const Real f = floor(x);
  whole += static_cast<std::int64_t>(f);
  x -= f;
}

}  // namespace detail

// Position of rho(F) relative to a target, decided by closest-return sign
// tests along the convergents of the target.
enum class RotationSide { Below, Above, Undecided };

struct RotationComparison {
  RotationSide side = RotationSide::Undecided;
  int level = -1;  // convergent index that decided, or the last one tested
  // When undecided: rho lies between the last two convergents tested, so
  // |rho - target| <= certified_bound.
  double certified_bound = 1.0;
};

// For a degree-one monotone lift `step`, compares rho with value(target) + shift.
// Uses only F^q(x0) - x0 - p: F^q(x0) < x0 + p forces rho <= p/q and
// F^q(x0) > x0 + p forces rho >= p/q. Convergents alternate around the
// target, so an even-index convergent with a negative defect proves Below and
// an odd-index one with a nonnegative defect proves Above.
template <class Real, class Step>
RotationComparison compare_rotation(Step&& step, const ContinuedFraction& target,
                                    std::int64_t shift, Real x0, std::int64_t max_iterates) {
  const auto r = target.finite_prefix();
  RotationComparison out;
  // Convergent recursion with q_{-1} = 0, p_{-1} = 1 (then shifted by `shift`).
  std::int64_t q_prev = 0, p_prev = 1, q_cur = 1, p_cur = 0;
  Real x = x0;
  std::int64_t whole = 0;
  detail::shed_integer_part(x, whole);
  const std::int64_t whole0 = whole;
  const Real frac0 = x;
  std::int64_t n = 0;
  double prev_value = 0.0;
  for (int k = 0;; ++k) {
    if (q_cur > max_iterates) break;
    while (n < q_cur) {
      x = step(x);
      detail::shed_integer_part(x, whole);
      ++n;
    }
    const Real defect = (x - frac0) + Real(whole - whole0 - p_cur - shift * q_cur);
    const double value = static_cast<double>(p_cur) / static_cast<double>(q_cur);
    out.level = k;
    if (k % 2 == 0) {
      if (defect <= Real(0)) {
        out.side = RotationSide::Below;
        return out;
      }
    } else if (defect >= Real(0)) {
      out.side = RotationSide::Above;
      return out;
    }
    if (k > 0) out.certified_bound = std::abs(value - prev_value);
    prev_value = value;
    if (k >= static_cast<int>(r.size())) break;
    std::int64_t q_next = 0, p_next = 0;
    if (__builtin_mul_overflow(r[k], q_cur, &q_next) || __builtin_add_overflow(q_next, q_prev, &q_next) ||
        __builtin_mul_overflow(r[k], p_cur, &p_next) || __builtin_add_overflow(p_next, p_prev, &p_next))
      break;
    q_prev = q_cur;
    p_prev = p_cur;
    q_cur = q_next;
    p_cur = p_next;
  }
  out.side = RotationSide::Undecided;
  return out;
}

// (F^n(x0) - x0)/n for a degree-one lift; |estimate - rho| <= 1/n.
template <class Step>
double rotation_average(Step&& step, std::int64_t n, double x0 = 0.0) {
  double x = x0;
  std::int64_t whole = 0;
  detail::shed_integer_part(x, whole);
  const std::int64_t whole0 = whole;
  const double frac0 = x;
  for (std::int64_t i = 0; i < n; ++i) {
    x = step(x);
    detail::shed_integer_part(x, whole);
  }
  return ((x - frac0) + static_cast<double>(whole - whole0)) / static_cast<double>(n);
}

}  // namespace critlab

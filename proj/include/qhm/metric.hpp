#pragma once

#include "qhm/curve.hpp"
#include "qhm/point.hpp"

namespace qhm {

/// Two points together with their distances to the boundary.
struct PairData {
  Point a;
  Point b;
  double d_a = 0.0;
  double d_b = 0.0;
  double sep = 0.0;  // |a - b|

  static PairData make(const Point& a, const Point& b, double d_a, double d_b);
};

/// 2 asinh(|a-b| / (2 sqrt(d_a d_b))); the exact distance in a half-space.
double s_metric(const PairData& p);

/// Same quantity in the logarithmic form; kept for cross-checking.
double s_metric_log_form(const PairData& p);

/// Universal lower bound 2 log((d_a + d_b + |a-b|) / (2 sqrt(d_a d_b))).
double ghm_lower_bound(const PairData& p);

/// Upper bound 2 log(1 + c |a-b| / sqrt(d_a d_b)), c > 1.
double na_upper_bound(const PairData& p, double c);

/// Quasi-hyperbolic distance of {x_0 > 0}.
double halfspace_distance(const Point& a, const Point& b);

/// Half-space geodesic (arc of a circle orthogonal to {x_0 = 0}, or a vertical
/// segment) sampled at m >= 2 points equally spaced in hyperbolic arc length.
Curve halfspace_geodesic(const Point& a, const Point& b, int m);

// Scalar inequalities used when trading s_D against the upper bound. Each
// returns right side minus left side, positive when the inequality holds.

/// log(1 + t) - asinh(t/2), t > 0.
double asinh_log_margin(double t);
/// 1 + c t - (1 + t)^{c'} with c = 2c' - 1, 0 < t < 1, c' in (1, 2].
double power_margin(double t, double c_prime);
/// 1 + c t - c'(1 + t) with c = 2c' - 1, t > 1.
double linear_margin(double t, double c_prime);
/// log q + asinh(t) - asinh(q t), q > 1, t > 0.
double calibration_margin(double q, double t);

}  // namespace qhm

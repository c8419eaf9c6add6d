#pragma once

#include <functional>
#include <vector>

#include "qhm/curve.hpp"
#include "qhm/geom.hpp"
#include "qhm/solver.hpp"

namespace qhm {

/// (f(x), x) + x_0 n_x for xbar = (x_0, x).
Point normal_flatten(const GraphDomain& domain, const Point& xbar);
/// Same, accepting the half-space (identity) or a graph domain.
Point normal_flatten(const DomainSpec& domain, const Point& xbar);

/// (x_0 - f(x'), x') for a planar graph domain.
Point planar_flatten(const GraphDomain& domain, const Point& x);

/// Arc-length flattening based at the foot of a: sigma(x_1) + x_0 n.
class SigmaFlattening {
 public:
  SigmaFlattening(const DomainSpec& domain, const Point& a, const Point& b);

  Point operator()(const Point& xbar) const;
  /// Half-space preimages of a and b: (d_a, 0) and (d_b, ell).
  Point alpha() const { return Point{d_a_, 0.0}; }
  Point beta() const { return Point{d_b_, ell_}; }
  /// Signed boundary arc length from the foot of a to the foot of b.
  double ell() const { return ell_; }
  /// |a - b| / |alpha - beta|; tends to 1 as a, b approach a common boundary point.
  double distance_ratio() const;
  double foot_parameter_a() const { return u_a_; }
  double foot_parameter_b() const { return u_b_; }
  const DomainSpec& domain() const { return domain_; }

 private:
  DomainSpec domain_;
  BoundaryCurve curve_;
  Point a_, b_;
  double d_a_ = 0.0, d_b_ = 0.0;
  double u_a_ = 0.0, u_b_ = 0.0;
  double ell_ = 0.0;
};

enum class FlattenMap { Normal, Planar, Sigma };

struct JacobianBoundReport {
  Point point;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double predicted_lower = 0.0;  // 1 - C x_0
  double predicted_upper = 0.0;  // 1 + C x_0
  double C_used = 0.0;
  bool lower_checked = false;
  bool upper_checked = false;
  bool lower_ok = true;
  bool upper_ok = true;

  bool passed() const { return lower_ok && upper_ok; }
};

/// Finite-difference Jacobian singular values of a flattening map at `point`
/// (half-space coordinates). The normal map is checked from below only, the
/// arc-length map from both sides, the planar map not at all.
JacobianBoundReport jacobian_bounds(FlattenMap map, const GraphDomain& domain, const Point& point, double C);
JacobianBoundReport jacobian_bounds(const SigmaFlattening& map, const Point& point, double C);

enum class Weight { One, InverseDistance };

/// int F |d(phi o gamma)| - ( int F |d gamma| - C int F d_D |d gamma| ) for the
/// normal flattening phi, with F evaluated at phi(gamma) where d_D = x_0.
double curve_pushforward_check(const GraphDomain& domain, const Curve& curve, Weight F, double C);

struct TransferFit {
  double c_prime = 0.0;    // smallest C' covering every pair
  double worst_gap = 0.0;  // largest |h_D - h_half| seen
  int pairs = 0;
};

/// For half-space pairs (alpha, beta) mapped by the normal flattening, fit
/// C' in |h_D(phi alpha, phi beta) - h_half(alpha, beta)| <= C' |alpha - beta| + 3 err.
TransferFit distance_transfer_fit(const GraphDomain& domain, const std::vector<std::pair<Point, Point>>& pairs,
                                  const GridSpec& grid);

/// Sup of pairwise distance ratios of planar_flatten over sampled pairs;
/// horizontal_only restricts to pairs with equal x_0.
double planar_distortion(const GraphDomain& domain, double half_window, double x0_lo, double x0_hi,
                         bool horizontal_only, int samples = 64);

}  // namespace qhm

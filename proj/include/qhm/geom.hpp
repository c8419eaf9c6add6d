#pragma once

#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qhm/error.hpp"
#include "qhm/point.hpp"

namespace qhm {

/// Axis-aligned box. Infinite bounds are allowed (half-spaces are unbounded).
struct Box {
  Point lo;
  Point hi;

  int dim() const { return lo.dim(); }
  bool contains(const Point& p) const;
  Box intersect(const Box& other) const;
  double diameter() const;
};

// ---------------------------------------------------------------------------
// Domain families

struct HalfSpace {
  int dim = 2;
};

struct Ball {
  Point center;
  double radius = 1.0;
};

enum class GraphFamily {
  Paraboloid,  // f(x) = kappa |x|^2 / 2, 2-D or 3-D
  CosineBump,  // f(x) = A (1 - cos(w x)), 2-D
  C11Kink,     // f(x) = kappa x |x| / 2, 2-D; C^{1,1} but not C^2 at x = 0
};

/// {x : x_0 > f(x)} restricted to a window |x_i| <= half_width, x_0 <= top.
/// Distances are taken to the graph portion inside the window.
struct GraphDomain {
  GraphFamily family = GraphFamily::Paraboloid;
  int dim = 2;
  double kappa = 1.0;
  double amplitude = 0.0;
  double frequency = 1.0;
  double half_width = 1.0;
  double top = 1.0;

  double f(const Point& x) const;                 // x holds dim-1 tangential coords in [1..]
  Point grad(const Point& x) const;               // same layout, entry 0 unused
  void hessian(const Point& x, double h[2][2]) const;
  double gradient_lipschitz() const;              // L with |grad f(p) - grad f(q)| <= L |p - q|
  std::vector<double> kinks() const;              // tangential coordinates where f'' jumps (2-D)
  Point boundary_point(const Point& x) const;     // (f(x), x)
  Point inward_normal(const Point& x) const;      // n_x at (f(x), x)
};

enum class ImplicitFamily { Ellipse, Superellipse };

/// |x_0/a|^p + |x_1/b|^p < 1 in the plane, p >= 2 (p = 2 for the ellipse).
struct ImplicitDomain {
  ImplicitFamily family = ImplicitFamily::Ellipse;
  double semi_a = 1.0;
  double semi_b = 1.0;
  double exponent = 2.0;

  double level(const Point& x) const;
  Point boundary_point(double angle) const;
  Point boundary_derivative(double angle) const;
  Point inward_normal(const Point& y) const;
};

/// Immutable description of a test domain.
using DomainSpec = std::variant<HalfSpace, Ball, GraphDomain, ImplicitDomain>;

int dimension(const DomainSpec& domain);
Box bounding_box(const DomainSpec& domain);
bool contains(const DomainSpec& domain, const Point& x);
std::string describe(const DomainSpec& domain);

/// Upper bound on the boundary curvature (0 for the half-space). This is the
/// default constant for the flattening estimates.
double curvature_constant(const DomainSpec& domain);

// ---------------------------------------------------------------------------
// Distance to the boundary

struct BoundaryContact {
  double distance = 0.0;
  Point foot;
  Point normal;  // inward unit normal at foot
  bool unique = true;
};

/// Nearest boundary point of an interior point (global minimizer over the
/// boundary restricted to the window for graph domains).
BoundaryContact boundary_contact(const DomainSpec& domain, const Point& x);

/// d_D(x) only; throws like boundary_contact.
double boundary_distance(const DomainSpec& domain, const Point& x);

/// Unsigned distance from any point (inside or outside) to the boundary.
/// Returns +inf when the represented boundary portion is empty.
double unsigned_boundary_distance(const DomainSpec& domain, const Point& x);

/// Largest radius R for which sampled boundary points in `region` admit
/// interior and exterior tangent balls of radius R. +inf for flat boundaries.
double reach_estimate(const DomainSpec& domain, const Box& region);

// ---------------------------------------------------------------------------
// Planar boundary curves

/// Regular parametrization u -> gamma(u) of the boundary of a 2-D domain:
/// the tangential coordinate for half-planes and graphs, the polar angle for
/// discs and (super)ellipses.
class BoundaryCurve {
 public:
  explicit BoundaryCurve(const DomainSpec& domain);

  Point point(double u) const;
  Point derivative(double u) const;
  Point inward_normal(double u) const;
  /// Parameter of a boundary point (nearest parameter for points near it).
  double parameter_of(const Point& y) const;
  /// Signed arc length from u0 to u1.
  double arc_length(double u0, double u1) const;
  /// Parameter reached after walking signed arc length s from u0.
  double walk(double u0, double s) const;
  /// Parameter values where the curvature jumps; quadrature splits there.
  std::vector<double> breakpoints() const;

 private:
  DomainSpec domain_;
};

// ---------------------------------------------------------------------------
// Modulus of continuity calculus

enum class ModulusFamily {
  Power,     // M t^eps
  LogPower,  // M / log(e/t)^p for t <= 1, M for t > 1
};

struct ModulusOfContinuity {
  ModulusFamily family = ModulusFamily::Power;
  double scale = 1.0;     // M
  double exponent = 1.0;  // eps or p
  double cap = std::numeric_limits<double>::infinity();

  double operator()(double t) const;
  /// omega(e^{log_t}); stays accurate where e^{log_t} underflows.
  double at_log(double log_t) const;

  static ModulusOfContinuity power(double M, double eps,
                                   double cap = std::numeric_limits<double>::infinity());
  static ModulusOfContinuity log_power(double M, double p,
                                       double cap = std::numeric_limits<double>::infinity());
  static ModulusOfContinuity zero();
};

struct ModulusIntegral {
  double value = 0.0;    // integral over (0, 1] when convergent, else the partial value
  double partial = 0.0;  // integral over [lower_cut, 1]
  bool convergent = true;
  double tail_slope = 0.0;     // d(partial)/d log(1/cut) at the end of the ladder
  double decay_exponent = 0.0; // fitted power-law decay of ladder increments
};

/// int_0^1 omega(t)/t dt.
ModulusIntegral dini_integral(const ModulusOfContinuity& omega, double lower_cut = 1e-3);
/// int_0^1 omega(t) log(t)/t dt.
ModulusIntegral log_dini_integral(const ModulusOfContinuity& omega, double lower_cut = 1e-3);
/// omega*(s) = int_0^s omega(t)/t dt + s int_s^inf omega(t)/t^2 dt.
double omega_star(const ModulusOfContinuity& omega, double s);

}  // namespace qhm

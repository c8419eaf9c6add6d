#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qhm/geom.hpp"

namespace qhm {

BoundaryCurve::BoundaryCurve(const DomainSpec& domain) : domain_(domain) {
  if (dimension(domain) != 2) throw Error(ErrorKind::InvalidArgument, "boundary curves exist for planar domains only");
}

Point BoundaryCurve::point(double u) const {
  return std::visit(
      [&](const auto& d) -> Point {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) return Point{0.0, u};
        if constexpr (std::is_same_v<T, Ball>) return d.center + Point{std::cos(u), std::sin(u)} * d.radius;
        if constexpr (std::is_same_v<T, GraphDomain>) return d.boundary_point(Point{0.0, u});
        if constexpr (std::is_same_v<T, ImplicitDomain>) return d.boundary_point(u);
      },
      domain_);
}

Point BoundaryCurve::derivative(double u) const {
  return std::visit(
      [&](const auto& d) -> Point {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) return Point{0.0, 1.0};
        if constexpr (std::is_same_v<T, Ball>) return Point{-std::sin(u), std::cos(u)} * d.radius;
        if constexpr (std::is_same_v<T, GraphDomain>) return Point{d.grad(Point{0.0, u})[1], 1.0};
        if constexpr (std::is_same_v<T, ImplicitDomain>) return d.boundary_derivative(u);
      },
      domain_);
}

Point BoundaryCurve::inward_normal(double u) const {
  return std::visit(
      [&](const auto& d) -> Point {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) return Point{1.0, 0.0};
        if constexpr (std::is_same_v<T, Ball>) return Point{-std::cos(u), -std::sin(u)};
        if constexpr (std::is_same_v<T, GraphDomain>) return d.inward_normal(Point{0.0, u});
        if constexpr (std::is_same_v<T, ImplicitDomain>) return d.inward_normal(d.boundary_point(u));
      },
      domain_);
}

double BoundaryCurve::parameter_of(const Point& y) const {
  return std::visit(
      [&](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, Ball>) return std::atan2(y[1] - d.center[1], y[0] - d.center[0]);
        if constexpr (std::is_same_v<T, ImplicitDomain>) return std::atan2(y[1], y[0]);
        return y[1];
      },
      domain_);
}

std::vector<double> BoundaryCurve::breakpoints() const {
  if (const auto* g = std::get_if<GraphDomain>(&domain_)) return g->kinks();
  return {};
}

double BoundaryCurve::arc_length(double u0, double u1) const {
  if (std::holds_alternative<HalfSpace>(domain_)) return u1 - u0;
  if (const auto* b = std::get_if<Ball>(&domain_)) return b->radius * (u1 - u0);
  if (u0 == u1) return 0.0;
  const double sign = u1 > u0 ? 1.0 : -1.0;
  const double a = std::min(u0, u1), b = std::max(u0, u1);
  std::vector<double> cuts{a};
  for (double k : breakpoints()) {
    if (k > a && k < b) cuts.push_back(k);
  }
  cuts.push_back(b);
  auto speed = [&](double u) { return derivative(u).norm(); };
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(speed, cuts[i], cuts[i + 1], 8, 1e-12);
  }
  return sign * total;
}

double BoundaryCurve::walk(double u0, double s) const {
  if (std::holds_alternative<HalfSpace>(domain_)) return u0 + s;
  if (const auto* b = std::get_if<Ball>(&domain_)) return u0 + s / b->radius;
  double u = u0 + s / derivative(u0).norm();
  for (int it = 0; it < 30; ++it) {
    const double step = (arc_length(u0, u) - s) / derivative(u).norm();
    u -= step;
    if (std::abs(step) <= 4e-16 * std::max(1.0, std::abs(u))) return u;
  }
  return u;
}

}  // namespace qhm

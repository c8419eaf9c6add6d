#include "qhm/flatten.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qhm/error.hpp"
#include "qhm/metric.hpp"

namespace qhm {

namespace {

constexpr double kMinDepth = 1e-4;

void check_window(const GraphDomain& d, const Point& xbar) {
  if (xbar.dim() != d.dim) throw Error(ErrorKind::InvalidArgument, "point dimension does not match the domain");
  if (!(xbar[0] >= 0.0)) throw Error(ErrorKind::PointOutsideDomain, "x_0 must be nonnegative");
  for (int i = 1; i < d.dim; ++i) {
    if (std::abs(xbar[i]) > d.half_width)
      throw Error(ErrorKind::PointOutsideDomain, xbar.to_string() + " leaves the graph window");
  }
}

template <typename Map>
JacobianBoundReport jacobian_report(Map&& phi, const Point& point, double C) {
  if (point[0] < kMinDepth) throw Error(ErrorKind::StepUnderflow, "x_0 below 1e-4; difference step would cross the boundary");
  const int n = point.dim();
  const double h = std::min(1e-5, point[0] / 10.0);
  Eigen::MatrixXd J(n, n);
  for (int k = 0; k < n; ++k) {
    const Point e = Point::unit(n, k) * h;
    const Point col = (phi(point + e) - phi(point - e)) * (0.5 / h);
    for (int r = 0; r < n; ++r) J(r, k) = col[r];
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
  const auto& s = svd.singularValues();
  JacobianBoundReport out;
  out.point = point;
  out.sigma_max = s(0);
  out.sigma_min = s(n - 1);
  out.C_used = C;
  out.predicted_lower = 1.0 - C * point[0];
  out.predicted_upper = 1.0 + C * point[0];
  return out;
}

void apply_checks(JacobianBoundReport& r, bool lower, bool upper) {
  constexpr double tol = 1e-4;
  r.lower_checked = lower;
  r.upper_checked = upper;
  r.lower_ok = !lower || r.sigma_min >= r.predicted_lower - tol;
  r.upper_ok = !upper || r.sigma_max <= r.predicted_upper + tol;
}

}  // namespace

Point normal_flatten(const GraphDomain& domain, const Point& xbar) {
  check_window(domain, xbar);
  const double L = domain.gradient_lipschitz();
  if (L > 0.0 && xbar[0] >= 1.0 / L)
    throw Error(ErrorKind::ExceedsReach, "x_0 at or beyond the reach bound 1/L");
  return domain.boundary_point(xbar) + domain.inward_normal(xbar) * xbar[0];
}

Point normal_flatten(const DomainSpec& domain, const Point& xbar) {
  if (const auto* h = std::get_if<HalfSpace>(&domain)) {
    if (xbar.dim() != h->dim || !(xbar[0] >= 0.0))
      throw Error(ErrorKind::PointOutsideDomain, "point is not in the closed half-space");
    return xbar;
  }
  if (const auto* g = std::get_if<GraphDomain>(&domain)) return normal_flatten(*g, xbar);
  throw Error(ErrorKind::InvalidArgument, "normal flattening needs a half-space or graph domain");
}

Point planar_flatten(const GraphDomain& domain, const Point& x) {
  Point out = x;
  out[0] = x[0] - domain.f(x);
  return out;
}

SigmaFlattening::SigmaFlattening(const DomainSpec& domain, const Point& a, const Point& b)
    : domain_(domain), curve_(domain), a_(a), b_(b) {
  const BoundaryContact ca = boundary_contact(domain_, a);
  const BoundaryContact cb = boundary_contact(domain_, b);
  if (!ca.unique || !cb.unique) throw Error(ErrorKind::FeetNotUnique, "nearest boundary point is not unique");
  d_a_ = ca.distance;
  d_b_ = cb.distance;
  u_a_ = curve_.parameter_of(ca.foot);
  u_b_ = curve_.parameter_of(cb.foot);
  ell_ = curve_.arc_length(u_a_, u_b_);
}

Point SigmaFlattening::operator()(const Point& xbar) const {
  const double u = curve_.walk(u_a_, xbar[1]);
  return curve_.point(u) + curve_.inward_normal(u) * xbar[0];
}

double SigmaFlattening::distance_ratio() const {
  const double den = distance(alpha(), beta());
  if (den == 0.0) return 1.0;
  return distance(a_, b_) / den;
}

JacobianBoundReport jacobian_bounds(FlattenMap map, const GraphDomain& domain, const Point& point, double C) {
  JacobianBoundReport r;
  switch (map) {
    case FlattenMap::Normal:
      r = jacobian_report([&](const Point& x) { return normal_flatten(domain, x); }, point, C);
      apply_checks(r, true, false);
      break;
    case FlattenMap::Planar:
      r = jacobian_report([&](const Point& x) { return planar_flatten(domain, x); }, point, C);
      apply_checks(r, false, false);
      break;
    case FlattenMap::Sigma: {
      if (domain.dim != 2) throw Error(ErrorKind::InvalidArgument, "arc-length flattening is planar");
      // based at the boundary point under the query, so x_1 = 0 is the vertex column
      const Point base = domain.boundary_point(Point{0.0, 0.0}) + domain.inward_normal(Point{0.0, 0.0}) * point[0];
      const SigmaFlattening sf(domain, base, base);
      r = jacobian_bounds(sf, point, C);
      break;
    }
  }
  return r;
}

JacobianBoundReport jacobian_bounds(const SigmaFlattening& map, const Point& point, double C) {
  JacobianBoundReport r = jacobian_report(map, point, C);
  apply_checks(r, true, true);
  return r;
}

double curve_pushforward_check(const GraphDomain& domain, const Curve& curve, Weight F, double C) {
  using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
  const auto& pts = curve.points();
  for (const auto& p : pts) {
    if (!(p[0] > 0.0)) throw Error(ErrorKind::CurveTouchesBoundary, "curve must stay in the open half-space");
    check_window(domain, p);
  }
  // d_D(phi(xbar)) = x_0, so F is evaluated through x_0
  auto weight = [&](double x0) { return F == Weight::One ? 1.0 : 1.0 / x0; };
  double pushed = 0.0, plain = 0.0, correction = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point p = pts[i];
    const Point v = pts[i + 1] - pts[i];
    const double len = v.norm();
    if (len == 0.0) continue;
    const Point dir = v * (1.0 / len);
    auto speed = [&](double t) {
      const Point x = p + v * t;
      const double eps = 1e-6 * std::min(1.0, x[0]);
      const Point dphi = (normal_flatten(domain, x + dir * eps) - normal_flatten(domain, x - dir * eps)) * (0.5 / eps);
      return dphi.norm() * len;
    };
    pushed += GK::integrate([&](double t) { return weight(p[0] + v[0] * t) * speed(t); }, 0.0, 1.0, 10, 1e-10);
    plain += GK::integrate([&](double t) { return weight(p[0] + v[0] * t) * len; }, 0.0, 1.0, 10, 1e-12);
    correction += GK::integrate([&](double t) {
      const double x0 = p[0] + v[0] * t;
      return weight(x0) * x0 * len;
    }, 0.0, 1.0, 10, 1e-12);
  }
  return pushed - (plain - C * correction);
}

TransferFit distance_transfer_fit(const GraphDomain& domain, const std::vector<std::pair<Point, Point>>& pairs,
                                  const GridSpec& grid) {
  TransferFit fit;
  const DomainSpec dom = domain;
  for (const auto& [al, be] : pairs) {
    const double sep = distance(al, be);
    if (sep == 0.0) continue;
    const auto r = qh_distance(dom, normal_flatten(domain, al), normal_flatten(domain, be), grid);
    const double gap = std::abs(r.value - halfspace_distance(al, be));
    fit.worst_gap = std::max(fit.worst_gap, gap);
    fit.c_prime = std::max(fit.c_prime, (gap - 3.0 * r.error_estimate) / sep);
    ++fit.pairs;
  }
  return fit;
}

double planar_distortion(const GraphDomain& domain, double half_window, double x0_lo, double x0_hi,
                         bool horizontal_only, int samples) {
  std::vector<Point> pts;
  for (int i = 0; i < samples; ++i) {
    for (int j = 0; j < (horizontal_only ? 1 : samples); ++j) {
      const double x1 = -half_window + 2.0 * half_window * i / (samples - 1);
      const double x0 = horizontal_only ? x0_lo : x0_lo + (x0_hi - x0_lo) * j / (samples - 1);
      pts.push_back(Point{x0, x1});
    }
  }
  double worst = 1.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point ti = planar_flatten(domain, pts[i]);
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double ratio = distance(ti, planar_flatten(domain, pts[j])) / distance(pts[i], pts[j]);
      worst = std::max({worst, ratio, 1.0 / ratio});
    }
  }
  return worst;
}

}  // namespace qhm

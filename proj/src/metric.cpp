#include "qhm/metric.hpp"

#include <cmath>
#include <numbers>

#include "qhm/error.hpp"

namespace qhm {

PairData PairData::make(const Point& a, const Point& b, double d_a, double d_b) {
  if (a.dim() != b.dim()) throw Error(ErrorKind::InvalidArgument, "pair points differ in dimension");
  if (!(d_a > 0.0) || !(d_b > 0.0) || !std::isfinite(d_a) || !std::isfinite(d_b))
    throw Error(ErrorKind::NonpositiveDistance, "boundary distances must be positive and finite");
  return PairData{a, b, d_a, d_b, distance(a, b)};
}

double s_metric(const PairData& p) { return 2.0 * std::asinh(p.sep / (2.0 * std::sqrt(p.d_a * p.d_b))); }

double s_metric_log_form(const PairData& p) {
  const double t = p.sep / (2.0 * std::sqrt(p.d_a * p.d_b));
  return 2.0 * std::log(t + std::sqrt(1.0 + t * t));
}

double ghm_lower_bound(const PairData& p) {
  // log1p keeps precision when the pair is close and d_a ~ d_b
  const double g = std::sqrt(p.d_a * p.d_b);
  const double excess = (std::sqrt(p.d_a) - std::sqrt(p.d_b));
  return 2.0 * std::log1p((excess * excess + p.sep) / (2.0 * g));
}

double na_upper_bound(const PairData& p, double c) {
  if (!(c > 1.0) || !std::isfinite(c)) throw Error(ErrorKind::ConstantOutOfRange, "the constant must exceed 1");
  return 2.0 * std::log1p(c * p.sep / std::sqrt(p.d_a * p.d_b));
}

double halfspace_distance(const Point& a, const Point& b) {
  if (!(a[0] > 0.0) || !(b[0] > 0.0)) throw Error(ErrorKind::PointOutsideDomain, "points must satisfy x_0 > 0");
  return s_metric(PairData::make(a, b, a[0], b[0]));
}

Curve halfspace_geodesic(const Point& a, const Point& b, int m) {
  if (m < 2) throw Error(ErrorKind::InvalidArgument, "a geodesic needs at least two samples");
  if (!(a[0] > 0.0) || !(b[0] > 0.0)) throw Error(ErrorKind::PointOutsideDomain, "points must satisfy x_0 > 0");
  Point w = b - a;
  w[0] = 0.0;
  const double ell = w.norm();
  std::vector<Point> pts(static_cast<std::size_t>(m));
  const double scale = std::max({a.norm(), b.norm(), 1.0});
  if (ell <= 1e-14 * scale) {
    // vertical: arclength is log x_0
    const double la = std::log(a[0]), lb = std::log(b[0]);
    for (int i = 0; i < m; ++i) {
      const double s = static_cast<double>(i) / (m - 1);
      Point p = a + (b - a) * s;
      p[0] = std::exp(la + (lb - la) * s);
      pts[static_cast<std::size_t>(i)] = p;
    }
  } else {
    const Point u = w * (1.0 / ell);
    // a at xi = 0, b at xi = ell in the (u, e_0) plane
    const double xc = (ell * ell + b[0] * b[0] - a[0] * a[0]) / (2.0 * ell);
    const double R = std::hypot(xc, a[0]);
    const double psi_a = std::atan2(a[0], -xc);
    const double psi_b = std::atan2(b[0], ell - xc);
    // ds = dψ / sin ψ, so σ = log tan(ψ/2)
    const double sa = std::log(std::tan(0.5 * psi_a));
    const double sb = std::log(std::tan(0.5 * psi_b));
    for (int i = 0; i < m; ++i) {
      const double s = static_cast<double>(i) / (m - 1);
      const double psi = 2.0 * std::atan(std::exp(sa + (sb - sa) * s));
      Point p = a + u * (xc + R * std::cos(psi));
      p[0] = R * std::sin(psi);
      pts[static_cast<std::size_t>(i)] = p;
    }
  }
  pts.front() = a;
  pts.back() = b;
  return Curve(std::move(pts));
}

double asinh_log_margin(double t) { return std::log1p(t) - std::asinh(0.5 * t); }

double power_margin(double t, double c_prime) {
  const double c = 2.0 * c_prime - 1.0;
  return 1.0 + c * t - std::pow(1.0 + t, c_prime);
}

double linear_margin(double t, double c_prime) {
  const double c = 2.0 * c_prime - 1.0;
  return 1.0 + c * t - c_prime * (1.0 + t);
}

double calibration_margin(double q, double t) { return std::log(q) + std::asinh(t) - std::asinh(q * t); }

}  // namespace qhm

#include "qhm/curve.hpp"

#include <algorithm>
#include <limits>

#include "qhm/error.hpp"

namespace qhm {

Curve::Curve(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorKind::InvalidArgument, "a curve needs at least one point");
  arc_.resize(points_.size());
  arc_[0] = 0.0;
  for (std::size_t i = 1; i < points_.size(); ++i) {
    if (points_[i].dim() != points_[0].dim()) throw Error(ErrorKind::InvalidArgument, "mixed dimensions in curve");
    arc_[i] = arc_[i - 1] + distance(points_[i - 1], points_[i]);
  }
}

Curve Curve::reversed() const {
  std::vector<Point> pts(points_.rbegin(), points_.rend());
  return Curve(std::move(pts));
}

double distance_to_curve(const Point& p, const Curve& c) {
  const auto& pts = c.points();
  if (pts.size() == 1) return distance(p, pts[0]);
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const Point seg = pts[i + 1] - pts[i];
    const double len2 = seg.squared_norm();
    double t = len2 > 0.0 ? (p - pts[i]).dot(seg) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    best = std::min(best, distance(p, pts[i] + seg * t));
  }
  return best;
}

double hausdorff_distance(const Curve& a, const Curve& b) {
  double h = 0.0;
  for (const auto& p : a.points()) h = std::max(h, distance_to_curve(p, b));
  for (const auto& p : b.points()) h = std::max(h, distance_to_curve(p, a));
  return h;
}

}  // namespace qhm

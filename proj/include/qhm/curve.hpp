#pragma once

#include <vector>

#include "qhm/point.hpp"

namespace qhm {

/// Ordered polyline with cumulative Euclidean arc length per vertex.
/// Repeated consecutive vertices are tolerated and contribute nothing.
class Curve {
 public:
  Curve() = default;
  explicit Curve(std::vector<Point> points);

  const std::vector<Point>& points() const { return points_; }
  const std::vector<double>& arc_length() const { return arc_; }
  std::size_t size() const { return points_.size(); }
  const Point& front() const { return points_.front(); }
  const Point& back() const { return points_.back(); }
  double euclidean_length() const { return arc_.empty() ? 0.0 : arc_.back(); }

  Curve reversed() const;

 private:
  std::vector<Point> points_;
  std::vector<double> arc_;
};

/// Distance from p to the polyline.
double distance_to_curve(const Point& p, const Curve& c);

/// Symmetric Hausdorff distance between two polylines (vertex-to-polyline both ways).
double hausdorff_distance(const Curve& a, const Curve& b);

}  // namespace qhm

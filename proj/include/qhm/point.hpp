#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <string>

namespace qhm {

/// A point (or displacement) in R^2 or R^3. Coordinate 0 is the distinguished
/// "normal" coordinate x_0; the remaining ones are the tangential part x.
class Point {
 public:
  static constexpr int kMaxDim = 3;

  Point() = default;
  Point(std::initializer_list<double> coords);
  static Point zero(int dim);
  static Point unit(int dim, int axis);

  int dim() const { return dim_; }
  double operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  Point& operator+=(const Point& o);
  Point& operator-=(const Point& o);
  Point& operator*=(double s);

  double dot(const Point& o) const;
  double norm() const { return std::sqrt(dot(*this)); }
  double squared_norm() const { return dot(*this); }
  bool is_finite() const;

  std::string to_string() const;

 private:
  std::array<double, kMaxDim> c_{};
  int dim_ = 0;
};

inline Point operator+(Point a, const Point& b) { return a += b; }
inline Point operator-(Point a, const Point& b) { return a -= b; }
inline Point operator*(Point a, double s) { return a *= s; }
inline Point operator*(double s, Point a) { return a *= s; }
inline Point operator-(Point a) { return a *= -1.0; }

inline double distance(const Point& a, const Point& b) { return (a - b).norm(); }

bool operator==(const Point& a, const Point& b);

std::ostream& operator<<(std::ostream& os, const Point& p);

/// Parses "x0,x1[,x2]".
Point parse_point(const std::string& text);

}  // namespace qhm

#include "qhm/point.hpp"

#include <sstream>

#include "qhm/error.hpp"

namespace qhm {

Point::Point(std::initializer_list<double> coords) {
  if (coords.size() < 1 || coords.size() > kMaxDim) {
    throw Error(ErrorKind::InvalidArgument, "points must have 1 to 3 coordinates");
  }
  dim_ = static_cast<int>(coords.size());
  std::size_t i = 0;
  for (double v : coords) c_[i++] = v;
}

Point Point::zero(int dim) {
  if (dim < 1 || dim > kMaxDim) throw Error(ErrorKind::InvalidArgument, "bad dimension");
  Point p;
  p.dim_ = dim;
  return p;
}

Point Point::unit(int dim, int axis) {
  Point p = zero(dim);
  p[axis] = 1.0;
  return p;
}

Point& Point::operator+=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] += o.c_[i];
  return *this;
}

Point& Point::operator-=(const Point& o) {
  for (int i = 0; i < dim_; ++i) c_[i] -= o.c_[i];
  return *this;
}

Point& Point::operator*=(double s) {
  for (int i = 0; i < dim_; ++i) c_[i] *= s;
  return *this;
}

double Point::dot(const Point& o) const {
  double s = 0.0;
  for (int i = 0; i < dim_; ++i) s += c_[i] * o.c_[i];
  return s;
}

bool Point::is_finite() const {
  for (int i = 0; i < dim_; ++i) {
    if (!std::isfinite(c_[i])) return false;
  }
  return true;
}

std::string Point::to_string() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

bool operator==(const Point& a, const Point& b) {
  if (a.dim() != b.dim()) return false;
  for (int i = 0; i < a.dim(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

std::ostream& operator<<(std::ostream& os, const Point& p) {
  os << '(';
  for (int i = 0; i < p.dim(); ++i) os << (i ? ", " : "") << p[i];
  return os << ')';
}

Point parse_point(const std::string& text) {
  std::stringstream ss(text);
  std::string item;
  Point p;
  int n = 0;
  double v[Point::kMaxDim] = {};
  while (std::getline(ss, item, ',')) {
    if (n == Point::kMaxDim) throw Error(ErrorKind::InvalidArgument, "too many coordinates: " + text);
    std::size_t used = 0;
    try {
      v[n] = std::stod(item, &used);
    } catch (const std::exception&) {
      throw Error(ErrorKind::InvalidArgument, "not a number in point: " + text);
    }
    while (used < item.size() && std::isspace(static_cast<unsigned char>(item[used]))) ++used;
    if (used != item.size()) throw Error(ErrorKind::InvalidArgument, "trailing characters in point: " + text);
    ++n;
  }
  if (n < 2) throw Error(ErrorKind::InvalidArgument, "points need 2 or 3 coordinates: " + text);
  p = n == 2 ? Point{v[0], v[1]} : Point{v[0], v[1], v[2]};
  if (!p.is_finite()) throw Error(ErrorKind::InvalidArgument, "non-finite coordinate: " + text);
  return p;
}

}  // namespace qhm

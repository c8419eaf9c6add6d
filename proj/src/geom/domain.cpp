#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "qhm/geom.hpp"

namespace qhm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double sgn(double v) { return v < 0.0 ? -1.0 : 1.0; }

}  // namespace

bool Box::contains(const Point& p) const {
  for (int i = 0; i < dim(); ++i) {
    if (p[i] < lo[i] || p[i] > hi[i]) return false;
  }
  return true;
}

Box Box::intersect(const Box& other) const {
  Box out = *this;
  for (int i = 0; i < dim(); ++i) {
    out.lo[i] = std::max(lo[i], other.lo[i]);
    out.hi[i] = std::min(hi[i], other.hi[i]);
  }
  return out;
}

double Box::diameter() const { return (hi - lo).norm(); }

// ---------------------------------------------------------------------------

double GraphDomain::f(const Point& x) const {
  switch (family) {
    case GraphFamily::Paraboloid: {
      double r2 = 0.0;
      for (int i = 1; i < dim; ++i) r2 += x[i] * x[i];
      return 0.5 * kappa * r2;
    }
    case GraphFamily::CosineBump:
      return amplitude * (1.0 - std::cos(frequency * x[1]));
    case GraphFamily::C11Kink:
      return 0.5 * kappa * x[1] * std::abs(x[1]);
  }
  return 0.0;
}

Point GraphDomain::grad(const Point& x) const {
  Point g = Point::zero(dim);
  switch (family) {
    case GraphFamily::Paraboloid:
      for (int i = 1; i < dim; ++i) g[i] = kappa * x[i];
      break;
    case GraphFamily::CosineBump:
      g[1] = amplitude * frequency * std::sin(frequency * x[1]);
      break;
    case GraphFamily::C11Kink:
      g[1] = kappa * std::abs(x[1]);
      break;
  }
  return g;
}

void GraphDomain::hessian(const Point& x, double h[2][2]) const {
  h[0][0] = h[0][1] = h[1][0] = h[1][1] = 0.0;
  switch (family) {
    case GraphFamily::Paraboloid:
      h[0][0] = h[1][1] = kappa;
      break;
    case GraphFamily::CosineBump:
      h[0][0] = amplitude * frequency * frequency * std::cos(frequency * x[1]);
      break;
    case GraphFamily::C11Kink:
      h[0][0] = kappa * sgn(x[1]);
      break;
  }
}

double GraphDomain::gradient_lipschitz() const {
  switch (family) {
    case GraphFamily::Paraboloid:
    case GraphFamily::C11Kink:
      return std::abs(kappa);
    case GraphFamily::CosineBump:
      return std::abs(amplitude) * frequency * frequency;
  }
  return 0.0;
}

std::vector<double> GraphDomain::kinks() const {
  if (family == GraphFamily::C11Kink) return {0.0};
  return {};
}

Point GraphDomain::boundary_point(const Point& x) const {
  Point y = x;
  y[0] = f(x);
  return y;
}

Point GraphDomain::inward_normal(const Point& x) const {
  Point n = grad(x) * -1.0;
  n[0] = 1.0;
  return n * (1.0 / n.norm());
}

// ---------------------------------------------------------------------------

double ImplicitDomain::level(const Point& x) const {
  const double p = family == ImplicitFamily::Ellipse ? 2.0 : exponent;
  return std::pow(std::abs(x[0] / semi_a), p) + std::pow(std::abs(x[1] / semi_b), p);
}

Point ImplicitDomain::boundary_point(double angle) const {
  const double p = family == ImplicitFamily::Ellipse ? 2.0 : exponent;
  const double c = std::cos(angle), s = std::sin(angle);
  const double denom = std::pow(std::abs(c / semi_a), p) + std::pow(std::abs(s / semi_b), p);
  const double rho = std::pow(denom, -1.0 / p);
  return Point{rho * c, rho * s};
}

Point ImplicitDomain::boundary_derivative(double angle) const {
  const double p = family == ImplicitFamily::Ellipse ? 2.0 : exponent;
  const double c = std::cos(angle), s = std::sin(angle);
  const double A = std::pow(std::abs(c / semi_a), p);
  const double B = std::pow(std::abs(s / semi_b), p);
  const double denom = A + B;
  const double rho = std::pow(denom, -1.0 / p);
  // d/dθ |c/a|^p = -p |c/a|^{p-1} sgn(c) s / a, likewise for the sine term.
  const double dA = c == 0.0 ? 0.0 : -p * A / c * s;
  const double dB = s == 0.0 ? 0.0 : p * B / s * c;
  const double drho = -rho / (p * denom) * (dA + dB);
  return Point{drho * c - rho * s, drho * s + rho * c};
}

Point ImplicitDomain::inward_normal(const Point& y) const {
  const double p = family == ImplicitFamily::Ellipse ? 2.0 : exponent;
  Point g{p * std::pow(std::abs(y[0]), p - 1.0) * sgn(y[0]) / std::pow(semi_a, p),
          p * std::pow(std::abs(y[1]), p - 1.0) * sgn(y[1]) / std::pow(semi_b, p)};
  return g * (-1.0 / g.norm());
}

// ---------------------------------------------------------------------------

int dimension(const DomainSpec& domain) {
  return std::visit(
      [](const auto& d) -> int {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) return d.dim;
        if constexpr (std::is_same_v<T, Ball>) return d.center.dim();
        if constexpr (std::is_same_v<T, GraphDomain>) return d.dim;
        if constexpr (std::is_same_v<T, ImplicitDomain>) return 2;
      },
      domain);
}

Box bounding_box(const DomainSpec& domain) {
  const int n = dimension(domain);
  Box box{Point::zero(n), Point::zero(n)};
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          box.lo[0] = 0.0;
          box.hi[0] = kInf;
          for (int i = 1; i < n; ++i) {
            box.lo[i] = -kInf;
            box.hi[i] = kInf;
          }
        } else if constexpr (std::is_same_v<T, Ball>) {
          for (int i = 0; i < n; ++i) {
            box.lo[i] = d.center[i] - d.radius;
            box.hi[i] = d.center[i] + d.radius;
          }
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          double fmin = 0.0;
          if (d.family == GraphFamily::C11Kink) fmin = -0.5 * std::abs(d.kappa) * d.half_width * d.half_width;
          if (d.family == GraphFamily::CosineBump) fmin = std::min(0.0, 2.0 * d.amplitude);
          if (d.family == GraphFamily::Paraboloid && d.kappa < 0.0)
            fmin = 0.5 * d.kappa * d.half_width * d.half_width * (n - 1);
          box.lo[0] = fmin;
          box.hi[0] = d.top;
          for (int i = 1; i < n; ++i) {
            box.lo[i] = -d.half_width;
            box.hi[i] = d.half_width;
          }
        } else {
          // rho(θ) <= max(a, b) for p >= 2 only along the axes; the box [-a,a]x[-b,b] holds.
          box.lo = Point{-d.semi_a, -d.semi_b};
          box.hi = Point{d.semi_a, d.semi_b};
        }
      },
      domain);
  return box;
}

bool contains(const DomainSpec& domain, const Point& x) {
  if (x.dim() != dimension(domain) || !x.is_finite()) return false;
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return x[0] > 0.0;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return distance(x, d.center) < d.radius;
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          for (int i = 1; i < d.dim; ++i) {
            if (std::abs(x[i]) > d.half_width) return false;
          }
          return x[0] > d.f(x) && x[0] <= d.top;
        } else {
          return d.level(x) < 1.0;
        }
      },
      domain);
}

std::string describe(const DomainSpec& domain) {
  std::ostringstream os;
  os.precision(12);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          os << "halfspace(dim=" << d.dim << ")";
        } else if constexpr (std::is_same_v<T, Ball>) {
          os << "ball(center=" << d.center << ", radius=" << d.radius << ")";
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          switch (d.family) {
            case GraphFamily::Paraboloid: os << "paraboloid(kappa=" << d.kappa; break;
            case GraphFamily::CosineBump:
              os << "cosine(amplitude=" << d.amplitude << ", frequency=" << d.frequency;
              break;
            case GraphFamily::C11Kink: os << "c11(kappa=" << d.kappa; break;
          }
          os << ", dim=" << d.dim << ", half_width=" << d.half_width << ", top=" << d.top << ")";
        } else {
          os << (d.family == ImplicitFamily::Ellipse ? "ellipse" : "superellipse") << "(a=" << d.semi_a
             << ", b=" << d.semi_b;
          if (d.family == ImplicitFamily::Superellipse) os << ", p=" << d.exponent;
          os << ")";
        }
      },
      domain);
  return os.str();
}

double curvature_constant(const DomainSpec& domain) {
  return std::visit(
      [](const auto& d) -> double {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, Ball>) {
          return 1.0 / d.radius;
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          // curvature f''/(1+f'^2)^{3/2} never exceeds |f''| <= L
          return d.gradient_lipschitz();
        } else {
          double kmax = 0.0;
          constexpr int kSamples = 4096;
          for (int i = 0; i < kSamples; ++i) {
            const double u = 2.0 * std::numbers::pi * i / kSamples;
            const double h = 1e-4;
            const Point d1 = d.boundary_derivative(u);
            const Point d2 = (d.boundary_derivative(u + h) - d.boundary_derivative(u - h)) * (0.5 / h);
            const double speed = d1.norm();
            kmax = std::max(kmax, std::abs(d1[0] * d2[1] - d1[1] * d2[0]) / (speed * speed * speed));
          }
          return kmax;
        }
      },
      domain);
}

}  // namespace qhm

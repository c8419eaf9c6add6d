#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/tools/minima.hpp>

#include "qhm/geom.hpp"

namespace qhm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kStarts = 11;
constexpr double kTieTolerance = 1e-9;

struct Candidate {
  Point foot;
  double dist;
};

// Safeguarded Newton on g' inside [a, b] with g'(a) < 0 < g'(b).
template <typename D1, typename D2>
double newton_bracketed(D1 dg, D2 d2g, double a, double b, double start) {
  double p = std::clamp(start, a, b);
  for (int it = 0; it < 200; ++it) {
    const double d1 = dg(p);
    if (d1 == 0.0) return p;
    if (d1 < 0.0) a = p; else b = p;
    const double d2 = d2g(p);
    double next = d2 > 0.0 ? p - d1 / d2 : 0.5 * (a + b);
    if (!(next > a && next < b)) next = 0.5 * (a + b);
    if (std::abs(next - p) <= 1e-15 * std::max(1.0, std::abs(p)) || b - a <= 1e-15 * std::max(1.0, std::abs(p))) {
      return next;
    }
    p = next;
  }
  throw Error(ErrorKind::ProjectionNotConverged, "Newton iteration did not settle");
}

// Local minimizers of a 1-D squared-distance function on [lo, hi], found by
// sampling kStarts points and polishing every sampled local minimum.
template <typename G, typename D1, typename D2>
std::vector<double> minimize_1d(G g, D1 dg, D2 d2g, double lo, double hi, int starts) {
  std::vector<double> roots;
  if (!(hi > lo)) {
    roots.push_back(lo);
    return roots;
  }
  std::vector<double> ps(starts), vs(starts);
  for (int i = 0; i < starts; ++i) {
    ps[i] = lo + (hi - lo) * i / (starts - 1);
    vs[i] = g(ps[i]);
  }
  for (int i = 0; i < starts; ++i) {
    const bool left_ok = i == 0 || vs[i] <= vs[i - 1];
    const bool right_ok = i == starts - 1 || vs[i] <= vs[i + 1];
    if (!left_ok || !right_ok) continue;
    const double a = ps[std::max(0, i - 1)];
    const double b = ps[std::min(starts - 1, i + 1)];
    const double da = dg(a), db = dg(b);
    if (da < 0.0 && db > 0.0) {
      roots.push_back(newton_bracketed(dg, d2g, a, b, ps[i]));
      continue;
    }
    // No sign change: constrained minimum at an end of [lo, hi] or a flat
    // stretch; fall back on a derivative-free search and keep the best.
    const auto r = boost::math::tools::brent_find_minima(g, a, b, std::numeric_limits<double>::digits);
    double best = r.first, bestv = r.second;
    for (double e : {a, b}) {
      const double v = g(e);
      if (v < bestv) { best = e; bestv = v; }
    }
    roots.push_back(best);
  }
  return roots;
}

std::vector<Candidate> dedupe_sorted(std::vector<Candidate> cands) {
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) { return x.dist < y.dist; });
  std::vector<Candidate> out;
  for (const auto& c : cands) {
    bool dup = false;
    for (const auto& o : out) {
      if (distance(o.foot, c.foot) <= 1e-7 * std::max(1.0, c.dist)) { dup = true; break; }
    }
    if (!dup) out.push_back(c);
  }
  return out;
}

std::vector<Candidate> graph_candidates_2d(const GraphDomain& g, const Point& y) {
  const double W = g.half_width;
  const double q = std::clamp(y[1], -W, W);
  const double r = distance(y, g.boundary_point(Point{0.0, q}));
  const double lo = std::max(-W, y[1] - r), hi = std::min(W, y[1] + r);
  auto fval = [&](double p) { return g.f(Point{0.0, p}); };
  auto fp = [&](double p) { return g.grad(Point{0.0, p})[1]; };
  auto fpp = [&](double p) {
    double h[2][2];
    g.hessian(Point{0.0, p}, h);
    return h[0][0];
  };
  auto sq = [&](double p) {
    const double a = y[0] - fval(p), b = y[1] - p;
    return a * a + b * b;
  };
  auto dsq = [&](double p) { return -2.0 * (y[0] - fval(p)) * fp(p) - 2.0 * (y[1] - p); };
  auto d2sq = [&](double p) {
    const double s = fp(p);
    return 2.0 * s * s - 2.0 * (y[0] - fval(p)) * fpp(p) + 2.0;
  };
  std::vector<Candidate> out;
  for (double p : minimize_1d(sq, dsq, d2sq, lo, hi, kStarts)) {
    out.push_back({Point{fval(p), p}, std::sqrt(sq(p))});
  }
  return out;
}

// Projected Newton with backtracking for the 2-parameter (3-D) graph case.
std::vector<Candidate> graph_candidates_3d(const GraphDomain& g, const Point& y) {
  const double W = g.half_width;
  Point q{0.0, std::clamp(y[1], -W, W), std::clamp(y[2], -W, W)};
  const double r = distance(y, g.boundary_point(q));
  const double lo1 = std::max(-W, y[1] - r), hi1 = std::min(W, y[1] + r);
  const double lo2 = std::max(-W, y[2] - r), hi2 = std::min(W, y[2] + r);
  auto sq = [&](double p1, double p2) {
    const Point x{0.0, p1, p2};
    const double a = y[0] - g.f(x), b = y[1] - p1, c = y[2] - p2;
    return a * a + b * b + c * c;
  };
  double vals[kStarts][kStarts];
  auto coord = [](double lo, double hi, int i) { return lo + (hi - lo) * i / (kStarts - 1); };
  for (int i = 0; i < kStarts; ++i)
    for (int j = 0; j < kStarts; ++j) vals[i][j] = sq(coord(lo1, hi1, i), coord(lo2, hi2, j));

  std::vector<Candidate> out;
  for (int i = 0; i < kStarts; ++i) {
    for (int j = 0; j < kStarts; ++j) {
      bool is_min = true;
      for (int di = -1; di <= 1 && is_min; ++di)
        for (int dj = -1; dj <= 1; ++dj) {
          const int ii = i + di, jj = j + dj;
          if ((di || dj) && ii >= 0 && jj >= 0 && ii < kStarts && jj < kStarts && vals[ii][jj] < vals[i][j]) {
            is_min = false;
            break;
          }
        }
      if (!is_min) continue;
      double p1 = coord(lo1, hi1, i), p2 = coord(lo2, hi2, j);
      double v = vals[i][j];
      bool settled = false;
      for (int it = 0; it < 200; ++it) {
        const Point x{0.0, p1, p2};
        const double res = y[0] - g.f(x);
        const Point gf = g.grad(x);
        double hf[2][2];
        g.hessian(x, hf);
        const double g1 = -2.0 * res * gf[1] - 2.0 * (y[1] - p1);
        const double g2 = -2.0 * res * gf[2] - 2.0 * (y[2] - p2);
        const double h11 = 2.0 * gf[1] * gf[1] - 2.0 * res * hf[0][0] + 2.0;
        const double h22 = 2.0 * gf[2] * gf[2] - 2.0 * res * hf[1][1] + 2.0;
        const double h12 = 2.0 * gf[1] * gf[2] - 2.0 * res * hf[0][1];
        const double det = h11 * h22 - h12 * h12;
        double s1, s2;
        if (h11 > 0.0 && det > 0.0) {
          s1 = -(h22 * g1 - h12 * g2) / det;
          s2 = -(-h12 * g1 + h11 * g2) / det;
        } else {
          const double scale = 1.0 / std::max(1.0, std::abs(h11) + std::abs(h22));
          s1 = -g1 * scale;
          s2 = -g2 * scale;
        }
        double t = 1.0;
        double n1 = p1, n2 = p2, nv = v;
        for (int bt = 0; bt < 60; ++bt) {
          n1 = std::clamp(p1 + t * s1, lo1, hi1);
          n2 = std::clamp(p2 + t * s2, lo2, hi2);
          nv = sq(n1, n2);
          if (nv <= v) break;
          t *= 0.5;
        }
        const double step = std::hypot(n1 - p1, n2 - p2);
        if (nv > v) { settled = true; break; }
        p1 = n1;
        p2 = n2;
        v = nv;
        if (step <= 1e-15 * std::max(1.0, std::hypot(p1, p2))) { settled = true; break; }
      }
      if (!settled) throw Error(ErrorKind::ProjectionNotConverged, "2-parameter Newton did not settle");
      const Point x{0.0, p1, p2};
      out.push_back({g.boundary_point(x), std::sqrt(v)});
    }
  }
  return out;
}

std::vector<Candidate> implicit_candidates(const ImplicitDomain& d, const Point& y) {
  constexpr int kSamples = 64;
  auto sq = [&](double u) { return (d.boundary_point(u) - y).squared_norm(); };
  std::vector<double> vs(kSamples);
  const double du = 2.0 * std::numbers::pi / kSamples;
  for (int i = 0; i < kSamples; ++i) vs[i] = sq(i * du);
  std::vector<Candidate> out;
  for (int i = 0; i < kSamples; ++i) {
    const double prev = vs[(i + kSamples - 1) % kSamples], next = vs[(i + 1) % kSamples];
    if (vs[i] > prev || vs[i] > next) continue;
    const auto r = boost::math::tools::brent_find_minima(sq, (i - 1) * du, (i + 1) * du,
                                                         std::numeric_limits<double>::digits);
    out.push_back({d.boundary_point(r.first), std::sqrt(r.second)});
  }
  return out;
}

std::vector<Candidate> candidates(const DomainSpec& domain, const Point& y) {
  return std::visit(
      [&](const auto& d) -> std::vector<Candidate> {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          Point foot = y;
          foot[0] = 0.0;
          return {{foot, std::abs(y[0])}};
        } else if constexpr (std::is_same_v<T, Ball>) {
          const Point rel = y - d.center;
          const double len = rel.norm();
          if (len <= 1e-14 * d.radius) {
            // every boundary point is nearest; report two antipodal ones
            const Point e = Point::unit(y.dim(), 0);
            return {{d.center + e * d.radius, d.radius}, {d.center - e * d.radius, d.radius}};
          }
          return {{d.center + rel * (d.radius / len), std::abs(d.radius - len)}};
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          return d.dim == 2 ? graph_candidates_2d(d, y) : graph_candidates_3d(d, y);
        } else {
          return implicit_candidates(d, y);
        }
      },
      domain);
}

Point normal_at(const DomainSpec& domain, const Point& foot) {
  return std::visit(
      [&](const auto& d) -> Point {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return Point::unit(d.dim, 0);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (d.center - foot) * (1.0 / d.radius);
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          return d.inward_normal(foot);
        } else {
          return d.inward_normal(foot);
        }
      },
      domain);
}

// Whether a point lies on the domain side of the (unwindowed) boundary.
bool on_inner_side(const DomainSpec& domain, const Point& x) {
  return std::visit(
      [&](const auto& d) -> bool {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) return x[0] > 0.0;
        if constexpr (std::is_same_v<T, Ball>) return distance(x, d.center) < d.radius;
        if constexpr (std::is_same_v<T, GraphDomain>) return x[0] > d.f(x);
        if constexpr (std::is_same_v<T, ImplicitDomain>) return d.level(x) < 1.0;
      },
      domain);
}

struct BoundarySample {
  Point point;
  Point normal;
};

std::vector<BoundarySample> boundary_samples(const DomainSpec& domain, const Box& region) {
  constexpr std::size_t kTarget = 256;
  std::vector<BoundarySample> dense;
  const int n = dimension(domain);
  std::visit(
      [&](const auto& d) {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, GraphDomain>) {
          if (n == 2) {
            const double lo = std::max(region.lo[1], -d.half_width), hi = std::min(region.hi[1], d.half_width);
            if (hi < lo) return;
            for (std::size_t i = 0; i < 4 * kTarget; ++i) {
              const double p = lo + (hi - lo) * i / (4 * kTarget - 1);
              const Point x{0.0, p};
              dense.push_back({d.boundary_point(x), d.inward_normal(x)});
            }
          } else {
            const double lo1 = std::max(region.lo[1], -d.half_width), hi1 = std::min(region.hi[1], d.half_width);
            const double lo2 = std::max(region.lo[2], -d.half_width), hi2 = std::min(region.hi[2], d.half_width);
            if (hi1 < lo1 || hi2 < lo2) return;
            for (int i = 0; i < 32; ++i)
              for (int j = 0; j < 32; ++j) {
                const Point x{0.0, lo1 + (hi1 - lo1) * i / 31.0, lo2 + (hi2 - lo2) * j / 31.0};
                dense.push_back({d.boundary_point(x), d.inward_normal(x)});
              }
          }
        } else if constexpr (std::is_same_v<T, Ball>) {
          constexpr int kDense = 8192;
          for (int i = 0; i < kDense; ++i) {
            Point dir = Point::zero(n);
            if (n == 2) {
              const double a = 2.0 * std::numbers::pi * i / kDense;
              dir = Point{std::cos(a), std::sin(a)};
            } else {
              // Fibonacci lattice on the sphere
              const double z = 1.0 - 2.0 * (i + 0.5) / kDense;
              const double rho = std::sqrt(1.0 - z * z);
              const double a = std::numbers::pi * (3.0 - std::sqrt(5.0)) * i;
              dir = Point{z, rho * std::cos(a), rho * std::sin(a)};
            }
            dense.push_back({d.center + dir * d.radius, -dir});
          }
        } else if constexpr (std::is_same_v<T, ImplicitDomain>) {
          constexpr int kDense = 8192;
          for (int i = 0; i < kDense; ++i) {
            const Point y = d.boundary_point(2.0 * std::numbers::pi * i / kDense);
            dense.push_back({y, d.inward_normal(y)});
          }
        }
      },
      domain);
  std::vector<BoundarySample> inside;
  for (const auto& s : dense) {
    if (region.contains(s.point)) inside.push_back(s);
  }
  if (inside.size() <= kTarget) return inside;
  std::vector<BoundarySample> out;
  for (std::size_t i = 0; i < kTarget; ++i) out.push_back(inside[i * (inside.size() - 1) / (kTarget - 1)]);
  return out;
}

}  // namespace

BoundaryContact boundary_contact(const DomainSpec& domain, const Point& x) {
  if (!contains(domain, x)) {
    throw Error(ErrorKind::PointOutsideDomain, x.to_string() + " is not inside " + describe(domain));
  }
  auto cands = dedupe_sorted(candidates(domain, x));
  if (cands.empty()) throw Error(ErrorKind::ProjectionNotConverged, "no boundary candidate found");
  BoundaryContact out;
  out.distance = cands.front().dist;
  out.foot = cands.front().foot;
  out.normal = normal_at(domain, out.foot);
  out.unique = true;
  for (std::size_t i = 1; i < cands.size(); ++i) {
    if (cands[i].dist - out.distance <= kTieTolerance * std::max(out.distance, 1e-300)) out.unique = false;
  }
  return out;
}

double boundary_distance(const DomainSpec& domain, const Point& x) {
  if (const auto* h = std::get_if<HalfSpace>(&domain)) {
    if (!(x[0] > 0.0) || x.dim() != h->dim) {
      throw Error(ErrorKind::PointOutsideDomain, x.to_string() + " is not inside the half-space");
    }
    return x[0];
  }
  if (const auto* b = std::get_if<Ball>(&domain)) {
    const double d = b->radius - distance(x, b->center);
    if (!(d > 0.0)) throw Error(ErrorKind::PointOutsideDomain, x.to_string() + " is not inside the ball");
    return d;
  }
  return boundary_contact(domain, x).distance;
}

double unsigned_boundary_distance(const DomainSpec& domain, const Point& x) {
  double best = kInf;
  for (const auto& c : candidates(domain, x)) best = std::min(best, c.dist);
  return best;
}

double reach_estimate(const DomainSpec& domain, const Box& region) {
  if (std::holds_alternative<HalfSpace>(domain)) {
    if (region.lo[0] > 0.0 || region.hi[0] < 0.0) {
      throw Error(ErrorKind::RegionMissesBoundary, "region does not meet {x_0 = 0}");
    }
    return kInf;
  }
  const auto samples = boundary_samples(domain, region);
  if (samples.empty()) throw Error(ErrorKind::RegionMissesBoundary, "no boundary points inside the region");

  auto passes = [&](double R) {
    for (const auto& s : samples) {
      const Point inner = s.point + s.normal * R;
      const Point outer = s.point - s.normal * R;
      if (!on_inner_side(domain, inner) || on_inner_side(domain, outer)) return false;
      if (unsigned_boundary_distance(domain, inner) < R * (1.0 - kTieTolerance)) return false;
      if (unsigned_boundary_distance(domain, outer) < R * (1.0 - kTieTolerance)) return false;
    }
    return true;
  };

  double hi = bounding_box(domain).diameter();
  if (!std::isfinite(hi)) hi = 10.0 * region.diameter();
  if (passes(hi)) return hi;
  double lo = 0.0;
  for (int step = 0; step < 20; ++step) {
    const double mid = 0.5 * (lo + hi);
    if (passes(mid)) lo = mid; else hi = mid;
  }
  return lo;
}

}  // namespace qhm

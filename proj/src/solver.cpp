#include "qhm/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <queue>

#include "qhm/error.hpp"
#include "qhm/metric.hpp"

namespace qhm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTouch = 1e-9;       // qh_length refuses nodes closer than this
constexpr double kRefineFloor = 1e-6; // refine_geodesic keeps vertices above this
constexpr int kMaxBoxGrowth = 4;

// 0 outside, so callers can treat "outside" and "on the boundary" alike
double interior_distance(const DomainSpec& domain, const Point& x) {
  if (!contains(domain, x)) return 0.0;
  return boundary_distance(domain, x);
}

double simpson_segment(const DomainSpec& domain, const Point& p, const Point& q, double fp, double fm, double fq,
                       double rel_tol, int depth) {
  const double len = distance(p, q);
  const double whole = len * (fp + 4.0 * fm + fq) / 6.0;
  const Point m = (p + q) * 0.5;
  const Point l = (p + m) * 0.5;
  const Point r = (m + q) * 0.5;
  const double dl = interior_distance(domain, l);
  const double dr = interior_distance(domain, r);
  if (dl < kTouch || dr < kTouch) throw Error(ErrorKind::CurveTouchesBoundary, "curve reaches the boundary");
  const double fl = 1.0 / dl, fr = 1.0 / dr;
  const double left = 0.5 * len * (fp + 4.0 * fl + fm) / 6.0;
  const double right = 0.5 * len * (fm + 4.0 * fr + fq) / 6.0;
  const double both = left + right;
  if (depth >= 40 || std::abs(both - whole) <= 15.0 * rel_tol * std::abs(both)) return both + (both - whole) / 15.0;
  return simpson_segment(domain, p, m, fp, fl, fm, rel_tol, depth + 1) +
         simpson_segment(domain, m, q, fm, fr, fq, rel_tol, depth + 1);
}

double checked_distance(const DomainSpec& domain, const Point& x) {
  const double d = interior_distance(domain, x);
  if (d < kTouch) throw Error(ErrorKind::CurveTouchesBoundary, x.to_string() + " is on or outside the boundary");
  return d;
}

double segment_length(const DomainSpec& domain, const Point& p, const Point& q, double dp, double dq,
                      double rel_tol) {
  if (distance(p, q) == 0.0) return 0.0;
  const double dm = checked_distance(domain, (p + q) * 0.5);
  return simpson_segment(domain, p, q, 1.0 / dp, 1.0 / dm, 1.0 / dq, rel_tol, 0);
}

// ---------------------------------------------------------------------------
// Grid graph

std::vector<std::array<int, 3>> stencil_offsets(int dim, int stencil) {
  if (stencil == 0) stencil = dim == 2 ? 16 : 26;
  std::vector<std::array<int, 3>> out;
  if (dim == 2) {
    if (stencil != 8 && stencil != 16) throw Error(ErrorKind::InvalidArgument, "2-D stencil must be 8 or 16");
    for (int i = -2; i <= 2; ++i) {
      for (int j = -2; j <= 2; ++j) {
        const int ai = std::abs(i), aj = std::abs(j);
        if (ai + aj == 0) continue;
        const bool king = ai <= 1 && aj <= 1;
        const bool knight = (ai == 1 && aj == 2) || (ai == 2 && aj == 1);
        if (king || (stencil == 16 && knight)) out.push_back({i, j, 0});
      }
    }
  } else {
    if (stencil != 6 && stencil != 18 && stencil != 26)
      throw Error(ErrorKind::InvalidArgument, "3-D stencil must be 6, 18 or 26");
    for (int i = -1; i <= 1; ++i) {
      for (int j = -1; j <= 1; ++j) {
        for (int k = -1; k <= 1; ++k) {
          const int nz = (i != 0) + (j != 0) + (k != 0);
          if (nz == 0) continue;
          if (stencil == 6 && nz > 1) continue;
          if (stencil == 18 && nz > 2) continue;
          out.push_back({i, j, k});
        }
      }
    }
  }
  return out;
}

// Nodes sit at lo + spacing * i. Distances are cached on the half-spaced
// lattice so Simpson midpoints of every stencil edge are shared.
class Lattice {
 public:
  Lattice(const DomainSpec& domain, const Box& box, double spacing)
      : domain_(domain), dim_(box.dim()), lo_(box.lo), h_(spacing) {
    for (int k = 0; k < 3; ++k) {
      n_[k] = 1;
      m_[k] = 1;
    }
    std::size_t total = 1;
    for (int k = 0; k < dim_; ++k) {
      n_[k] = static_cast<int>(std::floor((box.hi[k] - box.lo[k]) / h_ + 1e-9)) + 1;
      if (n_[k] < 2) n_[k] = 2;
      m_[k] = 2 * n_[k] - 1;
      total *= static_cast<std::size_t>(m_[k]);
    }
    half_.assign(total, std::numeric_limits<double>::quiet_NaN());
  }

  int dim() const { return dim_; }
  int count(int k) const { return n_[k]; }
  std::size_t nodes() const {
    std::size_t t = 1;
    for (int k = 0; k < dim_; ++k) t *= static_cast<std::size_t>(n_[k]);
    return t;
  }

  std::size_t index(const std::array<int, 3>& i) const {
    return (static_cast<std::size_t>(i[0]) * n_[1] + i[1]) * n_[2] + i[2];
  }
  std::array<int, 3> coords(std::size_t idx) const {
    std::array<int, 3> i{0, 0, 0};
    i[2] = static_cast<int>(idx % n_[2]);
    idx /= n_[2];
    i[1] = static_cast<int>(idx % n_[1]);
    i[0] = static_cast<int>(idx / n_[1]);
    return i;
  }
  bool valid(const std::array<int, 3>& i) const {
    for (int k = 0; k < 3; ++k) {
      if (i[k] < 0 || i[k] >= n_[k]) return false;
    }
    return true;
  }
  Point point(const std::array<int, 3>& i) const {
    Point p = lo_;
    for (int k = 0; k < dim_; ++k) p[k] += h_ * i[k];
    return p;
  }
  bool on_face(const std::array<int, 3>& i, std::array<bool, 6> growable) const {
    for (int k = 0; k < dim_; ++k) {
      if (i[k] == 0 && growable[2 * k]) return true;
      if (i[k] == n_[k] - 1 && growable[2 * k + 1]) return true;
    }
    return false;
  }

  // twice-node coordinates
  double half_distance(const std::array<int, 3>& j) {
    const std::size_t idx = (static_cast<std::size_t>(j[0]) * m_[1] + j[1]) * m_[2] + j[2];
    double& v = half_[idx];
    if (std::isnan(v)) {
      Point p = lo_;
      for (int k = 0; k < dim_; ++k) p[k] += 0.5 * h_ * j[k];
      v = interior_distance(domain_, p);
    }
    return v;
  }
  double node_distance(const std::array<int, 3>& i) { return half_distance({2 * i[0], 2 * i[1], 2 * i[2]}); }

  // nearest node (clamped) to p
  std::array<int, 3> nearest(const Point& p) const {
    std::array<int, 3> i{0, 0, 0};
    for (int k = 0; k < dim_; ++k) i[k] = std::clamp(static_cast<int>(std::lround((p[k] - lo_[k]) / h_)), 0, n_[k] - 1);
    return i;
  }

 private:
  const DomainSpec& domain_;
  int dim_;
  Point lo_;
  double h_;
  std::array<int, 3> n_{};
  std::array<int, 3> m_{};
  std::vector<double> half_;
};

// Straight edge from an off-lattice point; the midpoint is not on the lattice.
double direct_edge(const DomainSpec& domain, const Point& p, double dp, const Point& q, double dq) {
  const double dm = interior_distance(domain, (p + q) * 0.5);
  if (dm <= 0.0) return kInf;
  return distance(p, q) * (1.0 / dp + 4.0 / dm + 1.0 / dq) / 6.0;
}

double ghm_to(double d_x, double sep, double d_b) {
  const double g = std::sqrt(d_x * d_b);
  const double excess = std::sqrt(d_x) - std::sqrt(d_b);
  return 2.0 * std::log1p((excess * excess + sep) / (2.0 * g));
}

void validate_grid(const GridSpec& grid) {
  if (!(grid.spacing > 0.0) || !std::isfinite(grid.spacing))
    throw Error(ErrorKind::InvalidArgument, "grid spacing must be positive");
  if (!(grid.margin >= 2.0)) throw Error(ErrorKind::InvalidArgument, "grid margin must be at least 2");
}

// ---------------------------------------------------------------------------
// Refinement helpers

double simpson3(const Point& p, const Point& q, double dp, double dm, double dq) {
  return distance(p, q) * (1.0 / dp + 4.0 / dm + 1.0 / dq) / 6.0;
}

// Resample to n segments of equal (approximate) quasi-hyperbolic length.
std::vector<Point> resample(const DomainSpec& domain, const std::vector<Point>& pts, int n) {
  std::vector<double> cum(pts.size(), 0.0);
  std::vector<double> dv(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) dv[i] = checked_distance(domain, pts[i]);
  for (std::size_t i = 1; i < pts.size(); ++i)
    cum[i] = cum[i - 1] + segment_length(domain, pts[i - 1], pts[i], dv[i - 1], dv[i], 1e-6);
  const double total = cum.back();
  std::vector<Point> out;
  out.reserve(static_cast<std::size_t>(n) + 1);
  out.push_back(pts.front());
  std::size_t seg = 1;
  for (int k = 1; k < n; ++k) {
    const double target = total * k / n;
    while (seg + 1 < pts.size() && cum[seg] < target) ++seg;
    const double span = cum[seg] - cum[seg - 1];
    const double w = span > 0.0 ? std::clamp((target - cum[seg - 1]) / span, 0.0, 1.0) : 0.0;
    out.push_back(pts[seg - 1] + (pts[seg] - pts[seg - 1]) * w);
  }
  out.push_back(pts.back());
  return out;
}

class Descent {
 public:
  Descent(const DomainSpec& domain, std::vector<Point> pts) : domain_(domain), x_(std::move(pts)) {
    const std::size_t n = x_.size();
    d_.resize(n);
    dm_.resize(n - 1);
    for (std::size_t i = 0; i < n; ++i) d_[i] = checked_distance(domain_, x_[i]);
    for (std::size_t i = 0; i + 1 < n; ++i) dm_[i] = checked_distance(domain_, (x_[i] + x_[i + 1]) * 0.5);
  }

  double energy() const {
    double e = 0.0;
    for (std::size_t i = 0; i + 1 < x_.size(); ++i) e += simpson3(x_[i], x_[i + 1], d_[i], dm_[i], d_[i + 1]);
    return e;
  }

  // one Gauss-Seidel pass; returns the energy decrease
  double sweep() {
    double gain = 0.0;
    for (std::size_t i = 1; i + 1 < x_.size(); ++i) gain += move_vertex(i);
    return gain;
  }

  const std::vector<Point>& points() const { return x_; }

 private:
  struct Local {
    double e = kInf;
    double d = 0.0, ml = 0.0, mr = 0.0;
  };

  Local local(std::size_t i, const Point& p) const {
    Local out;
    out.d = interior_distance(domain_, p);
    if (out.d < kRefineFloor) return out;
    out.ml = interior_distance(domain_, (x_[i - 1] + p) * 0.5);
    out.mr = interior_distance(domain_, (p + x_[i + 1]) * 0.5);
    if (out.ml < kRefineFloor || out.mr < kRefineFloor) return out;
    out.e = simpson3(x_[i - 1], p, d_[i - 1], out.ml, out.d) + simpson3(p, x_[i + 1], out.d, out.mr, d_[i + 1]);
    return out;
  }

  double move_vertex(std::size_t i) {
    const Point& p = x_[i];
    const int dim = p.dim();
    const double e0 = simpson3(x_[i - 1], p, d_[i - 1], dm_[i - 1], d_[i]) +
                      simpson3(p, x_[i + 1], d_[i], dm_[i], d_[i + 1]);
    const double ll = distance(x_[i - 1], p), lr = distance(p, x_[i + 1]);
    if (ll == 0.0 || lr == 0.0) return 0.0;
    const double eps = 1e-6 * std::min({ll, lr, d_[i]});
    Point g = Point::zero(dim);
    for (int k = 0; k < dim; ++k) {
      const Point e = Point::unit(dim, k) * eps;
      const double fp = local(i, p + e).e, fm = local(i, p - e).e;
      if (!std::isfinite(fp) || !std::isfinite(fm)) return 0.0;
      g[k] = (fp - fm) / (2.0 * eps);
    }
    // Moving along the curve only reparametrizes; keep the normal part.
    Point tau = x_[i + 1] - x_[i - 1];
    const double tn = tau.norm();
    if (tn == 0.0) return 0.0;
    tau *= 1.0 / tn;
    g -= tau * g.dot(tau);
    const double gn = g.norm();
    if (gn == 0.0) return 0.0;
    // stiffness of a string with tension 1/d
    const double stiffness = (1.0 / ll + 1.0 / lr) / d_[i];
    double step = std::min(gn / stiffness, 0.25 * d_[i]);
    const Point dir = g * (-1.0 / gn);
    for (int tries = 0; tries < 6; ++tries, step *= 0.5) {
      const Point q = p + dir * step;
      const Local c = local(i, q);
      if (c.e < e0) {
        x_[i] = q;
        d_[i] = c.d;
        dm_[i - 1] = c.ml;
        dm_[i] = c.mr;
        return e0 - c.e;
      }
    }
    return 0.0;
  }

  const DomainSpec& domain_;
  std::vector<Point> x_;
  std::vector<double> d_;
  std::vector<double> dm_;
};

}  // namespace

double qh_length(const DomainSpec& domain, const Curve& curve, double rel_tol) {
  const auto& pts = curve.points();
  double total = 0.0;
  double dp = 0.0;
  bool have_dp = false;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (distance(pts[i], pts[i + 1]) == 0.0) continue;
    if (!have_dp) dp = checked_distance(domain, pts[i]);
    const double dq = checked_distance(domain, pts[i + 1]);
    total += segment_length(domain, pts[i], pts[i + 1], dp, dq, rel_tol);
    dp = dq;
    have_dp = true;
  }
  return total;
}

Box auto_box(const DomainSpec& domain, const Point& a, const Point& b, double d_a, double d_b, double spacing,
             double growth) {
  const int dim = a.dim();
  const double sep = distance(a, b);
  const double pad = std::max(growth * (0.6 * sep + 0.1 * std::max(d_a, d_b)), 4.0 * spacing);
  Box box{Point::zero(dim), Point::zero(dim)};
  for (int k = 0; k < dim; ++k) {
    box.lo[k] = std::min(a[k], b[k]) - pad;
    box.hi[k] = std::max(a[k], b[k]) + pad;
  }
  return box.intersect(bounding_box(domain));
}

GridPath grid_shortest_path(const DomainSpec& domain, const Point& a, const Point& b, const GridSpec& grid) {
  validate_grid(grid);
  const int dim = dimension(domain);
  if (a.dim() != dim || b.dim() != dim) throw Error(ErrorKind::InvalidArgument, "point dimension mismatch");
  if (!contains(domain, a) || !contains(domain, b))
    throw Error(ErrorKind::PointOutsideDomain, "query points must be interior");
  const double h = grid.spacing;
  const double floor_d = grid.margin * h;
  const double d_a = boundary_distance(domain, a);
  const double d_b = boundary_distance(domain, b);
  if (d_a < floor_d || d_b < floor_d)
    throw Error(ErrorKind::PointTooCloseToBoundary, "query point closer to the boundary than margin * spacing");

  const Box box = grid.box.dim() == 0 ? auto_box(domain, a, b, d_a, d_b, h) : grid.box;
  if (!box.contains(a) || !box.contains(b)) throw Error(ErrorKind::InvalidArgument, "query points outside the grid box");
  const Box outer = bounding_box(domain);
  std::array<bool, 6> growable{};
  for (int k = 0; k < dim; ++k) {
    growable[2 * k] = box.lo[k] > outer.lo[k];
    growable[2 * k + 1] = box.hi[k] < outer.hi[k];
  }

  Lattice lat(domain, box, h);
  const auto offsets = stencil_offsets(dim, grid.stencil);
  const std::size_t n = lat.nodes();
  const std::size_t source = n, target = n + 1;

  std::vector<double> g(n + 2, kInf);
  std::vector<std::uint32_t> parent(n + 2, std::numeric_limits<std::uint32_t>::max());
  std::vector<std::uint8_t> closed(n + 2, 0);

  const double sep_ab = distance(a, b);
  auto heuristic = [&](const Point& p, double dp) { return 0.99 * ghm_to(dp, distance(p, b), d_b); };

  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;

  // nodes within two cells of an endpoint get a direct edge to it
  auto near_nodes = [&](const Point& p) {
    std::vector<std::array<int, 3>> out;
    const auto c = lat.nearest(p);
    std::array<int, 3> lo{0, 0, 0}, hi{0, 0, 0};
    for (int k = 0; k < dim; ++k) {
      lo[k] = -2;
      hi[k] = 2;
    }
    for (int i = lo[0]; i <= hi[0]; ++i)
      for (int j = lo[1]; j <= hi[1]; ++j)
        for (int l = lo[2]; l <= hi[2]; ++l) {
          const std::array<int, 3> q{c[0] + i, c[1] + j, c[2] + l};
          if (lat.valid(q) && lat.node_distance(q) >= floor_d) out.push_back(q);
        }
    return out;
  };

  g[source] = 0.0;
  closed[source] = 1;
  if (sep_ab <= 3.0 * h) {
    g[target] = direct_edge(domain, a, d_a, b, d_b);
    parent[target] = static_cast<std::uint32_t>(source);
  }
  for (const auto& q : near_nodes(a)) {
    const std::size_t idx = lat.index(q);
    const Point p = lat.point(q);
    const double dq = lat.node_distance(q);
    const double w = direct_edge(domain, a, d_a, p, dq);
    if (w < g[idx]) {
      g[idx] = w;
      parent[idx] = static_cast<std::uint32_t>(source);
      open.push({w + heuristic(p, dq), idx});
    }
  }
  std::vector<std::uint8_t> near_target(n, 0);
  for (const auto& q : near_nodes(b)) near_target[lat.index(q)] = 1;

  int expanded = 0;
  while (!open.empty()) {
    const auto [f, idx] = open.top();
    open.pop();
    if (f >= g[target]) break;
    if (closed[idx]) continue;
    closed[idx] = 1;
    ++expanded;
    const auto c = lat.coords(idx);
    const double dc = lat.node_distance(c);
    const Point pc = lat.point(c);
    if (near_target[idx]) {
      const double w = g[idx] + direct_edge(domain, pc, dc, b, d_b);
      if (w < g[target]) {
        g[target] = w;
        parent[target] = static_cast<std::uint32_t>(idx);
      }
    }
    for (const auto& o : offsets) {
      const std::array<int, 3> q{c[0] + o[0], c[1] + o[1], c[2] + o[2]};
      if (!lat.valid(q)) continue;
      const std::size_t qi = lat.index(q);
      if (closed[qi]) continue;
      const double dq = lat.node_distance(q);
      if (dq < floor_d) continue;
      const double dm = lat.half_distance({c[0] + q[0], c[1] + q[1], c[2] + q[2]});
      if (dm <= 0.0) continue;
      const double len = h * std::sqrt(static_cast<double>(o[0] * o[0] + o[1] * o[1] + o[2] * o[2]));
      const double w = g[idx] + len * (1.0 / dc + 4.0 / dm + 1.0 / dq) / 6.0;
      if (w < g[qi]) {
        g[qi] = w;
        parent[qi] = static_cast<std::uint32_t>(idx);
        open.push({w + heuristic(lat.point(q), dq), qi});
      }
    }
  }
  if (!std::isfinite(g[target])) throw Error(ErrorKind::Disconnected, "no grid path between the points inside the box");

  GridPath out;
  out.length = g[target];
  out.expanded = expanded;
  std::vector<Point> pts{b};
  for (std::size_t v = parent[target]; v != source; v = parent[v]) {
    const auto c = lat.coords(v);
    if (lat.on_face(c, growable)) out.touches_box = true;
    pts.push_back(lat.point(c));
  }
  pts.push_back(a);
  std::reverse(pts.begin(), pts.end());
  out.path = Curve(std::move(pts));
  return out;
}

Curve refine_geodesic(const DomainSpec& domain, const Curve& initial, const RefineOptions& opts) {
  if (!(opts.segment_length > 0.0)) throw Error(ErrorKind::InvalidArgument, "segment length must be positive");
  std::vector<Point> pts;
  for (const auto& p : initial.points()) {
    if (pts.empty() || distance(pts.back(), p) > 0.0) pts.push_back(p);
  }
  if (pts.size() < 2) return initial;
  for (const auto& p : pts) {
    if (interior_distance(domain, p) < kRefineFloor)
      throw Error(ErrorKind::CurveTouchesBoundary, p.to_string() + " is too close to the boundary to refine");
  }
  const double before = qh_length(domain, initial);
  const int n_final = std::max(1, static_cast<int>(std::ceil(before / opts.segment_length)));
  if (n_final < 2) return initial;

  // coarse to fine: low-frequency error is cheap to remove on few vertices
  std::vector<int> levels;
  for (int n = n_final; n >= 2; n /= 2) levels.push_back(n);
  if (levels.size() > 1 && levels.back() < 4) levels.pop_back();
  std::reverse(levels.begin(), levels.end());

  for (int n : levels) {
    Descent desc(domain, resample(domain, pts, n));
    double e = desc.energy();
    for (int s = 0; s < opts.max_sweeps; ++s) {
      const double gain = desc.sweep();
      const double rel = gain / e;
      e -= gain;
      if (rel < opts.tolerance) break;
    }
    pts = desc.points();
  }
  Curve out(std::move(pts));
  return qh_length(domain, out) <= before ? out : initial;
}

QhDistanceResult qh_distance(const DomainSpec& domain, const Point& a, const Point& b, const GridSpec& grid) {
  validate_grid(grid);
  QhDistanceResult res;
  res.spacing = grid.spacing;
  if (!contains(domain, a) || !contains(domain, b))
    throw Error(ErrorKind::PointOutsideDomain, "query points must be interior");
  const double d_a = boundary_distance(domain, a);
  const double d_b = boundary_distance(domain, b);
  if (d_a < grid.margin * grid.spacing || d_b < grid.margin * grid.spacing)
    throw Error(ErrorKind::PointTooCloseToBoundary, "query point closer to the boundary than margin * spacing");
  if (a == b) {
    res.geodesic = Curve({a, b});
    res.converged = true;
    return res;
  }

  const double d_ref = std::min(d_a, d_b);
  auto solve = [&](double h) {
    GridSpec g = grid;
    g.spacing = h;
    GridPath gp;
    for (int attempt = 0;; ++attempt) {
      if (grid.box.dim() == 0) g.box = auto_box(domain, a, b, d_a, d_b, h, std::pow(2.0, attempt));
      try {
        gp = grid_shortest_path(domain, a, b, g);
        if (!gp.touches_box || grid.box.dim() != 0 || attempt == kMaxBoxGrowth) break;
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Disconnected || grid.box.dim() != 0 || attempt == kMaxBoxGrowth) throw;
      }
    }
    RefineOptions ro;
    ro.segment_length = std::clamp(h / d_ref, 1.0 / 256.0, 0.25);
    Curve c = refine_geodesic(domain, gp.path, ro);
    return std::make_pair(qh_length(domain, c), c);
  };

  auto [vc, cc] = solve(grid.spacing);
  auto [vf, cf] = solve(0.5 * grid.spacing);
  res.coarse_value = vc;
  res.fine_value = vf;
  // refined polylines converge at second order in the segment length
  res.value = vf + (vf - vc) / 3.0;
  res.error_estimate = std::abs(vc - vf);
  res.converged = res.error_estimate < 5e-3 * res.value;
  res.geodesic = std::move(cf);
  return res;
}

}  // namespace qhm

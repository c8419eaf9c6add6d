#include "qhm/suites.hpp"

#include <algorithm>
#include <cstdio>
#include <random>

#include "qhm/error.hpp"
#include "qhm/flatten.hpp"

namespace qhm {

namespace {

constexpr const char* kDefaultTimestamp = "1970-01-01T00:00:00Z";

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

const GraphDomain& graph_or_throw(const DomainSpec& domain, const char* what) {
  const auto* g = std::get_if<GraphDomain>(&domain);
  if (!g) throw Error(ErrorKind::InvalidArgument, std::string(what) + " needs a graph domain (paraboloid, cosine, c11)");
  return *g;
}

// flattened window: x_0 in [1e-4, x0_hi], |x_i| <= 0.8 half_width
double flat_depth(const GraphDomain& g) {
  const double L = g.gradient_lipschitz();
  double hi = std::min(0.2, g.top / 2.0);
  if (L > 0.0) hi = std::min(hi, 0.4 / L);
  return hi;
}

unsigned long long seed_of(const Config& cfg) {
  const int s = cfg.integer("experiment.seed", 1);
  if (s < 0) throw Error(ErrorKind::InvalidArgument, "experiment.seed must be nonnegative");
  return static_cast<unsigned long long>(s);
}

}  // namespace

SequenceSpec make_sequence(const Config& cfg) {
  SequenceSpec spec;
  spec.domain = make_domain(cfg);
  spec.zeta = cfg.point("experiment.zeta", default_zeta(spec.domain));
  spec.mode = parse_pair_mode(cfg.text("experiment.mode", "tangential"));
  spec.t0 = cfg.number("experiment.t0", spec.t0);
  spec.K = cfg.integer("experiment.K", spec.K);
  spec.lambda = cfg.number("experiment.lambda", spec.lambda);
  spec.direction = cfg.number("experiment.direction", spec.direction);
  spec.margin = cfg.number("grid.margin", spec.margin);
  spec.stencil = cfg.integer("grid.stencil", spec.stencil);
  spec.threads = cfg.integer("experiment.threads", spec.threads);
  return spec;
}

std::vector<std::pair<Point, Point>> sample_interior_pairs(const DomainSpec& domain, int count,
                                                           unsigned long long seed, double min_depth) {
  if (count < 0) throw Error(ErrorKind::InvalidArgument, "pair count must be nonnegative");
  const int n = dimension(domain);
  Box box = bounding_box(domain);
  Box unit{Point::zero(n), Point::zero(n)};
  for (int i = 0; i < n; ++i) {
    unit.lo[i] = i == 0 ? 0.0 : -1.0;
    unit.hi[i] = i == 0 ? 2.0 : 1.0;
  }
  if (std::holds_alternative<HalfSpace>(domain)) box = unit;
  std::mt19937_64 rng(seed);
  std::vector<std::uniform_real_distribution<double>> coord;
  for (int i = 0; i < n; ++i) coord.emplace_back(box.lo[i], box.hi[i]);
  auto draw = [&] {
    for (int tries = 0; tries < 100000; ++tries) {
      Point x = Point::zero(n);
      for (int i = 0; i < n; ++i) x[i] = coord[i](rng);
      if (contains(domain, x) && boundary_distance(domain, x) >= min_depth) return x;
    }
    throw Error(ErrorKind::RegionMissesBoundary, "no interior points at depth " + num(min_depth));
  };
  std::vector<std::pair<Point, Point>> out;
  for (int i = 0; i < count; ++i) {
    const Point a = draw();
    out.emplace_back(a, draw());
  }
  return out;
}

SuiteResult jacobian_sweep(const DomainSpec& domain, int samples, double C, const std::string& timestamp) {
  if (samples < 2) throw Error(ErrorKind::InvalidArgument, "jacobian sweep needs at least 2 samples per axis");
  SuiteResult out;
  ExperimentReport& rep = out.report;
  rep.columns = {"map", "x_0", "x_1", "sigma_min", "sigma_max", "predicted_lower", "predicted_upper", "lower_ok",
                 "upper_ok"};
  int failures = 0;
  if (std::holds_alternative<HalfSpace>(domain)) {
    // the flattening is the identity; nothing to sample
    rep.set_meta("kind", "jacobian");
    rep.set_meta("domain", describe(domain));
  } else {
    const GraphDomain& g = graph_or_throw(domain, "jacobian sweep");
    if (g.dim != 2) throw Error(ErrorKind::InvalidArgument, "jacobian sweep samples planar domains");
    const double hi = flat_depth(g);
    for (int map = 0; map < 2; ++map) {
      for (int i = 0; i < samples; ++i) {
        for (int j = 0; j < samples; ++j) {
          const double x0 = 1e-4 + (hi - 1e-4) * i / (samples - 1);
          const double x1 = 0.8 * g.half_width * (2.0 * j / (samples - 1) - 1.0);
          const auto r = jacobian_bounds(map == 0 ? FlattenMap::Normal : FlattenMap::Sigma, g, Point{x0, x1}, C);
          if (!r.passed()) ++failures;
          rep.rows.push_back({double(map), x0, x1, r.sigma_min, r.sigma_max, r.predicted_lower, r.predicted_upper,
                              r.lower_ok ? 1.0 : 0.0, r.upper_ok ? 1.0 : 0.0});
        }
      }
    }
    rep.set_meta("kind", "jacobian");
    rep.set_meta("domain", describe(domain));
  }
  rep.set_meta("maps", "0=normal,1=arc-length");
  rep.set_meta("C", num(C));
  rep.set_meta("samples", std::to_string(samples));
  rep.set_meta("timestamp", timestamp.empty() ? kDefaultTimestamp : timestamp);
  rep.set_meta("failures", std::to_string(failures));
  out.pass = failures == 0;
  rep.set_meta("pass", out.pass ? "true" : "false");
  return out;
}

SuiteResult pushforward_sweep(const DomainSpec& domain, int curves, unsigned long long seed, double C,
                              const std::string& timestamp) {
  const GraphDomain& g = graph_or_throw(domain, "pushforward sweep");
  if (g.dim != 2) throw Error(ErrorKind::InvalidArgument, "pushforward sweep samples planar domains");
  SuiteResult out;
  ExperimentReport& rep = out.report;
  rep.columns = {"curve", "weight", "margin", "ok"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> x0(0.01, std::max(0.02, flat_depth(g))), x1(-0.8 * g.half_width,
                                                                                    0.8 * g.half_width);
  int failures = 0;
  double worst = std::numeric_limits<double>::infinity();
  for (int i = 0; i < curves; ++i) {
    std::vector<Point> pts;
    for (int k = 0; k < 5; ++k) {
      const double a = x0(rng);
      pts.push_back(Point{a, x1(rng)});
    }
    const Curve c(pts);
    for (int w = 0; w < 2; ++w) {
      const double m = curve_pushforward_check(g, c, w == 0 ? Weight::One : Weight::InverseDistance, C);
      const bool ok = m >= -1e-6;
      if (!ok) ++failures;
      worst = std::min(worst, m);
      rep.rows.push_back({double(i), double(w), m, ok ? 1.0 : 0.0});
    }
  }
  rep.set_meta("kind", "pushforward");
  rep.set_meta("domain", describe(domain));
  rep.set_meta("weights", "0=one,1=inverse-distance");
  rep.set_meta("C", num(C));
  rep.set_meta("seed", std::to_string(seed));
  rep.set_meta("timestamp", timestamp.empty() ? kDefaultTimestamp : timestamp);
  rep.set_meta("worst_margin", num(curves > 0 ? worst : 0.0));
  rep.set_meta("failures", std::to_string(failures));
  out.pass = failures == 0;
  rep.set_meta("pass", out.pass ? "true" : "false");
  return out;
}

SuiteResult run_suite(const std::string& suite, const Config& cfg) {
  const std::string stamp = cfg.text("output.timestamp", "");
  const DomainSpec domain = make_domain(cfg);
  const double flat_c = cfg.number("experiment.flatten_constant", curvature_constant(domain));
  SuiteResult out;
  if (suite == "ghm") {
    BoundSuiteOptions opts;
    opts.margin = cfg.number("grid.margin", opts.margin);
    opts.stencil = cfg.integer("grid.stencil", opts.stencil);
    opts.threads = cfg.integer("experiment.threads", opts.threads);
    const auto pairs = sample_interior_pairs(domain, cfg.integer("experiment.pairs", 20), seed_of(cfg),
                                             cfg.number("experiment.depth", 0.15));
    const Point zeta = cfg.point("experiment.zeta", default_zeta(domain));
    auto run = run_bound_suite(domain, zeta, pairs, cfg.numbers("experiment.c", {2.0}), opts, stamp);
    out.pass = run.ghm_violations == 0;
    run.report.set_meta("seed", std::to_string(seed_of(cfg)));
    run.report.set_meta("pass", out.pass ? "true" : "false");
    out.report = std::move(run.report);
  } else if (suite == "asymptotics") {
    const auto c = cfg.numbers("experiment.c", {2.0});
    auto run = run_asymptotics(make_sequence(cfg), c.front(), stamp);
    out.pass = run.pass;
    out.report = std::move(run.report);
  } else if (suite == "jacobian") {
    out = jacobian_sweep(domain, cfg.integer("experiment.samples", 32), flat_c, stamp);
  } else if (suite == "pushforward") {
    out = pushforward_sweep(domain, cfg.integer("experiment.pairs", 100), seed_of(cfg), flat_c, stamp);
  } else {
    throw Error(ErrorKind::InvalidArgument, "unknown suite '" + suite + "' (ghm, asymptotics, jacobian, pushforward)");
  }
  return out;
}

}  // namespace qhm

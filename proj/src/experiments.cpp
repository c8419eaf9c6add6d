#include "qhm/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "qhm/error.hpp"
#include "qhm/metric.hpp"

namespace qhm {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr const char* kDefaultTimestamp = "1970-01-01T00:00:00Z";

std::string fmt12(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double round12(double v) {
  if (!std::isfinite(v)) return v;
  return std::strtod(fmt12(v).c_str(), nullptr);
}

std::vector<std::string> point_columns(const std::string& name, int dim) {
  std::vector<std::string> out;
  for (int i = 0; i < dim; ++i) out.push_back(name + "_" + std::to_string(i));
  return out;
}

void append_point(std::vector<double>& row, const Point& p) {
  for (int i = 0; i < p.dim(); ++i) row.push_back(p[i]);
}

void check_on_boundary(const DomainSpec& domain, const Point& zeta) {
  if (zeta.dim() != dimension(domain)) throw Error(ErrorKind::InvalidArgument, "zeta has the wrong dimension");
  const double off = unsigned_boundary_distance(domain, zeta);
  if (!(off <= 1e-9 * (1.0 + zeta.norm())))
    throw Error(ErrorKind::InvalidArgument, zeta.to_string() + " is not a boundary point of " + describe(domain));
}

Point tangent_to(const Point& n) {
  if (n.dim() == 2) return Point{-n[1], n[0]};
  // any unit vector orthogonal to n
  Point e = Point::unit(3, std::abs(n[1]) < 0.9 ? 1 : 2);
  e -= n * e.dot(n);
  return e * (1.0 / e.norm());
}

}  // namespace

PairMode parse_pair_mode(const std::string& text) {
  if (text == "normal" || text == "normal-pair") return PairMode::Normal;
  if (text == "tangential" || text == "tangential-pair") return PairMode::Tangential;
  if (text == "fixed-ratio" || text == "ratio") return PairMode::FixedRatio;
  throw Error(ErrorKind::InvalidArgument, "unknown pair mode '" + text + "'");
}

std::string to_string(PairMode mode) {
  switch (mode) {
    case PairMode::Normal: return "normal";
    case PairMode::Tangential: return "tangential";
    case PairMode::FixedRatio: return "fixed-ratio";
  }
  return "?";
}

// ---------------------------------------------------------------------------

void ExperimentReport::set_meta(const std::string& key, const std::string& value) {
  for (auto& kv : metadata) {
    if (kv.first == key) {
      kv.second = value;
      return;
    }
  }
  metadata.emplace_back(key, value);
}

std::string ExperimentReport::meta(const std::string& key) const {
  for (const auto& kv : metadata) {
    if (kv.first == key) return kv.second;
  }
  throw Error(ErrorKind::InvalidArgument, "report has no metadata key '" + key + "'");
}

std::size_t ExperimentReport::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorKind::InvalidArgument, "report has no column '" + name + "'");
  return static_cast<std::size_t>(it - columns.begin());
}

double ExperimentReport::at(std::size_t row, const std::string& column) const {
  return rows.at(row).at(column_index(column));
}

// ---------------------------------------------------------------------------

Point inward_normal_at(const DomainSpec& domain, const Point& zeta) {
  return std::visit(
      [&](const auto& d) -> Point {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return Point::unit(d.dim, 0);
        } else if constexpr (std::is_same_v<T, Ball>) {
          return (d.center - zeta) * (1.0 / d.radius);
        } else {
          return d.inward_normal(zeta);
        }
      },
      domain);
}

std::pair<Point, Point> ladder_pair(const SequenceSpec& spec, int k) {
  if (spec.K < 0 || spec.K > 12) throw Error(ErrorKind::InvalidArgument, "ladder depth K must lie in [0, 12]");
  if (!(spec.t0 > 0.0)) throw Error(ErrorKind::InvalidArgument, "t0 must be positive");
  check_on_boundary(spec.domain, spec.zeta);
  const double t = spec.t0 * std::ldexp(1.0, -k);
  if (spec.mode == PairMode::Normal) {
    const Point n = inward_normal_at(spec.domain, spec.zeta);
    return {spec.zeta + n * t, spec.zeta + n * (2.0 * t)};
  }
  if (dimension(spec.domain) != 2)
    throw Error(ErrorKind::InvalidArgument, "tangential and fixed-ratio ladders need a planar domain");
  const BoundaryCurve bc(spec.domain);
  const double u = bc.parameter_of(spec.zeta);
  const double offset = spec.direction * (spec.mode == PairMode::Tangential ? std::sqrt(t) : spec.lambda * t);
  const double ub = bc.walk(u, offset);
  return {bc.point(u) + bc.inward_normal(u) * t, bc.point(ub) + bc.inward_normal(ub) * t};
}

AsymptoticsRun run_asymptotics(const SequenceSpec& spec, double c, const std::string& timestamp) {
  if (!(c > 1.0)) throw Error(ErrorKind::ConstantOutOfRange, "the constant must exceed 1");
  const int dim = dimension(spec.domain);
  AsymptoticsRun run;
  ExperimentReport& rep = run.report;
  rep.columns = {"k", "t"};
  for (const auto& s : point_columns("a", dim)) rep.columns.push_back(s);
  for (const auto& s : point_columns("b", dim)) rep.columns.push_back(s);
  for (const char* s : {"d_a", "d_b", "sep", "s", "h", "h_minus_s", "h_over_s", "ghm", "na_bound", "error_estimate",
                        "converged", "skipped"})
    rep.columns.emplace_back(s);

  struct Rung {
    std::vector<double> row;
    Curve geodesic;
    bool skipped = false;
    bool converged = false;
  };
  const auto rungs = parallel_map<Rung>(
      static_cast<std::size_t>(spec.K + 1),
      [&](std::size_t idx) {
        const int k = static_cast<int>(idx);
        const double t = spec.t0 * std::ldexp(1.0, -k);
        const auto [a, b] = ladder_pair(spec, k);
        Rung r;
        r.row = {static_cast<double>(k), t};
        append_point(r.row, a);
        append_point(r.row, b);
        GridSpec grid;
        grid.spacing = spec.spacing_ratio * t;
        grid.margin = spec.margin;
        grid.stencil = spec.stencil;
        const double d_a = boundary_distance(spec.domain, a);
        const double d_b = boundary_distance(spec.domain, b);
        const PairData p = PairData::make(a, b, d_a, d_b);
        QhDistanceResult res;
        try {
          res = qh_distance(spec.domain, a, b, grid);
        } catch (const Error& e) {
          if (e.kind() != ErrorKind::PointTooCloseToBoundary) throw;
          r.skipped = true;
        }
        const double s = s_metric(p);
        if (r.skipped) {
          for (double v : {d_a, d_b, p.sep, s, kNaN, kNaN, kNaN, ghm_lower_bound(p), na_upper_bound(p, c), kNaN, 0.0, 1.0})
            r.row.push_back(v);
          return r;
        }
        r.converged = res.converged;
        r.geodesic = res.geodesic;
        for (double v : {d_a, d_b, p.sep, s, res.value, res.value - s, s > 0.0 ? res.value / s : 1.0,
                         ghm_lower_bound(p), na_upper_bound(p, c), res.error_estimate, res.converged ? 1.0 : 0.0, 0.0})
          r.row.push_back(v);
        return r;
      },
      spec.threads);

  const std::size_t ih = rep.column_index("h"), ig = rep.column_index("ghm"), ie = rep.column_index("error_estimate");
  const std::size_t id = rep.column_index("h_minus_s"), ir = rep.column_index("h_over_s"), is = rep.column_index("s");
  double prev_diff = kNaN;
  for (const auto& r : rungs) {
    rep.rows.push_back(r.row);
    run.geodesics.push_back(r.geodesic);
    if (r.skipped) {
      ++run.skipped;
      continue;
    }
    if (r.row[ig] > r.row[ih] + r.row[ie] + 1e-12) ++run.ghm_violations;
    const double diff = std::abs(r.row[id]);
    if (std::isfinite(prev_diff) && diff > prev_diff) ++run.inversions;
    prev_diff = diff;
    run.finest_rung = static_cast<int>(r.row[0]);
    run.diff_trend = diff;
    run.ratio_trend = std::abs(r.row[ir] - 1.0);
    run.final_s = r.row[is];
    run.finest_converged = r.converged;
  }
  run.pass = run.finest_rung >= 0 && run.finest_converged && run.ghm_violations == 0 && run.diff_trend <= 0.05 &&
             run.ratio_trend <= 0.02;

  rep.set_meta("kind", "asymptotics");
  rep.set_meta("domain", describe(spec.domain));
  rep.set_meta("zeta", spec.zeta.to_string());
  rep.set_meta("mode", to_string(spec.mode));
  rep.set_meta("t0", fmt12(spec.t0));
  rep.set_meta("K", std::to_string(spec.K));
  if (spec.mode == PairMode::FixedRatio) rep.set_meta("lambda", fmt12(spec.lambda));
  rep.set_meta("c", fmt12(c));
  rep.set_meta("spacing_ratio", fmt12(spec.spacing_ratio));
  rep.set_meta("margin", fmt12(spec.margin));
  rep.set_meta("stencil", std::to_string(spec.stencil));
  rep.set_meta("timestamp", timestamp.empty() ? kDefaultTimestamp : timestamp);
  rep.set_meta("diff_trend", fmt12(run.diff_trend));
  rep.set_meta("ratio_trend", fmt12(run.ratio_trend));
  rep.set_meta("final_s", fmt12(run.final_s));
  rep.set_meta("inversions", std::to_string(run.inversions));
  rep.set_meta("skipped", std::to_string(run.skipped));
  rep.set_meta("ghm_violations", std::to_string(run.ghm_violations));
  rep.set_meta("pass", run.pass ? "true" : "false");
  return run;
}

// ---------------------------------------------------------------------------

namespace {

struct PairSolve {
  PairData p;
  QhDistanceResult res;
};

std::vector<PairSolve> solve_pairs(const DomainSpec& domain, const std::vector<std::pair<Point, Point>>& pairs,
                                   const BoundSuiteOptions& opts) {
  return parallel_map<PairSolve>(
      pairs.size(),
      [&](std::size_t i) {
        const auto& [a, b] = pairs[i];
        PairSolve out{PairData::make(a, b, boundary_distance(domain, a), boundary_distance(domain, b)), {}};
        GridSpec grid;
        grid.spacing = std::min(opts.spacing_ratio * std::min(out.p.d_a, out.p.d_b), opts.max_spacing);
        grid.margin = opts.margin;
        grid.stencil = opts.stencil;
        out.res = qh_distance(domain, a, b, grid);
        return out;
      },
      opts.threads);
}

}  // namespace

BoundSuiteRun run_bound_suite(const DomainSpec& domain, const Point& zeta,
                              const std::vector<std::pair<Point, Point>>& pairs, const std::vector<double>& c_values,
                              const BoundSuiteOptions& opts, const std::string& timestamp) {
  for (double c : c_values) {
    if (!(c > 1.0)) throw Error(ErrorKind::ConstantOutOfRange, "every constant must exceed 1");
  }
  const int dim = dimension(domain);
  BoundSuiteRun run;
  run.c_values = c_values;
  ExperimentReport& rep = run.report;
  rep.columns = {"pair", "radius"};
  for (const auto& s : point_columns("a", dim)) rep.columns.push_back(s);
  for (const auto& s : point_columns("b", dim)) rep.columns.push_back(s);
  for (const char* s : {"d_a", "d_b", "sep", "s", "h", "ghm", "error_estimate", "converged", "ghm_ok"})
    rep.columns.emplace_back(s);
  for (double c : c_values) {
    rep.columns.push_back("na_" + fmt12(c));
    rep.columns.push_back("ok_" + fmt12(c));
  }

  const auto solved = solve_pairs(domain, pairs, opts);
  std::vector<double> radius(pairs.size());
  std::vector<std::vector<bool>> holds(c_values.size(), std::vector<bool>(pairs.size()));
  for (std::size_t i = 0; i < solved.size(); ++i) {
    const auto& [p, res] = solved[i];
    radius[i] = std::max(distance(p.a, zeta), distance(p.b, zeta));
    run.max_radius = std::max(run.max_radius, radius[i]);
    const double ghm = ghm_lower_bound(p);
    const bool ghm_ok = ghm <= res.value + res.error_estimate + 1e-12;
    if (!ghm_ok) ++run.ghm_violations;
    std::vector<double> row{static_cast<double>(i), radius[i]};
    append_point(row, p.a);
    append_point(row, p.b);
    for (double v : {p.d_a, p.d_b, p.sep, s_metric(p), res.value, ghm, res.error_estimate,
                     res.converged ? 1.0 : 0.0, ghm_ok ? 1.0 : 0.0})
      row.push_back(v);
    for (std::size_t j = 0; j < c_values.size(); ++j) {
      const double na = na_upper_bound(p, c_values[j]);
      holds[j][i] = res.value <= na + res.error_estimate;
      row.push_back(na);
      row.push_back(holds[j][i] ? 1.0 : 0.0);
    }
    rep.rows.push_back(std::move(row));
  }

  // grow the neighborhood pair by pair until the first failure
  std::vector<std::size_t> order(pairs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return radius[x] < radius[y]; });
  for (std::size_t j = 0; j < c_values.size(); ++j) {
    double t = 0.0;
    for (std::size_t i : order) {
      if (!holds[j][i]) break;
      t = radius[i];
    }
    run.t_star.push_back(t);
  }

  rep.set_meta("kind", "bounds");
  rep.set_meta("domain", describe(domain));
  rep.set_meta("zeta", zeta.to_string());
  rep.set_meta("pairs", std::to_string(pairs.size()));
  rep.set_meta("spacing_ratio", fmt12(opts.spacing_ratio));
  rep.set_meta("max_spacing", fmt12(opts.max_spacing));
  rep.set_meta("margin", fmt12(opts.margin));
  rep.set_meta("stencil", std::to_string(opts.stencil));
  rep.set_meta("timestamp", timestamp.empty() ? kDefaultTimestamp : timestamp);
  rep.set_meta("ghm_violations", std::to_string(run.ghm_violations));
  for (std::size_t j = 0; j < c_values.size(); ++j) rep.set_meta("t_star_" + fmt12(c_values[j]), fmt12(run.t_star[j]));
  return run;
}

std::vector<std::pair<Point, Point>> depth_ball_pairs(const DomainSpec& domain, const Point& zeta, double depth) {
  if (!(depth > 0.0)) throw Error(ErrorKind::InvalidArgument, "depth must be positive");
  check_on_boundary(domain, zeta);
  const Point n = inward_normal_at(domain, zeta);
  const Point tau = tangent_to(n);
  std::vector<Point> pts;
  for (double r : {0.45, 0.9}) {
    for (double deg : {-45.0, 0.0, 45.0}) {
      const double th = deg * std::acos(-1.0) / 180.0;
      const Point p = zeta + (n * std::cos(th) + tau * std::sin(th)) * (r * depth);
      if (!contains(domain, p)) throw Error(ErrorKind::InvalidArgument, "depth ball leaves the domain");
      pts.push_back(p);
    }
  }
  std::vector<std::pair<Point, Point>> out;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) out.emplace_back(pts[i], pts[j]);
  }
  return out;
}

double estimate_best_constant(const DomainSpec& domain, const Point& zeta, double depth,
                              const BoundSuiteOptions& opts) {
  const auto solved = solve_pairs(domain, depth_ball_pairs(domain, zeta, depth), opts);
  // na_bound is increasing in c, so each pair pins its own threshold exactly
  double best = 1.0;
  for (const auto& [p, res] : solved) {
    const double q = p.sep / std::sqrt(p.d_a * p.d_b);
    const double target = res.value - res.error_estimate;
    if (q == 0.0 || target <= 0.0) continue;
    best = std::max(best, std::expm1(0.5 * target) / q);
  }
  return best;
}

// ---------------------------------------------------------------------------

double correction_integral(const DomainSpec& domain, const Curve& curve, const ModulusOfContinuity& omega) {
  auto g = [&](const Point& x) {
    const double d = boundary_distance(domain, x);
    return omega_star(omega, d) / d;
  };
  const auto& pts = curve.points();
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    const double len = distance(pts[i], pts[i + 1]);
    if (len == 0.0) continue;
    const double dmin = std::min(boundary_distance(domain, pts[i]), boundary_distance(domain, pts[i + 1]));
    const int m = std::max(1, static_cast<int>(std::ceil(len / dmin / 0.05)));
    for (int j = 0; j < m; ++j) {
      const Point p = pts[i] + (pts[i + 1] - pts[i]) * (static_cast<double>(j) / m);
      const Point q = pts[i] + (pts[i + 1] - pts[i]) * (static_cast<double>(j + 1) / m);
      total += (len / m) * (g(p) + 4.0 * g((p + q) * 0.5) + g(q)) / 6.0;
    }
  }
  return total;
}

CorrectionFit fit_correction_integral(const DomainSpec& domain, const std::vector<Curve>& geodesics,
                                      const ModulusOfContinuity& omega) {
  CorrectionFit fit;
  for (const auto& c : geodesics) {
    if (c.size() < 2) continue;
    fit.lengths.push_back(c.euclidean_length());
    fit.integrals.push_back(correction_integral(domain, c, omega));
  }
  const std::size_t n = fit.lengths.size();
  if (n < 2) return fit;
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += std::log(fit.lengths[i]);
    my += std::log(fit.integrals[i]);
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = std::log(fit.lengths[i]) - mx;
    sxy += dx * (std::log(fit.integrals[i]) - my);
    sxx += dx * dx;
  }
  fit.exponent = sxy / sxx;
  return fit;
}

// ---------------------------------------------------------------------------

ReportFormat parse_report_format(const std::string& text) {
  if (text == "csv") return ReportFormat::Csv;
  if (text == "json") return ReportFormat::Json;
  throw Error(ErrorKind::InvalidArgument, "unknown report format '" + text + "'");
}

std::string format_report(const ExperimentReport& report, ReportFormat format) {
  if (format == ReportFormat::Csv) {
    std::ostringstream os;
    for (const auto& [k, v] : report.metadata) os << "# " << k << ": " << v << '\n';
    for (std::size_t i = 0; i < report.columns.size(); ++i) os << (i ? "," : "") << report.columns[i];
    os << '\n';
    for (const auto& row : report.rows) {
      for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << fmt12(row[i]);
      os << '\n';
    }
    return os.str();
  }
  nlohmann::ordered_json j;
  j["metadata"] = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.metadata) j["metadata"][k] = v;
  j["columns"] = report.columns;
  j["rows"] = nlohmann::ordered_json::array();
  for (const auto& row : report.rows) {
    nlohmann::ordered_json r = nlohmann::ordered_json::array();
    for (double v : row) {
      if (std::isfinite(v)) {
        r.push_back(round12(v));
      } else {
        r.push_back(nullptr);
      }
    }
    j["rows"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

ExperimentReport parse_report(const std::string& text, ReportFormat format) {
  ExperimentReport rep;
  if (format == ReportFormat::Csv) {
    std::istringstream is(text);
    std::string line;
    bool header = false;
    auto split = [](const std::string& s) {
      std::vector<std::string> out;
      std::string cell;
      std::istringstream ls(s);
      while (std::getline(ls, cell, ',')) out.push_back(cell);
      return out;
    };
    while (std::getline(is, line)) {
      if (!header && line.rfind("# ", 0) == 0) {
        const auto colon = line.find(": ", 2);
        if (colon == std::string::npos) throw Error(ErrorKind::InvalidArgument, "bad metadata line: " + line);
        rep.metadata.emplace_back(line.substr(2, colon - 2), line.substr(colon + 2));
        continue;
      }
      if (!header) {
        rep.columns = line.empty() ? std::vector<std::string>{} : split(line);
        header = true;
        continue;
      }
      if (line.empty()) continue;
      std::vector<double> row;
      for (const auto& cell : split(line)) {
        char* end = nullptr;
        row.push_back(std::strtod(cell.c_str(), &end));
        if (end == cell.c_str()) throw Error(ErrorKind::InvalidArgument, "bad number '" + cell + "'");
      }
      if (row.size() != rep.columns.size()) throw Error(ErrorKind::InvalidArgument, "row width differs from header");
      rep.rows.push_back(std::move(row));
    }
    return rep;
  }
  nlohmann::ordered_json j;
  try {
    j = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad report JSON: ") + e.what());
  }
  for (const auto& [k, v] : j.at("metadata").items()) rep.metadata.emplace_back(k, v.get<std::string>());
  rep.columns = j.at("columns").get<std::vector<std::string>>();
  for (const auto& r : j.at("rows")) {
    std::vector<double> row;
    for (const auto& v : r) row.push_back(v.is_null() ? kNaN : v.get<double>());
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path) {
  const std::string text = format_report(report, format);
  if (path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoFailure, "cannot open '" + path + "' for writing");
  out << text;
  if (!out) throw Error(ErrorKind::IoFailure, "write to '" + path + "' failed");
}

}  // namespace qhm

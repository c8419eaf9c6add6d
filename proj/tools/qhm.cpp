// Command-line front end: distance queries, geodesics, verification suites.
// Settings come from --config (key = value lines) and flags; flags win.

#include <cstdio>
#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "qhm/config.hpp"
#include "qhm/error.hpp"
#include "qhm/experiments.hpp"
#include "qhm/solver.hpp"
#include "qhm/suites.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kError = 1;
constexpr int kFailed = 2;

// flag values are kept as text and checked by the config layer, so a flag and
// the matching config key accept exactly the same spellings
struct Flags {
  std::string config_path;
  std::map<std::string, std::string> values;
  std::map<const CLI::Option*, std::string> keys;

  void add_keyed(CLI::App* app, const std::string& name, const std::string& key, const std::string& help) {
    keys[app->add_option(name, values[key], help)] = key;
  }

  qhm::Config resolve(const CLI::App* app) const {
    qhm::Config cfg = config_path.empty() ? qhm::Config{} : qhm::Config::load(config_path);
    qhm::Config overrides;
    for (const auto* opt : app->get_options()) {
      const auto it = keys.find(opt);
      if (it != keys.end() && opt->count() > 0) overrides.set(it->second, values.at(it->second));
    }
    cfg.merge(overrides);
    return cfg;
  }
};

void add_domain_flags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config_path, "key = value file; flags override its entries");
  f.add_keyed(app, "--domain", "domain.kind",
              "halfplane, halfspace, disc, ball, paraboloid, cosine, c11, ellipse, superellipse (default halfplane)");
  f.add_keyed(app, "--dim", "domain.dim", "dimension for halfspace, ball, paraboloid (default 2)");
  f.add_keyed(app, "--kappa", "domain.params.kappa", "curvature for paraboloid and c11 (default 1)");
  f.add_keyed(app, "--amplitude", "domain.params.amplitude", "cosine bump height (default 0.1)");
  f.add_keyed(app, "--frequency", "domain.params.frequency", "cosine bump frequency (default pi)");
  f.add_keyed(app, "--center", "domain.params.center", "ball center, comma separated (default origin)");
  f.add_keyed(app, "--radius", "domain.params.radius", "ball radius (default 1)");
  f.add_keyed(app, "--semi-a", "domain.params.a", "ellipse semi-axis along x_0 (default 2, superellipse 1)");
  f.add_keyed(app, "--semi-b", "domain.params.b", "ellipse semi-axis along x_1 (default 1)");
  f.add_keyed(app, "--exponent", "domain.params.exponent", "superellipse exponent >= 2 (default 4)");
  f.add_keyed(app, "--half-width", "window.half_width", "graph window half width (default 1)");
  f.add_keyed(app, "--top", "window.top", "graph window top in x_0 (default 1)");
  f.add_keyed(app, "--margin", "grid.margin", "drop grid nodes with d_D below margin * spacing (default 4)");
  f.add_keyed(app, "--stencil", "grid.stencil", "neighbor count, 0 picks 16 in 2-D and 26 in 3-D (default 0)");
  f.add_keyed(app, "--format", "output.format", "csv or json (default csv)");
  f.add_keyed(app, "--out", "output.path", "output file, - for stdout (default -)");
  f.add_keyed(app, "--timestamp", "output.timestamp", "timestamp recorded in reports (default 1970-01-01T00:00:00Z)");
  f.add_keyed(app, "--threads", "experiment.threads", "worker threads, 0 for all cores (default 0)");
}

void add_pair_flags(CLI::App* app, Flags& f, std::string& a, std::string& b) {
  app->add_option("--a", a, "first point, x_0,x_1[,x_2]")->required();
  app->add_option("--b", b, "second point")->required();
  f.add_keyed(app, "--spacing", "grid.spacing", "coarse grid spacing; the fine run halves it (default 1/64)");
}

void add_ladder_flags(CLI::App* app, Flags& f) {
  f.add_keyed(app, "--mode", "experiment.mode", "normal, tangential or fixed-ratio (default tangential)");
  f.add_keyed(app, "-K", "experiment.K", "deepest rung, rungs k = 0..K (default 8)");
  f.add_keyed(app, "--t0", "experiment.t0", "depth of rung 0 (default 0.0625)");
  f.add_keyed(app, "--lambda", "experiment.lambda", "fixed-ratio offset factor (default 1)");
  f.add_keyed(app, "--direction", "experiment.direction", "sign of the boundary offset (default 1)");
  f.add_keyed(app, "--zeta", "experiment.zeta", "boundary anchor point (default depends on the domain)");
  f.add_keyed(app, "--c", "experiment.c", "upper-bound constants, comma separated (default 2)");
}

void add_suite_flags(CLI::App* app, Flags& f) {
  f.add_keyed(app, "--pairs", "experiment.pairs", "random pairs (ghm, default 20) or curves (pushforward, default 100)");
  f.add_keyed(app, "--seed", "experiment.seed", "random seed (default 1)");
  f.add_keyed(app, "--depth", "experiment.depth", "minimum d_D of random points (default 0.15)");
  f.add_keyed(app, "--samples", "experiment.samples", "jacobian grid points per axis (default 32)");
  f.add_keyed(app, "--flatten-constant", "experiment.flatten_constant",
              "C in the flattening checks (default the domain's curvature constant)");
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

int run_dist(const qhm::Config& cfg, const std::string& a_text, const std::string& b_text) {
  const auto domain = qhm::make_domain(cfg);
  const auto r = qhm::qh_distance(domain, qhm::parse_point(a_text), qhm::parse_point(b_text), qhm::make_grid(cfg));
  const auto format = qhm::parse_report_format(cfg.text("output.format", "csv"));
  std::string text;
  if (format == qhm::ReportFormat::Json) {
    nlohmann::ordered_json j;
    j["value"] = std::stod(num(r.value));
    j["error_estimate"] = std::stod(num(r.error_estimate));
    j["converged"] = r.converged;
    text = j.dump(2) + "\n";
  } else {
    text = "value " + num(r.value) + "\nerror_estimate " + num(r.error_estimate) + "\nconverged " +
           (r.converged ? "1" : "0") + "\n";
  }
  const std::string path = cfg.text("output.path", "-");
  if (path == "-") {
    std::cout << text;
  } else {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f || std::fwrite(text.data(), 1, text.size(), f) != text.size())
      throw qhm::Error(qhm::ErrorKind::IoFailure, "cannot write " + path);
    std::fclose(f);
  }
  return r.converged ? kOk : kFailed;
}

int run_geodesic(const qhm::Config& cfg, const std::string& a_text, const std::string& b_text) {
  const auto domain = qhm::make_domain(cfg);
  const qhm::Point a = qhm::parse_point(a_text), b = qhm::parse_point(b_text);
  const auto r = qhm::qh_distance(domain, a, b, qhm::make_grid(cfg));
  qhm::ExperimentReport rep;
  rep.set_meta("kind", "geodesic");
  rep.set_meta("domain", qhm::describe(domain));
  rep.set_meta("a", a.to_string());
  rep.set_meta("b", b.to_string());
  rep.set_meta("value", num(r.value));
  rep.set_meta("error_estimate", num(r.error_estimate));
  rep.set_meta("converged", r.converged ? "true" : "false");
  rep.set_meta("timestamp", cfg.text("output.timestamp", "1970-01-01T00:00:00Z"));
  for (int i = 0; i < a.dim(); ++i) rep.columns.push_back("x_" + std::to_string(i));
  for (const auto& p : r.geodesic.points()) {
    std::vector<double> row;
    for (int i = 0; i < p.dim(); ++i) row.push_back(p[i]);
    rep.rows.push_back(std::move(row));
  }
  qhm::emit_report(rep, qhm::parse_report_format(cfg.text("output.format", "csv")), cfg.text("output.path", "-"));
  return r.converged ? kOk : kFailed;
}

int run_suites(const qhm::Config& cfg, const std::vector<std::string>& suites) {
  const auto format = qhm::parse_report_format(cfg.text("output.format", "csv"));
  const std::string path = cfg.text("output.path", "-");
  if (suites.size() > 1 && path != "-")
    throw qhm::Error(qhm::ErrorKind::InvalidArgument, "several suites write to stdout only");
  bool pass = true;
  for (const auto& s : suites) {
    const auto r = qhm::run_suite(s, cfg);
    qhm::emit_report(r.report, format, path);
    pass = pass && r.pass;
  }
  return pass ? kOk : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quasi-hyperbolic distance lab"};
  app.require_subcommand(1);
  Flags flags;
  std::string a, b, suite;

  auto* dist = app.add_subcommand("dist", "distance between two points with an error estimate");
  add_domain_flags(dist, flags);
  add_pair_flags(dist, flags, a, b);

  auto* geo = app.add_subcommand("geodesic", "approximate geodesic as a CSV/JSON polyline");
  add_domain_flags(geo, flags);
  add_pair_flags(geo, flags, a, b);

  auto* verify = app.add_subcommand("verify", "run a verification suite; exit 2 when a check fails");
  add_domain_flags(verify, flags);
  flags.add_keyed(verify, "--suite", "experiment.suite", "ghm, asymptotics, jacobian, pushforward or all (default ghm)");
  add_ladder_flags(verify, flags);
  add_suite_flags(verify, flags);

  auto* ladder = app.add_subcommand("asymptotics", "pair ladder towards a boundary point");
  add_domain_flags(ladder, flags);
  add_ladder_flags(ladder, flags);

  auto* flat = app.add_subcommand("flatten-check", "jacobian and curve pushforward checks of the flattening");
  add_domain_flags(flat, flags);
  add_suite_flags(flat, flags);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* sub = app.get_subcommands().front();
    const qhm::Config cfg = flags.resolve(sub);
    if (sub == dist) return run_dist(cfg, a, b);
    if (sub == geo) return run_geodesic(cfg, a, b);
    if (sub == ladder) return run_suites(cfg, {"asymptotics"});
    if (sub == flat) return run_suites(cfg, {"jacobian", "pushforward"});
    const std::string s = cfg.text("experiment.suite", "ghm");
    if (s == "all") return run_suites(cfg, {"ghm", "asymptotics", "jacobian", "pushforward"});
    return run_suites(cfg, {s});
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kError;
  }
}

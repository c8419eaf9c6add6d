#include "qhm/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "qhm/error.hpp"

namespace qhm {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.push_back({});
  return out;
}

}  // namespace

double parse_number(const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [end, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || end != t.data() + t.size())
    throw Error(ErrorKind::InvalidArgument, "not a number: '" + text + "'");
  return v;
}

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& item : split(text, ',')) out.push_back(parse_number(item));
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty number list");
  return out;
}

const std::vector<std::string>& Config::known_keys() {
  static const std::vector<std::string> keys{
      "domain.kind", "domain.dim", "domain.params.kappa", "domain.params.amplitude",
      "domain.params.frequency", "domain.params.center", "domain.params.radius", "domain.params.a",
      "domain.params.b", "domain.params.exponent",
      "window.half_width", "window.top",
      "grid.spacing", "grid.margin", "grid.stencil",
      "experiment.suite", "experiment.mode", "experiment.K", "experiment.t0", "experiment.c",
      "experiment.zeta", "experiment.lambda", "experiment.direction", "experiment.depth", "experiment.pairs",
      "experiment.seed", "experiment.threads", "experiment.samples", "experiment.flatten_constant",
      "output.format", "output.path", "output.timestamp",
  };
  return keys;
}

Config Config::parse(const std::string& text, const std::string& origin) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::InvalidArgument, origin + ":" + std::to_string(lineno) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    const auto& keys = known_keys();
    if (std::find(keys.begin(), keys.end(), key) == keys.end())
      throw Error(ErrorKind::InvalidArgument,
                  origin + ":" + std::to_string(lineno) + ": unknown configuration key '" + key + "'");
    cfg.set(key, trim(t.substr(eq + 1)));
  }
  return cfg;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoFailure, "cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str(), path);
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end())
    throw Error(ErrorKind::InvalidArgument, "unknown configuration key '" + key + "'");
  values_[key] = value;
}

void Config::merge(const Config& overrides) {
  for (const auto& [k, v] : overrides.values_) values_[k] = v;
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : it->second;
}

double Config::number(const std::string& key, double fallback) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return fallback;
  try {
    return parse_number(it->second);
  } catch (const Error&) {
    throw Error(ErrorKind::InvalidArgument, key + ": not a number: '" + it->second + "'");
  }
}

int Config::integer(const std::string& key, int fallback) const {
  const double v = number(key, fallback);
  if (v != std::floor(v) || std::abs(v) > 1e9) throw Error(ErrorKind::InvalidArgument, key + " must be an integer");
  return static_cast<int>(v);
}

std::vector<double> Config::numbers(const std::string& key, const std::vector<double>& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_number_list(it->second);
}

Point Config::point(const std::string& key, const Point& fallback) const {
  const auto it = values_.find(key);
  return it == values_.end() ? fallback : parse_point(it->second);
}

DomainSpec make_domain(const Config& cfg) {
  const std::string kind = cfg.text("domain.kind", "halfplane");
  auto positive = [&](const std::string& key, double fallback) {
    const double v = cfg.number(key, fallback);
    if (!(v > 0.0) || !std::isfinite(v)) throw Error(ErrorKind::InvalidArgument, key + " must be positive");
    return v;
  };
  const int dim = cfg.integer("domain.dim", 2);
  if (dim != 2 && dim != 3) throw Error(ErrorKind::InvalidArgument, "domain.dim must be 2 or 3");

  if (kind == "halfplane" || kind == "halfspace") return HalfSpace{kind == "halfplane" ? 2 : dim};
  if (kind == "disc" || kind == "ball") {
    const int n = kind == "disc" ? 2 : dim;
    const Point center = cfg.point("domain.params.center", Point::zero(n));
    if (center.dim() != n) throw Error(ErrorKind::InvalidArgument, "domain.params.center has the wrong dimension");
    return Ball{center, positive("domain.params.radius", 1.0)};
  }
  if (kind == "paraboloid" || kind == "cosine" || kind == "c11") {
    GraphDomain g;
    g.dim = kind == "paraboloid" ? dim : 2;
    if (kind != "paraboloid" && dim != 2) throw Error(ErrorKind::InvalidArgument, kind + " is planar");
    g.half_width = positive("window.half_width", 1.0);
    g.top = positive("window.top", 1.0);
    if (kind == "cosine") {
      g.family = GraphFamily::CosineBump;
      g.amplitude = positive("domain.params.amplitude", 0.1);
      g.frequency = positive("domain.params.frequency", std::numbers::pi);
    } else {
      g.family = kind == "c11" ? GraphFamily::C11Kink : GraphFamily::Paraboloid;
      g.kappa = positive("domain.params.kappa", 1.0);
    }
    return g;
  }
  if (kind == "ellipse" || kind == "superellipse") {
    ImplicitDomain d;
    d.family = kind == "ellipse" ? ImplicitFamily::Ellipse : ImplicitFamily::Superellipse;
    d.semi_a = positive("domain.params.a", kind == "ellipse" ? 2.0 : 1.0);
    d.semi_b = positive("domain.params.b", 1.0);
    d.exponent = kind == "ellipse" ? 2.0 : cfg.number("domain.params.exponent", 4.0);
    if (!(d.exponent >= 2.0)) throw Error(ErrorKind::InvalidArgument, "domain.params.exponent must be at least 2");
    return d;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown domain kind '" + kind + "'");
}

GridSpec make_grid(const Config& cfg) {
  GridSpec g;
  g.spacing = cfg.number("grid.spacing", g.spacing);
  g.margin = cfg.number("grid.margin", g.margin);
  g.stencil = cfg.integer("grid.stencil", g.stencil);
  if (!(g.spacing > 0.0)) throw Error(ErrorKind::InvalidArgument, "grid.spacing must be positive");
  return g;
}

Point default_zeta(const DomainSpec& domain) {
  return std::visit(
      [](const auto& d) -> Point {
        using T = std::decay_t<decltype(d)>;
        if constexpr (std::is_same_v<T, HalfSpace>) {
          return Point::zero(d.dim);
        } else if constexpr (std::is_same_v<T, Ball>) {
          Point z = d.center;
          z[0] += d.radius;
          return z;
        } else if constexpr (std::is_same_v<T, GraphDomain>) {
          return d.boundary_point(Point::zero(d.dim));
        } else {
          return d.boundary_point(0.0);
        }
      },
      domain);
}

}  // namespace qhm

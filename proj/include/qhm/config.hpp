#pragma once

#include <map>
#include <string>
#include <vector>

#include "qhm/geom.hpp"
#include "qhm/solver.hpp"

namespace qhm {

/// Flat key=value settings. Lines starting with '#' are comments; keys must
/// be in known_keys(). Later assignments replace earlier ones.
class Config {
 public:
  static Config parse(const std::string& text, const std::string& origin = "config");
  static Config load(const std::string& path);
  static const std::vector<std::string>& known_keys();

  void set(const std::string& key, const std::string& value);
  void merge(const Config& overrides);

  bool has(const std::string& key) const { return values_.count(key) != 0; }
  std::string text(const std::string& key, const std::string& fallback) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::vector<double> numbers(const std::string& key, const std::vector<double>& fallback) const;
  Point point(const std::string& key, const Point& fallback) const;

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

double parse_number(const std::string& text);
std::vector<double> parse_number_list(const std::string& text);

/// domain.kind is one of halfplane, halfspace, disc, ball, paraboloid, cosine,
/// c11, ellipse, superellipse.
DomainSpec make_domain(const Config& cfg);
GridSpec make_grid(const Config& cfg);

/// A convenient boundary point to anchor experiments: the vertex of graph
/// domains, the origin of a half-space, the top of a ball in the x_0 axis.
Point default_zeta(const DomainSpec& domain);

}  // namespace qhm

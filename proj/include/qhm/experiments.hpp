#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qhm/curve.hpp"
#include "qhm/geom.hpp"
#include "qhm/solver.hpp"

namespace qhm {

enum class PairMode { Normal, Tangential, FixedRatio };

PairMode parse_pair_mode(const std::string& text);
std::string to_string(PairMode mode);

struct SequenceSpec {
  DomainSpec domain = HalfSpace{2};
  Point zeta{0.0, 0.0};
  PairMode mode = PairMode::Tangential;
  double t0 = 1.0 / 16.0;
  int K = 8;                     // rungs k = 0..K
  double lambda = 1.0;           // fixed-ratio offset is lambda * t
  double direction = 1.0;        // sign of the boundary offset
  double spacing_ratio = 0.125;  // grid spacing = spacing_ratio * t_k
  double margin = 4.0;
  int stencil = 0;
  int threads = 0;               // 0: hardware concurrency
};

/// A metadata block plus a numeric table.
struct ExperimentReport {
  std::vector<std::pair<std::string, std::string>> metadata;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  void set_meta(const std::string& key, const std::string& value);
  std::string meta(const std::string& key) const;
  std::size_t column_index(const std::string& name) const;
  double at(std::size_t row, const std::string& column) const;
};

struct AsymptoticsRun {
  ExperimentReport report;
  std::vector<Curve> geodesics;  // per rung; empty for skipped rungs
  double diff_trend = 0.0;       // |h - s| at the finest computed rung
  double ratio_trend = 0.0;      // |h/s - 1| there
  double final_s = 0.0;
  int finest_rung = -1;
  int inversions = 0;            // increases of |h - s| down the ladder
  int skipped = 0;
  int ghm_violations = 0;
  bool finest_converged = false;
  bool pass = false;
};

/// Ladder points for rung k: (a, b).
std::pair<Point, Point> ladder_pair(const SequenceSpec& spec, int k);

AsymptoticsRun run_asymptotics(const SequenceSpec& spec, double c, const std::string& timestamp = {});

struct BoundSuiteOptions {
  double spacing_ratio = 0.125;  // spacing = ratio * min(d_a, d_b), capped below
  double max_spacing = 1.0 / 32.0;
  double margin = 4.0;
  int stencil = 0;
  int threads = 0;
};

struct BoundSuiteRun {
  ExperimentReport report;
  int ghm_violations = 0;
  std::vector<double> c_values;
  std::vector<double> t_star;  // per c: radius about zeta validated for that c
  double max_radius = 0.0;
};

BoundSuiteRun run_bound_suite(const DomainSpec& domain, const Point& zeta,
                              const std::vector<std::pair<Point, Point>>& pairs, const std::vector<double>& c_values,
                              const BoundSuiteOptions& opts = {}, const std::string& timestamp = {});

/// Six points at radii {0.45, 0.9} * depth and angles {-45, 0, 45} degrees from
/// the inward normal at zeta, paired every way.
std::vector<std::pair<Point, Point>> depth_ball_pairs(const DomainSpec& domain, const Point& zeta, double depth);

/// Least c >= 1 with h <= na_bound(c) + err on every depth-ball pair; 1 when
/// the bound already holds as c -> 1+.
double estimate_best_constant(const DomainSpec& domain, const Point& zeta, double depth,
                              const BoundSuiteOptions& opts = {});

/// int_gamma omega*(d_D) / d_D |d gamma|.
double correction_integral(const DomainSpec& domain, const Curve& curve, const ModulusOfContinuity& omega);

struct CorrectionFit {
  std::vector<double> lengths;    // Euclidean geodesic lengths
  std::vector<double> integrals;
  double exponent = 0.0;          // slope of log integral against log length
};

CorrectionFit fit_correction_integral(const DomainSpec& domain, const std::vector<Curve>& geodesics,
                                      const ModulusOfContinuity& omega);

/// Unit inward normal at a boundary point.
Point inward_normal_at(const DomainSpec& domain, const Point& zeta);

// Reports: "# key: value" lines, a header, then rows; numbers with 12
// significant digits. JSON holds the same data (schema in docs/).
enum class ReportFormat { Csv, Json };

ReportFormat parse_report_format(const std::string& text);
std::string format_report(const ExperimentReport& report, ReportFormat format);
ExperimentReport parse_report(const std::string& text, ReportFormat format);
void emit_report(const ExperimentReport& report, ReportFormat format, const std::string& path);

/// Runs fn(i) for i in [0, n) on up to `threads` workers; results keep index order.
template <typename T, typename F>
std::vector<T> parallel_map(std::size_t n, F fn, int threads);

}  // namespace qhm

#include "qhm/detail/parallel.hpp"

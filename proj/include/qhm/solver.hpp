#pragma once

#include "qhm/curve.hpp"
#include "qhm/geom.hpp"

namespace qhm {

struct GridSpec {
  /// Search box. Left empty (dim 0) the box is derived from the query pair
  /// and grown when the path reaches its edge.
  Box box{};
  double spacing = 1.0 / 64.0;
  /// 8 or 16 in 2-D; 6, 18 or 26 in 3-D. 0 picks 16 / 26.
  int stencil = 0;
  /// Nodes with d_D < margin * spacing are excluded.
  double margin = 4.0;
};

struct QhDistanceResult {
  double value = 0.0;
  Curve geodesic;
  double spacing = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  double coarse_value = 0.0;  // refined length at spacing
  double fine_value = 0.0;    // refined length at spacing / 2
};

/// int_curve |du| / d_D by adaptive Simpson on each segment.
double qh_length(const DomainSpec& domain, const Curve& curve, double rel_tol = 1e-8);

struct GridPath {
  Curve path;          // a, grid nodes..., b
  double length = 0.0; // sum of Simpson edge weights
  bool touches_box = false;
  int expanded = 0;    // nodes settled by the search
};

/// One shortest-path solve on the grid graph (no refinement, no box growth).
GridPath grid_shortest_path(const DomainSpec& domain, const Point& a, const Point& b, const GridSpec& grid);

struct RefineOptions {
  double segment_length = 1.0 / 16.0;  // target quasi-hyperbolic length per segment
  int max_sweeps = 500;
  double tolerance = 1e-7;
};

/// Gauss-Seidel descent on the discrete length functional; never returns a
/// curve longer than its input.
Curve refine_geodesic(const DomainSpec& domain, const Curve& initial, const RefineOptions& opts = {});

/// Grid path, refinement and a second pass at half the spacing.
QhDistanceResult qh_distance(const DomainSpec& domain, const Point& a, const Point& b, const GridSpec& grid = {});

/// Box used when GridSpec::box is left empty.
Box auto_box(const DomainSpec& domain, const Point& a, const Point& b, double d_a, double d_b, double spacing,
             double growth = 1.0);

}  // namespace qhm

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "qhm/config.hpp"
#include "qhm/experiments.hpp"

namespace qhm {

struct SuiteResult {
  ExperimentReport report;
  bool pass = false;
};

/// Suites: ghm, asymptotics, jacobian, pushforward. Everything is read from cfg
/// (domain.*, window.*, grid.margin, grid.stencil, experiment.*, output.timestamp).
SuiteResult run_suite(const std::string& suite, const Config& cfg);

SequenceSpec make_sequence(const Config& cfg);

/// Pairs of interior points with d_D >= min_depth, drawn from a fixed-seed
/// generator inside the domain's box (a unit-size box for half-spaces).
std::vector<std::pair<Point, Point>> sample_interior_pairs(const DomainSpec& domain, int count,
                                                           unsigned long long seed, double min_depth);

/// Jacobian sandwich sweep on a samples x samples grid of the flattened
/// window; one row per point and map.
SuiteResult jacobian_sweep(const DomainSpec& domain, int samples, double C, const std::string& timestamp = {});

/// Random polygonal curves in the flattened window, pushed forward with both
/// weights; margins below -1e-6 fail.
SuiteResult pushforward_sweep(const DomainSpec& domain, int curves, unsigned long long seed, double C,
                              const std::string& timestamp = {});

}  // namespace qhm

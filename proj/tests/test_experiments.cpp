#include <cmath>
#include <random>

#include <doctest.h>

#include "qhm/error.hpp"
#include "qhm/experiments.hpp"
#include "qhm/metric.hpp"

using namespace qhm;

namespace {

const DomainSpec kHalfPlane = HalfSpace{2};
const DomainSpec kDisc = Ball{Point{0, 0}, 1.0};

DomainSpec paraboloid() {
  GraphDomain g;
  g.half_width = 1.0;
  g.top = 1.0;
  return g;
}

}  // namespace

TEST_CASE("ladder geometry") {
  SequenceSpec spec;
  spec.domain = kDisc;
  spec.zeta = Point{1, 0};
  spec.mode = PairMode::Normal;
  spec.K = 4;
  for (int k = 0; k <= 4; ++k) {
    const auto [a, b] = ladder_pair(spec, k);
    const PairData p = PairData::make(a, b, boundary_distance(kDisc, a), boundary_distance(kDisc, b));
    CHECK(s_metric(p) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
  }
  spec.mode = PairMode::Tangential;
  const auto [a, b] = ladder_pair(spec, 2);
  const double t = spec.t0 / 4.0;
  CHECK(boundary_distance(kDisc, a) == doctest::Approx(t).epsilon(1e-12));
  CHECK(boundary_distance(kDisc, b) == doctest::Approx(t).epsilon(1e-12));
  // offset sqrt(t) of arc on the unit circle
  CHECK(std::atan2(b[1], b[0]) == doctest::Approx(std::sqrt(t)).epsilon(1e-12));

  spec.zeta = Point{0.5, 0};
  CHECK_THROWS_AS(ladder_pair(spec, 0), Error);
  spec.zeta = Point{1, 0};
  spec.K = 13;
  CHECK_THROWS_AS(ladder_pair(spec, 0), Error);
}

TEST_CASE("half-plane ladder is exact") {
  SequenceSpec spec;
  spec.domain = kHalfPlane;
  spec.zeta = Point{0, 0};
  spec.K = 4;
  for (PairMode m : {PairMode::Normal, PairMode::Tangential, PairMode::FixedRatio}) {
    spec.mode = m;
    const auto run = run_asymptotics(spec, 1.5);
    CHECK(run.report.rows.size() == 5);
    for (std::size_t i = 0; i < run.report.rows.size(); ++i) {
      CHECK(std::abs(run.report.at(i, "h_minus_s")) <= run.report.at(i, "error_estimate") + 1e-5);
    }
    CHECK(run.ghm_violations == 0);
    CHECK(run.pass);
  }
}

TEST_CASE("disc normal pairs") {
  SequenceSpec spec;
  spec.domain = kDisc;
  spec.zeta = Point{0, -1};
  spec.mode = PairMode::Normal;
  spec.t0 = 0.25;
  spec.K = 5;
  const auto run = run_asymptotics(spec, 1.5);
  for (std::size_t i = 0; i < run.report.rows.size(); ++i) {
    CHECK(run.report.at(i, "s") == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(std::abs(run.report.at(i, "h") - std::log(2.0)) < 0.01 * std::log(2.0));
  }
}

TEST_CASE("disc tangential ladder") {
  SequenceSpec spec;
  spec.domain = kDisc;
  spec.zeta = Point{1, 0};
  spec.K = 8;
  const auto run = run_asymptotics(spec, 1.5, "2026-01-01T00:00:00Z");
  CHECK(run.report.rows.size() == 9);
  CHECK(run.skipped == 0);
  CHECK(run.finest_converged);
  CHECK(run.final_s >= 2.0);
  CHECK(run.diff_trend <= 0.05);
  CHECK(run.ratio_trend <= 0.02);
  CHECK(run.inversions <= 1);
  CHECK(run.pass);
  CHECK(run.report.meta("timestamp") == "2026-01-01T00:00:00Z");
  CHECK(run.report.meta("pass") == "true");

  // the correction integral shrinks with the geodesics
  const auto fit = fit_correction_integral(kDisc, run.geodesics, ModulusOfContinuity::power(1.0, 1.0, 1.0));
  CHECK(fit.lengths.size() == 9);
  CHECK(fit.exponent > 0.0);
  MESSAGE("correction integral exponent " << fit.exponent);
}

TEST_CASE("rungs too shallow for the grid are skipped") {
  SequenceSpec spec;
  spec.domain = kDisc;
  spec.zeta = Point{1, 0};
  spec.K = 2;
  spec.spacing_ratio = 0.3;  // margin 4 needs t >= 1.2 t
  const auto run = run_asymptotics(spec, 1.5);
  CHECK(run.skipped == 3);
  CHECK_FALSE(run.pass);
  CHECK(std::isnan(run.report.at(0, "h")));
  CHECK(run.report.at(0, "skipped") == 1.0);
}

TEST_CASE("bound suite on the half-plane") {
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> depth(0.05, 1.0), lateral(-1.0, 1.0);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 100; ++i) pairs.push_back({{depth(rng), lateral(rng)}, {depth(rng), lateral(rng)}});
  const auto run = run_bound_suite(kHalfPlane, Point{0, 0}, pairs, {1.01, 1.8});
  CHECK(run.ghm_violations == 0);
  CHECK(run.t_star[0] == doctest::Approx(run.max_radius));
  CHECK(run.t_star[1] == doctest::Approx(run.max_radius));
  CHECK(run.report.rows.size() == 100);
  CHECK_THROWS_AS(run_bound_suite(kHalfPlane, Point{0, 0}, pairs, {1.0}), Error);
}

TEST_CASE("bound suite on curved domains") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(0.0, 2.0 * std::acos(-1.0)), rad(0.0, 0.8);
  std::vector<std::pair<Point, Point>> pairs;
  for (int i = 0; i < 20; ++i) {
    const double r1 = rad(rng), t1 = ang(rng), r2 = rad(rng), t2 = ang(rng);
    pairs.push_back({{r1 * std::cos(t1), r1 * std::sin(t1)}, {r2 * std::cos(t2), r2 * std::sin(t2)}});
  }
  const auto disc = run_bound_suite(kDisc, Point{1, 0}, pairs, {1.2});
  CHECK(disc.ghm_violations == 0);

  std::vector<std::pair<Point, Point>> near;
  const DomainSpec para = paraboloid();
  for (int i = 1; i <= 6; ++i) {
    const double r = 0.04 * i;
    near.push_back({{0.5 * r, -0.5 * r}, {0.6 * r, 0.7 * r}});
  }
  const auto pr = run_bound_suite(para, Point{0, 0}, near, {1.2});
  CHECK(pr.ghm_violations == 0);
  CHECK(pr.t_star[0] > 0.0);
}

TEST_CASE("best constant") {
  for (double depth : {0.25, 0.0625, 1.0 / 256.0}) CHECK(estimate_best_constant(kHalfPlane, Point{0, 0}, depth) <= 1.01);
  double prev = estimate_best_constant(kDisc, Point{1, 0}, 0.2);
  CHECK(prev >= 1.0);
  CHECK(prev <= 1.5);
  for (double depth : {0.1, 0.05, 0.025}) {
    const double c = estimate_best_constant(kDisc, Point{1, 0}, depth);
    CHECK(c <= prev + 0.05);
    prev = c;
  }
  CHECK(depth_ball_pairs(kDisc, Point{1, 0}, 0.1).size() == 15);
  CHECK_THROWS_AS(depth_ball_pairs(kDisc, Point{1, 0}, 3.0), Error);
}

TEST_CASE("correction integral closed form") {
  // omega(t) = min(t, 1) gives omega*(s) = s (2 - log s) for s <= 1
  const auto omega = ModulusOfContinuity::power(1.0, 1.0, 1.0);
  auto antider = [](double x) { return 3.0 * x - x * std::log(x); };
  const double v = correction_integral(kHalfPlane, Curve({{0.01, 0.0}, {0.5, 0.0}}), omega);
  CHECK(v == doctest::Approx(antider(0.5) - antider(0.01)).epsilon(1e-6));
}

TEST_CASE("report serialization") {
  ExperimentReport empty;
  CHECK(format_report(empty, ReportFormat::Csv) == "\n");

  ExperimentReport r;
  r.set_meta("kind", "demo");
  r.set_meta("note", "a: b");
  r.columns = {"k", "x", "y"};
  r.rows = {{1.0, 0.1 + 0.2, std::nan("")}};
  const std::string csv = format_report(r, ReportFormat::Csv);
  CHECK(csv == "# kind: demo\n# note: a: b\nk,x,y\n1,0.3,nan\n");
  CHECK(format_report(parse_report(csv, ReportFormat::Csv), ReportFormat::Csv) == csv);

  const std::string js = format_report(r, ReportFormat::Json);
  const ExperimentReport back = parse_report(js, ReportFormat::Json);
  CHECK(format_report(back, ReportFormat::Json) == js);
  CHECK(back.meta("note") == "a: b");
  CHECK(back.rows[0][1] == 0.3);
  CHECK(std::isnan(back.rows[0][2]));

  CHECK_THROWS_AS(parse_report("k,x\n1\n", ReportFormat::Csv), Error);
  CHECK_THROWS_AS(parse_report("{", ReportFormat::Json), Error);
  try {
    emit_report(r, ReportFormat::Csv, "/nonexistent-dir/x.csv");
    FAIL("expected IoFailure");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::IoFailure);
  }
}

TEST_CASE("ladder report shape and determinism") {
  SequenceSpec spec;
  spec.domain = kHalfPlane;
  spec.zeta = Point{0, 0};
  spec.K = 10;
  spec.t0 = 0.5;
  spec.threads = 1;
  const auto one = run_asymptotics(spec, 1.5);
  CHECK(one.report.rows.size() == 11);
  spec.threads = 4;
  const auto four = run_asymptotics(spec, 1.5);
  CHECK(format_report(one.report, ReportFormat::Csv) == format_report(four.report, ReportFormat::Csv));
  CHECK(format_report(one.report, ReportFormat::Json) == format_report(four.report, ReportFormat::Json));
}

TEST_CASE("parallel_map keeps order and reports the first failure") {
  const auto sq = parallel_map<int>(50, [](std::size_t i) { return static_cast<int>(i * i); }, 3);
  for (int i = 0; i < 50; ++i) CHECK(sq[static_cast<std::size_t>(i)] == i * i);
  try {
    parallel_map<int>(20, [](std::size_t i) -> int {
      if (i % 7 == 3) throw Error(ErrorKind::InvalidArgument, std::to_string(i));
      return 0;
    }, 4);
    FAIL("expected a throw");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("3") != std::string::npos);
  }
}

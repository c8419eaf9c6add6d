#include <cmath>
#include <numbers>

#include <doctest.h>

#include "qhm/config.hpp"
#include "qhm/error.hpp"
#include "qhm/suites.hpp"

using namespace qhm;

namespace {

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("no exception");
  return ErrorKind::IoFailure;
}

}  // namespace

TEST_CASE("config parsing") {
  const Config cfg = Config::parse(
      "# comment\n"
      "\n"
      "domain.kind = paraboloid\n"
      "  domain.params.kappa=2.5  \n"
      "experiment.c = 1.5, 2,3\n"
      "experiment.zeta = 0,0\n"
      "grid.spacing = 0.015625\n"
      "domain.params.kappa = 0.5\n");
  CHECK(cfg.text("domain.kind", "") == "paraboloid");
  CHECK(cfg.number("domain.params.kappa", 0.0) == 0.5);  // last assignment wins
  CHECK(cfg.numbers("experiment.c", {}) == std::vector<double>{1.5, 2.0, 3.0});
  CHECK(cfg.point("experiment.zeta", Point{1, 1}).norm() == 0.0);
  CHECK(cfg.number("window.top", 7.0) == 7.0);
  CHECK(cfg.integer("experiment.K", 8) == 8);
  CHECK(make_grid(cfg).spacing == 0.015625);
  CHECK(parse_number("1e-3") == 1e-3);
  CHECK(parse_number(" .5 ") == 0.5);
}

TEST_CASE("config rejects bad input") {
  CHECK(kind_of([] { Config::parse("domain.knd = disc\n"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Config::parse("domain.kind disc\n"); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { Config::load("/nonexistent/qhm.cfg"); }) == ErrorKind::IoFailure);
  Config cfg;
  CHECK(kind_of([&] { cfg.set("grid.spacin", "1"); }) == ErrorKind::InvalidArgument);
  cfg.set("experiment.K", "2.5");
  CHECK(kind_of([&] { cfg.integer("experiment.K", 0); }) == ErrorKind::InvalidArgument);
  cfg.set("grid.spacing", "fine");
  CHECK(kind_of([&] { make_grid(cfg); }) == ErrorKind::InvalidArgument);
  cfg.set("grid.spacing", "-1");
  CHECK(kind_of([&] { make_grid(cfg); }) == ErrorKind::InvalidArgument);
  Config d;
  d.set("domain.kind", "torus");
  CHECK(kind_of([&] { make_domain(d); }) == ErrorKind::InvalidArgument);
  d.set("domain.kind", "disc");
  d.set("domain.params.radius", "0");
  CHECK(kind_of([&] { make_domain(d); }) == ErrorKind::InvalidArgument);
  d.set("domain.kind", "c11");
  d.set("domain.dim", "3");
  CHECK(kind_of([&] { make_domain(d); }) == ErrorKind::InvalidArgument);
  CHECK(kind_of([] { parse_number("1.0x"); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("merge lets later layers win") {
  Config base = Config::parse("domain.kind = disc\ngrid.margin = 3\n");
  Config flags;
  flags.set("grid.margin", "6");
  base.merge(flags);
  CHECK(base.number("grid.margin", 0) == 6.0);
  CHECK(base.text("domain.kind", "") == "disc");
}

TEST_CASE("domain construction") {
  Config cfg;
  CHECK(std::holds_alternative<HalfSpace>(make_domain(cfg)));
  cfg.set("domain.kind", "halfspace");
  cfg.set("domain.dim", "3");
  CHECK(dimension(make_domain(cfg)) == 3);

  cfg.set("domain.kind", "ball");
  cfg.set("domain.params.center", "1,2,3");
  cfg.set("domain.params.radius", "0.5");
  const auto ball = std::get<Ball>(make_domain(cfg));
  CHECK(ball.radius == 0.5);
  CHECK(ball.center[2] == 3.0);
  CHECK(default_zeta(ball)[0] == 1.5);

  Config p = Config::parse("domain.kind = paraboloid\ndomain.params.kappa = 2\nwindow.half_width = 0.5\n");
  const auto g = std::get<GraphDomain>(make_domain(p));
  CHECK(g.family == GraphFamily::Paraboloid);
  CHECK(g.kappa == 2.0);
  CHECK(g.half_width == 0.5);
  CHECK(default_zeta(g).norm() == 0.0);

  Config c = Config::parse("domain.kind = cosine\n");
  const auto cos = std::get<GraphDomain>(make_domain(c));
  CHECK(cos.family == GraphFamily::CosineBump);
  CHECK(cos.frequency == doctest::Approx(std::numbers::pi));

  Config e = Config::parse("domain.kind = ellipse\n");
  const DomainSpec ell = make_domain(e);
  CHECK(std::get<ImplicitDomain>(ell).semi_a == 2.0);
  CHECK(std::get<ImplicitDomain>(ell).level(default_zeta(ell)) == doctest::Approx(1.0));

  Config s = Config::parse("domain.kind = superellipse\ndomain.params.exponent = 1.5\n");
  CHECK(kind_of([&] { make_domain(s); }) == ErrorKind::InvalidArgument);
}

TEST_CASE("sequence from config") {
  const Config cfg = Config::parse(
      "domain.kind = disc\nexperiment.mode = normal\nexperiment.K = 3\nexperiment.t0 = 0.125\n"
      "grid.margin = 6\nexperiment.direction = -1\n");
  const SequenceSpec spec = make_sequence(cfg);
  CHECK(spec.mode == PairMode::Normal);
  CHECK(spec.K == 3);
  CHECK(spec.t0 == 0.125);
  CHECK(spec.margin == 6.0);
  CHECK(spec.direction == -1.0);
  CHECK(spec.zeta[0] == 1.0);
}

TEST_CASE("sampled pairs are interior, deep and reproducible") {
  const DomainSpec disc = Ball{Point{0, 0}, 1.0};
  const auto p = sample_interior_pairs(disc, 50, 7, 0.2);
  const auto q = sample_interior_pairs(disc, 50, 7, 0.2);
  REQUIRE(p.size() == 50);
  for (std::size_t i = 0; i < p.size(); ++i) {
    CHECK(boundary_distance(disc, p[i].first) >= 0.2);
    CHECK(boundary_distance(disc, p[i].second) >= 0.2);
    CHECK((p[i].first - q[i].first).norm() == 0.0);
  }
  const auto h = sample_interior_pairs(HalfSpace{2}, 10, 1, 0.3);
  for (const auto& [a, b] : h) CHECK(a[0] >= 0.3);
  CHECK(kind_of([&] { sample_interior_pairs(disc, 1, 1, 2.0); }) == ErrorKind::RegionMissesBoundary);
}

TEST_CASE("suites") {
  Config cfg = Config::parse("domain.kind = paraboloid\nexperiment.samples = 12\nexperiment.pairs = 6\n");
  const auto jac = run_suite("jacobian", cfg);
  CHECK(jac.pass);
  CHECK(jac.report.rows.size() == 2 * 12 * 12);
  CHECK(jac.report.meta("C") == "1");
  const auto push = run_suite("pushforward", cfg);
  CHECK(push.pass);
  CHECK(push.report.rows.size() == 12);
  const auto ghm = run_suite("ghm", cfg);
  CHECK(ghm.pass);
  CHECK(ghm.report.meta("ghm_violations") == "0");

  // an absurd flattening constant must be reported as a failure, not hidden
  cfg.set("experiment.flatten_constant", "-5");
  CHECK_FALSE(run_suite("jacobian", cfg).pass);
  CHECK(kind_of([&] { run_suite("nonsense", cfg); }) == ErrorKind::InvalidArgument);

  Config half;
  half.set("experiment.pairs", "4");
  CHECK(run_suite("jacobian", half).pass);
  CHECK(kind_of([&] { run_suite("pushforward", half); }) == ErrorKind::InvalidArgument);
}

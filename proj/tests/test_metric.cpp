#include <cmath>
#include <random>

#include <doctest.h>

#include "qhm/error.hpp"
#include "qhm/metric.hpp"

using namespace qhm;

namespace {

PairData hp(const Point& a, const Point& b) { return PairData::make(a, b, a[0], b[0]); }

}  // namespace

TEST_CASE("s_metric example values") {
  CHECK(s_metric(hp({1, 0}, {1, 0})) == 0.0);
  CHECK(s_metric(hp({1, 0.3}, {4, 0.3})) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(s_metric(hp({1, 0}, {1, 1})) == doctest::Approx(0.962423650119206).epsilon(1e-12));
  CHECK(s_metric_log_form(hp({1, 0}, {1, 1})) == doctest::Approx(s_metric(hp({1, 0}, {1, 1}))).epsilon(1e-12));
  CHECK_THROWS_AS(PairData::make({1, 0}, {1, 1}, 0.0, 1.0), Error);
  try {
    PairData::make({1, 0}, {1, 1}, 1.0, -1.0);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::NonpositiveDistance);
  }
}

TEST_CASE("ghm lower bound examples") {
  CHECK(ghm_lower_bound(hp({1, 2}, {4, 2})) == doctest::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
  CHECK(ghm_lower_bound(hp({1, 0}, {1, 1})) == doctest::Approx(2.0 * std::log(1.5)).epsilon(1e-12));
  CHECK(ghm_lower_bound(hp({1, 0}, {1, 1})) < s_metric(hp({1, 0}, {1, 1})));
  CHECK(ghm_lower_bound(PairData::make({0.5, 0.5}, {0.5, 0.5}, 0.3, 0.3)) == 0.0);
}

TEST_CASE("na upper bound examples") {
  CHECK(na_upper_bound(hp({1, 0}, {1, 1}), 1.8) == doctest::Approx(2.0 * std::log(2.8)).epsilon(1e-12));
  CHECK(na_upper_bound(hp({1, 0}, {1, 1}), 1.8) >= halfspace_distance({1, 0}, {1, 1}));
  CHECK(na_upper_bound(hp({1, 0}, {1, 0}), 3.0) == 0.0);
  CHECK(na_upper_bound(hp({1, 5}, {4, 5}), 1.1) == doctest::Approx(2.0 * std::log(2.65)).epsilon(1e-12));
  for (double c : {1.0, 0.5, -2.0}) {
    try {
      na_upper_bound(hp({1, 0}, {1, 1}), c);
      FAIL("expected ConstantOutOfRange");
    } catch (const Error& e) {
      CHECK(e.kind() == ErrorKind::ConstantOutOfRange);
    }
  }
}

TEST_CASE("halfspace distance") {
  CHECK(halfspace_distance({1, 0}, {1, 1}) == doctest::Approx(0.962424).epsilon(1e-6));
  CHECK(halfspace_distance({1, -7}, {4, -7}) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  CHECK(halfspace_distance({2, 3, 1}, {2, 3, 1}) == 0.0);
  try {
    halfspace_distance({0, 0}, {1, 1});
    FAIL("expected PointOutsideDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointOutsideDomain);
  }
}

TEST_CASE("halfspace geodesic shape") {
  const Curve v = halfspace_geodesic({1, 0.25}, {4, 0.25}, 33);
  for (const auto& p : v.points()) CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-15));
  // equal hyperbolic spacing on a vertical segment means geometric x_0
  CHECK(v.points()[16][0] == doctest::Approx(2.0).epsilon(1e-12));

  const Curve arc = halfspace_geodesic({1, 0}, {1, 1}, 65);
  CHECK(arc.front() == Point{1, 0});
  CHECK(arc.back() == Point{1, 1});
  for (const auto& p : arc.points()) {
    CHECK(std::hypot(p[0], p[1] - 0.5) == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));
  }
  // by symmetry the middle sample is the apex
  CHECK(arc.points()[32][1] == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(arc.points()[32][0] == doctest::Approx(std::sqrt(1.25)).epsilon(1e-12));

  const Curve chord = halfspace_geodesic({1, 0}, {1, 1}, 2);
  CHECK(chord.size() == 2);

  // 3-D: the arc lies in the vertical plane through a and b
  const Curve a3 = halfspace_geodesic({0.5, 0, 0}, {1.5, 1, 2}, 40);
  for (const auto& p : a3.points()) CHECK(2.0 * p[1] - p[2] == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(halfspace_geodesic({1, 0}, {1, 1}, 1), Error);
  CHECK_THROWS_AS(halfspace_geodesic({-1, 0}, {1, 1}, 8), Error);
}

TEST_CASE("sandwich over random pairs") {
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> lg(-6.0, 3.0);
  std::uniform_real_distribution<double> coord(-5.0, 5.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  int bad_order = 0, bad_forms = 0;
  for (int i = 0; i < 100000; ++i) {
    const Point a{coord(rng), coord(rng)};
    const Point b = a + Point{std::pow(10.0, lg(rng)), 0.0} * (i % 7 == 0 ? 0.0 : 1.0) + Point{0.0, coord(rng)};
    // admissible: boundary distance is 1-Lipschitz, so |d_a - d_b| <= sep
    const double sep = distance(a, b);
    const double d_a = std::pow(10.0, lg(rng));
    const double lo = std::max(d_a - sep, d_a * 1e-6);
    const double d_b = lo + (d_a + sep - lo) * unit(rng);
    const PairData p = PairData::make(a, b, d_a, d_b);
    const double s = s_metric(p);
    const double g = ghm_lower_bound(p);
    if (g > s * (1.0 + 1e-12) + 1e-15) ++bad_order;
    if (std::abs(s - s_metric_log_form(p)) > 1e-12 * std::max(1.0, s)) ++bad_forms;
  }
  CHECK(bad_order == 0);
  CHECK(bad_forms == 0);
  // without the Lipschitz constraint the order can flip
  const PairData wild = PairData::make({1, 0}, {1, 0.1}, 1.0, 50.0);
  CHECK(ghm_lower_bound(wild) > s_metric(wild));
}

TEST_CASE("bounds are tight along a normal") {
  for (double top : {1.5, 4.0, 37.0}) {
    const Point a{1.0, 0.7, -0.2};
    const Point b{top, 0.7, -0.2};
    const PairData p = hp(a, b);
    CHECK(std::abs(ghm_lower_bound(p) - s_metric(p)) < 1e-12);
    CHECK(std::abs(halfspace_distance(a, b) - std::log(top)) < 1e-12);
  }
}

TEST_CASE("inequality toolkit on log grids") {
  int fails = 0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = std::pow(10.0, -6.0 + 12.0 * i / 10000.0);
    if (!(asinh_log_margin(t) > 0.0)) ++fails;
  }
  CHECK(fails == 0);

  fails = 0;
  for (int j = 1; j <= 100; ++j) {
    const double cp = 1.0 + j / 100.0;
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, -6.0 + 6.0 * i / 100.0);  // (0, 1)
      if (!(power_margin(t, cp) > 0.0)) ++fails;
      const double T = std::pow(10.0, 1e-3 + 6.0 * i / 100.0);  // (1, inf)
      if (!(linear_margin(T, cp) > 0.0)) ++fails;
    }
  }
  CHECK(fails == 0);

  fails = 0;
  for (int j = 1; j <= 100; ++j) {
    const double q = std::pow(10.0, 4.0 * j / 100.0);
    for (int i = 0; i < 100; ++i) {
      const double t = std::pow(10.0, -4.0 + 8.0 * i / 100.0);
      if (!(calibration_margin(q, t) > 0.0)) ++fails;
    }
  }
  CHECK(fails == 0);
}

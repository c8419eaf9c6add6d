#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "qhm/geom.hpp"

using namespace qhm;

namespace {

GraphDomain paraboloid(double kappa, double half_width = 1.0, double top = 1.0) {
  GraphDomain g;
  g.family = GraphFamily::Paraboloid;
  g.kappa = kappa;
  g.half_width = half_width;
  g.top = top;
  return g;
}

// Oracle: minimum distance to a dense sample of the boundary, refined by a
// local golden-section search around the best sample.
double brute_force_distance(const BoundaryCurve& curve, const Point& x, double u_lo, double u_hi) {
  constexpr int kDense = 20000;
  double best = 1e300, best_u = u_lo;
  for (int i = 0; i <= kDense; ++i) {
    const double u = u_lo + (u_hi - u_lo) * i / kDense;
    const double d = distance(curve.point(u), x);
    if (d < best) { best = d; best_u = u; }
  }
  double a = std::max(u_lo, best_u - (u_hi - u_lo) / kDense), b = std::min(u_hi, best_u + (u_hi - u_lo) / kDense);
  const double phi = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 200; ++it) {
    const double c = b - phi * (b - a), d = a + phi * (b - a);
    if (distance(curve.point(c), x) < distance(curve.point(d), x)) b = d; else a = c;
  }
  return std::min(best, distance(curve.point(0.5 * (a + b)), x));
}

}  // namespace

TEST_CASE("half-space contact") {
  const DomainSpec d = HalfSpace{2};
  const auto c = boundary_contact(d, Point{0.7, 3.2});
  CHECK(c.distance == doctest::Approx(0.7).epsilon(1e-15));
  CHECK(c.foot == Point{0.0, 3.2});
  CHECK(c.normal == Point{1.0, 0.0});
  CHECK(c.unique);
  CHECK_THROWS_AS(boundary_contact(d, Point{-0.1, 0.0}), Error);
}

TEST_CASE("ball contact") {
  const DomainSpec d = Ball{Point{0.0, 0.0}, 1.0};
  const auto c = boundary_contact(d, Point{0.5, 0.0});
  CHECK(c.distance == doctest::Approx(0.5));
  CHECK(distance(c.foot, Point{1.0, 0.0}) < 1e-15);
  CHECK(distance(c.normal, Point{-1.0, 0.0}) < 1e-15);
  CHECK(c.unique);
  CHECK_FALSE(boundary_contact(d, Point{0.0, 0.0}).unique);
  try {
    boundary_contact(d, Point{1.5, 0.0});
    FAIL("expected PointOutsideDomain");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::PointOutsideDomain);
  }
}

TEST_CASE("paraboloid vertex contact") {
  const DomainSpec d = paraboloid(1.0, 1.0, 2.0);
  const auto c = boundary_contact(d, Point{0.5, 0.0});
  CHECK(c.distance == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(distance(c.foot, Point{0.0, 0.0}) < 1e-10);
  CHECK(distance(c.normal, Point{1.0, 0.0}) < 1e-10);
  CHECK(c.unique);
  // Beyond the centre of curvature the projection splits in two.
  CHECK_FALSE(boundary_contact(d, Point{0.8 + 0.5, 0.0}).unique);
}

TEST_CASE("contact agrees with dense boundary sampling") {
  std::mt19937 rng(7);
  GraphDomain cosine;
  cosine.family = GraphFamily::CosineBump;
  cosine.amplitude = 0.1;
  cosine.frequency = 3.0;
  cosine.half_width = 1.0;
  cosine.top = 1.0;
  GraphDomain kink;
  kink.family = GraphFamily::C11Kink;
  kink.kappa = 1.0;
  ImplicitDomain ellipse{ImplicitFamily::Ellipse, 1.5, 0.8, 2.0};
  ImplicitDomain super{ImplicitFamily::Superellipse, 1.0, 1.0, 4.0};
  const std::vector<DomainSpec> domains{paraboloid(1.0), DomainSpec{cosine}, DomainSpec{kink},
                                        DomainSpec{ellipse}, DomainSpec{super}, Ball{Point{0.2, -0.1}, 0.7}};
  for (const auto& d : domains) {
    const BoundaryCurve curve(d);
    const bool periodic = !std::holds_alternative<GraphDomain>(d);
    const double u_lo = periodic ? -std::numbers::pi : -1.0, u_hi = periodic ? std::numbers::pi : 1.0;
    const Box box = bounding_box(d);
    std::uniform_real_distribution<double> ux(box.lo[0], std::min(box.hi[0], 0.6));
    std::uniform_real_distribution<double> uy(box.lo[1] * 0.6, box.hi[1] * 0.6);
    int tested = 0;
    while (tested < 40) {
      const Point x{ux(rng), uy(rng)};
      if (!contains(d, x)) continue;
      ++tested;
      const auto c = boundary_contact(d, x);
      const double oracle = brute_force_distance(curve, x, u_lo, u_hi);
      CHECK(std::abs(c.distance - oracle) <= 1e-6 * oracle);
      CHECK(std::abs(distance(x, c.foot) - c.distance) <= 1e-12);
      CHECK(std::abs(c.normal.norm() - 1.0) <= 1e-12);
      // normal is orthogonal to the numerically differentiated tangent at the foot
      const double u = curve.parameter_of(c.foot);
      const double h = 1e-6;
      Point tangent = curve.point(u + h) - curve.point(u - h);
      tangent *= 1.0 / tangent.norm();
      CHECK(std::abs(tangent.dot(c.normal)) <= 1e-8);
      // normal points into the domain
      CHECK(contains(d, c.foot + c.normal * (0.5 * c.distance)));
    }
  }
}

TEST_CASE("projection is unique below 1/(2L)") {
  std::mt19937 rng(11);
  GraphDomain cosine;
  cosine.family = GraphFamily::CosineBump;
  cosine.amplitude = 0.2;
  cosine.frequency = 2.0;
  for (const GraphDomain& g : {paraboloid(2.0), cosine}) {
    const double L = g.gradient_lipschitz();
    std::uniform_real_distribution<double> ux(0.0, 1.0 / (2.0 * L));
    std::uniform_real_distribution<double> uy(-0.5, 0.5);
    for (int i = 0; i < 200; ++i) {
      Point x{0.0, uy(rng)};
      const double height = ux(rng);
      x[0] = g.f(x) + height;
      if (!contains(DomainSpec{g}, x) || height < 1e-6) continue;
      const auto c = boundary_contact(DomainSpec{g}, x);
      CHECK(c.unique);
      CHECK(c.distance < 1.0 / (2.0 * L));
    }
  }
}

TEST_CASE("3-D paraboloid and ball contact") {
  GraphDomain g = paraboloid(1.0);
  g.dim = 3;
  const auto c = boundary_contact(DomainSpec{g}, Point{0.5, 0.0, 0.0});
  CHECK(c.distance == doctest::Approx(0.5).epsilon(1e-10));
  // off-axis: compare with the meridian-plane 2-D problem
  const Point x3{0.3, 0.3, 0.4};
  const Point x2{0.3, 0.5, 0.0};
  const double d3 = boundary_contact(DomainSpec{g}, x3).distance;
  const double d2 = boundary_contact(DomainSpec{paraboloid(1.0)}, Point{0.3, 0.5}).distance;
  CHECK(d3 == doctest::Approx(d2).epsilon(1e-9));
  (void)x2;
  const DomainSpec ball = Ball{Point{0.0, 0.0, 0.0}, 2.0};
  CHECK(boundary_distance(ball, Point{0.0, 1.0, 1.0}) == doctest::Approx(2.0 - std::sqrt(2.0)));
}

TEST_CASE("reach estimates") {
  CHECK(std::isinf(reach_estimate(HalfSpace{2}, Box{Point{-1.0, -1.0}, Point{1.0, 1.0}})));
  const double ball = reach_estimate(Ball{Point{0.0, 0.0}, 1.0}, Box{Point{-2.0, -2.0}, Point{2.0, 2.0}});
  CHECK(ball == doctest::Approx(1.0).epsilon(0.02));
  const double par = reach_estimate(paraboloid(1.0), Box{Point{-0.1, -0.2}, Point{0.2, 0.2}});
  CHECK(par == doctest::Approx(1.0).epsilon(0.02));
  const double par2 = reach_estimate(paraboloid(2.0), Box{Point{-0.1, -0.2}, Point{0.2, 0.2}});
  CHECK(par2 == doctest::Approx(0.5).epsilon(0.02));
  CHECK_THROWS_AS(reach_estimate(Ball{Point{0.0, 0.0}, 1.0}, Box{Point{-0.1, -0.1}, Point{0.1, 0.1}}), Error);
}

TEST_CASE("boundary curve arc length") {
  const BoundaryCurve par(paraboloid(1.0));
  // closed-form arc length of x0 = x^2/2 from 0 to a: (a sqrt(1+a^2) + asinh a)/2
  const double a = 0.7;
  CHECK(par.arc_length(0.0, a) == doctest::Approx(0.5 * (a * std::sqrt(1 + a * a) + std::asinh(a))).epsilon(1e-13));
  const double u = par.walk(0.1, 0.3);
  CHECK(par.arc_length(0.1, u) == doctest::Approx(0.3).epsilon(1e-13));
  CHECK(par.walk(0.1, -0.3) < 0.1);
  const BoundaryCurve disc(Ball{Point{0.0, 0.0}, 2.0});
  CHECK(disc.arc_length(0.0, 1.0) == doctest::Approx(2.0));
}

TEST_CASE("modulus integrals") {
  const auto sqrt_mod = ModulusOfContinuity::power(1.0, 0.5);
  const auto d1 = dini_integral(sqrt_mod);
  CHECK(d1.convergent);
  CHECK(std::abs(d1.value - 2.0) <= 1e-6);
  CHECK(d1.partial == doctest::Approx(2.0 - 2.0 * std::sqrt(1e-3)).epsilon(1e-10));

  const auto inv_log = ModulusOfContinuity::log_power(1.0, 1.0);
  CHECK_FALSE(dini_integral(inv_log).convergent);

  const auto inv_log2 = ModulusOfContinuity::log_power(1.0, 2.0);
  const auto d3 = dini_integral(inv_log2);
  CHECK(d3.convergent);
  CHECK(std::abs(d3.value - 1.0) <= 1e-4);

  const auto l1 = log_dini_integral(sqrt_mod);
  CHECK(l1.convergent);
  CHECK(std::abs(l1.value + 4.0) <= 1e-5);
  CHECK_FALSE(log_dini_integral(inv_log2).convergent);
  const auto l0 = log_dini_integral(ModulusOfContinuity::zero());
  CHECK(l0.convergent);
  CHECK(l0.value == 0.0);

  CHECK_THROWS_AS(dini_integral(sqrt_mod, 0.5), Error);
}

TEST_CASE("power moduli pass both verdicts") {
  for (double eps : {0.25, 0.5, 1.0, 2.0}) {
    for (double M : {0.5, 1.0, 3.0}) {
      const auto w = ModulusOfContinuity::power(M, eps);
      const auto d = dini_integral(w);
      const auto l = log_dini_integral(w);
      CHECK(d.convergent);
      CHECK(l.convergent);
      CHECK(d.value == doctest::Approx(M / eps).epsilon(1e-8));
      CHECK(l.value == doctest::Approx(-M / (eps * eps)).epsilon(1e-8));
    }
  }
}

TEST_CASE("omega star") {
  const auto capped = ModulusOfContinuity::power(1.0, 1.0, 1.0);
  CHECK(std::abs(omega_star(capped, 1.0) - 2.0) <= 1e-6);
  CHECK(std::abs(omega_star(capped, 0.1) - 0.1 * (2.0 + std::log(10.0))) <= 1e-5);
  CHECK(omega_star(ModulusOfContinuity::zero(), 0.3) == 0.0);
  CHECK_THROWS_AS(omega_star(ModulusOfContinuity::power(1.0, 1.0), 0.5), Error);
  // closed form s (2 - log s) holds for every s <= 1
  for (double s : {1e-6, 1e-3, 0.5}) {
    CHECK(omega_star(capped, s) == doctest::Approx(s * (2.0 - std::log(s))).epsilon(1e-9));
  }
}

TEST_CASE("omega star is nondecreasing with nonincreasing ratio") {
  const std::vector<ModulusOfContinuity> moduli{
      ModulusOfContinuity::power(1.0, 1.0, 1.0), ModulusOfContinuity::power(2.0, 0.5, 0.7),
      ModulusOfContinuity::log_power(1.0, 2.0, 1.0), ModulusOfContinuity::log_power(0.5, 3.0, 0.5)};
  for (const auto& w : moduli) {
    double prev = 0.0, prev_ratio = 1e300;
    for (int i = 0; i <= 60; ++i) {
      const double s = std::pow(10.0, -6.0 + 8.0 * i / 60.0);
      const double v = omega_star(w, s);
      CHECK(v >= prev);
      CHECK(v / s <= prev_ratio * (1.0 + 1e-12));
      prev = v;
      prev_ratio = v / s;
    }
  }
}

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "qhm/geom.hpp"

namespace qhm {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kQuadTol = 1e-12;

// Cutoff ladder 10^-3 .. 10^-9 in u = log(1/t).
constexpr int kLadderFirst = 3;
constexpr int kLadderLast = 9;
constexpr double kSlopeThreshold = 1e-2;
constexpr double kDecayThreshold = 1.5;

// t values where omega fails to be smooth.
std::vector<double> kink_points(const ModulusOfContinuity& w) {
  std::vector<double> ts;
  if (w.family == ModulusFamily::LogPower) ts.push_back(1.0);
  if (std::isfinite(w.cap) && w.cap > 0.0 && w.scale > w.cap) {
    if (w.family == ModulusFamily::Power && w.exponent > 0.0) {
      ts.push_back(std::pow(w.cap / w.scale, 1.0 / w.exponent));
    } else if (w.family == ModulusFamily::LogPower && w.exponent > 0.0) {
      ts.push_back(std::exp(1.0 - std::pow(w.scale / w.cap, 1.0 / w.exponent)));
    }
  }
  return ts;
}

template <typename F>
double integrate_finite(F g, double a, double b, const std::vector<double>& cuts) {
  if (!(b > a)) return 0.0;
  std::vector<double> pts{a};
  for (double c : cuts) {
    if (c > a && c < b) pts.push_back(c);
  }
  std::sort(pts.begin() + 1, pts.end());
  pts.push_back(b);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, pts[i], pts[i + 1], 12, kQuadTol);
  }
  return total;
}

template <typename F>
double integrate_to_infinity(F g, const std::vector<double>& cuts) {
  double last = 0.0;
  for (double c : cuts) last = std::max(last, c);
  // Start the tail past the last kink so the tail integrand is smooth.
  const double start = last + 1.0;
  const double head = integrate_finite(g, 0.0, start, cuts);
  // u = start + v/(1-v) maps [0, 1) onto [start, inf); Gauss-Kronrod never
  // evaluates the endpoint v = 1.
  auto mapped = [&](double v) {
    const double w = 1.0 - v;
    return g(start + v / w) / (w * w);
  };
  const double tail = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(mapped, 0.0, 1.0, 12, kQuadTol);
  return head + tail;
}

template <typename F>
ModulusIntegral ladder_integral(F g, const std::vector<double>& cuts, double lower_cut) {
  if (!(lower_cut > 0.0 && lower_cut <= 1e-3)) {
    throw Error(ErrorKind::InvalidArgument, "lower_cut must lie in (0, 1e-3]");
  }
  const double ln10 = std::numbers::ln10;
  ModulusIntegral out;
  out.partial = integrate_finite(g, 0.0, -std::log(lower_cut), cuts);

  std::vector<double> partials;
  for (int k = kLadderFirst; k <= kLadderLast; ++k) partials.push_back(integrate_finite(g, 0.0, k * ln10, cuts));
  std::vector<double> xs, ys;
  bool vanishing = false;
  for (std::size_t i = 0; i + 1 < partials.size(); ++i) {
    const double inc = std::abs(partials[i + 1] - partials[i]);
    if (inc <= 1e-300) { vanishing = true; break; }
    xs.push_back(std::log((kLadderFirst + i + 0.5) * ln10));
    ys.push_back(std::log(inc));
  }
  out.tail_slope = std::abs(partials.back() - partials[partials.size() - 2]) / ln10;
  if (vanishing) {
    out.decay_exponent = kInf;
  } else {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) { mx += xs[i]; my += ys[i]; }
    mx /= xs.size();
    my /= ys.size();
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    out.decay_exponent = -sxy / sxx;
  }
  out.convergent = !(out.tail_slope > kSlopeThreshold && out.decay_exponent <= kDecayThreshold);
  out.value = out.convergent ? integrate_to_infinity(g, cuts) : out.partial;
  return out;
}

std::vector<double> u_cuts(const ModulusOfContinuity& omega) {
  std::vector<double> cuts;
  for (double t : kink_points(omega)) {
    if (t > 0.0 && t < 1.0) cuts.push_back(-std::log(t));
  }
  return cuts;
}

}  // namespace

double ModulusOfContinuity::operator()(double t) const {
  if (!(t > 0.0)) return 0.0;
  return at_log(std::log(t));
}

double ModulusOfContinuity::at_log(double log_t) const {
  if (scale == 0.0) return 0.0;
  double raw = 0.0;
  if (family == ModulusFamily::Power) {
    raw = scale * std::exp(exponent * log_t);
  } else {
    raw = log_t < 0.0 ? scale / std::pow(1.0 - log_t, exponent) : scale;
  }
  return std::min(raw, cap);
}

ModulusOfContinuity ModulusOfContinuity::power(double M, double eps, double cap) {
  return {ModulusFamily::Power, M, eps, cap};
}

ModulusOfContinuity ModulusOfContinuity::log_power(double M, double p, double cap) {
  return {ModulusFamily::LogPower, M, p, cap};
}

ModulusOfContinuity ModulusOfContinuity::zero() { return {ModulusFamily::Power, 0.0, 1.0, 0.0}; }

ModulusIntegral dini_integral(const ModulusOfContinuity& omega, double lower_cut) {
  // t = e^{-u}: int omega(t)/t dt = int omega(e^{-u}) du
  return ladder_integral([&](double u) { return omega.at_log(-u); }, u_cuts(omega), lower_cut);
}

ModulusIntegral log_dini_integral(const ModulusOfContinuity& omega, double lower_cut) {
  // log t = -u
  return ladder_integral([&](double u) { return -u * omega.at_log(-u); }, u_cuts(omega), lower_cut);
}

double omega_star(const ModulusOfContinuity& omega, double s) {
  if (!(s > 0.0)) throw Error(ErrorKind::InvalidArgument, "omega_star needs s > 0");
  if (!std::isfinite(omega.cap)) throw Error(ErrorKind::UnboundedModulus, "omega_star needs a bounded modulus");
  if (omega.scale == 0.0 || omega.cap == 0.0) return 0.0;
  const bool dini = omega.family == ModulusFamily::Power ? omega.exponent > 0.0 : omega.exponent > 1.0;
  if (!dini) return kInf;

  std::vector<double> near_cuts, far_cuts;
  for (double t : kink_points(omega)) {
    if (t < s) near_cuts.push_back(std::log(s / t));
    if (t > s) far_cuts.push_back(std::log(t / s));
  }
  // int_0^s omega(t)/t dt with t = s e^{-u}; s int_s^inf omega(t)/t^2 dt with t = s e^{u}
  const double log_s = std::log(s);
  const double inner = integrate_to_infinity([&](double u) { return omega.at_log(log_s - u); }, near_cuts);
  const double outer = integrate_to_infinity([&](double u) { return omega.at_log(log_s + u) * std::exp(-u); }, far_cuts);
  return inner + outer;
}

}  // namespace qhm

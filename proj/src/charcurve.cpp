#include "tanglebound/charcurve.hpp"

#include <cmath>

namespace tanglebound {

namespace {

const double kPi = std::acos(-1.0);
const double kCurveCoeff = 8.0 * std::sqrt(6.0) / 9.0;

double wrap_phase(double phi) {
  double w = std::fmod(phi, 2.0 * kPi);
  if (w < 0.0) w += 2.0 * kPi;
  if (w >= 2.0 * kPi) w = 0.0;
  return w;
}

// Signed branch of the phi=0 curve: tau3(q,0) = |g(q)|.
double signed_curve(double q) {
  return q * q - kCurveCoeff * std::sqrt(q * (1.0 - q) * (1.0 - q) * (1.0 - q));
}

double signed_curve_derivative(double q) {
  if (q >= 1.0) return 2.0;
  const double h = q * (1.0 - q) * (1.0 - q) * (1.0 - q);
  const double hp = (1.0 - q) * (1.0 - q) * (1.0 - 4.0 * q);
  return 2.0 * q - kCurveCoeff * hp / (2.0 * std::sqrt(h));
}

AnalyticBenchmarks compute_benchmarks() {
  AnalyticBenchmarks b;
  const double cbrt2 = std::cbrt(2.0);
  b.q0 = 4.0 * cbrt2 / (3.0 + 4.0 * cbrt2);
  b.r0 = -signed_curve_derivative(b.q0);
  b.q1 = 0.5 + (3.0 / 310.0) * std::sqrt(465.0);
  b.r1 = -(1.0 - std::abs(signed_curve(b.q1))) / (1.0 - b.q1);
  const double tangent = -signed_curve_derivative(b.q1);
  if (std::abs(b.r1 - tangent) > 1e-8) {
    throw std::logic_error("chord and tangent slopes disagree at q1");
  }
  return b;
}

}  // namespace

GhzwPoint::GhzwPoint(double q_in, double phi_in) : q(q_in), phi(wrap_phase(phi_in)) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("GHZ weight q must lie in [0,1]");
  }
}

PureState z_state(const GhzwPoint& point) {
  const Complex phase = std::exp(Complex(0.0, point.phi));
  Amplitudes a = std::sqrt(point.q) * named_state(StateKind::Ghz).amplitudes();
  a -= phase * std::sqrt(1.0 - point.q) * named_state(StateKind::W).amplitudes();
  return PureState::normalized(a);
}

double tau3_closed_form(const GhzwPoint& point) {
  const double q = point.q;
  const double amp = kCurveCoeff * std::sqrt(q * (1.0 - q) * (1.0 - q) * (1.0 - q));
  return std::abs(q * q - amp * std::exp(Complex(0.0, 3.0 * point.phi)));
}

double tau3_closed_form(double q, double phi) {
  return tau3_closed_form(GhzwPoint(q, phi));
}

double tau3_curve_derivative(double q) {
  if (!(q > 0.0 && q <= 1.0)) {
    throw std::invalid_argument("curve derivative defined on (0,1]");
  }
  // Points within float noise of the zero count as the zero: right branch.
  const double g = signed_curve(q);
  const double sign = g < -1e-12 ? -1.0 : 1.0;
  return sign * signed_curve_derivative(q);
}

const AnalyticBenchmarks& benchmarks() {
  static const AnalyticBenchmarks b = compute_benchmarks();
  return b;
}

double restricted_bound_analytic(double p) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("witness overlap p must lie in [0,1]");
  }
  const AnalyticBenchmarks& b = benchmarks();
  if (p <= b.q0) return 0.0;
  if (p <= b.q1) return tau3_closed_form(p, 0.0);
  return 1.0 + b.r1 * (1.0 - p);
}

std::optional<double> skew_qmin(double p, double phi, double omega) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("witness overlap p must lie in [0,1]");
  }
  const double b = omega * std::cos(phi);
  if (!(b < 0.0)) return std::nullopt;
  const double disc = b * b + p - p * p;
  if (disc < 0.0) {
    throw std::logic_error("negative discriminant in skew minimizer");
  }
  return (p + 2.0 * b * b - 2.0 * std::abs(b) * std::sqrt(disc)) /
         (1.0 + 4.0 * b * b);
}

}  // namespace tanglebound

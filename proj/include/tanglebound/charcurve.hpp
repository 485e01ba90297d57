#pragma once

#include <optional>

#include "tanglebound/qstate.hpp"

namespace tanglebound {

/// Point on the GHZ-W superposition family sqrt(q)|GHZ> - e^{i phi} sqrt(1-q)|W>.
struct GhzwPoint {
  double q;
  double phi;  // wrapped into [0, 2*pi)

  GhzwPoint(double q_in, double phi_in);
};

/// Landmarks of the characteristic curve tau3(q, 0):
///   q0: its zero; r0: minus the right-branch slope at q0;
///   q1: tangency point of the chord to (1, 1); r1: minus that common slope.
struct AnalyticBenchmarks {
  double q0;
  double r0;
  double q1;
  double r1;
};

PureState z_state(const GhzwPoint& point);

double tau3_closed_form(const GhzwPoint& point);
double tau3_closed_form(double q, double phi);

/// d/dq tau3(q, 0) on (0, 1]. The curve is |g(q)| with g the signed branch;
/// the sign flips at q0, and at q0 itself the right-branch slope is returned.
double tau3_curve_derivative(double q);

/// Computed at first use; tangency vs chord consistency is asserted to 1e-8.
const AnalyticBenchmarks& benchmarks();

/// Piecewise lower bound: 0 up to q0, the curve itself on (q0, q1], the chord
/// 1 - |r1|(1-p) beyond.
double restricted_bound_analytic(double p);

/// Solution q of <Z(q,phi)|W_skew(omega)|Z(q,phi)> = -p on the branch below p
/// (minus sign branch); requires omega*cos(phi) < 0, otherwise empty.
std::optional<double> skew_qmin(double p, double phi, double omega);

}  // namespace tanglebound

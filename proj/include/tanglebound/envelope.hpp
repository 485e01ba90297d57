#pragma once

#include <vector>

namespace tanglebound {

/// Samples of a one-dimensional function on a strictly increasing grid.
struct SampledCurve {
  std::vector<double> xs;
  std::vector<double> ys;

  SampledCurve(std::vector<double> xs_in, std::vector<double> ys_in);
};

struct EnvelopeKnot {
  double x;
  double y;
};

struct Interval {
  double lo;
  double hi;
};

/// Gap below which the envelope is considered to coincide with the curve.
inline constexpr double kAffineGapTolerance = 1e-9;

/// Piecewise-affine lower convex envelope of a sampled curve. Knots are a
/// subsequence of the input points; affine_regions are the knot-to-knot spans
/// containing at least one sample strictly above the envelope.
struct ConvexEnvelope {
  std::vector<EnvelopeKnot> knots;
  std::vector<Interval> affine_regions;

  /// Linear interpolation between knots; x outside the domain is rejected.
  double eval(double x) const;
};

ConvexEnvelope lower_convex_envelope(const SampledCurve& curve);

struct ConvexityReport {
  /// Maximal x-intervals where the second divided difference is < -tolerance.
  std::vector<Interval> nonconvex_regions;
  /// Second divided differences at the interior sample points.
  std::vector<double> second_differences;
};

ConvexityReport convexity_diagnostic(const SampledCurve& curve,
                                     double tolerance = 1e-9);

}  // namespace tanglebound

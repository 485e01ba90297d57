#include "tanglebound/envelope.hpp"

#include <algorithm>
#include <stdexcept>

namespace tanglebound {

SampledCurve::SampledCurve(std::vector<double> xs_in, std::vector<double> ys_in)
    : xs(std::move(xs_in)), ys(std::move(ys_in)) {
  if (xs.size() != ys.size()) {
    throw std::invalid_argument("sample coordinate and value counts differ");
  }
  if (xs.size() < 2) {
    throw std::invalid_argument("a sampled curve needs at least two points");
  }
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i] > xs[i - 1])) {
      throw std::invalid_argument("sample coordinates must be strictly increasing");
    }
  }
}

double ConvexEnvelope::eval(double x) const {
  if (x < knots.front().x || x > knots.back().x) {
    throw std::out_of_range("evaluation point outside the sampled domain");
  }
  auto it = std::lower_bound(knots.begin(), knots.end(), x,
                             [](const EnvelopeKnot& k, double v) { return k.x < v; });
  if (it == knots.begin()) return it->y;
  if (it->x == x) return it->y;
  const EnvelopeKnot& hi = *it;
  const EnvelopeKnot& lo = *(it - 1);
  const double t = (x - lo.x) / (hi.x - lo.x);
  return lo.y + t * (hi.y - lo.y);
}

ConvexEnvelope lower_convex_envelope(const SampledCurve& curve) {
  const std::size_t n = curve.xs.size();
  // Monotone-chain scan over x-sorted samples; pop the middle point only when
  // it lies strictly above the new chord, so collinear points stay as knots.
  std::vector<std::size_t> hull;
  for (std::size_t i = 0; i < n; ++i) {
    while (hull.size() >= 2) {
      const std::size_t a = hull[hull.size() - 2];
      const std::size_t b = hull[hull.size() - 1];
      const double cross = (curve.xs[b] - curve.xs[a]) * (curve.ys[i] - curve.ys[a]) -
                           (curve.ys[b] - curve.ys[a]) * (curve.xs[i] - curve.xs[a]);
      if (cross < 0.0) {
        hull.pop_back();
      } else {
        break;
      }
    }
    hull.push_back(i);
  }

  ConvexEnvelope env;
  env.knots.reserve(hull.size());
  for (std::size_t idx : hull) {
    env.knots.push_back({curve.xs[idx], curve.ys[idx]});
  }

  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    const std::size_t a = hull[k];
    const std::size_t b = hull[k + 1];
    bool strictly_above = false;
    for (std::size_t i = a + 1; i < b; ++i) {
      const double t = (curve.xs[i] - curve.xs[a]) / (curve.xs[b] - curve.xs[a]);
      const double line = curve.ys[a] + t * (curve.ys[b] - curve.ys[a]);
      if (curve.ys[i] > line + kAffineGapTolerance) {
        strictly_above = true;
        break;
      }
    }
    if (strictly_above) {
      env.affine_regions.push_back({curve.xs[a], curve.xs[b]});
    }
  }
  return env;
}

ConvexityReport convexity_diagnostic(const SampledCurve& curve, double tolerance) {
  if (tolerance <= 0.0) {
    throw std::invalid_argument("diagnostic tolerance must be positive");
  }
  ConvexityReport report;
  const std::size_t n = curve.xs.size();
  report.second_differences.reserve(n >= 2 ? n - 2 : 0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double left = (curve.ys[i] - curve.ys[i - 1]) / (curve.xs[i] - curve.xs[i - 1]);
    const double right = (curve.ys[i + 1] - curve.ys[i]) / (curve.xs[i + 1] - curve.xs[i]);
    report.second_differences.push_back(2.0 * (right - left) /
                                        (curve.xs[i + 1] - curve.xs[i - 1]));
  }
  std::size_t run_start = 0;
  bool in_run = false;
  for (std::size_t j = 0; j <= report.second_differences.size(); ++j) {
    const bool violating = j < report.second_differences.size() &&
                           report.second_differences[j] < -tolerance;
    if (violating && !in_run) {
      run_start = j;
      in_run = true;
    } else if (!violating && in_run) {
      report.nonconvex_regions.push_back({curve.xs[run_start], curve.xs[j + 1]});
      in_run = false;
    }
  }
  return report;
}

}  // namespace tanglebound

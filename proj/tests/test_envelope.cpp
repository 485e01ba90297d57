#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "tanglebound/charcurve.hpp"
#include "tanglebound/envelope.hpp"
#include "tanglebound/optimizer.hpp"

using namespace tanglebound;

TEST_CASE("sampled curves validate their grids") {
  CHECK_THROWS_AS(SampledCurve({0.0, 1.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledCurve({0.0}, {0.0}), std::invalid_argument);
  CHECK_THROWS_AS(SampledCurve({0.0, 0.0, 1.0}, {0.0, 0.0, 0.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(SampledCurve({0.0, 1.0, 0.5}, {0.0, 0.0, 0.0}),
                  std::invalid_argument);
}

TEST_CASE("a bump collapses to its chord with one affine region") {
  const SampledCurve bump({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  const ConvexEnvelope env = lower_convex_envelope(bump);
  REQUIRE(env.knots.size() == 2);
  CHECK(env.knots.front().x == 0.0);
  CHECK(env.knots.back().x == 1.0);
  REQUIRE(env.affine_regions.size() == 1);
  CHECK(env.affine_regions[0].lo == 0.0);
  CHECK(env.affine_regions[0].hi == 1.0);
  CHECK(env.eval(0.5) == doctest::Approx(0.0));
  CHECK_THROWS_AS(env.eval(-0.1), std::out_of_range);
  CHECK_THROWS_AS(env.eval(1.1), std::out_of_range);
}

TEST_CASE("convex input is kept verbatim, collinear points included") {
  const SampledCurve line({0.0, 0.25, 0.5, 1.0}, {0.0, 0.25, 0.5, 1.0});
  const ConvexEnvelope env = lower_convex_envelope(line);
  CHECK(env.knots.size() == 4);
  CHECK(env.affine_regions.empty());

  const SampledCurve para({-1.0, -0.5, 0.0, 0.5, 1.0}, {1.0, 0.25, 0.0, 0.25, 1.0});
  const ConvexEnvelope penv = lower_convex_envelope(para);
  CHECK(penv.knots.size() == 5);
  CHECK(penv.affine_regions.empty());
}

TEST_CASE("envelope dominates nothing and is idempotent") {
  Rng rng(31);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 6 + static_cast<int>(rng.uniform() * 40);
    std::vector<double> xs(n), ys(n);
    double x = rng.uniform();
    for (int i = 0; i < n; ++i) {
      xs[i] = x;
      x += 0.01 + rng.uniform();
      ys[i] = rng.uniform(-2.0, 2.0);
    }
    const SampledCurve curve(xs, ys);
    const ConvexEnvelope env = lower_convex_envelope(curve);

    std::vector<double> hull_ys(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
      hull_ys[i] = env.eval(xs[i]);
      CHECK(hull_ys[i] <= ys[i] + 1e-12);
    }
    // Convexity of the result.
    for (std::size_t k = 1; k + 1 < env.knots.size(); ++k) {
      const auto& a = env.knots[k - 1];
      const auto& b = env.knots[k];
      const auto& c = env.knots[k + 1];
      CHECK((b.y - a.y) * (c.x - b.x) <= (c.y - b.y) * (b.x - a.x) + 1e-12);
    }
    // Idempotence on the hull samples.
    const ConvexEnvelope again = lower_convex_envelope(SampledCurve(xs, hull_ys));
    for (std::size_t i = 0; i < xs.size(); ++i) {
      CHECK(std::abs(again.eval(xs[i]) - hull_ys[i]) < 1e-10);
    }
    CHECK(again.affine_regions.empty());
  }
}

TEST_CASE("convexity diagnostic flags curvature signs") {
  std::vector<double> xs, convex_ys, concave_ys;
  for (int i = 0; i <= 50; ++i) {
    const double x = i / 50.0;
    xs.push_back(x);
    convex_ys.push_back(x * x);
    concave_ys.push_back(-x * x);
  }
  CHECK(convexity_diagnostic(SampledCurve(xs, convex_ys), 1e-9)
            .nonconvex_regions.empty());
  const ConvexityReport rep = convexity_diagnostic(SampledCurve(xs, concave_ys), 1e-9);
  REQUIRE(rep.nonconvex_regions.size() == 1);
  CHECK(rep.nonconvex_regions[0].lo == doctest::Approx(0.0));
  CHECK(rep.nonconvex_regions[0].hi == doctest::Approx(1.0));
  CHECK(rep.second_differences.size() == xs.size() - 2);
  CHECK_THROWS_AS(convexity_diagnostic(SampledCurve(xs, convex_ys), 0.0),
                  std::invalid_argument);
}

TEST_CASE("the pure curve is concave approaching its maximum") {
  std::vector<double> xs, ys;
  for (int i = 0; i <= 200; ++i) {
    const double q = 0.71 + (1.0 - 0.71) * i / 200.0;
    xs.push_back(q);
    ys.push_back(tau3_closed_form(q, 0.0));
  }
  const ConvexityReport rep = convexity_diagnostic(SampledCurve(xs, ys), 1e-6);
  REQUIRE(!rep.nonconvex_regions.empty());
  CHECK(rep.nonconvex_regions.back().hi > 0.99);
}

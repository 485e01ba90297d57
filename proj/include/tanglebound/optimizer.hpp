#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <utility>
#include <vector>

namespace tanglebound {

// Counter-based seeding: every (base seed, restart) pair maps to a fixed
// engine seed, so results never depend on thread scheduling.
std::uint64_t splitmix64_next(std::uint64_t& state);
std::uint64_t restart_seed(std::uint64_t base_seed, std::uint64_t restart_index);

class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  double uniform();  // [0, 1)
  double uniform(double lo, double hi);
  double normal();

 private:
  std::uint64_t state_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

struct NelderMeadOptions {
  int max_iterations = 2000;
  double tolerance = 1e-8;
  double initial_scale = 1.0;
};

struct NelderMeadResult {
  Eigen::VectorXd x;
  double value = 0.0;
  int iterations = 0;
};

// Runs fn(i) for i in [0, count) on up to thread_budget() worker threads.
// Callers store per-index results; no ordering is promised.
void parallel_for_index(int count, const std::function<void(int)>& fn);
int thread_budget();

template <typename F>
NelderMeadResult nelder_mead(F&& f, const Eigen::VectorXd& x0,
                             const NelderMeadOptions& opt = {}) {
  const int n = static_cast<int>(x0.size());
  const int m = n + 1;
  std::vector<Eigen::VectorXd> pts(m, x0);
  std::vector<double> vals(m);
  for (int i = 0; i < n; ++i) pts[i + 1](i) += opt.initial_scale;
  for (int i = 0; i < m; ++i) vals[i] = f(pts[i]);

  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  auto sort_order = [&] {
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return vals[a] < vals[b]; });
  };

  int iter = 0;
  for (; iter < opt.max_iterations; ++iter) {
    sort_order();
    const int best = order[0];
    const int worst = order[m - 1];
    const int second_worst = order[m - 2];
    if (vals[worst] - vals[best] <= opt.tolerance * (1.0 + std::abs(vals[best]))) {
      break;
    }

    Eigen::VectorXd centroid = Eigen::VectorXd::Zero(n);
    for (int i = 0; i < m; ++i) {
      if (i != worst) centroid += pts[i];
    }
    centroid /= static_cast<double>(n);

    Eigen::VectorXd reflected = centroid + (centroid - pts[worst]);
    const double fr = f(reflected);
    if (fr < vals[best]) {
      Eigen::VectorXd expanded = centroid + 2.0 * (centroid - pts[worst]);
      const double fe = f(expanded);
      if (fe < fr) {
        pts[worst] = std::move(expanded);
        vals[worst] = fe;
      } else {
        pts[worst] = std::move(reflected);
        vals[worst] = fr;
      }
      continue;
    }
    if (fr < vals[second_worst]) {
      pts[worst] = std::move(reflected);
      vals[worst] = fr;
      continue;
    }

    Eigen::VectorXd contracted;
    if (fr < vals[worst]) {
      contracted = centroid + 0.5 * (reflected - centroid);
    } else {
      contracted = centroid + 0.5 * (pts[worst] - centroid);
    }
    const double fc = f(contracted);
    if (fc < std::min(fr, vals[worst])) {
      pts[worst] = std::move(contracted);
      vals[worst] = fc;
      continue;
    }

    for (int i = 1; i < m; ++i) {
      const int idx = order[i];
      pts[idx] = pts[order[0]] + 0.5 * (pts[idx] - pts[order[0]]);
      vals[idx] = f(pts[idx]);
    }
  }

  sort_order();
  return {pts[order[0]], vals[order[0]], iter};
}

}  // namespace tanglebound

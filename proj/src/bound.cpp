#include "tanglebound/bound.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "tanglebound/optimizer.hpp"

namespace tanglebound {
namespace {

// Stack-allocated coefficient types; every search space has dimension <= 8.
using CoeffVec = Eigen::Matrix<Complex, Eigen::Dynamic, 1, Eigen::ColMajor, 8, 1>;
using SmallMat =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 8, 8>;

CoeffVec chart_to_coeffs(const Eigen::VectorXd& x) {
  const int n = static_cast<int>(x.size()) / 2;
  CoeffVec c(n);
  for (int j = 0; j < n; ++j) c(j) = Complex(x(2 * j), x(2 * j + 1));
  return c;
}

Eigen::VectorXd coeffs_to_chart(const CoeffVec& c) {
  Eigen::VectorXd x(2 * c.size());
  for (int j = 0; j < c.size(); ++j) {
    x(2 * j) = c(j).real();
    x(2 * j + 1) = c(j).imag();
  }
  return x;
}

// Witness expectation on embed(c) for unit coefficient vectors. Projector
// shapes reduce to a single overlap; everything else uses the projected
// Hermitian form.
struct WitnessEval {
  bool projector = false;
  double alpha = 0.0;
  double sign = 0.0;
  CoeffVec phi;
  SmallMat m;

  double operator()(const CoeffVec& c) const {
    if (projector) {
      return alpha + sign * std::norm(phi.dot(c));
    }
    return std::real(c.dot(m * c));
  }
};

struct SolveContext {
  const BoundProblem& problem;
  Eigen::Matrix<Complex, 8, Eigen::Dynamic, Eigen::ColMajor, 8, 8> basis;
  int n;
  bool full;
  std::vector<WitnessEval> witnesses;
  std::vector<Eigen::VectorXd> warm_charts;

  explicit SolveContext(const BoundProblem& p)
      : problem(p), basis(p.space.basis()), n(p.space.dimension()),
        full(p.space.kind() == SearchSpaceKind::Full) {
    for (const auto& w : p.witnesses) {
      WitnessEval ev;
      if (const auto& form = w.projector_form()) {
        ev.projector = true;
        ev.alpha = form->alpha;
        ev.sign = form->sign;
        ev.phi = basis.adjoint() * form->phi;
      } else {
        ev.m = basis.adjoint() * w.matrix() * basis;
      }
      witnesses.push_back(std::move(ev));
    }

    const PureState named[] = {named_state(StateKind::Ghz), named_state(StateKind::W),
                               named_state(StateKind::WBar), basis_state(0),
                               basis_state(7)};
    std::vector<CoeffVec> kept;
    for (const auto& s : named) {
      CoeffVec c = basis.adjoint() * s.amplitudes();
      const double nn = c.norm();
      if (nn < 1e-6) continue;
      c /= nn;
      bool duplicate = false;
      for (const auto& prev : kept) {
        if (std::norm(prev.dot(c)) > 1.0 - 1e-9) {
          duplicate = true;
          break;
        }
      }
      if (duplicate) continue;
      kept.push_back(c);
      warm_charts.push_back(coeffs_to_chart(c));
    }
  }

  double measure_of(const CoeffVec& c) const {
    Amplitudes a;
    if (full) {
      a = c;
    } else {
      a.noalias() = basis * c;
    }
    const double t = detail::tau3_amplitudes(a);
    return problem.measure == Measure::Tau3 ? t : t * t;
  }

  PureState embed_chart(const Eigen::VectorXd& x) const {
    CoeffVec c = chart_to_coeffs(x);
    const double nn = c.norm();
    if (nn < 1e-12) {
      throw std::runtime_error("optimizer chart collapsed to the zero vector");
    }
    c /= nn;
    Amplitudes a;
    if (full) {
      a = c;
    } else {
      a.noalias() = basis * c;
    }
    return PureState::normalized(a);
  }

  double lagrangian(const Eigen::VectorXd& r, const Eigen::VectorXd& x) const {
    CoeffVec c = chart_to_coeffs(x);
    const double n2 = c.squaredNorm();
    if (n2 < 1e-24) return 1e9;
    c /= std::sqrt(n2);
    double val = measure_of(c);
    for (std::size_t k = 0; k < witnesses.size(); ++k) {
      val += r(static_cast<int>(k)) * (problem.measured[k] - witnesses[k](c));
    }
    return val;
  }
};

constexpr double kPhaseScales[] = {0.25, 0.02, 0.002};

struct RestartOutcome {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
  bool converged = false;
};

template <typename F>
RestartOutcome run_phases(F&& f, Eigen::VectorXd x0, const OptimizerSettings& st) {
  RestartOutcome out;
  Eigen::VectorXd x = std::move(x0);
  for (double scale : kPhaseScales) {
    NelderMeadOptions opt;
    opt.max_iterations = st.max_inner_iterations;
    opt.tolerance = st.inner_tolerance;
    opt.initial_scale = scale;
    NelderMeadResult res = nelder_mead(f, x, opt);
    x = std::move(res.x);
    out.value = res.value;
    out.converged = res.iterations < st.max_inner_iterations;
    const double nn = x.norm();
    if (nn > 1e-12) x /= nn;
  }
  out.x = std::move(x);
  return out;
}

Eigen::VectorXd random_sphere_chart(int dim, Rng& rng) {
  Eigen::VectorXd x(dim);
  for (int j = 0; j < dim; ++j) x(j) = rng.normal();
  const double nn = x.norm();
  if (nn < 1e-12) return Eigen::VectorXd::Unit(dim, 0);
  return x / nn;
}

struct InnerSolve {
  double value = 0.0;
  Eigen::VectorXd x;
  bool converged = false;
};

InnerSolve inner_solve(const SolveContext& ctx, const Eigen::VectorXd& r,
                       const Eigen::VectorXd* carry) {
  const OptimizerSettings& st = ctx.problem.settings;
  const int dim = 2 * ctx.n;
  const int nwarm =
      std::min<int>(static_cast<int>(ctx.warm_charts.size()), st.restarts);
  const int total = std::max(st.restarts, nwarm) + (carry != nullptr ? 1 : 0);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(total));
  parallel_for_index(total, [&](int i) {
    Eigen::VectorXd x0;
    if (i < nwarm) {
      x0 = ctx.warm_charts[static_cast<std::size_t>(i)];
    } else if (carry != nullptr && i == nwarm) {
      x0 = *carry;
    } else {
      Rng rng(restart_seed(st.seed, static_cast<std::uint64_t>(i)));
      x0 = random_sphere_chart(dim, rng);
    }
    auto objective = [&ctx, &r](const Eigen::VectorXd& x) {
      return ctx.lagrangian(r, x);
    };
    outcomes[static_cast<std::size_t>(i)] = run_phases(objective, std::move(x0), st);
  });

  int best = 0;
  bool any_converged = outcomes[0].converged;
  for (int i = 1; i < total; ++i) {
    any_converged = any_converged || outcomes[static_cast<std::size_t>(i)].converged;
    if (outcomes[static_cast<std::size_t>(i)].value <
        outcomes[static_cast<std::size_t>(best)].value) {
      best = i;
    }
  }
  InnerSolve out;
  out.value = outcomes[static_cast<std::size_t>(best)].value;
  out.x = std::move(outcomes[static_cast<std::size_t>(best)].x);
  out.converged = any_converged;
  return out;
}

Eigen::VectorXd scalar_r(double r) {
  Eigen::VectorXd v(1);
  v(0) = r;
  return v;
}

// ---------------------------------------------------------------------------
// Constrained minimization

struct ConstrainedState {
  ConstrainedMinimum result;
  Eigen::VectorXd chart;  // carried as a warm start for neighboring targets
};

// Exact path for a single projector-shaped witness: the overlap with phi is
// pinned by the target, leaving a relative phase and the orthogonal complement
// free.
ConstrainedState exact_overlap_minimum(const SolveContext& ctx, double target,
                                       const Eigen::VectorXd* carry) {
  const OptimizerSettings& st = ctx.problem.settings;
  const ProjectorForm& form = *ctx.problem.witnesses[0].projector_form();
  CoeffVec phic = ctx.basis.adjoint() * form.phi;
  const double rho2 = phic.squaredNorm();
  ConstrainedState out;

  if (rho2 < 1e-18) {
    out.result.residual = std::abs(target - form.alpha);
    if (out.result.residual > kFeasibilityResidual) return out;
    // Witness constant on the space: plain measure minimization.
    const int dim = 2 * ctx.n;
    std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(st.restarts));
    parallel_for_index(st.restarts, [&](int i) {
      Eigen::VectorXd x0;
      if (i < static_cast<int>(ctx.warm_charts.size())) {
        x0 = ctx.warm_charts[static_cast<std::size_t>(i)];
      } else {
        Rng rng(restart_seed(st.seed, static_cast<std::uint64_t>(i)));
        x0 = random_sphere_chart(dim, rng);
      }
      auto objective = [&ctx](const Eigen::VectorXd& x) {
        CoeffVec c = chart_to_coeffs(x);
        const double n2 = c.squaredNorm();
        if (n2 < 1e-24) return 1e9;
        c /= std::sqrt(n2);
        return ctx.measure_of(c);
      };
      outcomes[static_cast<std::size_t>(i)] = run_phases(objective, std::move(x0), st);
    });
    int best = 0;
    for (int i = 1; i < st.restarts; ++i) {
      if (outcomes[static_cast<std::size_t>(i)].value <
          outcomes[static_cast<std::size_t>(best)].value) {
        best = i;
      }
    }
    out.result.value = outcomes[static_cast<std::size_t>(best)].value;
    out.result.argmin = ctx.embed_chart(outcomes[static_cast<std::size_t>(best)].x);
    out.result.feasible = true;
    out.chart = outcomes[static_cast<std::size_t>(best)].x;
    return out;
  }

  const double s_raw = form.sign * (target - form.alpha) / rho2;
  if (s_raw < -1e-12 || s_raw > 1.0 + 1e-12) {
    out.result.residual =
        (s_raw < 0.0 ? -s_raw : s_raw - 1.0) * rho2;
    return out;
  }
  const double s = std::clamp(s_raw, 0.0, 1.0);

  Eigen::MatrixXcd phimat = phic / std::sqrt(rho2);
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(phimat);
  Eigen::MatrixXcd q = qr.householderQ();
  const CoeffVec qhat = q.col(0);
  const SmallMat comp = q.rightCols(ctx.n - 1);

  if (s > 1.0 - 1e-12) {
    out.result.value = ctx.measure_of(qhat);
    out.result.argmin = ctx.embed_chart(coeffs_to_chart(qhat));
    out.result.residual = std::abs(ctx.witnesses[0](qhat) - target);
    out.result.feasible = out.result.residual <= kFeasibilityResidual;
    Eigen::VectorXd chart = Eigen::VectorXd::Zero(1 + 2 * (ctx.n - 1));
    chart(1) = 1.0;
    out.chart = std::move(chart);
    return out;
  }

  const double sq_s = std::sqrt(s);
  const double sq_c = std::sqrt(1.0 - s);
  auto build = [&](const Eigen::VectorXd& x, CoeffVec& c) -> bool {
    CoeffVec y = chart_to_coeffs(x.tail(x.size() - 1));
    const double ny = y.norm();
    if (ny < 1e-12) return false;
    const Complex phase(std::cos(x(0)), std::sin(x(0)));
    c = sq_s * phase * qhat + (sq_c / ny) * (comp * y);
    return true;
  };
  auto objective = [&](const Eigen::VectorXd& x) {
    CoeffVec c;
    if (!build(x, c)) return 1e9;
    return ctx.measure_of(c);
  };

  // Warm charts projected onto the constraint manifold.
  std::vector<Eigen::VectorXd> warm;
  for (const auto& wx : ctx.warm_charts) {
    CoeffVec c = chart_to_coeffs(wx);
    const Complex over = qhat.dot(c);
    CoeffVec y = comp.adjoint() * c;
    Eigen::VectorXd x(1 + 2 * (ctx.n - 1));
    x(0) = std::abs(over) > 1e-9 ? std::arg(over) : 0.0;
    if (y.norm() < 1e-9) y = CoeffVec::Unit(ctx.n - 1, 0);
    x.tail(x.size() - 1) = coeffs_to_chart(CoeffVec(y / y.norm()));
    warm.push_back(std::move(x));
  }
  const int nwarm = std::min<int>(static_cast<int>(warm.size()), st.restarts);
  const int total = std::max(st.restarts, nwarm) + (carry != nullptr ? 1 : 0);
  const int dim = 1 + 2 * (ctx.n - 1);

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(total));
  parallel_for_index(total, [&](int i) {
    Eigen::VectorXd x0;
    if (i < nwarm) {
      x0 = warm[static_cast<std::size_t>(i)];
    } else if (carry != nullptr && i == nwarm) {
      x0 = *carry;
    } else {
      Rng rng(restart_seed(st.seed, static_cast<std::uint64_t>(i)));
      x0 = random_sphere_chart(dim, rng);
      x0(0) = rng.uniform(0.0, 2.0 * M_PI);
    }
    outcomes[static_cast<std::size_t>(i)] = run_phases(objective, std::move(x0), st);
  });
  int best = 0;
  for (int i = 1; i < total; ++i) {
    if (outcomes[static_cast<std::size_t>(i)].value <
        outcomes[static_cast<std::size_t>(best)].value) {
      best = i;
    }
  }

  CoeffVec c;
  build(outcomes[static_cast<std::size_t>(best)].x, c);
  out.result.value = outcomes[static_cast<std::size_t>(best)].value;
  out.result.argmin = ctx.embed_chart(coeffs_to_chart(c));
  out.result.residual = std::abs(ctx.witnesses[0](c) - target);
  out.result.feasible = out.result.residual <= kFeasibilityResidual;
  out.chart = outcomes[static_cast<std::size_t>(best)].x;
  return out;
}

// Penalty continuation for general constraints, with a Gauss-Newton
// feasibility restoration once the schedule tops out.
ConstrainedState penalty_minimum(const SolveContext& ctx,
                                 const Eigen::VectorXd& targets,
                                 const Eigen::VectorXd* carry) {
  const OptimizerSettings& st = ctx.problem.settings;
  const int dim = 2 * ctx.n;
  const int nc = static_cast<int>(targets.size());

  auto residuals = [&](const Eigen::VectorXd& x, Eigen::VectorXd& out) -> bool {
    CoeffVec c = chart_to_coeffs(x);
    const double n2 = c.squaredNorm();
    if (n2 < 1e-24) return false;
    c /= std::sqrt(n2);
    for (int k = 0; k < nc; ++k) {
      out(k) = ctx.witnesses[static_cast<std::size_t>(k)](c) - targets(k);
    }
    return true;
  };
  auto penalized = [&](double mu, const Eigen::VectorXd& x) {
    CoeffVec c = chart_to_coeffs(x);
    const double n2 = c.squaredNorm();
    if (n2 < 1e-24) return 1e9;
    c /= std::sqrt(n2);
    double val = ctx.measure_of(c);
    for (int k = 0; k < nc; ++k) {
      const double g = ctx.witnesses[static_cast<std::size_t>(k)](c) - targets(k);
      val += mu * g * g;
    }
    return val;
  };
  auto restore = [&](Eigen::VectorXd& x) {
    Eigen::VectorXd res(nc);
    Eigen::MatrixXd jac(nc, dim);
    Eigen::VectorXd rp(nc), rm(nc);
    const double h = 1e-6;
    for (int iter = 0; iter < 15; ++iter) {
      if (!residuals(x, res)) return;
      if (res.cwiseAbs().maxCoeff() < 1e-12) return;
      for (int j = 0; j < dim; ++j) {
        Eigen::VectorXd xp = x, xm = x;
        xp(j) += h;
        xm(j) -= h;
        if (!residuals(xp, rp) || !residuals(xm, rm)) return;
        jac.col(j) = (rp - rm) / (2.0 * h);
      }
      Eigen::MatrixXd gram = jac * jac.transpose();
      if (std::abs(gram.determinant()) < 1e-18) return;
      Eigen::VectorXd lambda = gram.ldlt().solve(res);
      x -= jac.transpose() * lambda;
      const double nn = x.norm();
      if (nn > 1e-12) x /= nn;
    }
  };

  const int nwarm =
      std::min<int>(static_cast<int>(ctx.warm_charts.size()), st.restarts);
  const int total = std::max(st.restarts, nwarm) + (carry != nullptr ? 1 : 0);

  struct PenaltyOutcome {
    double value = std::numeric_limits<double>::infinity();
    double residual = std::numeric_limits<double>::infinity();
    Eigen::VectorXd x;
  };
  std::vector<PenaltyOutcome> outcomes(static_cast<std::size_t>(total));

  parallel_for_index(total, [&](int i) {
    Eigen::VectorXd x;
    if (i < nwarm) {
      x = ctx.warm_charts[static_cast<std::size_t>(i)];
    } else if (carry != nullptr && i == nwarm) {
      x = *carry;
    } else {
      Rng rng(restart_seed(st.seed, static_cast<std::uint64_t>(i)));
      x = random_sphere_chart(dim, rng);
    }
    bool first = true;
    for (double mu = 10.0; mu <= 1e7 + 1.0; mu *= 10.0) {
      auto objective = [&](const Eigen::VectorXd& xx) { return penalized(mu, xx); };
      NelderMeadOptions opt;
      opt.max_iterations = st.max_inner_iterations;
      opt.tolerance = st.inner_tolerance;
      opt.initial_scale = first ? 0.25 : 0.05;
      NelderMeadResult res = nelder_mead(objective, x, opt);
      x = std::move(res.x);
      const double nn = x.norm();
      if (nn > 1e-12) x /= nn;
      first = false;
    }
    restore(x);
    {
      auto objective = [&](const Eigen::VectorXd& xx) { return penalized(1e7, xx); };
      NelderMeadOptions opt;
      opt.max_iterations = st.max_inner_iterations;
      opt.tolerance = st.inner_tolerance;
      opt.initial_scale = 0.002;
      NelderMeadResult res = nelder_mead(objective, x, opt);
      x = std::move(res.x);
      const double nn = x.norm();
      if (nn > 1e-12) x /= nn;
    }
    restore(x);

    PenaltyOutcome& slot = outcomes[static_cast<std::size_t>(i)];
    Eigen::VectorXd res(nc);
    if (!residuals(x, res)) return;
    CoeffVec c = chart_to_coeffs(x);
    c /= c.norm();
    slot.value = ctx.measure_of(c);
    slot.residual = res.cwiseAbs().maxCoeff();
    slot.x = std::move(x);
  });

  int best = -1;
  for (int i = 0; i < total; ++i) {
    const PenaltyOutcome& o = outcomes[static_cast<std::size_t>(i)];
    if (o.x.size() == 0) continue;
    if (best < 0) {
      best = i;
      continue;
    }
    const PenaltyOutcome& b = outcomes[static_cast<std::size_t>(best)];
    const bool o_feasible = o.residual <= kFeasibilityResidual;
    const bool b_feasible = b.residual <= kFeasibilityResidual;
    if (o_feasible != b_feasible) {
      if (o_feasible) best = i;
      continue;
    }
    if (o_feasible ? (o.value < b.value) : (o.residual < b.residual)) best = i;
  }

  ConstrainedState out;
  if (best < 0) {
    out.result.residual = std::numeric_limits<double>::infinity();
    return out;
  }
  const PenaltyOutcome& b = outcomes[static_cast<std::size_t>(best)];
  out.result.value = b.value;
  out.result.argmin = ctx.embed_chart(b.x);
  out.result.residual = b.residual;
  out.result.feasible = b.residual <= kFeasibilityResidual;
  out.chart = b.x;
  return out;
}

ConstrainedState constrained_solve(const SolveContext& ctx,
                                   const Eigen::VectorXd& targets,
                                   const Eigen::VectorXd* carry) {
  if (targets.size() == 1 && ctx.problem.witnesses[0].projector_form()) {
    return exact_overlap_minimum(ctx, targets(0), carry);
  }
  return penalty_minimum(ctx, targets, carry);
}

// Feasible (target, value) samples over a sorted target list, carrying each
// minimizer into the next solve.
void evaluate_targets(const SolveContext& ctx, const std::vector<double>& targets,
                      std::vector<double>& xs, std::vector<double>& ys) {
  Eigen::VectorXd carry;
  bool have_carry = false;
  for (double w : targets) {
    ConstrainedState st =
        constrained_solve(ctx, scalar_r(w), have_carry ? &carry : nullptr);
    if (!st.result.feasible) continue;
    xs.push_back(w);
    ys.push_back(st.result.value);
    carry = st.chart;
    have_carry = true;
  }
}

std::pair<double, double> attainable_range(const SolveContext& ctx) {
  const Observable& w = ctx.problem.witnesses[0];
  SmallMat m = ctx.basis.adjoint() * w.matrix() * ctx.basis;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
  const auto& vals = solver.eigenvalues();
  return {vals(0), vals(vals.size() - 1)};
}

void merge_targets(std::vector<double>& into, const std::vector<double>& add) {
  into.insert(into.end(), add.begin(), add.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end(),
                         [](double a, double b) { return std::abs(a - b) < 1e-12; }),
             into.end());
}

// Convexified pure-state curve: samples over the attainable range, hull, then
// bisection refinement around the hull touch points so kink placement does not
// inherit the sampling resolution.
ConvexEnvelope convexified_envelope(const SolveContext& ctx,
                                    const std::vector<double>& grid) {
  auto [wmin, wmax] = attainable_range(ctx);
  std::vector<double> targets;
  for (double w : grid) {
    if (w >= wmin - 1e-9 && w <= wmax + 1e-9) {
      targets.push_back(std::clamp(w, wmin, wmax));
    }
  }
  std::vector<double> base(33);
  for (int i = 0; i < 33; ++i) {
    base[static_cast<std::size_t>(i)] = wmin + (wmax - wmin) * i / 32.0;
  }
  merge_targets(targets, base);

  std::vector<double> xs, ys;
  evaluate_targets(ctx, targets, xs, ys);
  if (xs.size() < 2) {
    throw std::runtime_error("fewer than two attainable targets in the sweep");
  }

  for (int round = 0; round < 5; ++round) {
    ConvexEnvelope env = lower_convex_envelope(SampledCurve(xs, ys));
    std::vector<double> extra;
    for (const Interval& region : env.affine_regions) {
      for (double endpoint : {region.lo, region.hi}) {
        auto it = std::lower_bound(xs.begin(), xs.end(), endpoint - 1e-12);
        const std::size_t idx = static_cast<std::size_t>(it - xs.begin());
        if (idx > 0 && xs[idx] - xs[idx - 1] > 1e-7) {
          extra.push_back(0.5 * (xs[idx] + xs[idx - 1]));
        }
        if (idx + 1 < xs.size() && xs[idx + 1] - xs[idx] > 1e-7) {
          extra.push_back(0.5 * (xs[idx + 1] + xs[idx]));
        }
      }
    }
    if (extra.empty()) break;
    std::sort(extra.begin(), extra.end());
    extra.erase(std::unique(extra.begin(), extra.end(),
                            [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                extra.end());
    std::vector<double> nx, ny;
    evaluate_targets(ctx, extra, nx, ny);
    for (std::size_t i = 0; i < nx.size(); ++i) {
      auto it = std::lower_bound(xs.begin(), xs.end(), nx[i]);
      if (it != xs.end() && std::abs(*it - nx[i]) < 1e-12) continue;
      const std::size_t pos = static_cast<std::size_t>(it - xs.begin());
      xs.insert(xs.begin() + static_cast<std::ptrdiff_t>(pos), nx[i]);
      ys.insert(ys.begin() + static_cast<std::ptrdiff_t>(pos), ny[i]);
    }
  }
  return lower_convex_envelope(SampledCurve(xs, ys));
}

BoundProblem with_measured(const BoundProblem& problem, double w) {
  BoundProblem copy = problem;
  copy.measured[0] = w;
  return copy;
}

}  // namespace

// ---------------------------------------------------------------------------

SearchSpace SearchSpace::full() {
  Eigen::Matrix<Complex, 8, Eigen::Dynamic> basis = Matrix8::Identity();
  return SearchSpace(SearchSpaceKind::Full, std::move(basis));
}

SearchSpace SearchSpace::symmetric() {
  Eigen::Matrix<Complex, 8, Eigen::Dynamic> basis(8, 4);
  basis.col(0) = basis_state(0).amplitudes();
  basis.col(1) = named_state(StateKind::W).amplitudes();
  basis.col(2) = named_state(StateKind::WBar).amplitudes();
  basis.col(3) = basis_state(7).amplitudes();
  return SearchSpace(SearchSpaceKind::Symmetric, std::move(basis));
}

SearchSpace SearchSpace::span(const PureState& a, const PureState& b) {
  if (std::abs(a.overlap(b)) > 1e-10) {
    throw std::invalid_argument("span states must be orthonormal within 1e-10");
  }
  Eigen::Matrix<Complex, 8, Eigen::Dynamic> basis(8, 2);
  basis.col(0) = a.amplitudes();
  basis.col(1) = b.amplitudes();
  return SearchSpace(SearchSpaceKind::Span, std::move(basis));
}

PureState SearchSpace::embed(const Eigen::VectorXcd& coefficients) const {
  if (coefficients.size() != basis_.cols()) {
    throw std::invalid_argument("coefficient count does not match the space dimension");
  }
  return PureState::normalized(basis_ * coefficients);
}

void OptimizerSettings::validate() const {
  if (restarts < 1) throw std::invalid_argument("restarts must be positive");
  if (!(r_box_lo < r_box_hi)) {
    throw std::invalid_argument("multiplier box is empty");
  }
  if (!(inner_tolerance > 0.0) || !(outer_tolerance > 0.0)) {
    throw std::invalid_argument("tolerances must be positive");
  }
  if (max_inner_iterations < 1) {
    throw std::invalid_argument("max_inner_iterations must be positive");
  }
}

void BoundProblem::validate() const {
  if (witnesses.empty()) throw std::invalid_argument("at least one witness is required");
  if (witnesses.size() > 2) {
    throw std::invalid_argument("more than two simultaneous witnesses are not supported");
  }
  if (witnesses.size() != measured.size()) {
    throw std::invalid_argument("witness and measured-value counts differ");
  }
  settings.validate();
}

InnerResult inner_infimum(const BoundProblem& problem, const Eigen::VectorXd& r) {
  problem.validate();
  if (r.size() != static_cast<Eigen::Index>(problem.witnesses.size())) {
    throw std::invalid_argument("multiplier count does not match the witness count");
  }
  for (int k = 0; k < r.size(); ++k) {
    if (r(k) < problem.settings.r_box_lo - 1e-12 ||
        r(k) > problem.settings.r_box_hi + 1e-12) {
      throw std::invalid_argument("multiplier outside the configured box");
    }
  }
  SolveContext ctx(problem);
  InnerSolve sol = inner_solve(ctx, r, nullptr);
  return {sol.value, ctx.embed_chart(sol.x), sol.converged};
}

BoundResult legendre_bound(const BoundProblem& problem) {
  problem.validate();
  const OptimizerSettings& st = problem.settings;
  SolveContext ctx(problem);
  const int nw = static_cast<int>(problem.witnesses.size());

  BoundResult result;
  double best_v = -std::numeric_limits<double>::infinity();
  Eigen::VectorXd best_r, best_x;
  bool best_converged = false;
  Eigen::VectorXd carry;
  bool have_carry = false;

  auto eval_r = [&](const Eigen::VectorXd& r) -> double {
    InnerSolve sol = inner_solve(ctx, r, have_carry ? &carry : nullptr);
    result.trace.push_back({r, sol.value});
    if (sol.value > best_v) {
      best_v = sol.value;
      best_r = r;
      best_x = sol.x;
      best_converged = sol.converged;
    }
    carry = sol.x;
    have_carry = true;
    return sol.value;
  };

  if (nw == 1) {
    const double lo = st.r_box_lo;
    const double hi = st.r_box_hi;
    std::vector<double> scan;
    const bool has_negative = lo < 0.0;
    if (has_negative) {
      const double top = std::min(hi, 0.0);
      for (int i = 0; i < 41; ++i) scan.push_back(lo + (top - lo) * i / 40.0);
    }
    if (hi > 0.0) {
      const double start = std::max(lo, 0.0);
      const int count = has_negative ? 21 : 41;
      for (int i = 1; i <= count; ++i) {
        scan.push_back(start + (hi - start) * i / count);
      }
      if (!has_negative) scan.insert(scan.begin(), start);
    }

    std::size_t best_idx = 0;
    double best_scan = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < scan.size(); ++i) {
      const double v = eval_r(scalar_r(scan[i]));
      if (v > best_scan) {
        best_scan = v;
        best_idx = i;
      }
    }

    // The positive half hosts no refined optimum for witness-shaped
    // observables; refine only when the best scan point is nonpositive or the
    // whole box is.
    const bool refine = !(scan[best_idx] > 1e-12 && has_negative);
    if (refine && scan.size() >= 2) {
      const double a = best_idx > 0 ? scan[best_idx - 1] : scan[best_idx];
      const double b = best_idx + 1 < scan.size() ? scan[best_idx + 1] : scan[best_idx];
      if (b - a > st.outer_tolerance) {
        constexpr double invphi = 0.6180339887498949;
        double ga = a, gb = b;
        double x1 = gb - invphi * (gb - ga);
        double x2 = ga + invphi * (gb - ga);
        double f1 = eval_r(scalar_r(x1));
        double f2 = eval_r(scalar_r(x2));
        int guard = 0;
        while (gb - ga > st.outer_tolerance && guard++ < 200) {
          if (f1 >= f2) {
            gb = x2;
            x2 = x1;
            f2 = f1;
            x1 = gb - invphi * (gb - ga);
            f1 = eval_r(scalar_r(x1));
          } else {
            ga = x1;
            x1 = x2;
            f1 = f2;
            x2 = ga + invphi * (gb - ga);
            f2 = eval_r(scalar_r(x2));
          }
        }
      }
    }
  } else {
    const double lo = st.r_box_lo;
    const double hi = st.r_box_hi;
    auto clamp_r = [&](Eigen::VectorXd r) {
      for (int k = 0; k < r.size(); ++k) r(k) = std::clamp(r(k), lo, hi);
      return r;
    };
    std::vector<Eigen::VectorXd> starts;
    auto add_start = [&](double r0, double r1) {
      Eigen::VectorXd r(2);
      r << r0, r1;
      starts.push_back(clamp_r(std::move(r)));
    };
    add_start(0.0, 0.0);
    const double mid = lo < 0.0 ? lo * 0.5 : 0.5 * (lo + hi);
    add_start(mid, mid);
    add_start(mid, 0.0);
    add_start(0.0, mid);
    add_start(lo, lo);

    auto ascent = [&](const Eigen::VectorXd& r) {
      return -eval_r(clamp_r(r));
    };
    for (const auto& start : starts) {
      NelderMeadOptions opt;
      opt.max_iterations = 60;
      opt.tolerance = st.outer_tolerance;
      opt.initial_scale = std::max(0.5, (hi - lo) / 16.0);
      nelder_mead(ascent, start, opt);
    }
  }

  result.epsilon = std::max(0.0, best_v);
  result.r_star = best_r;
  result.inner_minimizer = ctx.embed_chart(best_x);
  if (best_v <= kTrivialZeroTolerance) {
    result.status = SolveStatus::TrivialZero;
  } else if (!best_converged) {
    result.status = SolveStatus::MaxIter;
  } else {
    result.status = SolveStatus::Converged;
  }
  return result;
}

ConstrainedMinimum constrained_minimum_at(const BoundProblem& problem,
                                          const Eigen::VectorXd& targets) {
  problem.validate();
  if (targets.size() != static_cast<Eigen::Index>(problem.witnesses.size())) {
    throw std::invalid_argument("target count does not match the witness count");
  }
  SolveContext ctx(problem);
  return constrained_solve(ctx, targets, nullptr).result;
}

SampledCurve constrained_pure_minimum(const BoundProblem& problem,
                                      const std::vector<double>& grid) {
  problem.validate();
  if (problem.witnesses.size() != 1) {
    throw std::invalid_argument("curve sweeps take exactly one witness");
  }
  std::vector<double> sorted = grid;
  std::sort(sorted.begin(), sorted.end());
  SolveContext ctx(problem);
  std::vector<double> xs, ys;
  evaluate_targets(ctx, sorted, xs, ys);
  return SampledCurve(std::move(xs), std::move(ys));
}

SampledCurve bound_via_convexification(const BoundProblem& problem,
                                       const std::vector<double>& grid) {
  problem.validate();
  if (problem.witnesses.size() != 1) {
    throw std::invalid_argument("convexification takes exactly one witness");
  }
  SolveContext ctx(problem);
  ConvexEnvelope env = convexified_envelope(ctx, grid);
  const double dom_lo = env.knots.front().x;
  const double dom_hi = env.knots.back().x;
  std::vector<double> xs, ys;
  for (double w : grid) {
    if (w < dom_lo - 1e-9 || w > dom_hi + 1e-9) continue;
    xs.push_back(w);
    ys.push_back(env.eval(std::clamp(w, dom_lo, dom_hi)));
  }
  return SampledCurve(std::move(xs), std::move(ys));
}

double fidelity_bound(double p, Measure measure, const OptimizerSettings& settings,
                      SearchSpaceKind space) {
  if (p < 0.0 || p > 1.0) {
    throw std::invalid_argument("fidelity must lie in [0,1]");
  }
  BoundProblem problem{
      {projector_witness(named_state(StateKind::Ghz), 0.75)},
      {0.75 - p},
      measure,
      space == SearchSpaceKind::Symmetric ? SearchSpace::symmetric()
                                          : SearchSpace::full(),
      settings};
  if (space == SearchSpaceKind::Span) {
    throw std::invalid_argument("fidelity bound runs on the full or symmetric space");
  }
  return legendre_bound(problem).epsilon;
}

double noisy_ghz_fidelity(double gamma) {
  if (gamma < 0.0 || gamma > 1.0) {
    throw std::invalid_argument("noise weight must lie in [0,1]");
  }
  return gamma + (1.0 - gamma) / 8.0;
}

void Decomposition::validate() const {
  if (weights.empty() || weights.size() != states.size()) {
    throw std::invalid_argument("weights and states must be nonempty and aligned");
  }
  double sum = 0.0;
  for (double w : weights) {
    if (w < -1e-12) throw std::invalid_argument("decomposition weights must be nonnegative");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-10) {
    throw std::invalid_argument("decomposition weights must sum to one");
  }
}

Certification certify_decomposition(const Decomposition& dec, const Matrix8& target,
                                    Measure measure) {
  dec.validate();
  Matrix8 mix = Matrix8::Zero();
  double upper = 0.0;
  for (std::size_t i = 0; i < dec.weights.size(); ++i) {
    const Amplitudes& a = dec.states[i].amplitudes();
    mix += dec.weights[i] * (a * a.adjoint());
    upper += dec.weights[i] * measure_value(measure, dec.states[i]);
  }
  Certification cert;
  cert.upper_bound = upper;
  cert.residual = (mix - target).cwiseAbs().maxCoeff();
  cert.valid = cert.residual <= kDecompositionResidualTolerance;
  return cert;
}

EquivalenceReport equivalence_report(const BoundProblem& problem,
                                     const std::vector<double>& grid) {
  problem.validate();
  if (problem.witnesses.size() != 1) {
    throw std::invalid_argument("equivalence reports take exactly one witness");
  }
  if (grid.size() < 2) {
    throw std::invalid_argument("equivalence grids need at least two points");
  }
  EquivalenceReport report;
  report.grid = grid;
  std::sort(report.grid.begin(), report.grid.end());

  SolveContext ctx(problem);
  ConvexEnvelope env = convexified_envelope(ctx, report.grid);
  const double dom_lo = env.knots.front().x;
  const double dom_hi = env.knots.back().x;

  for (double w : report.grid) {
    if (w < dom_lo - 1e-9 || w > dom_hi + 1e-9) {
      throw std::invalid_argument("equivalence grid leaves the attainable range");
    }
    BoundResult dual = legendre_bound(with_measured(problem, w));
    report.dual.push_back(dual.epsilon);
    report.hull.push_back(std::max(0.0, env.eval(std::clamp(w, dom_lo, dom_hi))));
    report.min_symmetric_weight = std::min(
        report.min_symmetric_weight, symmetric_subspace_weight(dual.inner_minimizer));
    const double gap = std::abs(report.dual.back() - report.hull.back());
    if (gap > report.max_discrepancy) {
      report.max_discrepancy = gap;
      report.argmax = w;
    }
  }
  return report;
}

}  // namespace tanglebound

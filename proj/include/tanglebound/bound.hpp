#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "tanglebound/envelope.hpp"
#include "tanglebound/qstate.hpp"

namespace tanglebound {

/// Dual values at or below this are reported as the trivial zero bound.
inline constexpr double kTrivialZeroTolerance = 1e-12;
/// A decomposition certifies its average only up to this reproduction error.
inline constexpr double kDecompositionResidualTolerance = 1e-8;
/// Constraint residual above which a target is declared unattainable.
inline constexpr double kInfeasibilityResidual = 1e-4;
/// Residual a constrained minimizer must meet to count as feasible.
inline constexpr double kFeasibilityResidual = 1e-6;

enum class SearchSpaceKind { Full, Symmetric, Span };

/// Complex subspace of the eight-dimensional state space searched by the
/// pure-state optimizers. basis() columns are orthonormal.
class SearchSpace {
public:
  static SearchSpace full();
  static SearchSpace symmetric();
  /// Two-dimensional span; the states must be orthonormal within 1e-10.
  static SearchSpace span(const PureState& a, const PureState& b);

  SearchSpaceKind kind() const { return kind_; }
  int dimension() const { return static_cast<int>(basis_.cols()); }
  const Eigen::Matrix<Complex, 8, Eigen::Dynamic>& basis() const { return basis_; }

  /// Maps a coefficient vector to the normalized state it spans.
  PureState embed(const Eigen::VectorXcd& coefficients) const;

private:
  SearchSpace(SearchSpaceKind kind, Eigen::Matrix<Complex, 8, Eigen::Dynamic> basis)
      : kind_(kind), basis_(std::move(basis)) {}

  SearchSpaceKind kind_;
  Eigen::Matrix<Complex, 8, Eigen::Dynamic> basis_;
};

struct OptimizerSettings {
  int restarts = 64;
  double r_box_lo = -20.0;
  double r_box_hi = 20.0;
  double inner_tolerance = 1e-8;
  double outer_tolerance = 1e-6;
  std::uint64_t seed = 0;
  int max_inner_iterations = 2000;

  void validate() const;
};

struct BoundProblem {
  std::vector<Observable> witnesses;
  std::vector<double> measured;
  Measure measure = Measure::Tau3;
  SearchSpace space = SearchSpace::full();
  OptimizerSettings settings;

  void validate() const;
};

enum class SolveStatus { Converged, MaxIter, TrivialZero };

struct TracePoint {
  Eigen::VectorXd r;
  double value;
};

struct BoundResult {
  double epsilon = 0.0;
  Eigen::VectorXd r_star;
  PureState inner_minimizer;
  std::vector<TracePoint> trace;
  SolveStatus status = SolveStatus::Converged;
};

struct InnerResult {
  double value = 0.0;
  PureState argmin;
  bool converged = true;
};

/// Best local minimum of sum_k r_k (w_k - <W_k>) + E across seeded restarts.
/// Deterministic for fixed settings, independent of restart scheduling.
InnerResult inner_infimum(const BoundProblem& problem, const Eigen::VectorXd& r);

/// sup over multipliers in the box of the inner infimum, clamped at zero.
/// Every traced value is dominated by the reported epsilon.
BoundResult legendre_bound(const BoundProblem& problem);

struct ConstrainedMinimum {
  double value = 0.0;
  PureState argmin;
  bool feasible = false;
  double residual = 0.0;
};

/// Minimum of the measure over pure states in the search space meeting
/// <W_k> = target_k: exact overlap elimination for a single projector-shaped
/// witness, quadratic penalty continuation with feasibility restoration
/// otherwise.
ConstrainedMinimum constrained_minimum_at(const BoundProblem& problem,
                                          const Eigen::VectorXd& targets);

/// Single-witness sweep of constrained_minimum_at; unattainable targets are
/// dropped from the curve.
SampledCurve constrained_pure_minimum(const BoundProblem& problem,
                                      const std::vector<double>& grid);

/// Constrained pure minimum, then its lower convex envelope, evaluated on the
/// feasible grid points. Sampling internally extends to the attainable
/// expectation range and refines around envelope touch points, so the result
/// does not inherit the grid's kink-resolution error.
SampledCurve bound_via_convexification(const BoundProblem& problem,
                                       const std::vector<double>& grid);

/// Bound from the GHZ fidelity p via the witness (3/4)*1 - pi_GHZ.
double fidelity_bound(double p, Measure measure, const OptimizerSettings& settings,
                      SearchSpaceKind space = SearchSpaceKind::Full);

/// GHZ fidelity of the white-noise GHZ mixture with weight gamma.
double noisy_ghz_fidelity(double gamma);

struct Decomposition {
  std::vector<double> weights;
  std::vector<PureState> states;

  void validate() const;
};

struct Certification {
  double upper_bound = 0.0;
  double residual = 0.0;
  bool valid = false;
};

/// Weighted average of the measure over the decomposition. An upper bound on
/// the mixed-state value only when the decomposition reproduces the target;
/// valid reflects residual <= kDecompositionResidualTolerance.
Certification certify_decomposition(const Decomposition& dec, const Matrix8& target,
                                    Measure measure);

struct EquivalenceReport {
  std::vector<double> grid;
  std::vector<double> dual;
  std::vector<double> hull;
  double max_discrepancy = 0.0;
  double argmax = 0.0;
  /// Least symmetric-subspace weight among the dual inner minimizers. Reported
  /// as a finding, not asserted.
  double min_symmetric_weight = 1.0;
};

/// Runs the dual solver and the convexified pure-state path over a grid of
/// measured values for a single witness and reports their worst disagreement.
EquivalenceReport equivalence_report(const BoundProblem& problem,
                                     const std::vector<double>& grid);

}  // namespace tanglebound

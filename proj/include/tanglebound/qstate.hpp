#pragma once

#include <array>
#include <complex>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace tanglebound {

using Complex = std::complex<double>;
using Amplitudes = Eigen::Matrix<Complex, 8, 1>;
using Matrix8 = Eigen::Matrix<Complex, 8, 8>;
using Matrix2 = Eigen::Matrix<Complex, 2, 2>;

/// Input states must be normalized to this accuracy; anything worse is rejected.
inline constexpr double kNormTolerance = 1e-9;
/// Observables must be Hermitian to this accuracy.
inline constexpr double kHermitianTolerance = 1e-12;
/// Unitary factors for local operations must satisfy U†U = 1 to this accuracy.
inline constexpr double kUnitaryTolerance = 1e-10;
/// Residual norm below which a symmetric projection is considered degenerate.
inline constexpr double kProjectionFloor = 1e-8;

/// Normalized three-qubit pure state. Amplitude index is 4*i + 2*j + k for
/// basis ket |ijk>. Global phase is not canonicalized.
class PureState {
public:
  /// Defaults to |000>.
  PureState() : amps_(Amplitudes::Unit(0)) {}

  explicit PureState(const Amplitudes& amplitudes);

  /// Renormalizing constructor for optimizer-internal states; rejects only
  /// vectors with vanishing norm.
  static PureState normalized(const Amplitudes& amplitudes);

  const Amplitudes& amplitudes() const { return amps_; }
  Complex amplitude(int index) const;

  /// <this|other>
  Complex overlap(const PureState& other) const {
    return amps_.dot(other.amps_);
  }

private:
  struct Unchecked {};
  PureState(const Amplitudes& amplitudes, Unchecked) : amps_(amplitudes) {}

  Amplitudes amps_;
};

enum class StateKind { Ghz, GhzMinus, W, WBar };

PureState named_state(StateKind kind);
PureState basis_state(int index);

/// Pure-state measure selector for bound computations. The squared measure is
/// never converted back: hulls of the two are different objects.
enum class Measure { Tau3, Tau3Sq };

struct TangleBreakdown {
  Complex d1;
  Complex d2;
  Complex d3;
  double tau3;
  double tau3_sq;
};

TangleBreakdown three_tangle(const PureState& state);
double tau3(const PureState& state);
double tau3_sq(const PureState& state);
double measure_value(Measure measure, const PureState& state);

/// Structure tag for observables of the form alpha*1 + sign*|phi><phi| with
/// sign = +1 or -1; expectation values reduce to alpha + sign*|<phi|psi>|^2.
struct ProjectorForm {
  double alpha;
  double sign;
  Amplitudes phi;
};

/// Structure tag for observables of the form
/// -pi_GHZ - omega |GHZ><W| - conj(omega) |W><GHZ|.
struct SkewForm {
  Complex omega;
};

/// Hermitian 8x8 observable. Construction validates Hermiticity and detects
/// projector structure, which downstream solvers exploit.
class Observable {
public:
  explicit Observable(const Matrix8& matrix, std::string label = "");

  const Matrix8& matrix() const { return matrix_; }
  const std::string& label() const { return label_; }
  const std::optional<ProjectorForm>& projector_form() const { return projector_; }
  const std::optional<SkewForm>& skew_form() const { return skew_; }

  double expectation(const PureState& state) const;

  /// Extremal eigenvalues (min, max).
  std::pair<double, double> eigenvalue_range() const;

private:
  friend Observable skew_witness(Complex omega);

  Matrix8 matrix_;
  std::string label_;
  std::optional<ProjectorForm> projector_;
  std::optional<SkewForm> skew_;
};

double expectation(const PureState& state, const Observable& obs);

/// alpha*1 - |phi><phi| with alpha in [0,1].
Observable projector_witness(const PureState& phi, double alpha);

/// -pi_GHZ - omega |GHZ><W| - conj(omega) |W><GHZ|.
Observable skew_witness(Complex omega);

PureState apply_local_unitary(const PureState& state, const Matrix2& ua,
                              const Matrix2& ub, const Matrix2& uc);

/// Relabel qubits, sending input qubit d to output position perm[d].
PureState permute_qubits(const PureState& state, const std::array<int, 3>& perm);

/// Projection onto span{|000>, W, W-bar, |111>}, renormalized. Empty when the
/// projection norm falls below kProjectionFloor.
std::optional<PureState> permutation_symmetrize(const PureState& state);

/// Squared norm of the projection onto the symmetric subspace, in [0,1].
double symmetric_subspace_weight(const PureState& state);

namespace detail {

/// tau3 of a raw amplitude vector assumed normalized; hot path for solvers.
inline double tau3_amplitudes(const Amplitudes& a) {
  const Complex d1 = a[0] * a[0] * a[7] * a[7] + a[1] * a[1] * a[6] * a[6] +
                     a[2] * a[2] * a[5] * a[5] + a[4] * a[4] * a[3] * a[3];
  const Complex d2 = a[0] * a[7] * (a[3] * a[4] + a[5] * a[2] + a[6] * a[1]) +
                     a[3] * a[4] * (a[5] * a[2] + a[6] * a[1]) +
                     a[5] * a[2] * a[6] * a[1];
  const Complex d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

/// Real quadratic form <psi|m|psi>; throws when the imaginary residue exceeds
/// 1e-9 (internal-consistency guard, not input validation).
double real_expectation(const Matrix8& m, const Amplitudes& psi);

std::optional<ProjectorForm> detect_projector_form(const Matrix8& m);

}  // namespace detail

}  // namespace tanglebound

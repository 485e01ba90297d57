#include "tanglebound/qstate.hpp"

#include <cmath>

namespace tanglebound {

namespace {

constexpr double kExpectationImagTolerance = 1e-9;

Amplitudes zero_amplitudes() { return Amplitudes::Zero(); }

}  // namespace

PureState::PureState(const Amplitudes& amplitudes) : amps_(amplitudes) {
  const double norm = amps_.norm();
  if (std::abs(norm - 1.0) > kNormTolerance) {
    throw std::invalid_argument("state norm deviates from 1 by " +
                                std::to_string(std::abs(norm - 1.0)));
  }
}

PureState PureState::normalized(const Amplitudes& amplitudes) {
  const double norm = amplitudes.norm();
  if (norm < 1e-12) {
    throw std::invalid_argument("cannot normalize a zero state vector");
  }
  return PureState(amplitudes / norm, Unchecked{});
}

Complex PureState::amplitude(int index) const {
  if (index < 0 || index > 7) {
    throw std::out_of_range("amplitude index must be in [0,7]");
  }
  return amps_[index];
}

PureState named_state(StateKind kind) {
  Amplitudes a = zero_amplitudes();
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s3 = 1.0 / std::sqrt(3.0);
  switch (kind) {
    case StateKind::Ghz:
      a[0] = s2;
      a[7] = s2;
      break;
    case StateKind::GhzMinus:
      a[0] = s2;
      a[7] = -s2;
      break;
    case StateKind::W:
      a[1] = s3;
      a[2] = s3;
      a[4] = s3;
      break;
    case StateKind::WBar:
      a[3] = s3;
      a[5] = s3;
      a[6] = s3;
      break;
  }
  return PureState(a);
}

PureState basis_state(int index) {
  if (index < 0 || index > 7) {
    throw std::out_of_range("basis index must be in [0,7]");
  }
  Amplitudes a = zero_amplitudes();
  a[index] = 1.0;
  return PureState(a);
}

TangleBreakdown three_tangle(const PureState& state) {
  const Amplitudes& a = state.amplitudes();
  TangleBreakdown out;
  out.d1 = a[0] * a[0] * a[7] * a[7] + a[1] * a[1] * a[6] * a[6] +
           a[2] * a[2] * a[5] * a[5] + a[4] * a[4] * a[3] * a[3];
  out.d2 = a[0] * a[7] * (a[3] * a[4] + a[5] * a[2] + a[6] * a[1]) +
           a[3] * a[4] * (a[5] * a[2] + a[6] * a[1]) + a[5] * a[2] * a[6] * a[1];
  out.d3 = a[0] * a[6] * a[5] * a[3] + a[7] * a[1] * a[2] * a[4];
  out.tau3 = 4.0 * std::abs(out.d1 - 2.0 * out.d2 + 4.0 * out.d3);
  out.tau3_sq = out.tau3 * out.tau3;
  return out;
}

double tau3(const PureState& state) { return detail::tau3_amplitudes(state.amplitudes()); }

double tau3_sq(const PureState& state) {
  const double t = tau3(state);
  return t * t;
}

double measure_value(Measure measure, const PureState& state) {
  return measure == Measure::Tau3 ? tau3(state) : tau3_sq(state);
}

namespace detail {

double real_expectation(const Matrix8& m, const Amplitudes& psi) {
  const Complex v = psi.dot(m * psi);
  if (std::abs(v.imag()) > kExpectationImagTolerance) {
    throw std::runtime_error("expectation value has imaginary residue " +
                             std::to_string(v.imag()));
  }
  return v.real();
}

std::optional<ProjectorForm> detect_projector_form(const Matrix8& m) {
  // alpha*1 + s|phi><phi| (s = +/-1) has spectrum {alpha + s} + 7 x {alpha}.
  Eigen::SelfAdjointEigenSolver<Matrix8> solver(m);
  if (solver.info() != Eigen::Success) return std::nullopt;
  const auto& vals = solver.eigenvalues();
  const auto degenerate_at = [&](int lo, int hi, double alpha) {
    for (int i = lo; i <= hi; ++i) {
      if (std::abs(vals[i] - alpha) > 1e-10) return false;
    }
    return true;
  };
  ProjectorForm form;
  if (degenerate_at(1, 7, vals[7]) &&
      std::abs(vals[0] - (vals[7] - 1.0)) <= 1e-10) {
    form.alpha = vals[7];
    form.sign = -1.0;
    form.phi = solver.eigenvectors().col(0);
    return form;
  }
  if (degenerate_at(0, 6, vals[0]) &&
      std::abs(vals[7] - (vals[0] + 1.0)) <= 1e-10) {
    form.alpha = vals[0];
    form.sign = 1.0;
    form.phi = solver.eigenvectors().col(7);
    return form;
  }
  return std::nullopt;
}

}  // namespace detail

Observable::Observable(const Matrix8& matrix, std::string label)
    : matrix_(matrix), label_(std::move(label)) {
  const double dev = (matrix_ - matrix_.adjoint()).cwiseAbs().maxCoeff();
  if (dev > kHermitianTolerance) {
    throw std::invalid_argument("observable is not Hermitian; deviation " +
                                std::to_string(dev));
  }
  projector_ = detail::detect_projector_form(matrix_);
}

double Observable::expectation(const PureState& state) const {
  return detail::real_expectation(matrix_, state.amplitudes());
}

std::pair<double, double> Observable::eigenvalue_range() const {
  Eigen::SelfAdjointEigenSolver<Matrix8> solver(matrix_);
  const auto& vals = solver.eigenvalues();
  return {vals[0], vals[7]};
}

double expectation(const PureState& state, const Observable& obs) {
  return obs.expectation(state);
}

Observable projector_witness(const PureState& phi, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) {
    throw std::invalid_argument("projector witness weight must lie in [0,1]");
  }
  Matrix8 m = alpha * Matrix8::Identity();
  m -= phi.amplitudes() * phi.amplitudes().adjoint();
  return Observable(m, "projector(alpha=" + std::to_string(alpha) + ")");
}

Observable skew_witness(Complex omega) {
  const Amplitudes g = named_state(StateKind::Ghz).amplitudes();
  const Amplitudes w = named_state(StateKind::W).amplitudes();
  Matrix8 m = -(g * g.adjoint());
  m -= omega * (g * w.adjoint());
  m -= std::conj(omega) * (w * g.adjoint());
  Observable obs(m, "skew(omega=" + std::to_string(omega.real()) +
                        (omega.imag() != 0.0 ? "+" + std::to_string(omega.imag()) + "i"
                                             : std::string()) +
                        ")");
  obs.skew_ = SkewForm{omega};
  return obs;
}

PureState apply_local_unitary(const PureState& state, const Matrix2& ua,
                              const Matrix2& ub, const Matrix2& uc) {
  for (const Matrix2* u : {&ua, &ub, &uc}) {
    const double dev = ((*u).adjoint() * (*u) - Matrix2::Identity()).cwiseAbs().maxCoeff();
    if (dev > kUnitaryTolerance) {
      throw std::invalid_argument("local factor is not unitary; deviation " +
                                  std::to_string(dev));
    }
  }
  const Amplitudes& in = state.amplitudes();
  Amplitudes out = zero_amplitudes();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        Complex acc = 0.0;
        for (int p = 0; p < 2; ++p)
          for (int q = 0; q < 2; ++q)
            for (int r = 0; r < 2; ++r)
              acc += ua(i, p) * ub(j, q) * uc(k, r) * in[4 * p + 2 * q + r];
        out[4 * i + 2 * j + k] = acc;
      }
  return PureState::normalized(out);
}

PureState permute_qubits(const PureState& state, const std::array<int, 3>& perm) {
  std::array<bool, 3> seen{false, false, false};
  for (int p : perm) {
    if (p < 0 || p > 2 || seen[p]) {
      throw std::invalid_argument("qubit permutation must be a permutation of {0,1,2}");
    }
    seen[p] = true;
  }
  const Amplitudes& in = state.amplitudes();
  Amplitudes out = zero_amplitudes();
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const std::array<int, 3> bits{i, j, k};
        const int src = 4 * bits[perm[0]] + 2 * bits[perm[1]] + bits[perm[2]];
        out[4 * i + 2 * j + k] = in[src];
      }
  return PureState::normalized(out);
}

std::optional<PureState> permutation_symmetrize(const PureState& state) {
  const PureState basis[4] = {basis_state(0), named_state(StateKind::W),
                              named_state(StateKind::WBar), basis_state(7)};
  Amplitudes proj = zero_amplitudes();
  for (const PureState& b : basis) {
    proj += b.overlap(state) * b.amplitudes();
  }
  if (proj.norm() < kProjectionFloor) return std::nullopt;
  return PureState::normalized(proj);
}

double symmetric_subspace_weight(const PureState& state) {
  const PureState basis[4] = {basis_state(0), named_state(StateKind::W),
                              named_state(StateKind::WBar), basis_state(7)};
  double w = 0.0;
  for (const PureState& b : basis) {
    w += std::norm(b.overlap(state));
  }
  return w;
}

}  // namespace tanglebound

#pragma once

#include <Eigen/Dense>

#include "zeeman/operators.hpp"

namespace zeeman {

/// Amplitude vector over an ordered basis.
struct QuantumState {
  Basis basis;
  Eigen::VectorXcd amplitudes;

  /// Unit vector on `s`; throws if s is not in `basis`.
  static QuantumState basis_vector(const Basis& basis, const BasisState& s);

  double norm() const { return amplitudes.norm(); }
  /// Amplitude on s, zero when s is absent from the basis.
  cplx amplitude(const BasisState& s) const;
  /// Throws std::invalid_argument unless the length matches and the norm is 1 within tol.
  void check(double tol = 1e-12) const;
};

enum class Picture { schrodinger, interaction };

struct Propagator {
  Basis basis;
  Eigen::MatrixXcd matrix;
  double time = 0.0;
  Picture picture = Picture::interaction;

  bool is_unitary(double tol = 1e-11) const;
};

class NonHermitianError : public std::invalid_argument {
 public:
  NonHermitianError();
};

/// Eigendecomposition of a Hermitian operator, reusable for many times.
class SpectralPropagator {
 public:
  explicit SpectralPropagator(const OperatorMatrix& h, Picture picture = Picture::interaction);

  /// exp(-i H t)
  Propagator at(double t) const;
  const Eigen::VectorXd& eigenvalues() const { return values_; }

 private:
  Basis basis_;
  Picture picture_;
  Eigen::VectorXd values_;
  Eigen::MatrixXcd vectors_;
};

/// exp(-i block t) via the real spectrum of the Hermitian block.
Propagator propagator_numeric(const OperatorMatrix& block, double t,
                              Picture picture = Picture::interaction);

/// Closed-form interaction-picture propagator of the N = 0 block at resonance with
/// alpha = 0 (frequencies g and sqrt(7) g).
Propagator propagator_closed_n0(double t, double g);

/// Closed-form Schroedinger-picture propagator of the N = -1 block at resonance with
/// alpha = 0: exp(i omega t) times the frequency-sqrt(2) g interaction propagator.
Propagator propagator_closed_nm1(double t, const PhysicalParams& params);

/// Schroedinger-picture propagator on an arbitrary basis. The basis is split by
/// conserved number; a complete sector at resonance uses
/// exp(-i omega N t) exp(-i V_N t), every other group exponentiates the restricted
/// Hamiltonian. Entries between different sectors are exactly zero.
Propagator propagator_on(const Basis& basis, double t, const PhysicalParams& params);

/// psi(t) = U(t) psi(0) in the Schroedinger picture.
QuantumState evolve(const QuantumState& state, double t, const PhysicalParams& params);

/// Schroedinger evolution under H0 + alpha l1z l2z + g W for a caller-supplied
/// Hermitian W on the state's basis, e.g. a coupling for a rotated field axis.
/// No conservation law is assumed.
QuantumState evolve_with_coupling(const QuantumState& state, const OperatorMatrix& coupling, double t,
                                  const PhysicalParams& params);

/// exp(+i H0 t) psi with H0 = omega a^dag a + beta (l1z + l2z): removes the free
/// evolution accumulated over time t.
QuantumState to_interaction_picture(const QuantumState& state, double t, const PhysicalParams& params);

}  // namespace zeeman

#pragma once

#include <complex>
#include <stdexcept>

#include <Eigen/Dense>

#include "zeeman/state_space.hpp"

namespace zeeman {

using cplx = std::complex<double>;

/// Energies in units with hbar = 1.
struct PhysicalParams {
  double g = 1.0;      ///< atom-field coupling
  double alpha = 0.0;  ///< magnetic dipole-dipole coefficient
  double beta = 10.0;  ///< Zeeman splitting
  double omega = 10.0; ///< cavity frequency

  /// omega == beta within 1e-12 * max(|omega|, |beta|, 1).
  bool resonant() const;
  /// Throws std::invalid_argument on g <= 0 or a non-finite field.
  void validate() const;
};

class OffResonanceError : public std::domain_error {
 public:
  OffResonanceError();
};

/// Dense matrix whose row/column i is basis[i].
struct OperatorMatrix {
  Basis basis;
  Eigen::MatrixXcd matrix;

  std::size_t dim() const { return basis.size(); }
  bool is_hermitian(double tol = 1e-13) const;
};

// Single-atom operators in the (+1, 0, -1) ordering.
Eigen::Matrix3cd ladder_plus_single();
Eigen::Matrix3cd ladder_minus_single();
Eigen::Matrix3cd level_z_single();

/// Embeds a single-atom operator acting on atom 1 or 2 into full_basis(photon_cap).
OperatorMatrix lift_atomic(const Eigen::Matrix3cd& op, int atom, int photon_cap);

OperatorMatrix ladder_plus(int atom, int photon_cap);
OperatorMatrix ladder_minus(int atom, int photon_cap);
OperatorMatrix level_z(int atom, int photon_cap);

/// Truncated field annihilation operator on full_basis(photon_cap).
OperatorMatrix annihilation(int photon_cap);

/// a^dag a + l1z + l2z on full_basis(photon_cap).
OperatorMatrix conserved_number_operator(int photon_cap);

/// omega a^dag a + beta (l1z + l2z) + g[(l1+ + l2+) a + (l1- + l2-) a^dag] + alpha l1z l2z
/// on full_basis(photon_cap), assembled from tensor products. Requires photon_cap >= 2.
/// The field operators are truncated at the cap, so |cap> cannot absorb a further photon.
OperatorMatrix hamiltonian_full(const PhysicalParams& params, int photon_cap);

enum class Frame {
  schrodinger,  ///< full Hamiltonian
  interaction,  ///< resonant interaction-picture operator: coupling + alpha l1z l2z
};

/// Matrix elements computed state by state on an arbitrary basis. Couplings leaving the
/// basis are dropped, so on full_basis(cap) with Frame::schrodinger this equals
/// hamiltonian_full.
OperatorMatrix hamiltonian_on(const Basis& basis, const PhysicalParams& params, Frame frame);

/// The unit-strength atom-cavity coupling restricted to `basis`; the default
/// operator that evolve_with_coupling accepts in place of a custom one.
OperatorMatrix coupling_operator(const Basis& basis);

/// Interaction-picture operator of sector N; throws OffResonanceError unless
/// params.resonant(). Alpha is kept on the diagonal; pass alpha = 0 for the
/// first-order approximation.
OperatorMatrix interaction_block(int n, const PhysicalParams& params);

/// Full Hamiltonian restricted to sector N; valid for any detuning.
OperatorMatrix sector_hamiltonian(int n, const PhysicalParams& params);

}  // namespace zeeman

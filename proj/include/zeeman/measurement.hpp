#pragma once

#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "zeeman/dynamics.hpp"

namespace zeeman {

/// Outcomes below this Born probability are treated as impossible and not reported.
inline constexpr double kProbabilityFloor = 1e-14;

struct MeasurementOutcome {
  int photon_count = 0;
  double probability = 0.0;
  /// Normalized post-measurement state on pair_basis(photon_count).
  QuantumState conditional_state;
};

/// Amplitudes over a row-major product of subsystems.
struct TensorState {
  std::vector<int> dims;
  Eigen::VectorXcd amplitudes;
};

struct DensityMatrix {
  std::vector<int> dims;
  Eigen::MatrixXcd rho;

  Eigen::Index dim() const { return rho.rows(); }
  double trace() const { return rho.trace().real(); }
  double purity() const { return (rho * rho).trace().real(); }
  /// Ascending eigenvalues of the Hermitian part.
  Eigen::VectorXd spectrum() const;
};

enum class Subsystem { photon = 0, atom1 = 1, atom2 = 2 };

class BasisMismatchError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Projective photon counting, one outcome per photon number in ascending order.
std::vector<MeasurementOutcome> measure_photons(const QuantumState& state);

/// Embeds a state into full_basis(max photons) as photon (x) atom1 (x) atom2.
TensorState to_tensor(const QuantumState& state);

/// Partial trace keeping the listed subsystems (strictly increasing indices).
DensityMatrix reduced_density(const TensorState& state, const std::vector<int>& keep);
DensityMatrix reduced_density(const QuantumState& state, const std::vector<Subsystem>& keep);

/// |<a|b>|^2; throws BasisMismatchError when the bases differ.
double fidelity(const QuantumState& a, const QuantumState& b);

/// <psi|rho|psi> for a normalized psi laid out like rho.
double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& psi);

/// Sum of |negative eigenvalues| of the partial transpose; subsystems [0, split) form
/// one side. Eigenvalues within 1e-12 of zero are dropped.
double negativity(const DensityMatrix& rho, std::size_t split);

/// Von Neumann entropy in nats.
double entropy(const DensityMatrix& rho);

/// Normalized two-atom state on pair_basis(photons) from (m1, m2, amplitude) terms.
QuantumState pair_state(int photons, const std::vector<std::tuple<int, int, cplx>>& terms);

/// The nine atomic amplitudes of a state on pair_basis(k), in (m1, m2) descending order.
Eigen::VectorXcd atomic_amplitudes(const QuantumState& pair);

}  // namespace zeeman

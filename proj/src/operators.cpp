#include "zeeman/operators.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <unordered_map>

#include <unsupported/Eigen/KroneckerProduct>

namespace zeeman {

namespace {

void check_atom(int atom) {
  if (atom != 1 && atom != 2) {
    throw std::invalid_argument("atom index must be 1 or 2, got " + std::to_string(atom));
  }
}

Eigen::MatrixXcd photon_annihilation(int cap) {
  // Photon index is cap - n, so a|n> = sqrt(n)|n-1> lands one row below.
  const int d = cap + 1;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 1; n <= cap; ++n) a(cap - (n - 1), cap - n) = std::sqrt(static_cast<double>(n));
  return a;
}

Eigen::MatrixXcd embed(const Eigen::MatrixXcd& photon, const Eigen::MatrixXcd& atom1,
                       const Eigen::MatrixXcd& atom2) {
  return Eigen::kroneckerProduct(photon, Eigen::kroneckerProduct(atom1, atom2).eval()).eval();
}

struct Element {
  BasisState target;
  double amplitude;
};

// (l1+ + l2+) a + (l1- + l2-) a^dag applied to one basis state, unit coupling.
std::vector<Element> coupling_action(const BasisState& s) {
  std::vector<Element> out;
  const auto raise = [](Level l) { return static_cast<Level>(value(l) + 1); };
  const auto lower = [](Level l) { return static_cast<Level>(value(l) - 1); };
  if (s.photons > 0) {
    const double amp = std::sqrt(static_cast<double>(s.photons));
    if (s.m1 != Level::up) out.push_back({{s.photons - 1, raise(s.m1), s.m2}, amp});
    if (s.m2 != Level::up) out.push_back({{s.photons - 1, s.m1, raise(s.m2)}, amp});
  }
  const double amp = std::sqrt(static_cast<double>(s.photons + 1));
  if (s.m1 != Level::down) out.push_back({{s.photons + 1, lower(s.m1), s.m2}, amp});
  if (s.m2 != Level::down) out.push_back({{s.photons + 1, s.m1, lower(s.m2)}, amp});
  return out;
}

struct StateHash {
  std::size_t operator()(const BasisState& s) const {
    return std::hash<int>{}(s.photons * 9 + atomic_index(s.m1) * 3 + atomic_index(s.m2));
  }
};

}  // namespace

bool PhysicalParams::resonant() const {
  const double scale = std::max({std::abs(omega), std::abs(beta), 1.0});
  return std::abs(omega - beta) <= 1e-12 * scale;
}

void PhysicalParams::validate() const {
  if (!std::isfinite(g) || !std::isfinite(alpha) || !std::isfinite(beta) ||
      !std::isfinite(omega)) {
    throw std::invalid_argument("physical parameters must be finite");
  }
  if (!(g > 0.0)) throw std::invalid_argument("coupling g must be positive");
}

OffResonanceError::OffResonanceError()
    : std::domain_error(
          "interaction-picture blocks require omega == beta; use hamiltonian_full or "
          "sector_hamiltonian for detuned parameters") {}

bool OperatorMatrix::is_hermitian(double tol) const {
  if (matrix.rows() != matrix.cols()) return false;
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

Eigen::Matrix3cd ladder_plus_single() {
  Eigen::Matrix3cd l = Eigen::Matrix3cd::Zero();
  l(atomic_index(Level::up), atomic_index(Level::mid)) = 1.0;
  l(atomic_index(Level::mid), atomic_index(Level::down)) = 1.0;
  return l;
}

Eigen::Matrix3cd ladder_minus_single() { return ladder_plus_single().adjoint(); }

Eigen::Matrix3cd level_z_single() {
  Eigen::Matrix3cd z = Eigen::Matrix3cd::Zero();
  for (Level l : {Level::up, Level::mid, Level::down}) {
    z(atomic_index(l), atomic_index(l)) = value(l);
  }
  return z;
}

OperatorMatrix lift_atomic(const Eigen::Matrix3cd& op, int atom, int photon_cap) {
  check_atom(atom);
  if (photon_cap < 0) throw std::invalid_argument("photon cap must be non-negative");
  const Eigen::MatrixXcd id_p = Eigen::MatrixXcd::Identity(photon_cap + 1, photon_cap + 1);
  const Eigen::MatrixXcd id_a = Eigen::MatrixXcd::Identity(3, 3);
  const Eigen::MatrixXcd o = op;
  return {full_basis(photon_cap), atom == 1 ? embed(id_p, o, id_a) : embed(id_p, id_a, o)};
}

OperatorMatrix ladder_plus(int atom, int photon_cap) {
  return lift_atomic(ladder_plus_single(), atom, photon_cap);
}

OperatorMatrix ladder_minus(int atom, int photon_cap) {
  return lift_atomic(ladder_minus_single(), atom, photon_cap);
}

OperatorMatrix level_z(int atom, int photon_cap) {
  return lift_atomic(level_z_single(), atom, photon_cap);
}

OperatorMatrix annihilation(int photon_cap) {
  if (photon_cap < 0) throw std::invalid_argument("photon cap must be non-negative");
  const Eigen::MatrixXcd id_a = Eigen::MatrixXcd::Identity(3, 3);
  return {full_basis(photon_cap), embed(photon_annihilation(photon_cap), id_a, id_a)};
}

OperatorMatrix conserved_number_operator(int photon_cap) {
  const auto a = annihilation(photon_cap).matrix;
  Eigen::MatrixXcd n = a.adjoint() * a;
  n += level_z(1, photon_cap).matrix + level_z(2, photon_cap).matrix;
  return {full_basis(photon_cap), n};
}

OperatorMatrix hamiltonian_full(const PhysicalParams& params, int photon_cap) {
  params.validate();
  if (photon_cap < 2) {
    throw std::invalid_argument("hamiltonian_full needs photon_cap >= 2, got " +
                                std::to_string(photon_cap));
  }
  const Eigen::MatrixXcd a = annihilation(photon_cap).matrix;
  const Eigen::MatrixXcd ad = a.adjoint();
  const Eigen::MatrixXcd lp = ladder_plus(1, photon_cap).matrix + ladder_plus(2, photon_cap).matrix;
  const Eigen::MatrixXcd lm = lp.adjoint();
  const Eigen::MatrixXcd z1 = level_z(1, photon_cap).matrix;
  const Eigen::MatrixXcd z2 = level_z(2, photon_cap).matrix;

  Eigen::MatrixXcd h = params.omega * (ad * a) + params.beta * (z1 + z2) +
                       params.g * (lp * a + lm * ad) + params.alpha * (z1 * z2);
  return {full_basis(photon_cap), std::move(h)};
}

OperatorMatrix hamiltonian_on(const Basis& basis, const PhysicalParams& params, Frame frame) {
  params.validate();
  std::unordered_map<BasisState, Eigen::Index, StateHash> index;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (!index.emplace(basis[i], static_cast<Eigen::Index>(i)).second) {
      throw std::invalid_argument("basis contains duplicate state " + label(basis[i]));
    }
  }
  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(d, d);
  for (Eigen::Index j = 0; j < d; ++j) {
    const BasisState& s = basis[static_cast<std::size_t>(j)];
    double diag = params.alpha * value(s.m1) * value(s.m2);
    if (frame == Frame::schrodinger) {
      diag += params.omega * s.photons + params.beta * (value(s.m1) + value(s.m2));
    }
    h(j, j) = diag;
    for (const auto& e : coupling_action(s)) {
      if (auto it = index.find(e.target); it != index.end()) {
        h(it->second, j) += params.g * e.amplitude;
      }
    }
  }
  return {basis, std::move(h)};
}

OperatorMatrix coupling_operator(const Basis& basis) {
  return hamiltonian_on(basis, PhysicalParams{1.0, 0.0, 0.0, 0.0}, Frame::interaction);
}

OperatorMatrix interaction_block(int n, const PhysicalParams& params) {
  if (!params.resonant()) throw OffResonanceError();
  return hamiltonian_on(sector_basis(n).basis, params, Frame::interaction);
}

OperatorMatrix sector_hamiltonian(int n, const PhysicalParams& params) {
  return hamiltonian_on(sector_basis(n).basis, params, Frame::schrodinger);
}

}  // namespace zeeman

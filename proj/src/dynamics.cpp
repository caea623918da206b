#include "zeeman/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace zeeman {

namespace {

constexpr cplx kI{0.0, 1.0};

bool contains(const Basis& basis, const BasisState& s) {
  return std::find(basis.begin(), basis.end(), s) != basis.end();
}

}  // namespace

QuantumState QuantumState::basis_vector(const Basis& basis, const BasisState& s) {
  const auto it = std::find(basis.begin(), basis.end(), s);
  if (it == basis.end()) throw std::invalid_argument(label(s) + " is not in the basis");
  QuantumState out{basis, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(basis.size()))};
  out.amplitudes(it - basis.begin()) = 1.0;
  return out;
}

cplx QuantumState::amplitude(const BasisState& s) const {
  const auto it = std::find(basis.begin(), basis.end(), s);
  return it == basis.end() ? cplx{} : amplitudes(it - basis.begin());
}

void QuantumState::check(double tol) const {
  if (static_cast<std::size_t>(amplitudes.size()) != basis.size()) {
    throw std::invalid_argument("state has " + std::to_string(amplitudes.size()) +
                                " amplitudes for a basis of " + std::to_string(basis.size()));
  }
  if (std::abs(norm() - 1.0) > tol) {
    throw std::invalid_argument("state norm " + std::to_string(norm()) + " is not 1");
  }
}

bool Propagator::is_unitary(double tol) const {
  const auto d = matrix.rows();
  return ((matrix.adjoint() * matrix) - Eigen::MatrixXcd::Identity(d, d)).cwiseAbs().maxCoeff() <=
         tol;
}

NonHermitianError::NonHermitianError()
    : std::invalid_argument("propagator requires a Hermitian generator") {}

SpectralPropagator::SpectralPropagator(const OperatorMatrix& h, Picture picture)
    : basis_(h.basis), picture_(picture) {
  if (!h.is_hermitian()) throw NonHermitianError();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(h.matrix);
  values_ = solver.eigenvalues();
  vectors_ = solver.eigenvectors();
}

Propagator SpectralPropagator::at(double t) const {
  if (t == 0.0) {
    const auto d = values_.size();
    return {basis_, Eigen::MatrixXcd::Identity(d, d), t, picture_};
  }
  Eigen::VectorXcd phases(values_.size());
  for (Eigen::Index k = 0; k < values_.size(); ++k) phases(k) = std::exp(-kI * values_(k) * t);
  Eigen::MatrixXcd u = vectors_ * phases.asDiagonal() * vectors_.adjoint();
  return {basis_, std::move(u), t, picture_};
}

Propagator propagator_numeric(const OperatorMatrix& block, double t, Picture picture) {
  return SpectralPropagator(block, picture).at(t);
}

Propagator propagator_closed_n0(double t, double g) {
  const double r2 = std::sqrt(2.0);
  const double r7 = std::sqrt(7.0);
  const double c1 = std::cos(g * t);
  const double s1 = std::sin(g * t);
  const double c7 = std::cos(r7 * g * t);
  const double s7 = std::sin(r7 * g * t);

  const cplx edge = -kI * std::sqrt(2.0 / 7.0) * s7;
  const cplx dress = -kI * s7 / r7;
  const cplx plus = -kI * r7 / 14.0 * (r7 * s1 + s7);  // -(i sqrt7/14)(sqrt7 sin gt + sin sqrt7 gt)
  const cplx minus = kI * r7 / 14.0 * (r7 * s1 - s7);
  const double outer = r2 / 7.0 * (c7 - 1.0);

  Eigen::MatrixXcd u(6, 6);
  // clang-format off
  u << (3.0 + 4.0 * c7) / 7.0, edge,              edge,              outer,                          2.0 * outer,          outer,
       edge,                   (c1 + c7) / 2.0,   (c7 - c1) / 2.0,   plus,                           dress,                minus,
       edge,                   (c7 - c1) / 2.0,   (c1 + c7) / 2.0,   minus,                          dress,                plus,
       outer,                  plus,              minus,             (6.0 + 7.0 * c1 + c7) / 14.0,   (c7 - 1.0) / 7.0,     (6.0 - 7.0 * c1 + c7) / 14.0,
       2.0 * outer,            dress,             dress,             (c7 - 1.0) / 7.0,               (5.0 + 2.0 * c7) / 7.0, (c7 - 1.0) / 7.0,
       outer,                  minus,             plus,              (6.0 - 7.0 * c1 + c7) / 14.0,   (c7 - 1.0) / 7.0,     (6.0 + 7.0 * c1 + c7) / 14.0;
  // clang-format on
  return {sector_basis(0).basis, std::move(u), t, Picture::interaction};
}

Propagator propagator_closed_nm1(double t, const PhysicalParams& params) {
  const double r2 = std::sqrt(2.0);
  const double c = std::cos(r2 * params.g * t);
  const cplx s = -kI * std::sin(r2 * params.g * t) / r2;
  Eigen::MatrixXcd u(3, 3);
  // clang-format off
  u << c, s,                 s,
       s, (1.0 + c) / 2.0,   (c - 1.0) / 2.0,
       s, (c - 1.0) / 2.0,   (1.0 + c) / 2.0;
  // clang-format on
  u *= std::exp(kI * params.omega * t);
  return {sector_basis(-1).basis, std::move(u), t, Picture::schrodinger};
}

Propagator propagator_on(const Basis& basis, double t, const PhysicalParams& params) {
  params.validate();
  std::map<int, std::vector<Eigen::Index>> groups;
  for (std::size_t i = 0; i < basis.size(); ++i) {
    groups[conserved_number(basis[i])].push_back(static_cast<Eigen::Index>(i));
  }

  const auto d = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& [n, members] : groups) {
    Basis local;
    local.reserve(members.size());
    for (auto i : members) local.push_back(basis[static_cast<std::size_t>(i)]);

    Eigen::MatrixXcd block;
    const Sector sector = sector_basis(n);
    const bool complete =
        sector.dim() == local.size() &&
        std::all_of(local.begin(), local.end(), [&](const auto& s) { return contains(sector.basis, s); });
    if (params.resonant() && complete) {
      const OperatorMatrix v = hamiltonian_on(local, params, Frame::interaction);
      block = std::exp(-kI * params.omega * static_cast<double>(n) * t) *
              propagator_numeric(v, t).matrix;
    } else {
      block = propagator_numeric(hamiltonian_on(local, params, Frame::schrodinger), t,
                                 Picture::schrodinger)
                  .matrix;
    }
    for (std::size_t r = 0; r < members.size(); ++r) {
      for (std::size_t c = 0; c < members.size(); ++c) {
        u(members[r], members[c]) = block(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
      }
    }
  }
  return {basis, std::move(u), t, Picture::schrodinger};
}

QuantumState evolve(const QuantumState& state, double t, const PhysicalParams& params) {
  state.check();
  const Propagator u = propagator_on(state.basis, t, params);
  return {state.basis, u.matrix * state.amplitudes};
}

QuantumState evolve_with_coupling(const QuantumState& state, const OperatorMatrix& coupling, double t,
                                  const PhysicalParams& params) {
  state.check();
  if (coupling.basis != state.basis) throw std::invalid_argument("coupling basis differs from the state basis");
  if (!coupling.is_hermitian()) throw NonHermitianError();
  OperatorMatrix h = hamiltonian_on(state.basis, params, Frame::schrodinger);
  h.matrix -= params.g * coupling_operator(state.basis).matrix;
  h.matrix += params.g * coupling.matrix;
  return {state.basis, propagator_numeric(h, t, Picture::schrodinger).matrix * state.amplitudes};
}

QuantumState to_interaction_picture(const QuantumState& state, double t, const PhysicalParams& params) {
  QuantumState out = state;
  for (std::size_t i = 0; i < state.basis.size(); ++i) {
    const BasisState& s = state.basis[i];
    const double free = params.omega * s.photons + params.beta * (value(s.m1) + value(s.m2));
    out.amplitudes(static_cast<Eigen::Index>(i)) *= std::exp(kI * free * t);
  }
  return out;
}

}  // namespace zeeman

#include "zeeman/measurement.hpp"

#include <cmath>
#include <map>
#include <numeric>

namespace zeeman {

namespace {

constexpr double kClip = 1e-12;

int product(const std::vector<int>& dims) {
  return std::accumulate(dims.begin(), dims.end(), 1, std::multiplies<>());
}

std::vector<int> unravel(int flat, const std::vector<int>& dims) {
  std::vector<int> idx(dims.size());
  for (std::size_t k = dims.size(); k-- > 0;) {
    idx[k] = flat % dims[k];
    flat /= dims[k];
  }
  return idx;
}

int ravel(const std::vector<int>& idx, const std::vector<int>& dims) {
  int flat = 0;
  for (std::size_t k = 0; k < dims.size(); ++k) flat = flat * dims[k] + idx[k];
  return flat;
}

}  // namespace

Eigen::VectorXd DensityMatrix::spectrum() const {
  const Eigen::MatrixXcd h = 0.5 * (rho + rho.adjoint());
  return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

std::vector<MeasurementOutcome> measure_photons(const QuantumState& state) {
  state.check();
  std::map<int, Eigen::VectorXcd> branches;
  for (std::size_t i = 0; i < state.basis.size(); ++i) {
    const BasisState& s = state.basis[i];
    auto [it, fresh] = branches.try_emplace(s.photons, Eigen::VectorXcd::Zero(9));
    it->second(atomic_index(s.m1) * 3 + atomic_index(s.m2)) += state.amplitudes(static_cast<Eigen::Index>(i));
  }

  std::vector<MeasurementOutcome> out;
  for (auto& [k, amps] : branches) {
    const double p = amps.squaredNorm();
    if (p < kProbabilityFloor) continue;
    out.push_back({k, p, QuantumState{pair_basis(k), amps / std::sqrt(p)}});
  }
  return out;
}

TensorState to_tensor(const QuantumState& state) {
  const int cap = max_photons(state.basis);
  TensorState t{{cap + 1, 3, 3}, Eigen::VectorXcd::Zero(9 * (cap + 1))};
  for (std::size_t i = 0; i < state.basis.size(); ++i) {
    const int j = full_index(state.basis[i], cap);
    if (j < 0) throw std::invalid_argument("negative photon number in basis");
    t.amplitudes(j) += state.amplitudes(static_cast<Eigen::Index>(i));
  }
  return t;
}

DensityMatrix reduced_density(const TensorState& state, const std::vector<int>& keep) {
  const int n = static_cast<int>(state.dims.size());
  if (keep.empty()) throw std::invalid_argument("subsystem selector is empty");
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= n || (k > 0 && keep[k] <= keep[k - 1])) {
      throw std::invalid_argument("subsystem selector must list distinct indices in [0, " +
                                  std::to_string(n) + ") in increasing order");
    }
  }
  if (product(state.dims) != state.amplitudes.size()) {
    throw std::invalid_argument("tensor dimensions do not match the amplitude count");
  }

  std::vector<int> traced;
  std::vector<int> keep_dims, traced_dims;
  for (int k = 0, j = 0; k < n; ++k) {
    if (j < static_cast<int>(keep.size()) && keep[static_cast<std::size_t>(j)] == k) {
      keep_dims.push_back(state.dims[static_cast<std::size_t>(k)]);
      ++j;
    } else {
      traced.push_back(k);
      traced_dims.push_back(state.dims[static_cast<std::size_t>(k)]);
    }
  }

  // psi reshaped to (kept, traced); rho = M M^dag.
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(product(keep_dims), product(traced_dims));
  for (int flat = 0; flat < state.amplitudes.size(); ++flat) {
    const auto idx = unravel(flat, state.dims);
    std::vector<int> ki, ti;
    for (int k : keep) ki.push_back(idx[static_cast<std::size_t>(k)]);
    for (int k : traced) ti.push_back(idx[static_cast<std::size_t>(k)]);
    m(ravel(ki, keep_dims), ravel(ti, traced_dims)) = state.amplitudes(flat);
  }
  return {keep_dims, m * m.adjoint()};
}

DensityMatrix reduced_density(const QuantumState& state, const std::vector<Subsystem>& keep) {
  std::vector<int> idx;
  idx.reserve(keep.size());
  for (Subsystem s : keep) idx.push_back(static_cast<int>(s));
  return reduced_density(to_tensor(state), idx);
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.basis != b.basis) throw BasisMismatchError("fidelity needs states on the same basis");
  return std::norm(a.amplitudes.dot(b.amplitudes));
}

double fidelity(const DensityMatrix& rho, const Eigen::VectorXcd& psi) {
  if (psi.size() != rho.dim()) throw BasisMismatchError("state and density matrix sizes differ");
  return psi.dot(rho.rho * psi).real();
}

double negativity(const DensityMatrix& rho, std::size_t split) {
  if (rho.dims.size() < 2 || split == 0 || split >= rho.dims.size()) {
    throw std::invalid_argument("negativity needs a bipartition of at least two subsystems");
  }
  const std::vector<int> left(rho.dims.begin(), rho.dims.begin() + static_cast<long>(split));
  const std::vector<int> right(rho.dims.begin() + static_cast<long>(split), rho.dims.end());
  const int da = product(left);
  const int db = product(right);
  if (da * db != rho.dim()) throw std::invalid_argument("density matrix dimensions inconsistent");

  Eigen::MatrixXcd pt(rho.dim(), rho.dim());
  for (int a = 0; a < da; ++a)
    for (int b = 0; b < db; ++b)
      for (int a2 = 0; a2 < da; ++a2)
        for (int b2 = 0; b2 < db; ++b2) pt(a * db + b, a2 * db + b2) = rho.rho(a * db + b2, a2 * db + b);

  const Eigen::VectorXd ev = DensityMatrix{rho.dims, pt}.spectrum();
  double sum = 0.0;
  for (double l : ev) {
    if (l < -kClip) sum -= l;
  }
  return sum;
}

double entropy(const DensityMatrix& rho) {
  double s = 0.0;
  for (double l : rho.spectrum()) {
    if (l > 0.0) s -= l * std::log(l);
  }
  return s;
}

QuantumState pair_state(int photons, const std::vector<std::tuple<int, int, cplx>>& terms) {
  QuantumState out{pair_basis(photons), Eigen::VectorXcd::Zero(9)};
  for (const auto& [m1, m2, amp] : terms) {
    out.amplitudes(atomic_index(level_from_int(m1)) * 3 + atomic_index(level_from_int(m2))) += amp;
  }
  const double n = out.amplitudes.norm();
  if (n == 0.0) throw std::invalid_argument("pair state has zero norm");
  out.amplitudes /= n;
  return out;
}

Eigen::VectorXcd atomic_amplitudes(const QuantumState& pair) {
  if (pair.basis.empty() || pair.basis != pair_basis(pair.basis.front().photons)) {
    throw BasisMismatchError("expected a state on a two-atom pair basis");
  }
  return pair.amplitudes;
}

}  // namespace zeeman

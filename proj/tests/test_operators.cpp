#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "zeeman/operators.hpp"

using namespace zeeman;

namespace {

PhysicalParams resonant(double g = 1.0, double alpha = 0.0) { return {g, alpha, 7.5, 7.5}; }

// Hand-typed sector matrix of the resonant interaction operator for n >= 2.
Eigen::MatrixXd printed_block(int n, double g, double a) {
  const double p2 = g * std::sqrt(n + 2.0), p1 = g * std::sqrt(n + 1.0), p0 = g * std::sqrt(n * 1.0),
               m1 = g * std::sqrt(n - 1.0);
  Eigen::MatrixXd h(9, 9);
  // clang-format off
  h << a,  p2, p2, 0,  0,  0,  0,  0,  0,
       p2, 0,  0,  p1, p1, 0,  0,  0,  0,
       p2, 0,  0,  0,  p1, p1, 0,  0,  0,
       0,  p1, 0,  -a, 0,  0,  p0, 0,  0,
       0,  p1, p1, 0,  0,  0,  p0, p0, 0,
       0,  0,  p1, 0,  0,  -a, 0,  p0, 0,
       0,  0,  0,  p0, p0, 0,  0,  0,  m1,
       0,  0,  0,  0,  p0, p0, 0,  0,  m1,
       0,  0,  0,  0,  0,  0,  m1, m1, a;
  // clang-format on
  return h;
}

double max_abs(const Eigen::MatrixXcd& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

Eigen::VectorXd sorted_eigs(const Eigen::MatrixXcd& m) {
  Eigen::VectorXd e = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd>(m).eigenvalues();
  std::sort(e.data(), e.data() + e.size());
  return e;
}

}  // namespace

TEST_CASE("single-atom raising operator") {
  const Eigen::Matrix3cd lp = ladder_plus_single();
  Eigen::Vector3cd down = Eigen::Vector3cd::Zero();
  down(atomic_index(Level::down)) = 1.0;
  const Eigen::Vector3cd raised = lp * down;
  CHECK(std::abs(raised(atomic_index(Level::mid)) - 1.0) == 0.0);
  CHECK(raised.norm() == doctest::Approx(1.0));

  Eigen::Vector3cd up = Eigen::Vector3cd::Zero();
  up(atomic_index(Level::up)) = 1.0;
  CHECK((lp * up).norm() == 0.0);
  CHECK(max_abs(ladder_minus_single() - lp.adjoint()) == 0.0);
  CHECK((lp.cwiseAbs().array() > 0).count() == 2);
}

TEST_CASE("lifted operators and index validation") {
  CHECK_THROWS_AS(ladder_plus(0, 2), std::invalid_argument);
  CHECK_THROWS_AS(ladder_plus(3, 2), std::invalid_argument);
  const OperatorMatrix l1 = ladder_plus(1, 1);
  CHECK(l1.dim() == 18);
  const Basis b = full_basis(1);
  // l1+ |1>(-1,0) = |1>(0,0)
  const int from = full_index({1, Level::down, Level::mid}, 1);
  const int to = full_index({1, Level::mid, Level::mid}, 1);
  CHECK(std::abs(l1.matrix(to, from) - 1.0) == 0.0);
  CHECK(max_abs(ladder_minus(2, 1).matrix - ladder_plus(2, 1).matrix.adjoint()) == 0.0);
}

TEST_CASE("full Hamiltonian single matrix element") {
  const PhysicalParams p{0.37, 0.0, 3.0, 3.0};
  const OperatorMatrix h = hamiltonian_full(p, 3);
  const int row = full_index({0, Level::mid, Level::down}, 3);
  const int col = full_index({1, Level::down, Level::down}, 3);
  CHECK(h.matrix(row, col).real() == doctest::Approx(0.37 * 1.0).epsilon(1e-15));
  CHECK(h.matrix(row, col).imag() == 0.0);
}

TEST_CASE("full Hamiltonian commutes with the conserved number") {
  for (const PhysicalParams p : {PhysicalParams{1.0, 0.0, 5.0, 5.0}, PhysicalParams{0.8, 0.03, 4.0, 6.5}}) {
    for (int cap : {2, 3, 6}) {
      const OperatorMatrix h = hamiltonian_full(p, cap);
      const OperatorMatrix n = conserved_number_operator(cap);
      CHECK(h.is_hermitian(1e-13));
      CHECK(max_abs(h.matrix * n.matrix - n.matrix * h.matrix) < 1e-13);
    }
  }
}

TEST_CASE("zero coupling leaves a diagonal Hamiltonian") {
  const PhysicalParams p{1.0, 0.25, 2.0, 3.0};
  PhysicalParams none = p;
  none.g = 1e-300;  // g must stay positive
  const OperatorMatrix h = hamiltonian_full(none, 2);
  for (Eigen::Index i = 0; i < h.matrix.rows(); ++i) {
    const BasisState& s = h.basis[static_cast<std::size_t>(i)];
    const double expected = p.omega * s.photons + p.beta * (value(s.m1) + value(s.m2)) +
                            p.alpha * value(s.m1) * value(s.m2);
    CHECK(h.matrix(i, i).real() == doctest::Approx(expected).epsilon(1e-15));
    for (Eigen::Index j = 0; j < h.matrix.cols(); ++j)
      if (i != j) CHECK(std::abs(h.matrix(i, j)) < 1e-299);
  }
}

TEST_CASE("photon cap below two is rejected") {
  CHECK_THROWS_AS(hamiltonian_full(resonant(), 1), std::invalid_argument);
}

TEST_CASE("state-by-state construction matches the tensor-product Hamiltonian") {
  const PhysicalParams p{1.3, -0.07, 2.0, 2.4};
  for (int cap : {2, 4}) {
    const OperatorMatrix a = hamiltonian_full(p, cap);
    const OperatorMatrix b = hamiltonian_on(full_basis(cap), p, Frame::schrodinger);
    CHECK(max_abs(a.matrix - b.matrix) < 1e-14);
  }
}

TEST_CASE("interaction block reproduces the printed 9x9 matrix") {
  for (int n : {2, 3, 5}) {
    for (double a : {0.0, 0.04}) {
      const OperatorMatrix h = interaction_block(n, resonant(0.9, a));
      CHECK(h.dim() == 9);
      CHECK(max_abs(h.matrix - printed_block(n, 0.9, a).cast<cplx>()) < 1e-15);
    }
  }
}

TEST_CASE("interaction block N = 0 without alpha is the 6x6 reduction") {
  const double g = 1.7, r2 = g * std::sqrt(2.0);
  Eigen::MatrixXd expected(6, 6);
  // clang-format off
  expected << 0,  r2, r2, 0, 0, 0,
              r2, 0,  0,  g, g, 0,
              r2, 0,  0,  0, g, g,
              0,  g,  0,  0, 0, 0,
              0,  g,  g,  0, 0, 0,
              0,  0,  g,  0, 0, 0;
  // clang-format on
  const OperatorMatrix h = interaction_block(0, resonant(g));
  CHECK(max_abs(h.matrix - expected.cast<cplx>()) < 1e-15);
  // Also the principal truncation of the generic pattern.
  CHECK(max_abs(interaction_block(1, resonant(g)).matrix - printed_block(1, g, 0).topLeftCorner(8, 8).cast<cplx>()) < 1e-15);
}

TEST_CASE("interaction blocks of the two lowest sectors") {
  const double g = 0.6;
  Eigen::MatrixXd three(3, 3);
  three << 0, g, g, g, 0, 0, g, 0, 0;
  CHECK(max_abs(interaction_block(-1, resonant(g)).matrix - three.cast<cplx>()) < 1e-15);

  const OperatorMatrix one = interaction_block(-2, resonant(g, 0.125));
  REQUIRE(one.dim() == 1);
  CHECK(one.matrix(0, 0) == cplx{0.125, 0.0});
}

TEST_CASE("detuned parameters are rejected by interaction blocks") {
  CHECK_THROWS_AS(interaction_block(0, PhysicalParams{1.0, 0.0, 5.0, 5.1}), OffResonanceError);
  CHECK_NOTHROW(interaction_block(0, PhysicalParams{1.0, 0.0, 5.0, 5.0 * (1 + 1e-13)}));
  CHECK_NOTHROW(sector_hamiltonian(0, PhysicalParams{1.0, 0.0, 5.0, 5.1}));
}

TEST_CASE("spectra of the N = 0 and N = -1 blocks") {
  const double g = 1.25;
  const OperatorMatrix h0 = interaction_block(0, resonant(g));
  const Eigen::VectorXd e0 = sorted_eigs(h0.matrix);
  const double r7 = std::sqrt(7.0) * g;
  const double expected0[] = {-r7, -g, 0.0, 0.0, g, r7};
  for (int k = 0; k < 6; ++k) CHECK(e0(k) == doctest::Approx(expected0[k]).epsilon(1e-12).scale(g));
  CHECK(h0.matrix.squaredNorm() == doctest::Approx(16.0 * g * g));
  CHECK(std::abs(h0.matrix.trace()) == 0.0);

  const Eigen::VectorXd e1 = sorted_eigs(interaction_block(-1, resonant(g)).matrix);
  const double r2 = std::sqrt(2.0) * g;
  CHECK(e1(0) == doctest::Approx(-r2).epsilon(1e-12));
  CHECK(std::abs(e1(1)) < 1e-12);
  CHECK(e1(2) == doctest::Approx(r2).epsilon(1e-12));
}

TEST_CASE("full Hamiltonian is block diagonal over sectors") {
  const PhysicalParams p = resonant(1.1, 0.02);
  const int cap = 5;
  const OperatorMatrix h = hamiltonian_full(p, cap);
  const Basis full = full_basis(cap);
  for (Eigen::Index i = 0; i < h.matrix.rows(); ++i)
    for (Eigen::Index j = 0; j < h.matrix.cols(); ++j)
      if (conserved_number(full[static_cast<std::size_t>(i)]) != conserved_number(full[static_cast<std::size_t>(j)]))
        CHECK(h.matrix(i, j) == cplx{});

  for (int n = -2; n <= cap - 2; ++n) {
    const Sector s = sector_basis(n);
    Eigen::MatrixXcd sub(s.dim(), s.dim());
    for (std::size_t r = 0; r < s.dim(); ++r)
      for (std::size_t c = 0; c < s.dim(); ++c)
        sub(r, c) = h.matrix(full_index(s.basis[r], cap), full_index(s.basis[c], cap));
    const Eigen::MatrixXcd expected =
        interaction_block(n, p).matrix + p.omega * n * Eigen::MatrixXcd::Identity(s.dim(), s.dim());
    CHECK(max_abs(sub - expected) < 1e-13);
  }
}

TEST_CASE("parameter validation") {
  CHECK_THROWS_AS((PhysicalParams{0.0, 0.0, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK_THROWS_AS((PhysicalParams{1.0, NAN, 1.0, 1.0}.validate()), std::invalid_argument);
  CHECK((PhysicalParams{1.0, 0.0, 0.0, 0.0}.resonant()));
  CHECK_FALSE((PhysicalParams{1.0, 0.0, 0.0, 1e-11}.resonant()));
}

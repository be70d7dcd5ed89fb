#include <gtest/gtest.h>

#include <Eigen/Dense>
#include <random>

#include "biotfe/assembly.hpp"
#include "biotfe/solver.hpp"
#include "biotfe/stokes.hpp"

using namespace biotfe;

namespace {

Eigen::MatrixXd random_spd(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = u(rng);
  return g * g.transpose() + n * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd dense_velocity_matrix(const StokesBlocks& b) {
  const Index nb = b.layout.n_b, nl = b.layout.n_l;
  Eigen::MatrixXd a(nb + nl, nb + nl);
  a.topLeftCorner(nb, nb) = Eigen::MatrixXd(b.a_bb);
  a.topRightCorner(nb, nl) = Eigen::MatrixXd(b.a_bl);
  a.bottomLeftCorner(nl, nb) = Eigen::MatrixXd(b.a_bl).transpose();
  a.bottomRightCorner(nl, nl) = Eigen::MatrixXd(b.a_ll);
  return a;
}

Eigen::MatrixXd dense_divergence(const StokesBlocks& b) {
  Eigen::MatrixXd d(b.layout.n_p, b.layout.n_b + b.layout.n_l);
  d.leftCols(b.layout.n_b) = Eigen::MatrixXd(b.g_b).transpose();
  d.rightCols(b.layout.n_l) = Eigen::MatrixXd(b.g_l).transpose();
  return d;
}

}  // namespace

TEST(DirectSolver, SmallSystems) {
  const Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(4, 1.0, 4.0);
  const Eigen::VectorXd x = solve_direct(sparse_from_dense(Eigen::MatrixXd::Identity(4, 4)), b);
  EXPECT_LT((x - b).norm(), 1e-15);

  Eigen::MatrixXd saddle(2, 2);
  saddle << 2.0, 1.0, 1.0, 0.0;
  const Eigen::VectorXd y = solve_direct(sparse_from_dense(saddle), Eigen::Vector2d(3.0, 1.0));
  EXPECT_NEAR(y[0], 1.0, 1e-14);
  EXPECT_NEAR(y[1], 1.0, 1e-14);
}

TEST(DirectSolver, MatchesDenseOnRandomSpd) {
  const Eigen::MatrixXd a = random_spd(50, 3);
  const Eigen::VectorXd b = Eigen::VectorXd::Random(50);
  DirectSolver solver(sparse_from_dense(a));
  const Eigen::VectorXd x = solver.solve(b);
  const Eigen::VectorXd ref = a.ldlt().solve(b);
  EXPECT_LT((x - ref).norm() / ref.norm(), 1e-10);
  EXPECT_LT(solver.last_residual(), 1e-12);
  EXPECT_EQ(solver.size(), 50);
}

TEST(DirectSolver, SymmetricModeReadsLowerTriangle) {
  const Eigen::MatrixXd a = random_spd(12, 9);
  Eigen::MatrixXd garbled = a;
  garbled.triangularView<Eigen::StrictlyUpper>().setConstant(7.0);
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(12);
  const Eigen::VectorXd x = solve_direct(sparse_from_dense(garbled), b);
  EXPECT_LT((a * x - b).norm(), 1e-12);

  SolveOptions general;
  general.symmetric = false;
  const Eigen::VectorXd z = solve_direct(sparse_from_dense(garbled), b, general);
  EXPECT_LT((garbled * z - b).norm(), 1e-12);
  EXPECT_GT((z - x).norm(), 1e-3);
}

TEST(DirectSolver, Failures) {
  Eigen::MatrixXd empty_row = Eigen::MatrixXd::Identity(3, 3);
  empty_row(1, 1) = 0.0;
  EXPECT_THROW(DirectSolver{sparse_from_dense(empty_row)}, SolverError);

  Eigen::MatrixXd singular(2, 2);
  singular << 1.0, 1.0, 1.0, 1.0;
  EXPECT_THROW(DirectSolver{sparse_from_dense(singular)}, SolverError);
  EXPECT_THROW(DirectSolver{SparseMatrix(2, 3)}, SolverError);
}

TEST(Eigensolver, ScaledPencil) {
  const Eigen::MatrixXd b = random_spd(30, 5);
  const SparseMatrix bs = sparse_from_dense(b);
  const SparseMatrix as = sparse_from_dense(2.0 * b);
  EXPECT_NEAR(eig_extreme(as, bs, Extreme::max).value, 2.0, 1e-8);
  EXPECT_NEAR(eig_extreme(as, bs, Extreme::min).value, 2.0, 1e-8);

  const SparseMatrix d = sparse_diagonal(Eigen::Vector3d(1.0, 5.0, 3.0));
  const SparseMatrix id = sparse_from_dense(Eigen::MatrixXd::Identity(3, 3));
  const auto hi = eig_extreme(d, id, Extreme::max);
  EXPECT_TRUE(hi.converged);
  EXPECT_NEAR(hi.value, 5.0, 1e-10);
  EXPECT_NEAR(eig_extreme(d, id, Extreme::min).value, 1.0, 1e-10);
  EXPECT_NEAR(eig_extreme(sparse_diagonal(Eigen::Vector3d(-3.0, 1.0, 2.0)), id, Extreme::min).value, -3.0, 1e-10);
  EXPECT_THROW(eig_extreme(d, SparseMatrix(2, 2), Extreme::max), SolverError);
}

TEST(Eigensolver, MatchesDenseGeneralizedProblem) {
  const Eigen::MatrixXd a = random_spd(40, 11);
  Eigen::MatrixXd b = random_spd(40, 12);
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(a, b, Eigen::EigenvaluesOnly);
  const auto& ev = ges.eigenvalues();
  const auto hi = eig_extreme(sparse_from_dense(a), sparse_from_dense(b), Extreme::max, {500, 1e-12, 1});
  const auto lo = eig_extreme(sparse_from_dense(a), sparse_from_dense(b), Extreme::min, {500, 1e-12, 1});
  EXPECT_NEAR(hi.value, ev[39], 1e-8 * ev[39]);
  EXPECT_NEAR(lo.value, ev[0], 1e-8 * ev[0]);
}

template <int Dim>
void expect_local_bubble_bound(const Mesh<Dim>& mesh) {
  using Basis = LocalDisplacementBasis<Dim>;
  const auto rule = quadrature<Dim>(default_quadrature_degree<Dim>());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto k = local_elasticity_matrix(cell_geometry(mesh, c), ElasticCoefficients{1.0, 10.0}, rule);
    Eigen::MatrixXd ab(Dim + 1, Dim + 1);
    for (int i = 0; i <= Dim; ++i)
      for (int j = 0; j <= Dim; ++j) ab(i, j) = k(Basis::bubble(i), Basis::bubble(j));
    const Eigen::MatrixXd d = Eigen::MatrixXd(ab.diagonal().asDiagonal());
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(ab, d, Eigen::EigenvaluesOnly);
    EXPECT_LE(ges.eigenvalues().maxCoeff(), Dim + 1 + 1e-10);
    EXPECT_GT(ges.eigenvalues().minCoeff(), 0.0);
  }
}

TEST(Eigensolver, LocalBubbleBlockBound) {
  expect_local_bubble_bound(perturb_interior_vertices(build_structured_unit_square(4), 0.3, 2));
  expect_local_bubble_bound(build_structured_unit_cube(2));
}

TEST(InfSup, DegenerateCases) {
  const SparseMatrix m = sparse_diagonal(Eigen::VectorXd::Ones(1));
  const auto one = infsup_estimate(SparseMatrix(1, 2), sparse_from_dense(Eigen::MatrixXd::Identity(2, 2)), m);
  EXPECT_TRUE(one.degenerate);
  EXPECT_EQ(one.kernel_dimension, 0);
  const auto none = infsup_estimate(SparseMatrix(3, 0), SparseMatrix(0, 0), sparse_diagonal(Eigen::VectorXd::Ones(3)));
  EXPECT_TRUE(none.degenerate);
  EXPECT_EQ(none.kernel_dimension, 2);
  EXPECT_THROW(infsup_estimate(SparseMatrix(3, 2), SparseMatrix(3, 3), m), SolverError);
}

TEST(InfSup, MatchesDenseOracle) {
  const auto mesh = build_structured_unit_square(4);
  for (bool bubbles : {true, false}) {
    const auto blocks = assemble_stokes_blocks<2>(mesh, 1.0, nullptr, bubbles);
    const Eigen::MatrixXd a = dense_velocity_matrix(*blocks);
    const Eigen::MatrixXd div = dense_divergence(*blocks);
    const Eigen::MatrixXd s = div * a.ldlt().solve(div.transpose());
    const Eigen::MatrixXd m = blocks->mean_weights.asDiagonal();
    Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> ges(s, m, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = ges.eigenvalues();
    const double top = ev.maxCoeff();
    Index zeros = 0;
    while (ev[zeros] <= 1e-10 * top) ++zeros;

    const auto est = infsup_estimate(sparse_from_dense(div), sparse_from_dense(a), sparse_diagonal(blocks->mean_weights));
    EXPECT_FALSE(est.degenerate);
    // the constant pressure is always in the kernel of B A^{-1} B^T
    EXPECT_EQ(est.kernel_dimension, zeros - 1);
    EXPECT_NEAR(est.gamma_nonzero, std::sqrt(ev[zeros]), 1e-8);
    if (bubbles) {
      EXPECT_EQ(est.kernel_dimension, 0);
      EXPECT_NEAR(est.gamma, est.gamma_nonzero, 1e-14);
      EXPECT_GT(est.gamma, 0.05);
    } else {
      EXPECT_GT(est.kernel_dimension, 0);
      EXPECT_EQ(est.gamma, 0.0);
    }
  }
}

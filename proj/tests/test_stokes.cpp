#include <gtest/gtest.h>

#include <Eigen/Dense>

#include "biotfe/stokes.hpp"
#include "biotfe/verify/cases.hpp"

using namespace biotfe;

namespace {

std::shared_ptr<const StokesBlocks> trig_blocks(Index n, bool bubbles = true) {
  const auto cs = verify::stokes_trig_case(1.0);
  const auto mesh = perturb_interior_vertices(build_structured_unit_square(n), 0.2, 5);
  return assemble_stokes_blocks<2>(mesh, cs.viscosity, cs.force, bubbles, cs.u);
}

}  // namespace

TEST(StokesAssembly, BlockStructure) {
  const auto blocks = trig_blocks(4);
  const auto as = assemble_stokes(blocks, StokesVariant::enriched);
  const auto asd = assemble_stokes(blocks, StokesVariant::diagonal);
  const auto& lay = blocks->layout;
  EXPECT_EQ(lay.n_w, 0);
  EXPECT_EQ(as.size(), lay.n_b + lay.n_l + lay.n_p + 1);
  EXPECT_TRUE(is_symmetric(as.matrix, 1e-12));
  EXPECT_TRUE(is_symmetric(asd.matrix, 1e-12));
  const SparseMatrix diff = as.matrix - asd.matrix;
  for (int k = 0; k < diff.outerSize(); ++k)
    for (SparseMatrix::InnerIterator it(diff, k); it; ++it) {
      if (it.value() == 0.0) continue;
      EXPECT_LT(it.row(), lay.n_b);
      EXPECT_LT(it.col(), lay.n_b);
    }
  EXPECT_EQ(as.rhs, asd.rhs);
  EXPECT_NEAR(blocks->mean_weights.sum(), 1.0, 1e-14);

  const auto bare = assemble_stokes(blocks, StokesVariant::enriched, false);
  EXPECT_EQ(bare.size(), as.size() - 1);
  Eigen::VectorXd constant = Eigen::VectorXd::Zero(bare.size());
  constant.segment(bare.offset_p(), lay.n_p).setOnes();
  EXPECT_LT((bare.matrix * constant).norm(), 1e-13);
  EXPECT_THROW(solve_stokes(bare), SolverError);
  EXPECT_THROW(assemble_stokes_blocks<2>(build_structured_unit_square(2), 0.0, nullptr), std::invalid_argument);
}

TEST(StokesSolve, MatchesDenseBorderedSolve) {
  for (auto variant : {StokesVariant::enriched, StokesVariant::diagonal}) {
    const auto sys = assemble_stokes(trig_blocks(4), variant);
    const Eigen::MatrixXd dense(sys.matrix);
    const Eigen::VectorXd ref = dense.fullPivLu().solve(sys.rhs);
    const Eigen::VectorXd x = solve_stokes(sys);
    EXPECT_LT((x - ref).norm(), 1e-10 * ref.norm());
    const Eigen::VectorXd p = x.segment(sys.offset_p(), sys.layout().n_p);
    EXPECT_NEAR(sys.blocks->mean_weights.dot(p), 0.0, 1e-13);
  }
}

TEST(StokesSolve, CondensedMatchesMonolithic) {
  const auto blocks = trig_blocks(8);
  const auto asd = assemble_stokes(blocks, StokesVariant::diagonal);
  const auto cond = condense_stokes(asd);
  const auto& lay = blocks->layout;
  EXPECT_EQ(cond.matrix().rows(), lay.n_l + lay.n_p + 1);
  EXPECT_TRUE(is_symmetric(cond.matrix(), 1e-12));
  const Eigen::VectorXd full = solve_stokes(asd);
  const Eigen::VectorXd reduced = solve_stokes_condensed(asd);
  EXPECT_LT((full - reduced).norm(), 1e-10 * full.norm());
  EXPECT_THROW(condense_stokes(assemble_stokes(blocks, StokesVariant::enriched)), std::invalid_argument);
}

TEST(StokesSolve, ReproducesLinearFlow) {
  // u = (x, -y), p = 0 solves Stokes with f = 0 and is in the discrete space.
  const VectorField<2> lin = [](const Vec<2>& z) { return Vec<2>(z[0], -z[1]); };
  const auto mesh = perturb_interior_vertices(build_structured_unit_square(6), 0.3, 9);
  const auto blocks = assemble_stokes_blocks<2>(mesh, 1.0, nullptr, true, lin);
  EXPECT_NEAR(blocks->load_p.sum(), 0.0, 1e-14);
  for (auto variant : {StokesVariant::enriched, StokesVariant::diagonal}) {
    const auto sys = assemble_stokes(blocks, variant);
    const Eigen::VectorXd x = solve_stokes(sys);
    const auto& lay = blocks->layout;
    EXPECT_LT(x.head(lay.n_b).norm(), 1e-12);
    const Eigen::VectorXd expected = restrict_linear(lay, interpolate_p1<2>(lin, mesh));
    EXPECT_LT((x.segment(lay.n_b, lay.n_l) - expected).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_LT(x.segment(sys.offset_p(), lay.n_p).cwiseAbs().maxCoeff(), 1e-11);
  }
}

TEST(StokesSolve, MeanConstrainedErrors) {
  const auto sys = assemble_stokes(trig_blocks(2), StokesVariant::enriched);
  EXPECT_THROW(solve_mean_constrained(sys.matrix, sys.rhs.head(3), sys.offset_p(), sys.layout().n_p), SolverError);
  // constraint row touching velocity dofs is rejected
  EXPECT_THROW(solve_mean_constrained(sys.matrix, sys.rhs, 0, sys.layout().n_p), SolverError);
}

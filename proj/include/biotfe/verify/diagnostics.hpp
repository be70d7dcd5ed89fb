// Spectral equivalence of a and a^D, the discrete inf-sup constant and the
// locking rank test.

#ifndef BIOTFE_VERIFY_DIAGNOSTICS_HPP
#define BIOTFE_VERIFY_DIAGNOSTICS_HPP

#include <algorithm>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "biotfe/assembly.hpp"
#include "biotfe/solver.hpp"
#include "biotfe/stokes.hpp"

namespace biotfe::verify {

struct CellSpectrum {
  Index cell = 0;
  double theta_min = 0.0;
  double theta_max = 0.0;
  bool converged = true;
};

struct SpectralReport {
  std::vector<CellSpectrum> cells;
  double theta_min = std::numeric_limits<double>::infinity();
  double theta_max = 0.0;
  /// Extreme eigenvalues of A^D v = theta A v on the enriched displacement space.
  EigenEstimate global_min;
  EigenEstimate global_max;
  Index unconverged_cells = 0;

  double eta() const { return global_max.value; }
};

/// Local: a_{b,T} against its diagonal d~_{b,T} on the d+1 bubbles of T.
/// Global: A^D against A on the free enriched displacement dofs.
template <int Dim>
SpectralReport spectral_equivalence_report(const Mesh<Dim>& mesh, ElasticCoefficients coeff,
                                           const DofLayout& layout, bool global = true, EigenOptions eig = {}) {
  using Basis = LocalDisplacementBasis<Dim>;
  SpectralReport rep;
  const auto rule = quadrature<Dim>(default_quadrature_degree<Dim>());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto k = local_elasticity_matrix(geom, coeff, rule);
    Eigen::Matrix<double, Dim + 1, Dim + 1> ab;
    for (int i = 0; i < Dim + 1; ++i)
      for (int j = 0; j < Dim + 1; ++j) ab(i, j) = k(Basis::bubble(i), Basis::bubble(j));
    const Eigen::Matrix<double, Dim + 1, 1> s = ab.diagonal().cwiseSqrt().cwiseInverse();
    const Eigen::Matrix<double, Dim + 1, Dim + 1> scaled = s.asDiagonal() * ab * s.asDiagonal();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix<double, Dim + 1, Dim + 1>> es(scaled);
    CellSpectrum cs;
    cs.cell = c;
    cs.converged = es.info() == Eigen::Success && ab.diagonal().minCoeff() > 0.0;
    cs.theta_min = es.eigenvalues()[0];
    cs.theta_max = es.eigenvalues()[Dim];
    if (!cs.converged) ++rep.unconverged_cells;
    rep.theta_min = std::min(rep.theta_min, cs.theta_min);
    rep.theta_max = std::max(rep.theta_max, cs.theta_max);
    rep.cells.push_back(cs);
  }
  if (global && layout.n_b > 0) {
    const auto el = assemble_elasticity(mesh, layout, coeff);
    const SparseMatrix d = assemble_diagonal_bubble(mesh, layout, coeff);
    const Index n = layout.n_b + layout.n_l;
    const SparseMatrix a = compose_blocks(n, n,
                                          {{&el.a_bb, 0, 0},
                                           {&el.a_bl, 0, layout.n_b},
                                           {&el.a_bl, layout.n_b, 0, 1.0, true},
                                           {&el.a_ll, layout.n_b, layout.n_b}});
    const SparseMatrix ad = compose_blocks(n, n,
                                           {{&d, 0, 0},
                                            {&el.a_bl, 0, layout.n_b},
                                            {&el.a_bl, layout.n_b, 0, 1.0, true},
                                            {&el.a_ll, layout.n_b, layout.n_b}});
    rep.global_min = eig_extreme(ad, a, Extreme::min, eig);
    rep.global_max = eig_extreme(ad, a, Extreme::max, eig);
  }
  return rep;
}

/// Inf-sup constant of the Stokes pair (enriched when the blocks carry
/// bubbles, plain P1/P0 otherwise) with the a^S velocity norm.
inline InfSupEstimate stokes_infsup(const StokesBlocks& b) {
  const auto& lay = b.layout;
  const Index nv = lay.n_b + lay.n_l;
  const SparseMatrix a = compose_blocks(nv, nv,
                                        {{&b.a_bb, 0, 0},
                                         {&b.a_bl, 0, lay.n_b},
                                         {&b.a_bl, lay.n_b, 0, 1.0, true},
                                         {&b.a_ll, lay.n_b, lay.n_b}});
  const SparseMatrix div = compose_blocks(lay.n_p, nv, {{&b.g_b, 0, 0, 1.0, true}, {&b.g_l, 0, lay.n_b, 1.0, true}});
  return infsup_estimate(div, a, sparse_diagonal(b.mean_weights));
}

struct RankReport {
  Index rows = 0;  // dim Q_h
  Index cols = 0;  // dim of the velocity space
  Index rank = 0;
  double smallest_kept = 0.0;    // smallest singular value counted in the rank
  double largest_dropped = 0.0;  // largest singular value treated as zero
};

/// Numerical rank of a dense matrix by SVD, threshold rel_tol * sigma_max.
inline RankReport numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-10) {
  RankReport r;
  r.rows = m.rows();
  r.cols = m.cols();
  if (m.size() == 0) return r;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  const double tol = rel_tol * s[0];
  for (Index i = 0; i < s.size(); ++i) {
    if (s[i] > tol) {
      ++r.rank;
      r.smallest_kept = s[i];
    } else {
      r.largest_dropped = std::max(r.largest_dropped, s[i]);
    }
  }
  return r;
}

/// Rank of the discrete divergence (q, div v) on the free velocity dofs;
/// with bubbles the columns cover V_{h,1} + V_b, otherwise V_{h,1} only.
template <int Dim>
RankReport divergence_rank(const Mesh<Dim>& mesh, bool bubbles) {
  const auto blocks = assemble_stokes_blocks<Dim>(mesh, 1.0, nullptr, bubbles);
  const auto& lay = blocks->layout;
  const SparseMatrix div = compose_blocks(lay.n_p, lay.n_b + lay.n_l,
                                          {{&blocks->g_b, 0, 0, 1.0, true}, {&blocks->g_l, 0, lay.n_b, 1.0, true}});
  return numerical_rank(Eigen::MatrixXd(div));
}

}  // namespace biotfe::verify

#endif  // BIOTFE_VERIFY_DIAGNOSTICS_HPP

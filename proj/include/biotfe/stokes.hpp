// Stabilized P1-P0 Stokes: enriched system A_S, diagonal-bubble A_S^D and
// its condensation.

#ifndef BIOTFE_STOKES_HPP
#define BIOTFE_STOKES_HPP

#include <memory>
#include <stdexcept>

#include "biotfe/biot_system.hpp"
#include "biotfe/solver.hpp"

namespace biotfe {

enum class StokesVariant { enriched, diagonal };

struct StokesBlocks {
  DofLayout layout;  // no flux block
  SparseMatrix a_bb, a_bl, a_ll, d_bb;
  SparseMatrix g_b, g_l;  // -(p, div v)
  Eigen::VectorXd mean_weights;  // |T|, the zero-mean constraint
  Eigen::VectorXd load_b, load_l;
  Eigen::VectorXd load_p;  // int_T div u_D, zero for u = 0 on the boundary
};

/// Unknowns ordered [U_b, U_l, P, multiplier].
struct StokesSystem {
  StokesVariant variant = StokesVariant::enriched;
  std::shared_ptr<const StokesBlocks> blocks;
  SparseMatrix matrix;
  Eigen::VectorXd rhs;
  bool has_multiplier = true;

  const DofLayout& layout() const { return blocks->layout; }
  Index offset_p() const { return blocks->layout.n_b + blocks->layout.n_l; }
  Index size() const { return matrix.rows(); }
};

/// Blocks with the whole boundary clamped. A non-null `boundary_velocity`
/// u_D is imposed at boundary vertices (P1 nodal values) and lifted into the
/// right-hand side; null means u = 0.
template <int Dim>
std::shared_ptr<const StokesBlocks> assemble_stokes_blocks(const Mesh<Dim>& mesh, double viscosity,
                                                           const VectorField<Dim>& force, bool bubbles = true,
                                                           const VectorField<Dim>& boundary_velocity = {}) {
  using Basis = LocalDisplacementBasis<Dim>;
  if (!(viscosity > 0.0)) throw std::invalid_argument("Stokes viscosity must be positive");
  const Mesh<Dim> tagged = classify_boundary(mesh, BoundarySpec<Dim>::everywhere(BoundaryCondition::gamma_c()));
  auto out = std::make_shared<StokesBlocks>();
  out->layout = make_layout(tagged, LayoutOptions{bubbles, false});
  const ElasticCoefficients coeff{viscosity, 0.0};
  auto el = assemble_elasticity(tagged, out->layout, coeff);
  out->a_bb = std::move(el.a_bb);
  out->a_bl = std::move(el.a_bl);
  out->a_ll = std::move(el.a_ll);
  out->d_bb = assemble_diagonal_bubble(tagged, out->layout, coeff);
  auto cp = assemble_coupling(tagged, 1.0, 0.0, out->layout);
  out->g_b = std::move(cp.g_b);
  out->g_l = std::move(cp.g_l);
  out->mean_weights.resize(tagged.num_cells());
  for (Index c = 0; c < tagged.num_cells(); ++c) out->mean_weights[c] = tagged.cell_measure(c);
  const auto load = assemble_displacement_load(tagged, out->layout, force);
  out->load_b = load.b;
  out->load_l = load.l;
  out->load_p = Eigen::VectorXd::Zero(out->layout.n_p);
  if (!boundary_velocity) return out;

  const Eigen::VectorXd nodal = interpolate_p1<Dim>(boundary_velocity, tagged);
  const auto rule = quadrature<Dim>(default_quadrature_degree<Dim>());
  const auto& lay = out->layout;
  for (Index c = 0; c < tagged.num_cells(); ++c) {
    const auto dofs = local_displacement_dofs(tagged, lay, c);
    Eigen::Matrix<double, Basis::kSize, 1> g = Eigen::Matrix<double, Basis::kSize, 1>::Zero();
    bool any = false;
    for (int k = 0; k < Dim + 1; ++k)
      for (int comp = 0; comp < Dim; ++comp) {
        const int i = Basis::linear(k, comp);
        if (dofs[i].block != DisplacementDof::none) continue;
        g[i] = nodal[Dim * tagged.cell(c)[k] + comp];
        any = any || g[i] != 0.0;
      }
    if (!any) continue;
    const auto geom = cell_geometry(tagged, c);
    const Eigen::Matrix<double, Basis::kSize, 1> r = local_elasticity_matrix(geom, coeff, rule) * g;
    for (int i = 0; i < Basis::kSize; ++i) {
      if (dofs[i].block == DisplacementDof::bubble) out->load_b[dofs[i].index] -= r[i];
      if (dofs[i].block == DisplacementDof::linear) out->load_l[dofs[i].index] -= r[i];
    }
    // The gradient of a P1 field is constant on T.
    const auto phi = Basis::eval(geom, Bary<Dim>::Constant(1.0 / (Dim + 1)));
    double div = 0.0;
    for (int i = 0; i < Basis::kSize; ++i) div += g[i] * phi[i].gradient.trace();
    out->load_p[c] += div * geom.measure;
  }
  return out;
}

/// Assembles A_S or A_S^D. Without the multiplier the constant pressure is a
/// null vector and the matrix is singular.
inline StokesSystem assemble_stokes(std::shared_ptr<const StokesBlocks> blocks, StokesVariant variant,
                                    bool multiplier = true) {
  const auto& b = *blocks;
  const auto& lay = b.layout;
  StokesSystem sys;
  sys.variant = variant;
  sys.blocks = blocks;
  sys.has_multiplier = multiplier;
  const Index ob = 0, ol = lay.n_b, op = lay.n_b + lay.n_l, om = op + lay.n_p;
  const Index n = om + (multiplier ? 1 : 0);
  const SparseMatrix& bubble = variant == StokesVariant::enriched ? b.a_bb : b.d_bb;
  SparseMatrix weights(1, lay.n_p);
  if (multiplier) weights = sparse_from_dense(b.mean_weights.transpose());
  std::vector<BlockPlacement> placements = {
      {&bubble, ob, ob},       {&b.a_bl, ob, ol},       {&b.a_bl, ol, ob, 1.0, true}, {&b.a_ll, ol, ol},
      {&b.g_b, ob, op},        {&b.g_b, op, ob, 1.0, true}, {&b.g_l, ol, op},       {&b.g_l, op, ol, 1.0, true},
  };
  if (multiplier) {
    placements.push_back({&weights, om, op});
    placements.push_back({&weights, op, om, 1.0, true});
  }
  sys.matrix = compose_blocks(n, n, placements);
  sys.rhs = Eigen::VectorXd::Zero(n);
  sys.rhs.segment(ob, lay.n_b) = b.load_b;
  sys.rhs.segment(ol, lay.n_l) = b.load_l;
  sys.rhs.segment(op, lay.n_p) = b.load_p;
  return sys;
}

/// Condensed [U_l, P, multiplier] system of A_S^D.
inline DiagonalCondensation condense_stokes(const StokesSystem& system) {
  if (system.variant != StokesVariant::diagonal)
    throw std::invalid_argument("Stokes condensation needs the diagonal (A_S^D) variant");
  return DiagonalCondensation(system.matrix, system.layout().n_b);
}

/// Solves [K w; w^T 0][x; m] = [f; g] where K has the constant pressure on
/// [p_offset, p_offset + n_p) as its only null vector and w is supported on the
/// pressure block. m is fixed by compatibility, one pressure is pinned and the
/// pressure is then shifted onto the constraint, so the dense border never
/// enters the factorization.
inline Eigen::VectorXd solve_mean_constrained(const SparseMatrix& bordered, const Eigen::VectorXd& rhs, Index p_offset,
                                              Index n_p) {
  const Index n = bordered.rows() - 1;
  if (bordered.cols() != n + 1 || rhs.size() != n + 1 || n_p < 1 || p_offset + n_p > n)
    throw SolverError("mean-constrained solve: dimension mismatch");
  Eigen::VectorXd w = Eigen::VectorXd::Zero(n);
  TripletBuffer k(n, n);
  const Index pin = p_offset;
  for (int i = 0; i < bordered.outerSize(); ++i)
    for (SparseMatrix::InnerIterator it(bordered, i); it; ++it) {
      const Index r = it.row(), c = it.col();
      if (r == n && c < n) w[c] = it.value();
      if (r < n && c < n && r != pin && c != pin) k.add(r, c, it.value());
    }
  k.add(pin, pin, 1.0);
  const auto pressure = [&](const Eigen::VectorXd& v) { return v.segment(p_offset, n_p); };
  const double wsum = pressure(w).sum();
  if (wsum == 0.0 || (w.head(p_offset).array() != 0.0).any() || (w.tail(n - p_offset - n_p).array() != 0.0).any())
    throw SolverError("mean-constrained solve: constraint must weight the pressure block only");
  const double m = pressure(rhs.head(n)).sum() / wsum;
  Eigen::VectorXd f = rhs.head(n) - m * w;
  f[pin] = 0.0;
  Eigen::VectorXd x(n + 1);
  x.head(n) = solve_direct(k.build(), f, SolveOptions{false});
  const double shift = (rhs[n] - w.dot(x.head(n))) / wsum;
  x.segment(p_offset, n_p).array() += shift;
  x[n] = m;
  const double res = (bordered * x - rhs).norm();
  if (!(res <= 1e-8 * std::max(rhs.norm(), 1e-300)))
    throw SolverError("mean-constrained solve residual " + std::to_string(res / rhs.norm()) +
                      " exceeds tolerance (pressure null space is not one-dimensional)");
  return x;
}

/// Solves the Stokes system; throws SolverError when the pressure null space is
/// not removed (multiplier disabled).
inline Eigen::VectorXd solve_stokes(const StokesSystem& system) {
  if (!system.has_multiplier) {
    Eigen::VectorXd constant = Eigen::VectorXd::Zero(system.size());
    constant.segment(system.offset_p(), system.layout().n_p).setOnes();
    if ((system.matrix * constant).norm() <= 1e-12 * max_abs(system.matrix) * constant.norm())
      throw SolverError("singular Stokes system: constant pressure is in the null space (enable the multiplier)");
    return solve_direct(system.matrix, system.rhs);
  }
  return solve_mean_constrained(system.matrix, system.rhs, system.offset_p(), system.layout().n_p);
}

/// Solves A_S^D through its condensation.
inline Eigen::VectorXd solve_stokes_condensed(const StokesSystem& system) {
  const DiagonalCondensation cond = condense_stokes(system);
  const Index nb = system.layout().n_b;
  const Eigen::VectorXd reduced = system.has_multiplier
                                      ? solve_mean_constrained(cond.matrix(), cond.condense_rhs(system.rhs),
                                                               system.offset_p() - nb, system.layout().n_p)
                                      : solve_direct(cond.matrix(), cond.condense_rhs(system.rhs));
  return cond.expand(system.rhs, reduced);
}

}  // namespace biotfe

#endif  // BIOTFE_STOKES_HPP

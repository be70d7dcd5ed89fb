// Monolithic Biot systems (enriched, diagonal-bubble) and static condensation
// of a diagonal leading block.

#ifndef BIOTFE_BIOT_SYSTEM_HPP
#define BIOTFE_BIOT_SYSTEM_HPP

#include <memory>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "biotfe/assembly.hpp"

namespace biotfe {

/// All blocks and data-dependent load vectors of the three-field problem.
struct BiotBlocks {
  DofLayout layout;
  SparseMatrix a_bb, a_bl, a_ll;
  SparseMatrix d_bb;
  SparseMatrix m_w, g;
  SparseMatrix g_b, g_l, m_p;
  Eigen::VectorXd load_b;    // (rho g, v_b)
  Eigen::VectorXd load_l;    // (rho g, v_l)
  Eigen::VectorXd load_w;    // (rho_f g, r) - <p_D, r.n>, without tau
  Eigen::VectorXd source_p;  // (f, q), without tau
};

template <int Dim>
BiotBlocks assemble_biot_blocks(const Mesh<Dim>& mesh, const MaterialParams<Dim>& params, const DofLayout& layout) {
  params.validate();
  BiotBlocks out;
  out.layout = layout;
  auto el = assemble_elasticity(mesh, params, layout);
  out.a_bb = std::move(el.a_bb);
  out.a_bl = std::move(el.a_bl);
  out.a_ll = std::move(el.a_ll);
  out.d_bb = assemble_diagonal_bubble(mesh, params, layout);
  auto darcy = assemble_darcy(mesh, params, layout);
  out.m_w = std::move(darcy.m_w);
  out.g = std::move(darcy.g);
  auto cp = assemble_coupling(mesh, params, layout);
  out.g_b = std::move(cp.g_b);
  out.g_l = std::move(cp.g_l);
  out.m_p = std::move(cp.m_p);
  const auto load = assemble_displacement_load(mesh, layout, params.body_force);
  out.load_b = load.b;
  out.load_l = load.l;
  out.load_w = assemble_flux_load(mesh, layout, params.fluid_body_force, params.boundary_pressure);
  out.source_p = assemble_pressure_load(mesh, layout, params.source);
  return out;
}

/// Which bubble block the monolithic matrix carries.
enum class BiotVariant {
  enriched,  // A_bb (the matrix A)
  diagonal,  // D_bb (the matrix A^D)
};

/// Unknowns (U_b, U_l, W, P) at one time level.
struct BiotState {
  Eigen::VectorXd ub, ul, w, p;
  double time = 0.0;
  Index step = 0;

  static BiotState zeros(const DofLayout& layout) {
    return {Eigen::VectorXd::Zero(layout.n_b), Eigen::VectorXd::Zero(layout.n_l), Eigen::VectorXd::Zero(layout.n_w),
            Eigen::VectorXd::Zero(layout.n_p), 0.0, 0};
  }

  Eigen::VectorXd stacked() const {
    Eigen::VectorXd x(ub.size() + ul.size() + w.size() + p.size());
    x << ub, ul, w, p;
    return x;
  }

  static BiotState unstack(const DofLayout& layout, const Eigen::VectorXd& x) {
    BiotState s;
    s.ub = x.segment(layout.offset_b(), layout.n_b);
    s.ul = x.segment(layout.offset_l(), layout.n_l);
    s.w = x.segment(layout.offset_w(), layout.n_w);
    s.p = x.segment(layout.offset_p(), layout.n_p);
    return s;
  }
};

/// One backward-Euler step matrix
///   [ B_bb    A_bl   0        G_b  ]
///   [ A_bl^T  A_ll   0        G_l  ]
///   [ 0       0      tau M_w  tau G ]
///   [ G_b^T   G_l^T  tau G^T  -M_p ]
/// with B_bb = A_bb or D_bb, and the pressure row negated for symmetry.
struct BlockSystem {
  BiotVariant variant = BiotVariant::enriched;
  double tau = 1.0;
  std::shared_ptr<const BiotBlocks> blocks;
  SparseMatrix matrix;

  const DofLayout& layout() const { return blocks->layout; }

  /// f~ = tau (f, q) + (1/M p^{m-1}, q) + (alpha div u^{m-1}, q).
  Eigen::VectorXd storage_source(const BiotState& previous) const {
    const auto& b = *blocks;
    return tau * b.source_p + b.m_p * previous.p - SparseMatrix(b.g_b.transpose()) * previous.ub -
           SparseMatrix(b.g_l.transpose()) * previous.ul;
  }

  Eigen::VectorXd rhs(const BiotState& previous) const {
    const auto& b = *blocks;
    const auto& lay = b.layout;
    Eigen::VectorXd r(lay.size());
    r.segment(lay.offset_b(), lay.n_b) = b.load_b;
    r.segment(lay.offset_l(), lay.n_l) = b.load_l;
    r.segment(lay.offset_w(), lay.n_w) = tau * b.load_w;
    r.segment(lay.offset_p(), lay.n_p) = -storage_source(previous);
    return r;
  }
};

inline BlockSystem build_biot_system(std::shared_ptr<const BiotBlocks> blocks, BiotVariant variant, double tau) {
  if (!(tau > 0.0)) throw std::invalid_argument("time step must be positive");
  const auto& b = *blocks;
  const auto& lay = b.layout;
  auto check = [](const SparseMatrix& m, Index r, Index c, const char* name) {
    if (m.rows() != r || m.cols() != c) throw std::invalid_argument(std::string("inconsistent layout in block ") + name);
  };
  check(b.a_bb, lay.n_b, lay.n_b, "A_bb");
  check(b.d_bb, lay.n_b, lay.n_b, "D_bb");
  check(b.a_bl, lay.n_b, lay.n_l, "A_bl");
  check(b.a_ll, lay.n_l, lay.n_l, "A_ll");
  check(b.m_w, lay.n_w, lay.n_w, "M_w");
  check(b.g, lay.n_w, lay.n_p, "G");
  check(b.g_b, lay.n_b, lay.n_p, "G_b");
  check(b.g_l, lay.n_l, lay.n_p, "G_l");
  check(b.m_p, lay.n_p, lay.n_p, "M_p");

  BlockSystem sys;
  sys.variant = variant;
  sys.tau = tau;
  sys.blocks = blocks;
  const SparseMatrix& bubble = variant == BiotVariant::enriched ? b.a_bb : b.d_bb;
  const Index ob = lay.offset_b(), ol = lay.offset_l(), ow = lay.offset_w(), op = lay.offset_p();
  sys.matrix = compose_blocks(lay.size(), lay.size(),
                              {
                                  {&bubble, ob, ob},
                                  {&b.a_bl, ob, ol},
                                  {&b.a_bl, ol, ob, 1.0, true},
                                  {&b.a_ll, ol, ol},
                                  {&b.g_b, ob, op},
                                  {&b.g_b, op, ob, 1.0, true},
                                  {&b.g_l, ol, op},
                                  {&b.g_l, op, ol, 1.0, true},
                                  {&b.m_w, ow, ow, tau},
                                  {&b.g, ow, op, tau},
                                  {&b.g, op, ow, tau, true},
                                  {&b.m_p, op, op, -1.0},
                              });
  return sys;
}

/// Schur complement of a diagonal leading block:
///   [D C; C^T R] -> R - C^T D^{-1} C, with the matching right-hand side
/// reduction and recovery of the eliminated unknowns.
class DiagonalCondensation {
 public:
  DiagonalCondensation(const SparseMatrix& full, Index n_eliminated) : n_e_(n_eliminated) {
    const Index n = full.rows();
    if (full.cols() != n || n_eliminated > n) throw std::invalid_argument("condensation: bad dimensions");
    n_r_ = n - n_e_;
    dinv_ = Eigen::VectorXd::Zero(n_e_);
    TripletBuffer c(n_e_, n_r_), r(n_r_, n_r_);
    for (int i = 0; i < full.outerSize(); ++i)
      for (SparseMatrix::InnerIterator it(full, i); it; ++it) {
        const Index row = it.row(), col = it.col();
        if (row < n_e_ && col < n_e_) {
          if (row != col)
            throw std::invalid_argument("condensation: eliminated block is not diagonal (entry " + std::to_string(row) +
                                        "," + std::to_string(col) + ")");
          dinv_[row] = it.value();
        } else if (row < n_e_) {
          c.add(row, col - n_e_, it.value());
        } else if (col >= n_e_) {
          r.add(row - n_e_, col - n_e_, it.value());
        }
      }
    for (Index i = 0; i < n_e_; ++i) {
      if (dinv_[i] == 0.0) throw std::invalid_argument("condensation: zero diagonal entry " + std::to_string(i));
      dinv_[i] = 1.0 / dinv_[i];
    }
    coupling_ = c.build();
    const SparseMatrix ct = coupling_.transpose();
    matrix_ = r.build() - SparseMatrix(ct * dinv_.asDiagonal() * coupling_);
    matrix_.prune(0.0);
  }

  const SparseMatrix& matrix() const { return matrix_; }
  const SparseMatrix& coupling() const { return coupling_; }
  const Eigen::VectorXd& inverse_diagonal() const { return dinv_; }
  Index eliminated() const { return n_e_; }
  Index remaining() const { return n_r_; }

  /// r_rest - C^T D^{-1} r_elim.
  Eigen::VectorXd condense_rhs(const Eigen::VectorXd& full_rhs) const {
    const Eigen::VectorXd re = full_rhs.head(n_e_);
    return full_rhs.tail(n_r_) - coupling_.transpose() * dinv_.cwiseProduct(re);
  }

  /// D^{-1} (r_elim - C x_rest).
  Eigen::VectorXd recover(const Eigen::VectorXd& full_rhs, const Eigen::VectorXd& x_rest) const {
    return dinv_.cwiseProduct(full_rhs.head(n_e_) - coupling_ * x_rest);
  }

  /// Concatenates recovered and remaining unknowns in the original order.
  Eigen::VectorXd expand(const Eigen::VectorXd& full_rhs, const Eigen::VectorXd& x_rest) const {
    Eigen::VectorXd x(n_e_ + n_r_);
    x << recover(full_rhs, x_rest), x_rest;
    return x;
  }

 private:
  Index n_e_ = 0;
  Index n_r_ = 0;
  Eigen::VectorXd dinv_;
  SparseMatrix coupling_;
  SparseMatrix matrix_;
};

/// The condensed (U_l, W, P) system of the diagonal variant.
inline DiagonalCondensation condense_bubbles(const BlockSystem& system) {
  if (system.variant != BiotVariant::diagonal)
    throw std::invalid_argument("bubble condensation needs the diagonal (A^D) variant");
  return DiagonalCondensation(system.matrix, system.layout().n_b);
}

}  // namespace biotfe

#endif  // BIOTFE_BIOT_SYSTEM_HPP

// Element loops for the elasticity, Darcy and coupling blocks and the load vectors.

#ifndef BIOTFE_ASSEMBLY_HPP
#define BIOTFE_ASSEMBLY_HPP

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "biotfe/basis.hpp"
#include "biotfe/dof_layout.hpp"
#include "biotfe/interpolation.hpp"
#include "biotfe/material.hpp"
#include "biotfe/quadrature.hpp"
#include "biotfe/sparse.hpp"

namespace biotfe {

/// Coefficients of a(u, v) = 2 mu (eps u, eps v) + lambda (div u, div v).
struct ElasticCoefficients {
  double mu = 1.0;
  double lambda = 0.0;
};

template <int Dim>
using LocalDisplacementMatrix =
    Eigen::Matrix<double, LocalDisplacementBasis<Dim>::kSize, LocalDisplacementBasis<Dim>::kSize>;

/// a_T over the full local basis (all d+1 bubbles, then P1), exact for
/// constant coefficients.
template <int Dim>
LocalDisplacementMatrix<Dim> local_elasticity_matrix(const CellGeometry<Dim>& geom, ElasticCoefficients coeff,
                                                     const QuadratureRule<Dim>& rule) {
  using Basis = LocalDisplacementBasis<Dim>;
  LocalDisplacementMatrix<Dim> k = LocalDisplacementMatrix<Dim>::Zero();
  for (std::size_t q = 0; q < rule.size(); ++q) {
    const auto phi = Basis::eval(geom, rule.points[q]);
    std::array<Mat<Dim>, Basis::kSize> strain;
    std::array<double, Basis::kSize> div;
    for (int i = 0; i < Basis::kSize; ++i) {
      strain[i] = 0.5 * (phi[i].gradient + phi[i].gradient.transpose());
      div[i] = phi[i].gradient.trace();
    }
    const double w = rule.weights[q] * geom.measure;
    for (int i = 0; i < Basis::kSize; ++i)
      for (int j = i; j < Basis::kSize; ++j) {
        const double v = w * (2.0 * coeff.mu * (strain[i].array() * strain[j].array()).sum() + coeff.lambda * div[i] * div[j]);
        k(i, j) += v;
        if (j != i) k(j, i) += v;
      }
  }
  return k;
}

/// Global dof of local displacement basis function i on a cell, with block tag.
struct DisplacementDof {
  enum Block { none, bubble, linear } block = none;
  Index index = kNoIndex;
};

template <int Dim>
std::array<DisplacementDof, LocalDisplacementBasis<Dim>::kSize> local_displacement_dofs(const Mesh<Dim>& mesh,
                                                                                       const DofLayout& layout,
                                                                                       Index c) {
  using Basis = LocalDisplacementBasis<Dim>;
  std::array<DisplacementDof, Basis::kSize> dofs;
  const auto& faces = mesh.cell_faces(c);
  for (int k = 0; k < Dim + 1; ++k) {
    const Index b = layout.has_bubbles ? layout.bubble[faces[k]] : kNoIndex;
    if (b != kNoIndex) dofs[Basis::bubble(k)] = {DisplacementDof::bubble, b};
    for (int comp = 0; comp < Dim; ++comp) {
      const Index l = layout.linear_dof(mesh.cell(c)[k], comp);
      if (l != kNoIndex) dofs[Basis::linear(k, comp)] = {DisplacementDof::linear, l};
    }
  }
  return dofs;
}

struct ElasticityBlocks {
  SparseMatrix a_bb;  // n_b x n_b
  SparseMatrix a_bl;  // n_b x n_l
  SparseMatrix a_ll;  // n_l x n_l
};

/// Blocks of a(., .) on V_h = V_{h,1} + V_b with essential dofs removed.
template <int Dim>
ElasticityBlocks assemble_elasticity(const Mesh<Dim>& mesh, const DofLayout& layout, ElasticCoefficients coeff) {
  const auto rule = quadrature<Dim>(default_quadrature_degree<Dim>());
  TripletBuffer bb(layout.n_b, layout.n_b), bl(layout.n_b, layout.n_l), ll(layout.n_l, layout.n_l);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto k = local_elasticity_matrix(geom, coeff, rule);
    const auto dofs = local_displacement_dofs(mesh, layout, c);
    for (int i = 0; i < LocalDisplacementBasis<Dim>::kSize; ++i) {
      const auto& di = dofs[i];
      if (di.block == DisplacementDof::none) continue;
      for (int j = 0; j < LocalDisplacementBasis<Dim>::kSize; ++j) {
        const auto& dj = dofs[j];
        if (dj.block == DisplacementDof::none) continue;
        if (di.block == DisplacementDof::bubble && dj.block == DisplacementDof::bubble)
          bb.add(di.index, dj.index, k(i, j));
        else if (di.block == DisplacementDof::bubble && dj.block == DisplacementDof::linear)
          bl.add(di.index, dj.index, k(i, j));
        else if (di.block == DisplacementDof::linear && dj.block == DisplacementDof::linear)
          ll.add(di.index, dj.index, k(i, j));
      }
    }
  }
  return {bb.build(), bl.build(), ll.build()};
}

template <int Dim>
ElasticityBlocks assemble_elasticity(const Mesh<Dim>& mesh, const MaterialParams<Dim>& params, const DofLayout& layout) {
  return assemble_elasticity(mesh, layout, ElasticCoefficients{params.mu, params.lambda});
}

/// D_bb: (d+1) sum_T a_T(Phi_e, Phi_e), i.e. (d+1) diag(A_bb).
template <int Dim>
SparseMatrix assemble_diagonal_bubble(const Mesh<Dim>& mesh, const DofLayout& layout, ElasticCoefficients coeff) {
  const auto rule = quadrature<Dim>(default_quadrature_degree<Dim>());
  Eigen::VectorXd d = Eigen::VectorXd::Zero(layout.n_b);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto k = local_elasticity_matrix(geom, coeff, rule);
    for (int f = 0; f < Dim + 1; ++f) {
      const Index b = layout.has_bubbles ? layout.bubble[geom.faces[f]] : kNoIndex;
      if (b != kNoIndex) d[b] += (Dim + 1) * k(LocalDisplacementBasis<Dim>::bubble(f), LocalDisplacementBasis<Dim>::bubble(f));
    }
  }
  return sparse_diagonal(d);
}

template <int Dim>
SparseMatrix assemble_diagonal_bubble(const Mesh<Dim>& mesh, const MaterialParams<Dim>& params, const DofLayout& layout) {
  return assemble_diagonal_bubble(mesh, layout, ElasticCoefficients{params.mu, params.lambda});
}

struct DarcyBlocks {
  SparseMatrix m_w;  // (mu_f K^{-1} w, r), n_w x n_w
  SparseMatrix g;    // -(p, div r), n_w x n_p
};

template <int Dim>
DarcyBlocks assemble_darcy(const Mesh<Dim>& mesh, const MaterialParams<Dim>& params, const DofLayout& layout) {
  Eigen::FullPivLU<Mat<Dim>> klu(params.permeability);
  if (!klu.isInvertible()) throw std::invalid_argument("darcy: singular permeability");
  const Mat<Dim> resistivity = params.fluid_viscosity * klu.inverse();
  const auto rule = quadrature<Dim>(2);
  TripletBuffer mw(layout.n_w, layout.n_w), g(layout.n_w, layout.n_p);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    std::array<Index, Dim + 1> idx;
    for (int k = 0; k < Dim + 1; ++k) idx[k] = layout.flux[geom.faces[k]];
    Eigen::Matrix<double, Dim + 1, Dim + 1> local = Eigen::Matrix<double, Dim + 1, Dim + 1>::Zero();
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec<Dim> x = geom.to_physical(rule.points[q]);
      std::array<Vec<Dim>, Dim + 1> psi;
      for (int k = 0; k < Dim + 1; ++k) psi[k] = eval_rt0_local(geom, k, x).value;
      for (int i = 0; i < Dim + 1; ++i)
        for (int j = 0; j < Dim + 1; ++j)
          local(i, j) += rule.weights[q] * geom.measure * psi[i].dot(resistivity * psi[j]);
    }
    for (int i = 0; i < Dim + 1; ++i) {
      if (idx[i] == kNoIndex) continue;
      for (int j = 0; j < Dim + 1; ++j)
        if (idx[j] != kNoIndex) mw.add(idx[i], idx[j], local(i, j));
      // int_T div psi = s |e|
      g.add(idx[i], c, -geom.face_signs[i] * geom.face_measures[i]);
    }
  }
  return {mw.build(), g.build()};
}

struct CouplingBlocks {
  SparseMatrix g_b;  // -(alpha p, div v_b), n_b x n_p
  SparseMatrix g_l;  // -(alpha p, div v_l), n_l x n_p
  SparseMatrix m_p;  // (1/M p, q), n_p x n_p
};

template <int Dim>
CouplingBlocks assemble_coupling(const Mesh<Dim>& mesh, double alpha, double inverse_modulus, const DofLayout& layout) {
  using Basis = LocalDisplacementBasis<Dim>;
  const auto rule = quadrature<Dim>(std::max(Dim - 1, 1));
  TripletBuffer gb(layout.n_b, layout.n_p), gl(layout.n_l, layout.n_p), mp(layout.n_p, layout.n_p);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto dofs = local_displacement_dofs(mesh, layout, c);
    std::array<double, Basis::kSize> div_integral{};
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto phi = Basis::eval(geom, rule.points[q]);
      for (int i = 0; i < Basis::kSize; ++i) div_integral[i] += rule.weights[q] * geom.measure * phi[i].gradient.trace();
    }
    for (int i = 0; i < Basis::kSize; ++i) {
      if (dofs[i].block == DisplacementDof::bubble) gb.add(dofs[i].index, c, -alpha * div_integral[i]);
      if (dofs[i].block == DisplacementDof::linear) gl.add(dofs[i].index, c, -alpha * div_integral[i]);
    }
    mp.add(c, c, inverse_modulus * geom.measure);
  }
  return {gb.build(), gl.build(), mp.build()};
}

template <int Dim>
CouplingBlocks assemble_coupling(const Mesh<Dim>& mesh, const MaterialParams<Dim>& params, const DofLayout& layout) {
  return assemble_coupling(mesh, params.alpha, params.inverse_biot_modulus(), layout);
}

struct DisplacementLoad {
  Eigen::VectorXd b;  // bubble block
  Eigen::VectorXd l;  // linear block
};

/// (f, v_h) for v_h in V_h.
template <int Dim>
DisplacementLoad assemble_displacement_load(const Mesh<Dim>& mesh, const DofLayout& layout, const VectorField<Dim>& f,
                                            int degree = data_quadrature_degree<Dim>()) {
  using Basis = LocalDisplacementBasis<Dim>;
  DisplacementLoad out{Eigen::VectorXd::Zero(layout.n_b), Eigen::VectorXd::Zero(layout.n_l)};
  if (!f) return out;
  const auto rule = quadrature<Dim>(degree);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    const auto dofs = local_displacement_dofs(mesh, layout, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec<Dim> fx = f(geom.to_physical(rule.points[q]));
      const auto phi = Basis::eval(geom, rule.points[q]);
      const double w = rule.weights[q] * geom.measure;
      for (int i = 0; i < Basis::kSize; ++i) {
        if (dofs[i].block == DisplacementDof::bubble) out.b[dofs[i].index] += w * fx.dot(phi[i].value);
        if (dofs[i].block == DisplacementDof::linear) out.l[dofs[i].index] += w * fx.dot(phi[i].value);
      }
    }
  }
  return out;
}

/// (rho_f g, r_h) - int_{pressure faces} p_D r_h . n for r_h in W_h.
template <int Dim>
Eigen::VectorXd assemble_flux_load(const Mesh<Dim>& mesh, const DofLayout& layout, const VectorField<Dim>& fluid_force,
                                   const ScalarField<Dim>& boundary_pressure, int degree = data_quadrature_degree<Dim>()) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.n_w);
  if (fluid_force) {
    const auto rule = quadrature<Dim>(degree);
    for (Index c = 0; c < mesh.num_cells(); ++c) {
      const auto geom = cell_geometry(mesh, c);
      for (std::size_t q = 0; q < rule.size(); ++q) {
        const Vec<Dim> x = geom.to_physical(rule.points[q]);
        const Vec<Dim> g = fluid_force(x);
        for (int k = 0; k < Dim + 1; ++k) {
          const Index i = layout.flux[geom.faces[k]];
          if (i != kNoIndex) out[i] += rule.weights[q] * geom.measure * g.dot(eval_rt0_local(geom, k, x).value);
        }
      }
    }
  }
  if (boundary_pressure) {
    for (Index f = 0; f < mesh.num_faces(); ++f) {
      const auto& face = mesh.face(f);
      if (!face.is_boundary() || face.bc.flow != FlowBc::pressure) continue;
      const Index i = layout.flux[f];
      if (i == kNoIndex) continue;
      // psi_e . n = 1 on its own boundary face.
      out[i] -= face_integral<Dim>(mesh, f, boundary_pressure, degree);
    }
  }
  return out;
}

/// (f, q_h) for q_h in Q_h.
template <int Dim>
Eigen::VectorXd assemble_pressure_load(const Mesh<Dim>& mesh, const DofLayout& layout, const ScalarField<Dim>& f,
                                       int degree = data_quadrature_degree<Dim>()) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.n_p);
  if (!f) return out;
  const auto rule = quadrature<Dim>(degree);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * f(geom.to_physical(rule.points[q]));
    out[c] = s * geom.measure;
  }
  return out;
}

}  // namespace biotfe

#endif  // BIOTFE_ASSEMBLY_HPP

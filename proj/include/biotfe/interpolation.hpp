// Interpolants Pi_1, Pi_0, RT0 flux interpolation and the bubble dof functional.

#ifndef BIOTFE_INTERPOLATION_HPP
#define BIOTFE_INTERPOLATION_HPP

#include <algorithm>
#include <functional>

#include <Eigen/Dense>

#include "biotfe/basis.hpp"
#include "biotfe/dof_layout.hpp"
#include "biotfe/quadrature.hpp"

namespace biotfe {

template <int Dim>
using VectorField = std::function<Vec<Dim>(const Vec<Dim>&)>;

template <int Dim>
using ScalarField = std::function<double(const Vec<Dim>&)>;

/// Degree used for integrands with constant coefficients.
template <int Dim>
constexpr int default_quadrature_degree() {
  return 2 * Dim;
}

/// Degree used for manufactured data (trigonometric or high-order polynomials).
template <int Dim>
constexpr int data_quadrature_degree() {
  return std::min(2 * Dim + 2, kMaxQuadratureDegree);
}

/// Integral of f over a face of the mesh.
template <int Dim>
double face_integral(const Mesh<Dim>& mesh, Index face, const ScalarField<Dim>& f,
                     int degree = data_quadrature_degree<Dim>()) {
  const auto rule = quadrature<Dim - 1>(degree);
  const auto& fc = mesh.face(face);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Vec<Dim> x = Vec<Dim>::Zero();
    for (int k = 0; k < Dim; ++k) x += rule.points[q][k] * mesh.vertex(fc.vertices[k]);
    s += rule.weights[q] * f(x);
  }
  return s * fc.measure;
}

/// Pi_1 u: vertex values ordered (vertex, component), over all vertices.
template <int Dim>
Eigen::VectorXd interpolate_p1(const VectorField<Dim>& u, const Mesh<Dim>& mesh) {
  Eigen::VectorXd out(Dim * mesh.num_vertices());
  for (Index v = 0; v < mesh.num_vertices(); ++v) out.template segment<Dim>(Dim * v) = u(mesh.vertex(v));
  return out;
}

/// Restricts a full vertex-value vector to the free U_l block.
inline Eigen::VectorXd restrict_linear(const DofLayout& layout, const Eigen::VectorXd& full) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.n_l);
  for (std::size_t i = 0; i < layout.linear.size(); ++i)
    if (layout.linear[i] != kNoIndex) out[layout.linear[i]] = full[static_cast<Index>(i)];
  return out;
}

/// Expands U_l to all vertices; constrained entries are zero.
inline Eigen::VectorXd expand_linear(const DofLayout& layout, const Eigen::VectorXd& free) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(layout.linear.size()));
  for (std::size_t i = 0; i < layout.linear.size(); ++i)
    if (layout.linear[i] != kNoIndex) out[static_cast<Index>(i)] = free[layout.linear[i]];
  return out;
}

/// Pi_0 p: cell means (L2 projection onto piecewise constants).
template <int Dim>
Eigen::VectorXd interpolate_p0(const ScalarField<Dim>& p, const Mesh<Dim>& mesh,
                               int degree = default_quadrature_degree<Dim>()) {
  const auto rule = quadrature<Dim>(degree);
  Eigen::VectorXd out(mesh.num_cells());
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    double s = 0.0;
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * p(geom.to_physical(rule.points[q]));
    out[c] = s;
  }
  return out;
}

/// Normal component of w on every face, (1/|e|) int_e w . n_e, over all faces.
template <int Dim>
Eigen::VectorXd interpolate_rt0(const VectorField<Dim>& w, const Mesh<Dim>& mesh,
                                int degree = data_quadrature_degree<Dim>()) {
  Eigen::VectorXd out(mesh.num_faces());
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const Vec<Dim> n = mesh.face(f).normal;
    out[f] = face_integral<Dim>(mesh, f, [&](const Vec<Dim>& x) { return w(x).dot(n); }, degree) /
             mesh.face(f).measure;
  }
  return out;
}

/// Restricts a per-face vector to the free W block.
inline Eigen::VectorXd restrict_flux(const DofLayout& layout, const Eigen::VectorXd& per_face) {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(layout.n_w);
  for (std::size_t f = 0; f < layout.flux.size(); ++f)
    if (layout.flux[f] != kNoIndex) out[layout.flux[f]] = per_face[static_cast<Index>(f)];
  return out;
}

/// Scalar bubble dof v_e = (1/|e|) int_e n_e . (v - Pi_1 v).
template <int Dim>
double canonical_bubble_dof(const VectorField<Dim>& v, const Mesh<Dim>& mesh, Index face,
                            int degree = data_quadrature_degree<Dim>()) {
  const auto& fc = mesh.face(face);
  std::array<Vec<Dim>, Dim> nodal;
  for (int k = 0; k < Dim; ++k) nodal[k] = v(mesh.vertex(fc.vertices[k]));
  const auto rule = quadrature<Dim - 1>(degree);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    Vec<Dim> x = Vec<Dim>::Zero();
    Vec<Dim> linear = Vec<Dim>::Zero();
    for (int k = 0; k < Dim; ++k) {
      x += rule.points[q][k] * mesh.vertex(fc.vertices[k]);
      linear += rule.points[q][k] * nodal[k];
    }
    s += rule.weights[q] * fc.normal.dot(v(x) - linear);
  }
  return s;
}

/// Point value of a discrete displacement u_h = sum U_b Phi_e + sum U_l phi_i
/// on cell c at barycentric point `bary`.
template <int Dim>
VectorBasisValue<Dim> eval_displacement(const CellGeometry<Dim>& geom, const Mesh<Dim>& mesh, const DofLayout& layout,
                                        const Eigen::VectorXd& ub, const Eigen::VectorXd& ul, const Bary<Dim>& bary) {
  using Basis = LocalDisplacementBasis<Dim>;
  const auto phi = Basis::eval(geom, bary);
  VectorBasisValue<Dim> out;
  out.value.setZero();
  out.gradient.setZero();
  for (int k = 0; k < Dim + 1; ++k) {
    if (layout.has_bubbles) {
      const Index b = layout.bubble[geom.faces[k]];
      if (b != kNoIndex) {
        out.value += ub[b] * phi[Basis::bubble(k)].value;
        out.gradient += ub[b] * phi[Basis::bubble(k)].gradient;
      }
    }
    const Index v = mesh.cell(geom.cell)[k];
    for (int c = 0; c < Dim; ++c) {
      const Index l = layout.linear_dof(v, c);
      if (l != kNoIndex) {
        out.value += ul[l] * phi[Basis::linear(k, c)].value;
        out.gradient += ul[l] * phi[Basis::linear(k, c)].gradient;
      }
    }
  }
  return out;
}

/// Point value of a discrete flux on cell c.
template <int Dim>
Rt0Value<Dim> eval_flux(const CellGeometry<Dim>& geom, const DofLayout& layout, const Eigen::VectorXd& w,
                        const Vec<Dim>& x) {
  Rt0Value<Dim> out;
  out.value.setZero();
  out.divergence = 0.0;
  for (int k = 0; k < Dim + 1; ++k) {
    const Index i = layout.flux[geom.faces[k]];
    if (i == kNoIndex) continue;
    const auto psi = eval_rt0_local(geom, k, x);
    out.value += w[i] * psi.value;
    out.divergence += w[i] * psi.divergence;
  }
  return out;
}

}  // namespace biotfe

#endif  // BIOTFE_INTERPOLATION_HPP

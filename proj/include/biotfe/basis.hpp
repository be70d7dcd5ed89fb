// Basis functions of the four discrete spaces: vector P1, face bubbles, RT0, P0.

#ifndef BIOTFE_BASIS_HPP
#define BIOTFE_BASIS_HPP

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "biotfe/geometry.hpp"

namespace biotfe {

template <int Dim>
using Bary = Eigen::Matrix<double, Dim + 1, 1>;

template <int Dim>
using Vec = Eigen::Matrix<double, Dim, 1>;

template <int Dim>
using Mat = Eigen::Matrix<double, Dim, Dim>;

template <int Dim>
struct P1Values {
  std::array<double, Dim + 1> values;
  std::array<Vec<Dim>, Dim + 1> gradients;
};

/// Scalar hats on a cell: the barycentric coordinates themselves.
template <int Dim>
P1Values<Dim> eval_p1_basis(const CellGeometry<Dim>& geom, const Bary<Dim>& point) {
  P1Values<Dim> out;
  for (int k = 0; k < Dim + 1; ++k) {
    out.values[k] = point[k];
    out.gradients[k] = geom.grad_lambda[k];
  }
  return out;
}

template <int Dim>
struct BubbleValue {
  double value = 0.0;
  Vec<Dim> gradient;
};

/// phi_e on the cell: product of the barycentrics of the vertices of face
/// `local_face` (every local vertex except the opposite one).
template <int Dim>
BubbleValue<Dim> eval_bubble_local(const CellGeometry<Dim>& geom, int local_face, const Bary<Dim>& point) {
  BubbleValue<Dim> out;
  out.value = 1.0;
  out.gradient.setZero();
  for (int m = 0; m < Dim + 1; ++m) {
    if (m == local_face) continue;
    out.value *= point[m];
    double others = 1.0;
    for (int k = 0; k < Dim + 1; ++k)
      if (k != local_face && k != m) others *= point[k];
    out.gradient += others * geom.grad_lambda[m];
  }
  return out;
}

template <int Dim>
BubbleValue<Dim> eval_bubble(const CellGeometry<Dim>& geom, Index face, const Bary<Dim>& point) {
  const int k = geom.local_face(face);
  if (k < 0) throw std::invalid_argument("face " + std::to_string(face) + " is not on cell " + std::to_string(geom.cell));
  return eval_bubble_local(geom, k, point);
}

template <int Dim>
struct Rt0Value {
  Vec<Dim> value;
  double divergence = 0.0;
};

/// RT0 function of local face k: psi = s |e| / (d |T|) (x - x_k), with s = +1
/// when n_e points out of the cell, so that psi . n_e = 1 on e from both sides.
template <int Dim>
Rt0Value<Dim> eval_rt0_local(const CellGeometry<Dim>& geom, int local_face, const Vec<Dim>& x) {
  const double s = geom.face_signs[local_face];
  const double scale = s * geom.face_measures[local_face] / (Dim * geom.measure);
  Rt0Value<Dim> out;
  out.value = scale * (x - geom.vertices[local_face]);
  out.divergence = scale * Dim;
  return out;
}

template <int Dim>
Rt0Value<Dim> eval_rt0_basis(const CellGeometry<Dim>& geom, Index face, const Vec<Dim>& x) {
  const int k = geom.local_face(face);
  if (k < 0) throw std::invalid_argument("face " + std::to_string(face) + " is not on cell " + std::to_string(geom.cell));
  return eval_rt0_local(geom, k, x);
}

/// Value and gradient (row a = grad of component a) of one local displacement
/// basis function.
template <int Dim>
struct VectorBasisValue {
  Vec<Dim> value;
  Mat<Dim> gradient;
};

/// Local displacement basis of V_h on a cell: entries 0..d are the face
/// bubbles Phi_e = phi_e n_e of local faces 0..d, then the P1 functions
/// ordered (vertex k, component c) -> d+1 + d*k + c.
template <int Dim>
struct LocalDisplacementBasis {
  static constexpr int kBubbles = Dim + 1;
  static constexpr int kLinear = Dim * (Dim + 1);
  static constexpr int kSize = kBubbles + kLinear;

  static constexpr int bubble(int local_face) { return local_face; }
  static constexpr int linear(int local_vertex, int component) { return kBubbles + Dim * local_vertex + component; }

  static std::array<VectorBasisValue<Dim>, kSize> eval(const CellGeometry<Dim>& geom, const Bary<Dim>& point) {
    std::array<VectorBasisValue<Dim>, kSize> out;
    for (int k = 0; k < Dim + 1; ++k) {
      const auto b = eval_bubble_local(geom, k, point);
      const Vec<Dim>& n = geom.face_normals[k];
      out[bubble(k)].value = b.value * n;
      out[bubble(k)].gradient = n * b.gradient.transpose();
    }
    for (int k = 0; k < Dim + 1; ++k)
      for (int c = 0; c < Dim; ++c) {
        auto& v = out[linear(k, c)];
        v.value.setZero();
        v.value[c] = point[k];
        v.gradient.setZero();
        v.gradient.row(c) = geom.grad_lambda[k].transpose();
      }
    return out;
  }
};

}  // namespace biotfe

#endif  // BIOTFE_BASIS_HPP

// Per-cell affine geometry: barycentric gradients, measures, face signs.

#ifndef BIOTFE_GEOMETRY_HPP
#define BIOTFE_GEOMETRY_HPP

#include <array>
#include <stdexcept>

#include <Eigen/Dense>

#include "biotfe/mesh.hpp"

namespace biotfe {

template <int Dim>
struct CellGeometry {
  using Point = Eigen::Matrix<double, Dim, 1>;

  Index cell = kNoIndex;
  std::array<Point, Dim + 1> vertices;
  /// grad lambda_k, constant on the cell (units 1/length).
  std::array<Point, Dim + 1> grad_lambda;
  double measure = 0.0;
  /// Measure of local face k (opposite local vertex k).
  std::array<double, Dim + 1> face_measures;
  /// Global face id of local face k.
  std::array<Index, Dim + 1> faces;
  /// +1 where n_e is outward for this cell, -1 otherwise.
  std::array<double, Dim + 1> face_signs;
  /// Global n_e of local face k.
  std::array<Point, Dim + 1> face_normals;

  Point to_physical(const Eigen::Matrix<double, Dim + 1, 1>& bary) const {
    Point x = Point::Zero();
    for (int k = 0; k < Dim + 1; ++k) x += bary[k] * vertices[k];
    return x;
  }

  Eigen::Matrix<double, Dim + 1, 1> to_barycentric(const Point& x) const {
    Eigen::Matrix<double, Dim + 1, 1> b;
    double rest = 1.0;
    for (int k = 1; k < Dim + 1; ++k) {
      b[k] = 1.0 / static_cast<double>(Dim + 1) + grad_lambda[k].dot(x - centroid());
      rest -= b[k];
    }
    b[0] = rest;
    return b;
  }

  Point centroid() const {
    Point x = Point::Zero();
    for (const auto& v : vertices) x += v;
    return x / static_cast<double>(Dim + 1);
  }

  /// Local index of a global face, or -1.
  int local_face(Index global_face) const {
    for (int k = 0; k < Dim + 1; ++k)
      if (faces[k] == global_face) return k;
    return -1;
  }
};

template <int Dim>
CellGeometry<Dim> cell_geometry(const Mesh<Dim>& mesh, Index c) {
  CellGeometry<Dim> g;
  g.cell = c;
  const auto& cv = mesh.cell(c);
  for (int k = 0; k < Dim + 1; ++k) g.vertices[k] = mesh.vertex(cv[k]);
  // Rows of J^{-1} are grad lambda_1..lambda_d; grad lambda_0 closes the sum.
  Eigen::Matrix<double, Dim, Dim> J;
  for (int k = 0; k < Dim; ++k) J.col(k) = g.vertices[k + 1] - g.vertices[0];
  const Eigen::Matrix<double, Dim, Dim> Jinv = J.inverse();
  typename CellGeometry<Dim>::Point sum = CellGeometry<Dim>::Point::Zero();
  for (int k = 0; k < Dim; ++k) {
    g.grad_lambda[k + 1] = Jinv.row(k).transpose();
    sum += g.grad_lambda[k + 1];
  }
  g.grad_lambda[0] = -sum;
  g.measure = mesh.cell_measure(c);
  for (int k = 0; k < Dim + 1; ++k) {
    const Index f = mesh.cell_faces(c)[k];
    g.faces[k] = f;
    g.face_measures[k] = mesh.face(f).measure;
    g.face_signs[k] = mesh.face_sign(c, k);
    g.face_normals[k] = mesh.face(f).normal;
  }
  return g;
}

}  // namespace biotfe

#endif  // BIOTFE_GEOMETRY_HPP

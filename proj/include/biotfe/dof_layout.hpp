// Numbering of P1-vector, bubble, RT0 and P0 unknowns.

#ifndef BIOTFE_DOF_LAYOUT_HPP
#define BIOTFE_DOF_LAYOUT_HPP

#include <stdexcept>
#include <vector>

#include "biotfe/mesh.hpp"

namespace biotfe {

struct LayoutOptions {
  bool bubbles = true;  // enrich P1 with face bubbles
  bool flux = true;     // include the RT0 Darcy flux
};

/// Free unknowns only; essentially constrained dofs (u = 0 on clamped faces,
/// w.n = 0 on no-flow faces) map to kNoIndex and carry the value zero.
/// Block offsets follow the order [U_b, U_l, W, P].
struct DofLayout {
  int dim = 2;
  Index n_b = 0;
  Index n_l = 0;
  Index n_w = 0;
  Index n_p = 0;

  /// (vertex, component) -> index into the U_l block, size dim * n_vertices.
  std::vector<Index> linear;
  /// face -> index into the U_b block.
  std::vector<Index> bubble;
  /// face -> index into the W block.
  std::vector<Index> flux;

  bool has_bubbles = true;
  bool has_flux = true;

  Index offset_b() const { return 0; }
  Index offset_l() const { return n_b; }
  Index offset_w() const { return n_b + n_l; }
  Index offset_p() const { return n_b + n_l + n_w; }
  Index size() const { return n_b + n_l + n_w + n_p; }
  Index displacement_size() const { return n_b + n_l; }

  Index linear_dof(Index vertex, int component) const { return linear[dim * vertex + component]; }
};

template <int Dim>
DofLayout make_layout(const Mesh<Dim>& mesh, LayoutOptions options = {}) {
  if (!mesh.boundary_tagged()) throw std::invalid_argument("layout needs a mesh with every boundary face tagged");
  DofLayout layout;
  layout.dim = Dim;
  layout.has_bubbles = options.bubbles;
  layout.has_flux = options.flux;

  std::vector<bool> clamped(mesh.num_vertices(), false);
  for (const auto& f : mesh.faces())
    if (f.is_boundary() && f.bc.displacement == DisplacementBc::clamped)
      for (Index v : f.vertices) clamped[v] = true;

  layout.linear.assign(Dim * mesh.num_vertices(), kNoIndex);
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    if (!clamped[v])
      for (int c = 0; c < Dim; ++c) layout.linear[Dim * v + c] = layout.n_l++;

  layout.bubble.assign(mesh.num_faces(), kNoIndex);
  if (options.bubbles)
    for (Index f = 0; f < mesh.num_faces(); ++f)
      if (mesh.carries_bubble(f)) layout.bubble[f] = layout.n_b++;

  layout.flux.assign(mesh.num_faces(), kNoIndex);
  if (options.flux)
    for (Index f = 0; f < mesh.num_faces(); ++f) {
      const auto& face = mesh.face(f);
      if (face.is_boundary() && face.bc.flow == FlowBc::no_flow) continue;
      layout.flux[f] = layout.n_w++;
    }

  layout.n_p = mesh.num_cells();
  return layout;
}

}  // namespace biotfe

#endif  // BIOTFE_DOF_LAYOUT_HPP

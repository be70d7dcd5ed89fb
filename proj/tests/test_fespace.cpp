#include <gtest/gtest.h>

#include <random>

#include "biotfe/dof_layout.hpp"
#include "biotfe/interpolation.hpp"

using namespace biotfe;

namespace {

Mesh2 unit_triangle() {
  using P = Mesh2::Point;
  return Mesh2({P(0, 0), P(1, 0), P(0, 1)}, {{0, 1, 2}});
}

template <int Dim>
Mesh<Dim> tagged(const Mesh<Dim>& m, BoundaryCondition bc) {
  return classify_boundary(m, BoundarySpec<Dim>::everywhere(bc));
}

template <int Dim>
Mesh<Dim> test_mesh();

template <>
Mesh2 test_mesh<2>() {
  return perturb_interior_vertices(build_structured_unit_square(4), 0.25, 11);
}

template <>
Mesh3 test_mesh<3>() {
  return perturb_interior_vertices(build_structured_unit_cube(2), 0.2, 11);
}

double c_d(int d) {
  double num = 1.0, den = 1.0;
  for (int k = 2; k <= d; ++k) num *= k;
  for (int k = 2; k <= 3 * d; ++k) den *= k;
  return num * std::pow(2.0, d) / den;
}

template <int Dim>
Bary<Dim> random_bary(std::mt19937& rng) {
  std::exponential_distribution<double> e(1.0);
  Bary<Dim> b;
  for (int k = 0; k < Dim + 1; ++k) b[k] = e(rng);
  return b / b.sum();
}

}  // namespace

template <class T>
class FespaceDims : public ::testing::Test {};
using Dims = ::testing::Types<std::integral_constant<int, 2>, std::integral_constant<int, 3>>;
TYPED_TEST_SUITE(FespaceDims, Dims);

TYPED_TEST(FespaceDims, BarycentricGeometry) {
  constexpr int Dim = TypeParam::value;
  const auto mesh = test_mesh<Dim>();
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    Vec<Dim> sum = Vec<Dim>::Zero();
    for (const auto& gl : g.grad_lambda) sum += gl;
    EXPECT_LE(sum.norm(), 1e-13 / mesh.cell_diameter(c));
    for (int j = 0; j < Dim + 1; ++j) {
      const auto b = g.to_barycentric(g.vertices[j]);
      for (int k = 0; k < Dim + 1; ++k) EXPECT_NEAR(b[k], k == j ? 1.0 : 0.0, 1e-13);
    }
    EXPECT_NEAR(g.measure, mesh.cell_measure(c), 1e-16);
  }
}

TYPED_TEST(FespaceDims, PartitionOfUnity) {
  constexpr int Dim = TypeParam::value;
  const auto mesh = test_mesh<Dim>();
  const auto rule = quadrature<Dim>(4);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    for (const auto& pt : rule.points) {
      const auto v = eval_p1_basis(g, pt);
      double s = 0.0;
      Vec<Dim> gs = Vec<Dim>::Zero();
      for (int k = 0; k < Dim + 1; ++k) {
        s += v.values[k];
        gs += v.gradients[k];
      }
      EXPECT_NEAR(s, 1.0, 1e-14);
      EXPECT_LE(gs.norm(), 1e-12);
    }
  }
}

TYPED_TEST(FespaceDims, BubbleMassIdentity) {
  constexpr int Dim = TypeParam::value;
  const auto mesh = test_mesh<Dim>();
  const auto rule = quadrature<Dim>(2 * Dim);
  const double cd = c_d(Dim);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    for (int e = 0; e < Dim + 1; ++e)
      for (int f = 0; f < Dim + 1; ++f) {
        double s = 0.0;
        for (std::size_t q = 0; q < rule.size(); ++q) {
          const auto be = eval_bubble_local(g, e, rule.points[q]);
          const auto bf = eval_bubble_local(g, f, rule.points[q]);
          s += rule.weights[q] * g.measure * be.value * bf.value * g.face_normals[e].dot(g.face_normals[f]);
        }
        const double expect = 0.5 * cd * g.measure * ((e == f ? 1.0 : 0.0) + g.face_normals[e].dot(g.face_normals[f]));
        EXPECT_NEAR(s, expect, 1e-13 * std::abs(cd * g.measure)) << "cell " << c << " faces " << e << "," << f;
      }
  }
}

TYPED_TEST(FespaceDims, BubbleTraceContinuity) {
  constexpr int Dim = TypeParam::value;
  const auto mesh = test_mesh<Dim>();
  std::mt19937 rng(5);
  for (Index f = 0; f < mesh.num_faces(); ++f) {
    const auto& face = mesh.face(f);
    if (face.is_boundary()) continue;
    const auto gp = cell_geometry(mesh, face.owner);
    const auto gm = cell_geometry(mesh, face.neighbor);
    for (int trial = 0; trial < 3; ++trial) {
      const auto t = random_bary<Dim - 1>(rng);
      Vec<Dim> x = Vec<Dim>::Zero();
      for (int k = 0; k < Dim; ++k) x += t[k] * mesh.vertex(face.vertices[k]);
      const double vp = eval_bubble(gp, f, gp.to_barycentric(x)).value;
      const double vm = eval_bubble(gm, f, gm.to_barycentric(x)).value;
      EXPECT_NEAR(vp, vm, 1e-13);
      EXPECT_GT(vp, 0.0);
      // the other faces of both cells see zero
      for (int k = 0; k < Dim + 1; ++k) {
        if (gp.faces[k] != f) {
          EXPECT_NEAR(eval_bubble_local(gp, k, gp.to_barycentric(x)).value, 0.0, 1e-13);
        }
        if (gm.faces[k] != f) {
          EXPECT_NEAR(eval_bubble_local(gm, k, gm.to_barycentric(x)).value, 0.0, 1e-13);
        }
      }
    }
  }
}

TYPED_TEST(FespaceDims, Rt0NormalTraces) {
  constexpr int Dim = TypeParam::value;
  const auto mesh = test_mesh<Dim>();
  std::mt19937 rng(9);
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    for (int k = 0; k < Dim + 1; ++k) {
      const Index fk = g.faces[k];
      for (int j = 0; j < Dim + 1; ++j) {
        const auto& face = mesh.face(g.faces[j]);
        const auto t = random_bary<Dim - 1>(rng);
        Vec<Dim> x = Vec<Dim>::Zero();
        for (int m = 0; m < Dim; ++m) x += t[m] * mesh.vertex(face.vertices[m]);
        const double flux = eval_rt0_basis(g, fk, x).value.dot(face.normal);
        EXPECT_NEAR(flux, j == k ? 1.0 : 0.0, 1e-12);
      }
      // divergence theorem: int_T div psi = +-|e|
      const auto psi = eval_rt0_local(g, k, g.centroid());
      EXPECT_NEAR(psi.divergence * g.measure, g.face_signs[k] * g.face_measures[k], 1e-14);
    }
  }
}

TYPED_TEST(FespaceDims, ConstantFluxIsReproduced) {
  constexpr int Dim = TypeParam::value;
  const auto mesh = tagged(test_mesh<Dim>(), BoundaryCondition::gamma_t());
  const auto lay = make_layout(mesh);
  ASSERT_EQ(lay.n_w, mesh.num_faces());
  Vec<Dim> w0;
  for (int k = 0; k < Dim; ++k) w0[k] = 1.0 + k;
  const Eigen::VectorXd w = restrict_flux(lay, interpolate_rt0<Dim>([&](const Vec<Dim>&) { return w0; }, mesh));
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto g = cell_geometry(mesh, c);
    const auto v = eval_flux(g, lay, w, g.to_physical(Bary<Dim>::Constant(1.0 / (Dim + 1))));
    EXPECT_LE((v.value - w0).norm(), 1e-13);
    EXPECT_NEAR(v.divergence, 0.0, 1e-11);
  }
}

TEST(Fespace, ReferenceTriangle) {
  const auto mesh = unit_triangle();
  const auto g = cell_geometry(mesh, 0);
  const auto v = eval_p1_basis(g, Bary<2>(1.0 / 3, 1.0 / 3, 1.0 / 3));
  EXPECT_NEAR(v.values[0], 1.0 / 3, 1e-16);
  EXPECT_LE((v.gradients[0] - Vec<2>(-1, -1)).norm(), 1e-15);
  EXPECT_LE((v.gradients[1] - Vec<2>(1, 0)).norm(), 1e-15);
  EXPECT_LE((v.gradients[2] - Vec<2>(0, 1)).norm(), 1e-15);

  // local face 0 joins vertices 1 and 2
  EXPECT_NEAR(eval_bubble_local(g, 0, Bary<2>(0, 0.5, 0.5)).value, 0.25, 1e-16);
  EXPECT_NEAR(eval_bubble_local(g, 0, Bary<2>(1, 0, 0)).value, 0.0, 1e-16);
  // gradient by central differences
  const Vec<2> x(0.2, 0.3);
  const double hstep = 1e-6;
  const auto b = eval_bubble_local(g, 1, g.to_barycentric(x));
  for (int k = 0; k < 2; ++k) {
    Vec<2> dx = Vec<2>::Zero();
    dx[k] = hstep;
    const double fd = (eval_bubble_local(g, 1, g.to_barycentric(x + dx)).value -
                       eval_bubble_local(g, 1, g.to_barycentric(x - dx)).value) /
                      (2 * hstep);
    EXPECT_NEAR(b.gradient[k], fd, 1e-8);
  }

  const auto rule = quadrature<2>(4);
  double s = 0.0;
  for (std::size_t q = 0; q < rule.size(); ++q)
    s += rule.weights[q] * g.measure * std::pow(eval_bubble_local(g, 2, rule.points[q]).value, 2);
  EXPECT_NEAR(s, g.measure / 90.0, 1e-16);
}

TEST(Fespace, BasisErrors) {
  const auto mesh = build_structured_unit_square(2);
  const auto g = cell_geometry(mesh, 0);
  Index foreign = 0;
  while (g.local_face(foreign) >= 0) ++foreign;
  EXPECT_THROW(eval_bubble(g, foreign, Bary<2>::Constant(1.0 / 3)), std::invalid_argument);
  EXPECT_THROW(eval_rt0_basis(g, foreign, Vec<2>(0.1, 0.1)), std::invalid_argument);
}

TEST(Fespace, LayoutCounts) {
  const auto base = build_structured_unit_square(8);
  EXPECT_THROW(make_layout(base), std::invalid_argument);

  const auto dirichlet = make_layout(tagged(base, BoundaryCondition::full_dirichlet()));
  EXPECT_EQ(dirichlet.n_b, 176);
  EXPECT_EQ(dirichlet.n_l, 98);
  EXPECT_EQ(dirichlet.n_w, 208);
  EXPECT_EQ(dirichlet.n_p, 128);
  EXPECT_EQ(dirichlet.size(), 176 + 98 + 208 + 128);

  const auto clamped = make_layout(tagged(base, BoundaryCondition::gamma_c()));
  EXPECT_EQ(clamped.n_w, 208 - 32);
  const auto traction = make_layout(tagged(base, BoundaryCondition::gamma_t()));
  EXPECT_EQ(traction.n_b, 208);
  EXPECT_EQ(traction.n_l, 162);
  const auto plain = make_layout(tagged(base, BoundaryCondition::gamma_c()), LayoutOptions{false, false});
  EXPECT_EQ(plain.n_b, 0);
  EXPECT_EQ(plain.n_w, 0);

  // dof maps are bijections onto [0, n)
  auto check = [](const std::vector<Index>& map, Index n) {
    std::vector<int> hit(n, 0);
    for (Index i : map)
      if (i != kNoIndex) ++hit[i];
    for (int h : hit) EXPECT_EQ(h, 1);
  };
  check(dirichlet.bubble, dirichlet.n_b);
  check(dirichlet.linear, dirichlet.n_l);
  check(dirichlet.flux, dirichlet.n_w);
  EXPECT_EQ(dirichlet.offset_p(), 176 + 98 + 208);
}

TEST(Fespace, Interpolants) {
  const auto tri = unit_triangle();
  const auto p0 = interpolate_p0<2>([](const Vec<2>& x) { return x[0]; }, tri);
  EXPECT_NEAR(p0[0], 1.0 / 3.0, 1e-15);

  const auto mesh = tagged(build_structured_unit_square(6), BoundaryCondition::gamma_c());
  const auto ones = interpolate_p0<2>([](const Vec<2>&) { return 1.0; }, mesh);
  EXPECT_LE((ones.array() - 1.0).abs().maxCoeff(), 1e-15);
  const auto zm = interpolate_p0<2>([](const Vec<2>& x) { return 0.5 - x[0]; }, mesh);
  double mean = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) mean += mesh.cell_measure(c) * zm[c];
  EXPECT_NEAR(mean, 0.0, 1e-15);

  const VectorField<2> lin = [](const Vec<2>& x) { return Vec<2>(x[0], x[1]); };
  const auto nodal = interpolate_p1<2>(lin, mesh);
  for (Index v = 0; v < mesh.num_vertices(); ++v) EXPECT_EQ(nodal.segment<2>(2 * v), mesh.vertex(v));
  const auto lay = make_layout(mesh);
  const Eigen::VectorXd free = restrict_linear(lay, nodal);
  const Eigen::VectorXd back = expand_linear(lay, free);
  const auto boundary = mesh.boundary_vertex_mask();
  for (Index v = 0; v < mesh.num_vertices(); ++v)
    for (int c = 0; c < 2; ++c) EXPECT_EQ(back[2 * v + c], boundary[v] ? 0.0 : nodal[2 * v + c]);
}

TEST(Fespace, CanonicalBubbleDof) {
  const auto mesh = perturb_interior_vertices(build_structured_unit_square(3), 0.2, 4);
  Index f = 0;
  while (mesh.face(f).is_boundary()) ++f;
  const auto& face = mesh.face(f);
  const auto g = cell_geometry(mesh, face.owner);
  const VectorField<2> phi = [&](const Vec<2>& x) {
    return Vec<2>(eval_bubble(g, f, g.to_barycentric(x)).value * face.normal);
  };
  EXPECT_NEAR(canonical_bubble_dof<2>(phi, mesh, f), 1.0 / 6.0, 1e-14);
  const VectorField<2> affine = [](const Vec<2>& x) { return Vec<2>(1 + 2 * x[0] - x[1], 3 * x[1]); };
  EXPECT_NEAR(canonical_bubble_dof<2>(affine, mesh, f), 0.0, 1e-14);
  // a bubble of another face of the same cell has zero trace on f
  const int other = (g.local_face(f) + 1) % 3;
  const VectorField<2> phi_other = [&](const Vec<2>& x) {
    return Vec<2>(eval_bubble_local(g, other, g.to_barycentric(x)).value * g.face_normals[other]);
  };
  EXPECT_NEAR(canonical_bubble_dof<2>(phi_other, mesh, f), 0.0, 1e-14);
}

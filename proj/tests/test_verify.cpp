#include <gtest/gtest.h>

#include <cmath>

#include "biotfe/verify/norms.hpp"
#include "biotfe/verify/study.hpp"

using namespace biotfe;
using namespace biotfe::verify;

namespace {

constexpr double kStep = 1e-6;

template <class F>
auto central(const F& f, const Vec<2>& x, int axis) {
  Vec<2> e = Vec<2>::Zero();
  e[axis] = kStep;
  return (f(x + e) - f(x - e)) / (2.0 * kStep);
}

Vec<2> laplacian(const GradientField<2>& grad, const Vec<2>& x) {
  Vec<2> out = Vec<2>::Zero();
  for (int axis = 0; axis < 2; ++axis) {
    const Mat<2> d = central(grad, x, axis);
    out += d.col(axis);
  }
  return out;
}

const std::vector<Vec<2>> kProbes = {Vec<2>(0.3, 0.7), Vec<2>(0.123, 0.456), Vec<2>(0.81, 0.05), Vec<2>(0.5, 0.5)};

}  // namespace

TEST(BiotCase, FrozenValues) {
  const auto cs = biot_curl_case(1e-6);
  const Vec<2> a = cs.u(Vec<2>(0.3, 0.7));
  EXPECT_NEAR(a[0], -0.0074088, 1e-15);
  EXPECT_NEAR(a[1], -0.0074088, 1e-15);
  const Vec<2> fa = cs.params.body_force(Vec<2>(0.3, 0.7));
  EXPECT_NEAR(fa[0], -0.29904, 1e-13);
  EXPECT_NEAR(fa[1], -0.29904, 1e-13);
  const Vec<2> b = cs.u(Vec<2>(0.123, 0.456));
  EXPECT_NEAR(b[0], 0.0005080258600977162, 1e-16);
  EXPECT_NEAR(b[1], -0.010009987405758335, 1e-16);
  const Vec<2> fb = cs.params.body_force(Vec<2>(0.123, 0.456));
  EXPECT_NEAR(fb[0], -0.018515929207775984, 1e-14);
  EXPECT_NEAR(fb[1], -0.7156657796920318, 1e-14);
  EXPECT_DOUBLE_EQ(cs.params.conductivity(), 1e-6);
  EXPECT_THROW(biot_curl_case(0.0), std::invalid_argument);
}

TEST(BiotCase, DerivativesAndSources) {
  const auto cs = biot_curl_case(1e-4);
  for (const auto& x : kProbes) {
    const Mat<2> g = cs.grad_u(x);
    for (int axis = 0; axis < 2; ++axis) {
      const Vec<2> d = central(cs.u, x, axis);
      EXPECT_NEAR(d[0], g(0, axis), 1e-8);
      EXPECT_NEAR(d[1], g(1, axis), 1e-8);
    }
    EXPECT_NEAR(g.trace(), 0.0, 1e-15);
    const Vec<2> f = -cs.params.mu * laplacian(cs.grad_u, x);
    EXPECT_LT((f - cs.params.body_force(x)).norm(), 1e-5);
    EXPECT_EQ(cs.p(x), 1.0);
    EXPECT_EQ(cs.w(x).norm(), 0.0);
  }
  for (double t : {0.0, 0.25, 0.6, 1.0}) {
    for (const Vec<2>& x : {Vec<2>(t, 0.0), Vec<2>(t, 1.0), Vec<2>(0.0, t), Vec<2>(1.0, t)})
      EXPECT_NEAR(cs.u(x).norm(), 0.0, 1e-16);
  }
}

TEST(StokesCase, DerivativesAndSources) {
  const double nu = 0.5;
  const auto cs = stokes_trig_case(nu);
  for (const auto& x : kProbes) {
    const Mat<2> g = cs.grad_u(x);
    for (int axis = 0; axis < 2; ++axis) {
      const Vec<2> d = central(cs.u, x, axis);
      EXPECT_NEAR(d[0], g(0, axis), 1e-8);
      EXPECT_NEAR(d[1], g(1, axis), 1e-8);
      EXPECT_NEAR(central(cs.p, x, axis), cs.grad_p(x)[axis], 1e-8);
    }
    EXPECT_NEAR(g.trace(), 0.0, 1e-14);
    // div u = 0, so -2 nu div eps(u) = -nu Laplace(u)
    const Vec<2> f = -nu * laplacian(cs.grad_u, x) + cs.grad_p(x);
    EXPECT_LT((f - cs.force(x)).norm(), 1e-5);
  }
  const auto mesh = build_structured_unit_square(8);
  const Eigen::VectorXd pbar = interpolate_p0<2>(cs.p, mesh);
  double mean = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) mean += mesh.cell_measure(c) * pbar[c];
  EXPECT_NEAR(mean, 0.0, 1e-15);
  EXPECT_THROW(stokes_trig_case(-1.0), std::invalid_argument);
}

TEST(Norms, InterpolantsHaveZeroError) {
  const auto cs = biot_curl_case(1e-4);
  const auto mesh = classify_boundary(build_structured_unit_square(6), cs.boundary);
  const auto lay = make_layout(mesh);
  const auto blocks = assemble_biot_blocks(mesh, cs.params, lay);
  const Eigen::VectorXd pi1 = restrict_linear(lay, interpolate_p1<2>(cs.u, mesh));
  const Eigen::VectorXd zb = Eigen::VectorXd::Zero(lay.n_b);
  for (auto mode : {EnergyMode::linear_part, EnergyMode::full})
    EXPECT_EQ(energy_norm_error(blocks.a_bb, blocks.a_bl, blocks.a_ll, pi1, zb, pi1, mode), 0.0);
  const Eigen::VectorXd ub = Eigen::VectorXd::Constant(lay.n_b, 1e-3);
  EXPECT_EQ(energy_norm_error(blocks.a_bb, blocks.a_bl, blocks.a_ll, pi1, ub, pi1, EnergyMode::linear_part), 0.0);
  EXPECT_NEAR(energy_norm_error(blocks.a_bb, blocks.a_bl, blocks.a_ll, pi1, ub, pi1, EnergyMode::full),
              std::sqrt(ub.dot(blocks.a_bb * ub)), 1e-15);

  const ScalarField<2> p = [](const Vec<2>& x) { return std::sin(3.0 * x[0]) + x[1]; };
  const Eigen::VectorXd pbar = interpolate_p0<2>(p, mesh, data_quadrature_degree<2>());
  EXPECT_NEAR(l2_pressure_error<2>(p, pbar, mesh), 0.0, 1e-15);
  EXPECT_NEAR(l2_pressure_error<2>(p, (pbar.array() + 0.25).matrix(), mesh), 0.25, 1e-14);
  EXPECT_THROW(l2_pressure_error<2>(p, Eigen::VectorXd::Zero(3), mesh), std::invalid_argument);

  const VectorField<2> w = [](const Vec<2>& x) { return Vec<2>(1.0 + x[0], 2.0 + x[1]); };
  const Eigen::VectorXd wh = restrict_flux(lay, interpolate_rt0<2>(w, mesh));
  const auto fe = flux_error<2>(w, [](const Vec<2>&) { return 2.0; }, wh, mesh, lay);
  EXPECT_NEAR(fe.l2, 0.0, 1e-13);
  EXPECT_NEAR(fe.div_l2, 0.0, 1e-13);
}

TEST(Norms, ExactFieldIntegrals) {
  const auto mesh = perturb_interior_vertices(build_structured_unit_square(5), 0.2, 4);
  const auto lay = make_layout(classify_boundary(mesh, BoundarySpec<2>::everywhere(BoundaryCondition::gamma_c())));
  const auto grad = [](const Vec<2>&) { return Mat<2>(Mat<2>::Identity()); };
  const double e = energy_error_exact<2>(grad, Eigen::VectorXd::Zero(lay.n_b), Eigen::VectorXd::Zero(lay.n_l), mesh,
                                         lay, 1.0, 2.0);
  // 2 mu |I|^2 + lambda (tr I)^2 = 4 + 8
  EXPECT_NEAR(e, std::sqrt(12.0), 1e-13);
  const ScalarField<2> p = [](const Vec<2>& x) { return 0.5 - x[0]; };
  EXPECT_NEAR(l2_pressure_error_exact<2>(p, Eigen::VectorXd::Zero(mesh.num_cells()), mesh), std::sqrt(1.0 / 12.0),
              1e-14);
}

TEST(Rates, ObservedAndFitted) {
  const std::vector<double> h = {0.5, 0.25, 0.125, 0.0625};
  std::vector<double> e;
  for (double x : h) e.push_back(3.0 * std::pow(x, 1.5));
  const auto r = observed_rates(e, h);
  EXPECT_TRUE(std::isnan(r[0]));
  for (std::size_t k = 1; k < r.size(); ++k) EXPECT_NEAR(r[k], 1.5, 1e-13);
  EXPECT_NEAR(fitted_slope(h, e), 1.5, 1e-13);
  e[2] = 0.0;
  const auto holes = observed_rates(e, h);
  EXPECT_TRUE(std::isnan(holes[2]));
  EXPECT_TRUE(std::isnan(holes[3]));
  EXPECT_THROW(observed_rates(e, {1.0}), std::invalid_argument);

  std::vector<ExperimentRow> rows(3);
  for (int k = 0; k < 3; ++k) {
    rows[k].h = h[k];
    rows[k].err_u_energy = h[k];
    rows[k].err_p_l2 = h[k] * h[k];
  }
  rows[1].status = "failed";
  fill_rates(rows);
  EXPECT_TRUE(std::isnan(rows[1].rate_u));
  EXPECT_TRUE(std::isnan(rows[2].rate_p));
  rows[1].status = "ok";
  fill_rates(rows);
  EXPECT_NEAR(rows[2].rate_u, 1.0, 1e-14);
  EXPECT_NEAR(rows[2].rate_p, 2.0, 1e-14);
}

TEST(Study, SchemeNames) {
  for (auto s : {BiotScheme::P1, BiotScheme::A, BiotScheme::AD, BiotScheme::ADc})
    EXPECT_EQ(parse_biot_scheme(to_string(s)), s);
  for (auto s : {StokesScheme::AS, StokesScheme::ASD, StokesScheme::ASDc})
    EXPECT_EQ(parse_stokes_scheme(to_string(s)), s);
  EXPECT_THROW(parse_biot_scheme("B"), std::invalid_argument);
  EXPECT_EQ(parse_energy_mode("full"), EnergyMode::full);
  EXPECT_THROW(parse_energy_mode("bubble"), std::invalid_argument);
}

TEST(Study, BiotRows) {
  const auto cs = biot_curl_case(1e-4);
  const auto mesh = build_structured_unit_square(8);
  Index matrix_rows = 0;
  BiotRunOptions opt;
  opt.matrix_sink = [&](const SparseMatrix& m) { matrix_rows = m.rows(); };
  const auto a = run_biot(cs, mesh, BiotScheme::A, opt);
  EXPECT_EQ(a.dofs, 176 + 98 + 208 + 128);
  EXPECT_EQ(matrix_rows, a.dofs);
  EXPECT_LE(a.residual, 1e-9);
  EXPECT_NEAR(a.h, std::sqrt(2.0) / 8.0, 1e-15);
  EXPECT_DOUBLE_EQ(a.kappa, 1e-4);
  EXPECT_EQ(a.err_u_energy, a.err_u_linear);
  EXPECT_GT(a.err_u_energy, 0.0);
  EXPECT_GT(a.err_p_l2, 0.0);

  const auto p1 = run_biot(cs, mesh, BiotScheme::P1);
  EXPECT_EQ(p1.dofs, 98 + 208 + 128);
  const auto ad = run_biot(cs, mesh, BiotScheme::AD);
  const auto adc = run_biot(cs, mesh, BiotScheme::ADc);
  EXPECT_NEAR(ad.err_u_energy, adc.err_u_energy, 1e-8 * ad.err_u_energy);
  EXPECT_NEAR(ad.err_p_l2, adc.err_p_l2, 1e-8 * ad.err_p_l2);
  EXPECT_NEAR(ad.err_w_l2, adc.err_w_l2, 1e-8 * ad.err_w_l2 + 1e-14);
}

TEST(Study, EnrichedAndDiagonalConvergeAlike) {
  for (double k : {1e-4, 1e-10}) {
    const auto cs = biot_curl_case(k);
    std::vector<double> h, ua, ud, pa, pd;
    for (Index n : {8, 16, 32, 64}) {
      const auto mesh = build_structured_unit_square(n);
      const auto a = run_biot(cs, mesh, BiotScheme::A);
      const auto ad = run_biot(cs, mesh, BiotScheme::AD);
      h.push_back(a.h);
      ua.push_back(a.err_u_energy);
      ud.push_back(ad.err_u_energy);
      pa.push_back(a.err_p_l2);
      pd.push_back(ad.err_p_l2);
    }
    EXPECT_NEAR(fitted_slope(h, pa), fitted_slope(h, pd), 0.1) << "kappa " << k;
    if (k >= 1e-4) {
      EXPECT_NEAR(fitted_slope(h, ua), fitted_slope(h, ud), 0.1);
    }
  }
}

TEST(Study, StokesRows) {
  const auto cs = stokes_trig_case(1.0);
  const auto mesh = build_structured_unit_square(8);
  const auto as = run_stokes(cs, mesh, StokesScheme::AS);
  const auto asd = run_stokes(cs, mesh, StokesScheme::ASD);
  const auto asdc = run_stokes(cs, mesh, StokesScheme::ASDc);
  EXPECT_EQ(as.err_u_energy, as.err_u_full);
  EXPECT_NEAR(asd.err_u_energy, asdc.err_u_energy, 1e-8 * asd.err_u_energy);
  EXPECT_NEAR(asd.err_p_l2, asdc.err_p_l2, 1e-8 * asd.err_p_l2);
  EXPECT_GT(as.err_p_l2, 0.0);
  const auto sol = solve_stokes_case(cs, mesh, StokesScheme::AS);
  EXPECT_NEAR(sol.blocks->mean_weights.dot(sol.p), 0.0, 1e-13);
}

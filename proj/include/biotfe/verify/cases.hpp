// Manufactured solutions for the Biot and Stokes experiments.

#ifndef BIOTFE_VERIFY_CASES_HPP
#define BIOTFE_VERIFY_CASES_HPP

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>

#include "biotfe/material.hpp"
#include "biotfe/mesh.hpp"

namespace biotfe::verify {

template <int Dim>
using GradientField = std::function<Mat<Dim>(const Vec<Dim>&)>;

/// Exact fields with gradients, the derived data and the boundary tagging.
template <int Dim>
struct ManufacturedCase {
  std::string name;
  VectorField<Dim> u;
  GradientField<Dim> grad_u;  // row a: gradient of u_a
  VectorField<Dim> w;
  ScalarField<Dim> div_w;
  ScalarField<Dim> p;
  VectorField<Dim> grad_p;
  MaterialParams<Dim> params;
  BoundarySpec<Dim> boundary;
};

/// u = curl [x y (1-x) (1-y)]^2, p = 1, w = 0 with lambda = 2, mu = 1, mu_f = 1,
/// alpha = 1, M = 1e6 and K = k I; u = 0 and p = 1 on the whole boundary.
inline ManufacturedCase<2> biot_curl_case(double k) {
  if (!(k > 0.0)) throw std::invalid_argument("permeability must be positive");
  ManufacturedCase<2> c;
  c.name = "biot-curl";
  c.u = [](const Vec<2>& z) {
    const double x = z[0], y = z[1];
    return Vec<2>(2 * x * x * y * (x - 1) * (x - 1) * (y - 1) * (2 * y - 1),
                  -2 * x * y * y * (x - 1) * (2 * x - 1) * (y - 1) * (y - 1));
  };
  c.grad_u = [](const Vec<2>& z) {
    const double x = z[0], y = z[1];
    const double s = 4 * x * y * (x - 1) * (2 * x - 1) * (y - 1) * (2 * y - 1);
    Mat<2> g;
    g << s, 2 * x * x * (x - 1) * (x - 1) * (6 * y * y - 6 * y + 1),
        -2 * y * y * (y - 1) * (y - 1) * (6 * x * x - 6 * x + 1), -s;
    return g;
  };
  c.w = [](const Vec<2>&) { return Vec<2>::Zero(); };
  c.div_w = [](const Vec<2>&) { return 0.0; };
  c.p = [](const Vec<2>&) { return 1.0; };
  c.grad_p = [](const Vec<2>&) { return Vec<2>::Zero(); };

  auto& m = c.params;
  m.lambda = 2.0;
  m.mu = 1.0;
  m.alpha = 1.0;
  m.biot_modulus = 1e6;
  m.fluid_viscosity = 1.0;
  m.set_scalar_permeability(k);
  const double mu = m.mu;
  // rho g = -mu Laplace(u), since div u = 0 and p is constant.
  m.body_force = [mu](const Vec<2>& z) {
    const double x = z[0], y = z[1];
    const double f0 = -4 * (2 * y - 1) *
                      (3 * std::pow(x, 4) - 6 * x * x * x + 6 * x * x * y * y - 6 * x * x * y + 3 * x * x -
                       6 * x * y * y + 6 * x * y + y * y - y);
    const double f1 = 4 * (2 * x - 1) *
                      (6 * x * x * y * y - 6 * x * x * y + x * x - 6 * x * y * y + 6 * x * y - x + 3 * std::pow(y, 4) -
                       6 * y * y * y + 3 * y * y);
    return Vec<2>(mu * f0, mu * f1);
  };
  m.fluid_body_force = nullptr;
  m.source = nullptr;
  m.boundary_pressure = [](const Vec<2>&) { return 1.0; };
  c.boundary = BoundarySpec<2>::everywhere(BoundaryCondition::full_dirichlet());
  return c;
}

/// Stokes data: u, grad u, p and f = -2 nu div eps(u) + grad p.
struct StokesCase {
  std::string name;
  double viscosity = 1.0;
  VectorField<2> u;
  GradientField<2> grad_u;
  ScalarField<2> p;
  VectorField<2> grad_p;
  VectorField<2> force;
};

/// u = (sin(pi x) cos(pi y), -cos(pi x) sin(pi y)), p = 0.5 - x.
inline StokesCase stokes_trig_case(double nu) {
  if (!(nu > 0.0)) throw std::invalid_argument("viscosity must be positive");
  constexpr double pi = std::numbers::pi;
  StokesCase c;
  c.name = "stokes-trig";
  c.viscosity = nu;
  c.u = [](const Vec<2>& z) {
    return Vec<2>(std::sin(pi * z[0]) * std::cos(pi * z[1]), -std::cos(pi * z[0]) * std::sin(pi * z[1]));
  };
  c.grad_u = [](const Vec<2>& z) {
    const double cx = std::cos(pi * z[0]), sx = std::sin(pi * z[0]);
    const double cy = std::cos(pi * z[1]), sy = std::sin(pi * z[1]);
    Mat<2> g;
    g << pi * cx * cy, -pi * sx * sy, pi * sx * sy, -pi * cx * cy;
    return g;
  };
  c.p = [](const Vec<2>& z) { return 0.5 - z[0]; };
  c.grad_p = [](const Vec<2>&) { return Vec<2>(-1.0, 0.0); };
  auto u = c.u;
  c.force = [u, nu](const Vec<2>& z) { return Vec<2>(2 * nu * pi * pi * u(z) + Vec<2>(-1.0, 0.0)); };
  return c;
}

}  // namespace biotfe::verify

#endif  // BIOTFE_VERIFY_CASES_HPP

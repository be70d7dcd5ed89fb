// Material coefficients and data of the Biot and Stokes problems.

#ifndef BIOTFE_MATERIAL_HPP
#define BIOTFE_MATERIAL_HPP

#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "biotfe/interpolation.hpp"

namespace biotfe {

template <int Dim>
struct MaterialParams {
  double lambda = 2.0;
  double mu = 1.0;
  /// Biot-Willis constant.
  double alpha = 1.0;
  /// Biot modulus M; +infinity gives an incompressible fluid (M_p = 0).
  double biot_modulus = 1e6;
  /// Permeability tensor K (SPD).
  Mat<Dim> permeability = Mat<Dim>::Identity();
  double fluid_viscosity = 1.0;
  /// Viscosity of the Stokes problem.
  double stokes_viscosity = 1.0;

  /// rho g, rho_f g, f and the boundary pressure; null means zero.
  VectorField<Dim> body_force;
  VectorField<Dim> fluid_body_force;
  ScalarField<Dim> source;
  ScalarField<Dim> boundary_pressure;

  double inverse_biot_modulus() const { return std::isinf(biot_modulus) ? 0.0 : 1.0 / biot_modulus; }

  void set_scalar_permeability(double k) { permeability = k * Mat<Dim>::Identity(); }

  /// Hydraulic conductivity kappa = k / mu_f for scalar permeability.
  double conductivity() const { return permeability(0, 0) / fluid_viscosity; }

  void validate() const {
    if (!(mu > 0.0)) throw std::invalid_argument("material: mu must be positive");
    if (!(lambda >= 0.0)) throw std::invalid_argument("material: lambda must be non-negative");
    if (!(biot_modulus > 0.0)) throw std::invalid_argument("material: Biot modulus must be positive");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw std::invalid_argument("material: alpha must lie in [0, 1]");
    if (!(fluid_viscosity > 0.0)) throw std::invalid_argument("material: fluid viscosity must be positive");
    if (!(stokes_viscosity > 0.0)) throw std::invalid_argument("material: Stokes viscosity must be positive");
    if ((permeability - permeability.transpose()).norm() > 1e-12 * permeability.norm())
      throw std::invalid_argument("material: permeability must be symmetric");
    Eigen::SelfAdjointEigenSolver<Mat<Dim>> es(permeability);
    if (!(es.eigenvalues().minCoeff() > 0.0)) throw std::invalid_argument("material: singular permeability");
  }
};

}  // namespace biotfe

#endif  // BIOTFE_MATERIAL_HPP

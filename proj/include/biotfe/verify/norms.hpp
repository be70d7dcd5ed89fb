// Discrete error norms and observed convergence rates.

#ifndef BIOTFE_VERIFY_NORMS_HPP
#define BIOTFE_VERIFY_NORMS_HPP

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "biotfe/geometry.hpp"
#include "biotfe/interpolation.hpp"
#include "biotfe/quadrature.hpp"
#include "biotfe/sparse.hpp"

namespace biotfe::verify {

/// Quadratic form of the enriched displacement matrix [B_bb A_bl; A_bl^T A_ll].
inline double displacement_energy(const SparseMatrix& bubble_block, const SparseMatrix& a_bl, const SparseMatrix& a_ll,
                                  const Eigen::VectorXd& eb, const Eigen::VectorXd& el) {
  double s = el.dot(a_ll * el);
  if (eb.size() > 0) s += eb.dot(bubble_block * eb) + 2.0 * eb.dot(a_bl * el);
  return s;
}

enum class EnergyMode {
  linear_part,  // (Pi_1 u - u_h) with the bubble part of u_h dropped
  full,         // the whole enriched difference, bubble part included
};

inline EnergyMode parse_energy_mode(const std::string& s) {
  if (s == "linear") return EnergyMode::linear_part;
  if (s == "full") return EnergyMode::full;
  throw std::invalid_argument("unknown energy mode '" + s + "' (expected linear or full)");
}

inline std::string to_string(EnergyMode m) { return m == EnergyMode::full ? "full" : "linear"; }

/// sqrt of the form on Pi_1 u - u_h. `pi1_free` is Pi_1 u restricted to the
/// free U_l dofs. The form is picked by `bubble_block` (A_bb for a, D_bb for a^D).
inline double energy_norm_error(const SparseMatrix& bubble_block, const SparseMatrix& a_bl, const SparseMatrix& a_ll,
                                const Eigen::VectorXd& pi1_free, const Eigen::VectorXd& ub, const Eigen::VectorXd& ul,
                                EnergyMode mode) {
  const Eigen::VectorXd el = pi1_free - ul;
  const Eigen::VectorXd eb = mode == EnergyMode::full ? Eigen::VectorXd(-ub) : Eigen::VectorXd::Zero(ub.size());
  return std::sqrt(std::max(displacement_energy(bubble_block, a_bl, a_ll, eb, el), 0.0));
}

/// ||Pi_0 p - P||_{L2} = sqrt(sum_T |T| (pbar_T - P_T)^2).
template <int Dim>
double l2_pressure_error(const ScalarField<Dim>& p_exact, const Eigen::VectorXd& p, const Mesh<Dim>& mesh) {
  if (p.size() != mesh.num_cells()) throw std::invalid_argument("pressure vector does not match the mesh");
  const Eigen::VectorXd pbar = interpolate_p0<Dim>(p_exact, mesh, data_quadrature_degree<Dim>());
  double s = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) s += mesh.cell_measure(c) * std::pow(pbar[c] - p[c], 2);
  return std::sqrt(s);
}

struct FluxError {
  double l2 = 0.0;
  double div_l2 = 0.0;
};

/// ||w - w_h|| and ||div(w - w_h)|| by quadrature against the RT0 expansion.
template <int Dim>
FluxError flux_error(const VectorField<Dim>& w_exact, const ScalarField<Dim>& div_w_exact, const Eigen::VectorXd& w,
                     const Mesh<Dim>& mesh, const DofLayout& layout) {
  const auto rule = quadrature<Dim>(data_quadrature_degree<Dim>());
  FluxError out;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const Vec<Dim> x = geom.to_physical(rule.points[q]);
      const auto wh = eval_flux(geom, layout, w, x);
      const double wq = rule.weights[q] * geom.measure;
      out.l2 += wq * (w_exact(x) - wh.value).squaredNorm();
      const double dw = div_w_exact ? div_w_exact(x) : 0.0;
      out.div_l2 += wq * std::pow(dw - wh.divergence, 2);
    }
  }
  out.l2 = std::sqrt(out.l2);
  out.div_l2 = std::sqrt(out.div_l2);
  return out;
}

/// sqrt(2 mu ||eps(u - u_h)||^2 + lambda ||div(u - u_h)||^2) by quadrature,
/// against the exact field rather than its interpolant.
template <int Dim>
double energy_error_exact(const std::function<Mat<Dim>(const Vec<Dim>&)>& grad_u, const Eigen::VectorXd& ub,
                          const Eigen::VectorXd& ul, const Mesh<Dim>& mesh, const DofLayout& layout, double mu,
                          double lambda) {
  const auto rule = quadrature<Dim>(data_quadrature_degree<Dim>());
  double s = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    for (std::size_t q = 0; q < rule.size(); ++q) {
      const auto uh = eval_displacement(geom, mesh, layout, ub, ul, rule.points[q]);
      const Mat<Dim> g = grad_u(geom.to_physical(rule.points[q])) - uh.gradient;
      const Mat<Dim> e = 0.5 * (g + g.transpose());
      s += rule.weights[q] * geom.measure * (2.0 * mu * e.squaredNorm() + lambda * g.trace() * g.trace());
    }
  }
  return std::sqrt(s);
}

/// ||p - p_h||_{L2} against the exact pressure.
template <int Dim>
double l2_pressure_error_exact(const ScalarField<Dim>& p_exact, const Eigen::VectorXd& p, const Mesh<Dim>& mesh) {
  const auto rule = quadrature<Dim>(data_quadrature_degree<Dim>());
  double s = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) {
    const auto geom = cell_geometry(mesh, c);
    for (std::size_t q = 0; q < rule.size(); ++q)
      s += rule.weights[q] * geom.measure * std::pow(p_exact(geom.to_physical(rule.points[q])) - p[c], 2);
  }
  return std::sqrt(s);
}

/// log2(e_{k-1} / e_k) for successive halvings of h; NaN in the first slot and
/// wherever an error is not positive.
inline std::vector<double> observed_rates(const std::vector<double>& errors, const std::vector<double>& h) {
  if (errors.size() != h.size()) throw std::invalid_argument("rates: size mismatch");
  std::vector<double> r(errors.size(), std::numeric_limits<double>::quiet_NaN());
  for (std::size_t k = 1; k < errors.size(); ++k)
    if (errors[k] > 0.0 && errors[k - 1] > 0.0 && h[k] > 0.0 && h[k - 1] > 0.0 && h[k] != h[k - 1])
      r[k] = std::log(errors[k - 1] / errors[k]) / std::log(h[k - 1] / h[k]);
  return r;
}

/// Least-squares slope of log(e) against log(h).
inline double fitted_slope(const std::vector<double>& h, const std::vector<double>& e) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t i = 0; i < h.size(); ++i) {
    if (!(h[i] > 0.0 && e[i] > 0.0)) continue;
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::quiet_NaN();
  const double den = n * sxx - sx * sx;
  return den == 0.0 ? std::numeric_limits<double>::quiet_NaN() : (n * sxy - sx * sy) / den;
}

}  // namespace biotfe::verify

#endif  // BIOTFE_VERIFY_NORMS_HPP

// Single-mesh runs of the manufactured problems and convergence studies.

#ifndef BIOTFE_VERIFY_STUDY_HPP
#define BIOTFE_VERIFY_STUDY_HPP

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "biotfe/stokes.hpp"
#include "biotfe/timestep.hpp"
#include "biotfe/verify/cases.hpp"
#include "biotfe/verify/diagnostics.hpp"
#include "biotfe/verify/norms.hpp"

namespace biotfe::verify {

/// P1: unenriched P1-RT0-P0; A: enriched; AD: diagonal bubble block;
/// ADc: AD solved through the condensed system.
enum class BiotScheme { P1, A, AD, ADc };

inline BiotScheme parse_biot_scheme(const std::string& s) {
  if (s == "P1") return BiotScheme::P1;
  if (s == "A") return BiotScheme::A;
  if (s == "AD") return BiotScheme::AD;
  if (s == "ADc") return BiotScheme::ADc;
  throw std::invalid_argument("unknown Biot scheme '" + s + "' (expected P1, A, AD or ADc)");
}

inline std::string to_string(BiotScheme s) {
  switch (s) {
    case BiotScheme::P1: return "P1";
    case BiotScheme::A: return "A";
    case BiotScheme::AD: return "AD";
    case BiotScheme::ADc: return "ADc";
  }
  return "?";
}

/// AS: enriched Stokes; ASD: diagonal bubble block; ASDc: condensed ASD.
enum class StokesScheme { AS, ASD, ASDc };

inline StokesScheme parse_stokes_scheme(const std::string& s) {
  if (s == "AS") return StokesScheme::AS;
  if (s == "ASD") return StokesScheme::ASD;
  if (s == "ASDc") return StokesScheme::ASDc;
  throw std::invalid_argument("unknown Stokes scheme '" + s + "' (expected AS, ASD or ASDc)");
}

inline std::string to_string(StokesScheme s) {
  switch (s) {
    case StokesScheme::AS: return "AS";
    case StokesScheme::ASD: return "ASD";
    case StokesScheme::ASDc: return "ASDc";
  }
  return "?";
}

struct BiotRunOptions {
  double tau = 1.0;
  Index steps = 1;
  InitialMode initial = InitialMode::interpolate_exact;
  EnergyMode energy = EnergyMode::linear_part;
  /// Receives the assembled monolithic matrix before the solve.
  std::function<void(const SparseMatrix&)> matrix_sink;
  /// Receives the final state.
  std::function<void(const BiotState&)> state_sink;
};

/// One row of an experiment table.
struct ExperimentRow {
  std::string experiment;
  std::string scheme;
  double kappa = std::numeric_limits<double>::quiet_NaN();
  Index n = 0;
  double h = 0.0;
  double err_u_energy = std::numeric_limits<double>::quiet_NaN();
  double err_u_linear = std::numeric_limits<double>::quiet_NaN();
  double err_u_full = std::numeric_limits<double>::quiet_NaN();
  double err_p_l2 = std::numeric_limits<double>::quiet_NaN();
  double err_w_l2 = std::numeric_limits<double>::quiet_NaN();
  double rate_u = std::numeric_limits<double>::quiet_NaN();
  double rate_p = std::numeric_limits<double>::quiet_NaN();
  double gamma_h = std::numeric_limits<double>::quiet_NaN();
  double eta = std::numeric_limits<double>::quiet_NaN();
  std::string status = "ok";
  Index dofs = 0;
  double residual = std::numeric_limits<double>::quiet_NaN();
};

inline double max_cell_diameter(const auto& mesh) {
  double h = 0.0;
  for (Index c = 0; c < mesh.num_cells(); ++c) h = std::max(h, mesh.cell_diameter(c));
  return h;
}

/// Solves the Biot case on `mesh` and measures ||Pi_1 u - u_h||_a (a^D for the
/// diagonal schemes), ||Pi_0 p - p_h|| and ||w - w_h||.
inline ExperimentRow run_biot(const ManufacturedCase<2>& cs, const Mesh<2>& mesh, BiotScheme scheme,
                              const BiotRunOptions& opt = {}) {
  ExperimentRow row;
  row.scheme = to_string(scheme);
  row.kappa = cs.params.conductivity();
  row.h = max_cell_diameter(mesh);
  const Mesh<2> tagged = classify_boundary(mesh, cs.boundary);
  const DofLayout layout = make_layout(tagged, LayoutOptions{scheme != BiotScheme::P1, true});
  auto blocks = std::make_shared<BiotBlocks>(assemble_biot_blocks(tagged, cs.params, layout));
  const bool diagonal = scheme == BiotScheme::AD || scheme == BiotScheme::ADc;
  BlockSystem system = build_biot_system(blocks, diagonal ? BiotVariant::diagonal : BiotVariant::enriched, opt.tau);
  row.dofs = layout.size();
  if (opt.matrix_sink) opt.matrix_sink(system.matrix);
  const BiotStepper stepper(std::move(system), scheme == BiotScheme::ADc ? SolvePath::condensed : SolvePath::monolithic);
  BiotState state = initial_state<2>(tagged, layout, opt.initial, cs.u, cs.p);
  double worst = 0.0;
  for (Index m = 0; m < opt.steps; ++m) {
    state = stepper.step(state);
    worst = std::max(worst, stepper.last_residual());
  }
  row.residual = worst;
  if (opt.state_sink) opt.state_sink(state);
  const Eigen::VectorXd pi1 = restrict_linear(layout, interpolate_p1<2>(cs.u, tagged));
  const SparseMatrix& bubble = diagonal ? blocks->d_bb : blocks->a_bb;
  row.err_u_linear =
      energy_norm_error(bubble, blocks->a_bl, blocks->a_ll, pi1, state.ub, state.ul, EnergyMode::linear_part);
  row.err_u_full = energy_norm_error(bubble, blocks->a_bl, blocks->a_ll, pi1, state.ub, state.ul, EnergyMode::full);
  row.err_u_energy = opt.energy == EnergyMode::full ? row.err_u_full : row.err_u_linear;
  row.err_p_l2 = l2_pressure_error<2>(cs.p, state.p, tagged);
  row.err_w_l2 = flux_error<2>(cs.w, cs.div_w, state.w, tagged, layout).l2;
  return row;
}

struct StokesSolution {
  std::shared_ptr<const StokesBlocks> blocks;
  Mesh<2> mesh;
  Eigen::VectorXd ub, ul, p;
};

inline StokesSolution solve_stokes_case(const StokesCase& cs, const Mesh<2>& mesh, StokesScheme scheme,
                                        const std::function<void(const SparseMatrix&)>& matrix_sink = {}) {
  StokesSolution out{assemble_stokes_blocks<2>(mesh, cs.viscosity, cs.force, true, cs.u),
                     classify_boundary(mesh, BoundarySpec<2>::everywhere(BoundaryCondition::gamma_c())),
                     {},
                     {},
                     {}};
  const auto& lay = out.blocks->layout;
  const StokesSystem sys =
      assemble_stokes(out.blocks, scheme == StokesScheme::AS ? StokesVariant::enriched : StokesVariant::diagonal);
  if (matrix_sink) matrix_sink(sys.matrix);
  Eigen::VectorXd x;
  if (scheme == StokesScheme::ASDc) {
    x = solve_stokes_condensed(sys);
  } else {
    x = solve_stokes(sys);
  }
  out.ub = x.segment(0, lay.n_b);
  out.ul = x.segment(lay.n_b, lay.n_l);
  out.p = x.segment(lay.n_b + lay.n_l, lay.n_p);
  return out;
}

/// Velocity error in the scheme's own form (a^S or a^{S,D}) on Pi_1 u - u_h
/// and ||Pi_0 p - p_h||.
inline ExperimentRow run_stokes(const StokesCase& cs, const Mesh<2>& mesh, StokesScheme scheme,
                                EnergyMode energy = EnergyMode::full,
                                const std::function<void(const SparseMatrix&)>& matrix_sink = {}) {
  ExperimentRow row;
  row.scheme = to_string(scheme);
  row.h = max_cell_diameter(mesh);
  const StokesSolution sol = solve_stokes_case(cs, mesh, scheme, matrix_sink);
  const auto& b = *sol.blocks;
  row.dofs = b.layout.n_b + b.layout.n_l + b.layout.n_p + 1;
  const Eigen::VectorXd pi1 = restrict_linear(b.layout, interpolate_p1<2>(cs.u, sol.mesh));
  const SparseMatrix& bubble = scheme == StokesScheme::AS ? b.a_bb : b.d_bb;
  row.err_u_linear = energy_norm_error(bubble, b.a_bl, b.a_ll, pi1, sol.ub, sol.ul, EnergyMode::linear_part);
  row.err_u_full = energy_norm_error(bubble, b.a_bl, b.a_ll, pi1, sol.ub, sol.ul, EnergyMode::full);
  row.err_u_energy = energy == EnergyMode::full ? row.err_u_full : row.err_u_linear;
  row.err_p_l2 = l2_pressure_error<2>(cs.p, sol.p, sol.mesh);
  return row;
}

/// Fills rate_u and rate_p from consecutive rows (ordered by refinement).
inline void fill_rates(std::vector<ExperimentRow>& rows) {
  std::vector<double> h, eu, ep;
  for (const auto& r : rows) {
    h.push_back(r.h);
    eu.push_back(r.status == "ok" ? r.err_u_energy : std::numeric_limits<double>::quiet_NaN());
    ep.push_back(r.status == "ok" ? r.err_p_l2 : std::numeric_limits<double>::quiet_NaN());
  }
  const auto ru = observed_rates(eu, h);
  const auto rp = observed_rates(ep, h);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    rows[k].rate_u = ru[k];
    rows[k].rate_p = rp[k];
  }
}

}  // namespace biotfe::verify

#endif  // BIOTFE_VERIFY_STUDY_HPP

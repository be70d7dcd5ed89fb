// Backward-Euler driver for the three-field Biot system.

#ifndef BIOTFE_TIMESTEP_HPP
#define BIOTFE_TIMESTEP_HPP

#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>

#include "biotfe/biot_system.hpp"
#include "biotfe/solver.hpp"

namespace biotfe {

enum class InitialMode {
  zero_storage,          // u^0 = 0, p^0 = 0
  interpolate_exact,     // u^0 = Pi_1 u, p^0 = Pi_0 p
  interpolate_pressure,  // u^0 = 0, p^0 = Pi_0 p
};

inline InitialMode parse_initial_mode(const std::string& s) {
  if (s == "zero-storage") return InitialMode::zero_storage;
  if (s == "interpolate-exact") return InitialMode::interpolate_exact;
  if (s == "interpolate-pressure") return InitialMode::interpolate_pressure;
  throw std::invalid_argument("unknown initial mode '" + s + "'");
}

inline std::string to_string(InitialMode m) {
  switch (m) {
    case InitialMode::zero_storage: return "zero-storage";
    case InitialMode::interpolate_exact: return "interpolate-exact";
    case InitialMode::interpolate_pressure: return "interpolate-pressure";
  }
  return "?";
}

template <int Dim>
BiotState initial_state(const Mesh<Dim>& mesh, const DofLayout& layout, InitialMode mode,
                        const VectorField<Dim>& u_exact = {}, const ScalarField<Dim>& p_exact = {}) {
  BiotState s = BiotState::zeros(layout);
  if (mode == InitialMode::interpolate_exact && u_exact)
    s.ul = restrict_linear(layout, interpolate_p1<Dim>(u_exact, mesh));
  if (mode != InitialMode::zero_storage && p_exact)
    s.p = interpolate_p0<Dim>(p_exact, mesh, data_quadrature_degree<Dim>());
  return s;
}

/// (1/M) P + alpha div U per cell, integrated: the discrete storage functional.
inline Eigen::VectorXd storage_functional(const BiotBlocks& blocks, const BiotState& s) {
  return blocks.m_p * s.p - SparseMatrix(blocks.g_b.transpose()) * s.ub - SparseMatrix(blocks.g_l.transpose()) * s.ul;
}

enum class SolvePath {
  monolithic,  // factor the full system
  condensed,   // diagonal variant only: eliminate bubbles, solve, recover
};

class StepError : public std::runtime_error {
 public:
  StepError(Index step, const std::string& what)
      : std::runtime_error("time step " + std::to_string(step) + ": " + what), step_(step) {}
  Index step() const { return step_; }

 private:
  Index step_;
};

/// Factors the step matrix once and advances states with constant tau.
class BiotStepper {
 public:
  BiotStepper(BlockSystem system, SolvePath path) : system_(std::move(system)), path_(path) {
    if (path_ == SolvePath::condensed) {
      condensation_.emplace(condense_bubbles(system_));
      solver_.emplace(condensation_->matrix());
    } else {
      solver_.emplace(system_.matrix);
    }
  }

  const BlockSystem& system() const { return system_; }
  SolvePath path() const { return path_; }
  const std::optional<DiagonalCondensation>& condensation() const { return condensation_; }

  BiotState step(const BiotState& previous) const {
    const Index m = previous.step + 1;
    try {
      const Eigen::VectorXd rhs = system_.rhs(previous);
      Eigen::VectorXd x;
      if (path_ == SolvePath::condensed) {
        const Eigen::VectorXd reduced = solver_->solve(condensation_->condense_rhs(rhs));
        x = condensation_->expand(rhs, reduced);
      } else {
        x = solver_->solve(rhs);
      }
      BiotState next = BiotState::unstack(system_.layout(), x);
      next.step = m;
      next.time = previous.time + system_.tau;
      last_residual_ = relative_residual(next, previous);
      return next;
    } catch (const SolverError& e) {
      throw StepError(m, e.what());
    }
  }

  /// ||A x^m - b(x^{m-1})|| / ||b|| on the monolithic system.
  double relative_residual(const BiotState& next, const BiotState& previous) const {
    const Eigen::VectorXd rhs = system_.rhs(previous);
    const double bn = rhs.norm();
    const double rn = (system_.matrix * next.stacked() - rhs).norm();
    return bn > 0.0 ? rn / bn : rn;
  }

  double last_residual() const { return last_residual_; }

 private:
  BlockSystem system_;
  SolvePath path_;
  std::optional<DiagonalCondensation> condensation_;
  std::optional<DirectSolver> solver_;
  mutable double last_residual_ = 0.0;
};

/// Runs `steps` backward-Euler steps and returns every state, the initial one first.
inline std::vector<BiotState> run_time_steps(const BiotStepper& stepper, const BiotState& initial, Index steps) {
  std::vector<BiotState> states{initial};
  for (Index m = 0; m < steps; ++m) states.push_back(stepper.step(states.back()));
  return states;
}

/// Checkpoint: "dof,value" per line, dofs numbered in the [U_b, U_l, W, P] order.
inline void write_state_csv(std::ostream& os, const BiotState& s) {
  const Eigen::VectorXd x = s.stacked();
  os << "dof,value\n" << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (Index i = 0; i < x.size(); ++i) os << i << ',' << x[i] << '\n';
}

}  // namespace biotfe

#endif  // BIOTFE_TIMESTEP_HPP

// Runs a configured experiment and writes its CSV and SVG outputs.

#ifndef BIOTFE_REPORT_RUNNER_HPP
#define BIOTFE_REPORT_RUNNER_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <unsupported/Eigen/SparseExtra>

#include "biotfe/report/config.hpp"
#include "biotfe/report/csv.hpp"
#include "biotfe/report/svg.hpp"

namespace biotfe::report {

struct ExperimentResult {
  HeaderLines header;
  std::vector<verify::ExperimentRow> rows;
  /// Locking rank check, diagnostics only.
  std::vector<std::string> notes;

  bool all_ok() const {
    return std::all_of(rows.begin(), rows.end(), [](const auto& r) { return r.status == "ok"; });
  }
};

struct RunOptions {
  /// Directory for Matrix Market dumps of every assembled system; empty disables.
  std::string dump_matrix_dir;
  /// Directory for the final Biot states as (dof, value) CSV; empty disables.
  std::string checkpoint_dir;
  /// Worker threads; 0 picks the hardware concurrency.
  unsigned jobs = 0;
};

/// The curl case with the configured material; rho g scales with mu.
inline verify::ManufacturedCase<2> configured_biot_case(const ExperimentConfig& cfg, double kappa) {
  auto c = verify::biot_curl_case(kappa);
  auto& m = c.params;
  const auto& o = cfg.material;
  const double scale = o.mu / m.mu;
  m.lambda = o.lambda;
  m.mu = o.mu;
  m.alpha = o.alpha;
  m.biot_modulus = o.biot_modulus;
  m.fluid_viscosity = o.fluid_viscosity;
  m.set_scalar_permeability(kappa * o.fluid_viscosity);
  if (scale != 1.0) {
    auto f = m.body_force;
    m.body_force = [f, scale](const Vec<2>& x) { return Vec<2>(scale * f(x)); };
  }
  return c;
}

inline HeaderLines describe(const ExperimentConfig& c) {
  HeaderLines h;
  auto join_n = [](const auto& v) {
    std::vector<std::string> s;
    for (auto x : v) s.push_back(format_number(static_cast<double>(x)));
    return boost::join(s, " ");
  };
  h.emplace_back("experiment", to_string(c.experiment));
  if (!c.schemes.empty()) h.emplace_back("schemes", boost::join(c.schemes, " "));
  if (c.mesh_path.empty()) {
    h.emplace_back("N", join_n(c.n_list));
    h.emplace_back("diagonal", to_string(c.diagonal));
  } else {
    h.emplace_back("mesh", c.mesh_path);
  }
  if (is_biot(c.experiment)) {
    h.emplace_back("kappa", join_n(c.kappa_list));
    h.emplace_back("lambda", format_number(c.material.lambda));
    h.emplace_back("mu", format_number(c.material.mu));
    h.emplace_back("alpha", format_number(c.material.alpha));
    h.emplace_back("biot_modulus", format_number(c.material.biot_modulus));
    h.emplace_back("fluid_viscosity", format_number(c.material.fluid_viscosity));
    h.emplace_back("tau", format_number(c.tau));
    h.emplace_back("steps", std::to_string(c.steps));
    h.emplace_back("t_max", format_number(c.tau * static_cast<double>(c.steps)));
    h.emplace_back("initial", to_string(c.initial));
    h.emplace_back("energy", verify::to_string(c.energy));
  } else if (c.experiment == Experiment::stokes_convergence) {
    h.emplace_back("viscosity", format_number(c.material.viscosity));
    h.emplace_back("energy", verify::to_string(c.energy));
  } else {
    h.emplace_back("lambda", format_number(c.material.lambda));
    h.emplace_back("mu", format_number(c.material.mu));
    h.emplace_back("viscosity", format_number(c.material.viscosity));
  }
  h.emplace_back("seed", std::to_string(c.seed));
  return h;
}

namespace detail {

inline std::string sanitize(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

/// Runs the tasks on a bounded pool; results keep the task order.
inline std::vector<verify::ExperimentRow> run_tasks(const std::vector<std::function<verify::ExperimentRow()>>& tasks,
                                                    unsigned jobs) {
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<verify::ExperimentRow> out(tasks.size());
  std::size_t next = 0;
  while (next < tasks.size()) {
    std::vector<std::future<verify::ExperimentRow>> batch;
    const std::size_t end = std::min(tasks.size(), next + jobs);
    for (std::size_t i = next; i < end; ++i) batch.push_back(std::async(std::launch::async, tasks[i]));
    for (std::size_t i = next; i < end; ++i) out[i] = batch[i - next].get();
    next = end;
  }
  return out;
}

inline Mesh<2> level_mesh(const ExperimentConfig& c, Index n) {
  if (!c.mesh_path.empty()) return read_mesh_file<2>(c.mesh_path);
  return build_structured_unit_square(n, c.diagonal);
}

inline std::vector<Index> levels(const ExperimentConfig& c) {
  if (!c.mesh_path.empty()) return {0};
  return c.n_list;
}

template <class Fn>
verify::ExperimentRow guarded(verify::ExperimentRow base, Fn&& fn) {
  try {
    return fn();
  } catch (const std::exception& e) {
    base.status = "failed: " + sanitize(e.what());
    return base;
  }
}

inline std::function<void(const SparseMatrix&)> dumper(const RunOptions& opt, const std::string& name) {
  if (opt.dump_matrix_dir.empty()) return {};
  return [dir = opt.dump_matrix_dir, name](const SparseMatrix& a) {
    std::filesystem::create_directories(dir);
    const Eigen::SparseMatrix<double, Eigen::ColMajor> col = a;
    if (!Eigen::saveMarket(col, (std::filesystem::path(dir) / (name + ".mtx")).string()))
      throw std::runtime_error("cannot write matrix dump " + name);
  };
}

inline std::function<void(const BiotState&)> checkpointer(const RunOptions& opt, const std::string& name) {
  if (opt.checkpoint_dir.empty()) return {};
  return [dir = opt.checkpoint_dir, name](const BiotState& s) {
    std::filesystem::create_directories(dir);
    std::ofstream os(std::filesystem::path(dir) / (name + ".csv"));
    if (!os) throw std::runtime_error("cannot write checkpoint " + name);
    write_state_csv(os, s);
  };
}

}  // namespace detail

inline ExperimentResult run_experiment(const ExperimentConfig& cfg, const RunOptions& opt = {}) {
  cfg.validate();
  ExperimentResult res;
  res.header = describe(cfg);
  const std::string exp = to_string(cfg.experiment);
  std::vector<std::function<verify::ExperimentRow()>> tasks;
  const auto lv = detail::levels(cfg);

  if (is_biot(cfg.experiment)) {
    for (const auto& scheme : cfg.schemes)
      for (double kappa : cfg.kappa_list)
        for (Index n : lv)
          tasks.emplace_back([&cfg, &opt, exp, scheme, kappa, n] {
            verify::ExperimentRow base;
            base.experiment = exp;
            base.scheme = scheme;
            base.kappa = kappa;
            base.n = n;
            return detail::guarded(base, [&] {
              verify::BiotRunOptions ro;
              ro.tau = cfg.tau;
              ro.steps = cfg.steps;
              ro.initial = cfg.initial;
              ro.energy = cfg.energy;
              const std::string name = exp + "_" + scheme + "_k" + format_number(kappa) + "_N" + std::to_string(n);
              ro.matrix_sink = detail::dumper(opt, name);
              ro.state_sink = detail::checkpointer(opt, name);
              auto row = verify::run_biot(configured_biot_case(cfg, kappa), detail::level_mesh(cfg, n),
                                          verify::parse_biot_scheme(scheme), ro);
              row.experiment = exp;
              row.n = n;
              return row;
            });
          });
  } else if (cfg.experiment == Experiment::stokes_convergence) {
    for (const auto& scheme : cfg.schemes)
      for (Index n : lv)
        tasks.emplace_back([&cfg, &opt, exp, scheme, n] {
          verify::ExperimentRow base;
          base.experiment = exp;
          base.scheme = scheme;
          base.n = n;
          return detail::guarded(base, [&] {
            auto row = verify::run_stokes(verify::stokes_trig_case(cfg.material.viscosity),
                                          detail::level_mesh(cfg, n), verify::parse_stokes_scheme(scheme), cfg.energy,
                                          detail::dumper(opt, exp + "_" + scheme + "_N" + std::to_string(n)));
            row.experiment = exp;
            row.n = n;
            return row;
          });
        });
  } else {
    for (Index n : lv) {
      for (bool bubbles : {true, false})
        tasks.emplace_back([&cfg, exp, n, bubbles] {
          verify::ExperimentRow base;
          base.experiment = exp;
          base.scheme = bubbles ? "infsup-P1b" : "infsup-P1";
          base.n = n;
          return detail::guarded(base, [&] {
            const Mesh<2> mesh = detail::level_mesh(cfg, n);
            const auto blocks = assemble_stokes_blocks<2>(mesh, cfg.material.viscosity, nullptr, bubbles);
            const InfSupEstimate e = verify::stokes_infsup(*blocks);
            verify::ExperimentRow row = base;
            row.h = verify::max_cell_diameter(mesh);
            // Plain P1/P0 has spurious pressure modes; report the smallest nonzero value.
            row.gamma_h = bubbles ? e.gamma : e.gamma_nonzero;
            row.dofs = blocks->layout.n_b + blocks->layout.n_l + blocks->layout.n_p;
            return row;
          });
        });
      tasks.emplace_back([&cfg, exp, n] {
        verify::ExperimentRow base;
        base.experiment = exp;
        base.scheme = "spectral";
        base.n = n;
        return detail::guarded(base, [&] {
          const Mesh<2> mesh = classify_boundary(detail::level_mesh(cfg, n),
                                                 BoundarySpec<2>::everywhere(BoundaryCondition::full_dirichlet()));
          const DofLayout layout = make_layout(mesh, LayoutOptions{true, false});
          EigenOptions eo;
          eo.seed = cfg.seed;
          const auto rep = verify::spectral_equivalence_report<2>(
              mesh, ElasticCoefficients{cfg.material.mu, cfg.material.lambda}, layout, true, eo);
          verify::ExperimentRow row = base;
          row.h = verify::max_cell_diameter(mesh);
          row.eta = rep.eta();
          row.dofs = layout.n_b + layout.n_l;
          if (rep.unconverged_cells > 0 || !rep.global_max.converged || !rep.global_min.converged)
            row.status = "unconverged eigenvalues";
          return row;
        });
      });
    }
    if (cfg.mesh_path.empty()) {
      const Mesh<2> m4 = build_structured_unit_square(4, cfg.diagonal);
      const auto plain = verify::divergence_rank<2>(m4, false);
      const auto rich = verify::divergence_rank<2>(m4, true);
      res.notes.push_back("locking rank N=4: plain P1 rank " + std::to_string(plain.rank) + " of " +
                          std::to_string(plain.rows) + "x" + std::to_string(plain.cols) + "; with bubbles rank " +
                          std::to_string(rich.rank) + " of " + std::to_string(rich.rows) + "x" +
                          std::to_string(rich.cols));
    }
  }

  res.rows = detail::run_tasks(tasks, opt.jobs);

  // Rates per (scheme, kappa) curve, rows already ordered by refinement.
  std::map<std::pair<std::string, std::string>, std::vector<std::size_t>> curves;
  for (std::size_t i = 0; i < res.rows.size(); ++i)
    curves[{res.rows[i].scheme, format_number(res.rows[i].kappa)}].push_back(i);
  for (const auto& [key, idx] : curves) {
    std::vector<verify::ExperimentRow> sub;
    for (auto i : idx) sub.push_back(res.rows[i]);
    verify::fill_rates(sub);
    for (std::size_t k = 0; k < idx.size(); ++k) {
      res.rows[idx[k]].rate_u = sub[k].rate_u;
      res.rows[idx[k]].rate_p = sub[k].rate_p;
    }
  }
  return res;
}

struct PlotReport {
  std::vector<std::string> files;
  std::vector<std::string> warnings;
  /// "<column> <series>: slope" lines.
  std::vector<std::string> slopes;
};

/// One SVG per error column with data; series are (scheme, kappa) curves.
/// Rows whose status is not "ok" are skipped with a warning.
inline PlotReport write_plots(const std::vector<verify::ExperimentRow>& rows, const std::string& dir,
                              const std::string& stem) {
  PlotReport rep;
  if (rows.empty()) throw std::invalid_argument("plot: no rows");
  struct Column {
    const char* name;
    const char* label;
    double verify::ExperimentRow::*field;
  };
  static const Column columns[] = {
      {"err_u_energy", "||Pi_1 u - u_h||_A", &verify::ExperimentRow::err_u_energy},
      {"err_p_l2", "||Pi_0 p - p_h||_L2", &verify::ExperimentRow::err_p_l2},
      {"err_w_l2", "||w - w_h||_L2", &verify::ExperimentRow::err_w_l2},
      {"gamma_h", "gamma_h", &verify::ExperimentRow::gamma_h},
      {"eta", "eta", &verify::ExperimentRow::eta},
  };
  std::vector<const verify::ExperimentRow*> ok;
  for (const auto& r : rows) {
    if (r.status == "ok")
      ok.push_back(&r);
    else
      rep.warnings.push_back("skipping " + r.scheme + " N=" + std::to_string(r.n) + ": " + r.status);
  }
  std::filesystem::create_directories(dir);
  for (const auto& col : columns) {
    std::map<std::string, Series> by_curve;
    std::vector<std::string> order;
    for (const auto* r : ok) {
      const double v = r->*(col.field);
      if (!(v > 0.0) || !(r->h > 0.0)) continue;
      std::string label = r->scheme;
      if (!std::isnan(r->kappa)) label += " kappa=" + format_number(r->kappa);
      if (!by_curve.count(label)) order.push_back(label);
      auto& s = by_curve[label];
      s.label = label;
      s.h.push_back(r->h);
      s.error.push_back(v);
    }
    if (order.empty()) continue;
    std::vector<Series> series;
    for (const auto& l : order) series.push_back(by_curve[l]);
    const std::string path = (std::filesystem::path(dir) / (stem + "_" + col.name + ".svg")).string();
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write " + path);
    const auto slopes = write_loglog_svg(os, stem + ": " + col.name, col.label, series);
    rep.files.push_back(path);
    for (std::size_t k = 0; k < series.size(); ++k)
      rep.slopes.push_back(std::string(col.name) + " " + series[k].label + ": slope " +
                           (std::isnan(slopes[k]) ? std::string("n/a") : detail::fmt("%.2f", slopes[k])));
  }
  return rep;
}

}  // namespace biotfe::report

#endif  // BIOTFE_REPORT_RUNNER_HPP

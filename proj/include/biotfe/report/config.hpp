// Experiment configuration: presets and key = value files with [section] headers.

#ifndef BIOTFE_REPORT_CONFIG_HPP
#define BIOTFE_REPORT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/algorithm/string.hpp>
#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "biotfe/mesh.hpp"
#include "biotfe/verify/study.hpp"

namespace biotfe::report {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Experiment { table1, table2, biot_convergence, stokes_convergence, diagnostics };

inline Experiment parse_experiment(const std::string& s) {
  if (s == "table1") return Experiment::table1;
  if (s == "table2") return Experiment::table2;
  if (s == "biot-convergence") return Experiment::biot_convergence;
  if (s == "stokes-convergence" || s == "stokes") return Experiment::stokes_convergence;
  if (s == "diagnostics") return Experiment::diagnostics;
  throw ConfigError("unknown experiment '" + s +
                    "' (expected table1, table2, biot-convergence, stokes-convergence or diagnostics)");
}

inline std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::table1: return "table1";
    case Experiment::table2: return "table2";
    case Experiment::biot_convergence: return "biot-convergence";
    case Experiment::stokes_convergence: return "stokes-convergence";
    case Experiment::diagnostics: return "diagnostics";
  }
  return "?";
}

inline bool is_biot(Experiment e) {
  return e == Experiment::table1 || e == Experiment::table2 || e == Experiment::biot_convergence;
}

/// Material defaults: lambda = 2, mu = 1, alpha = 1,
/// M = 1e6, mu_f = 1 and nu = 1.
struct MaterialOverrides {
  double lambda = 2.0;
  double mu = 1.0;
  double alpha = 1.0;
  double biot_modulus = 1e6;
  double fluid_viscosity = 1.0;
  double viscosity = 1.0;
};

struct ExperimentConfig {
  Experiment experiment = Experiment::table2;
  std::vector<Index> n_list{8, 16, 32, 64};
  std::vector<double> kappa_list{1e-4, 1e-6, 1e-8, 1e-10};
  std::vector<std::string> schemes{"AD"};
  MaterialOverrides material;
  Diagonal diagonal = Diagonal::right_down;
  double tau = 1.0;
  Index steps = 1;
  InitialMode initial = InitialMode::interpolate_pressure;
  verify::EnergyMode energy = verify::EnergyMode::linear_part;
  std::string out_dir = "results";
  /// Imported mesh replacing the structured grids (single level).
  std::string mesh_path;
  std::uint32_t seed = 42;
  bool large = false;

  void validate() const {
    if (n_list.empty() && mesh_path.empty()) throw ConfigError("config: N list is empty");
    for (Index n : n_list)
      if (n < 1) throw ConfigError("config: N must be positive (got " + std::to_string(n) + ")");
    if (is_biot(experiment)) {
      if (kappa_list.empty()) throw ConfigError("config: kappa list is empty");
      for (double k : kappa_list)
        if (!(k > 0.0)) throw ConfigError("config: kappa must be positive");
    }
    if (experiment != Experiment::diagnostics) {
      if (schemes.empty()) throw ConfigError("config: scheme list is empty");
      for (const auto& s : schemes) {
        try {
          if (is_biot(experiment))
            verify::parse_biot_scheme(s);
          else
            verify::parse_stokes_scheme(s);
        } catch (const std::invalid_argument& e) {
          throw ConfigError(std::string("config: ") + e.what());
        }
      }
    }
    if (!(tau > 0.0)) throw ConfigError("config: tau must be positive");
    if (steps < 1) throw ConfigError("config: steps must be at least 1");
    const auto& m = material;
    if (!(m.mu > 0.0 && m.lambda >= 0.0 && m.alpha >= 0.0 && m.alpha <= 1.0 && m.biot_modulus > 0.0 &&
          m.fluid_viscosity > 0.0 && m.viscosity > 0.0))
      throw ConfigError("config: material values out of range");
  }
};

/// Reference parameters for each experiment; --large appends N = 128.
inline ExperimentConfig preset(const std::string& name, bool large = false) {
  ExperimentConfig c;
  c.experiment = parse_experiment(name);
  c.large = large;
  switch (c.experiment) {
    case Experiment::table1: c.schemes = {"P1"}; break;
    case Experiment::table2: c.schemes = {"AD"}; break;
    case Experiment::biot_convergence:
      c.schemes = {"A", "AD"};
      c.kappa_list = {1e-8};
      break;
    case Experiment::stokes_convergence:
      c.schemes = {"AS", "ASD"};
      c.kappa_list.clear();
      c.energy = verify::EnergyMode::full;
      break;
    case Experiment::diagnostics:
      c.schemes.clear();
      c.kappa_list.clear();
      c.n_list = {4, 8, 16, 32};
      break;
  }
  if (large && c.experiment != Experiment::diagnostics) c.n_list.push_back(128);
  return c;
}

namespace detail {

template <class T>
std::vector<T> parse_list(const std::string& key, const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", "), boost::token_compress_on);
  std::vector<T> out;
  for (auto& p : parts) {
    boost::trim(p);
    if (p.empty()) continue;
    std::istringstream is(p);
    T v{};
    if (!(is >> v) || !is.eof()) throw ConfigError("config: bad value '" + p + "' for " + key);
    out.push_back(v);
  }
  return out;
}

inline std::vector<std::string> parse_names(const std::string& text) {
  std::vector<std::string> parts;
  boost::split(parts, text, boost::is_any_of(", "), boost::token_compress_on);
  std::erase_if(parts, [](const std::string& s) { return s.empty(); });
  return parts;
}

template <class T>
T parse_scalar(const std::string& key, const std::string& text) {
  const auto v = parse_list<T>(key, text);
  if (v.size() != 1) throw ConfigError("config: " + key + " expects a single value");
  return v.front();
}

inline bool parse_bool(const std::string& key, std::string text) {
  boost::to_lower(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("config: bad boolean '" + text + "' for " + key);
}

}  // namespace detail

/// Applies a parsed ini tree on top of `base`. Every unknown key is reported.
/// Sections: [experiment] name, preset, n, kappa, schemes, diagonal, tau, steps,
/// initial, energy, seed, large, mesh; [material] lambda, mu, alpha,
/// biot_modulus, fluid_viscosity, viscosity; [output] dir.
inline ExperimentConfig apply_config(const boost::property_tree::ptree& tree, ExperimentConfig base) {
  using detail::parse_scalar;
  std::vector<std::string> unknown;
  std::vector<std::string> problems;
  ExperimentConfig c = base;

  // A preset key resets the defaults before the other keys are applied.
  if (const auto exp = tree.get_child_optional("experiment")) {
    for (const auto& [key, node] : *exp) {
      if (key == "preset") {
        try {
          c = preset(node.data(), c.large);
        } catch (const std::exception& e) {
          problems.emplace_back(e.what());
        }
      }
    }
  }

  for (const auto& [section, children] : tree) {
    if (children.empty() && !children.data().empty()) {
      unknown.push_back(section + " (outside a section)");
      continue;
    }
    for (const auto& [key, node] : children) {
      const std::string full = section + "." + key;
      const std::string& v = node.data();
      try {
        if (section == "experiment") {
          if (key == "preset") continue;
          if (key == "name")
            c.experiment = parse_experiment(boost::trim_copy(v));
          else if (key == "n")
            c.n_list = detail::parse_list<Index>(full, v);
          else if (key == "kappa")
            c.kappa_list = detail::parse_list<double>(full, v);
          else if (key == "schemes")
            c.schemes = detail::parse_names(v);
          else if (key == "diagonal")
            c.diagonal = parse_diagonal(boost::trim_copy(v));
          else if (key == "tau")
            c.tau = parse_scalar<double>(full, v);
          else if (key == "steps")
            c.steps = parse_scalar<Index>(full, v);
          else if (key == "initial")
            c.initial = parse_initial_mode(boost::trim_copy(v));
          else if (key == "energy")
            c.energy = verify::parse_energy_mode(boost::trim_copy(v));
          else if (key == "seed")
            c.seed = parse_scalar<std::uint32_t>(full, v);
          else if (key == "large")
            c.large = detail::parse_bool(full, boost::trim_copy(v));
          else if (key == "mesh")
            c.mesh_path = boost::trim_copy(v);
          else
            unknown.push_back(full);
        } else if (section == "material") {
          auto& m = c.material;
          if (key == "lambda")
            m.lambda = parse_scalar<double>(full, v);
          else if (key == "mu")
            m.mu = parse_scalar<double>(full, v);
          else if (key == "alpha")
            m.alpha = parse_scalar<double>(full, v);
          else if (key == "biot_modulus")
            m.biot_modulus = parse_scalar<double>(full, v);
          else if (key == "fluid_viscosity")
            m.fluid_viscosity = parse_scalar<double>(full, v);
          else if (key == "viscosity")
            m.viscosity = parse_scalar<double>(full, v);
          else
            unknown.push_back(full);
        } else if (section == "output") {
          if (key == "dir")
            c.out_dir = boost::trim_copy(v);
          else
            unknown.push_back(full);
        } else {
          unknown.push_back(full);
        }
      } catch (const ConfigError& e) {
        problems.emplace_back(e.what());
      } catch (const std::invalid_argument& e) {
        problems.push_back("config: " + full + ": " + e.what());
      }
    }
  }
  if (!unknown.empty()) problems.push_back("config: unknown keys: " + boost::join(unknown, ", "));
  if (!problems.empty()) throw ConfigError(boost::join(problems, "\n"));
  c.validate();
  return c;
}

inline ExperimentConfig parse_config(std::istream& is, ExperimentConfig base = {}) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(is, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return apply_config(tree, std::move(base));
}

inline ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {}) {
  boost::property_tree::ptree tree;
  try {
    boost::property_tree::read_ini(path, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return apply_config(tree, std::move(base));
}

}  // namespace biotfe::report

#endif  // BIOTFE_REPORT_CONFIG_HPP

// biotfe: experiment runner and plotter.
//
//   biotfe run --preset table2 --out results
//   biotfe run --config my.ini --schemes A,AD
//   biotfe plot results/table2.csv

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "biotfe/report/runner.hpp"

namespace {

using biotfe::report::ExperimentConfig;

void print_summary(const biotfe::report::ExperimentResult& res) {
  std::printf("%-10s %-12s %6s %10s %12s %12s %7s %7s %10s %10s  %s\n", "scheme", "kappa", "N", "h", "err_u",
              "err_p", "rate_u", "rate_p", "gamma_h", "eta", "status");
  for (const auto& r : res.rows)
    std::printf("%-10s %-12s %6ld %10.4g %12.4e %12.4e %7.2f %7.2f %10.4g %10.4g  %s\n", r.scheme.c_str(),
                biotfe::report::format_number(r.kappa).c_str(), static_cast<long>(r.n), r.h, r.err_u_energy,
                r.err_p_l2, r.rate_u, r.rate_p, r.gamma_h, r.eta, r.status.c_str());
  for (const auto& n : res.notes) std::printf("%s\n", n.c_str());
}

int run_command(const std::string& preset_name, const std::string& config_path, const std::string& out_dir,
                const std::string& mesh, const std::string& diagonal, const std::string& schemes, bool large,
                bool dump_matrix, bool checkpoint, std::int64_t seed, unsigned jobs) {
  ExperimentConfig cfg;
  try {
    if (preset_name.empty() && config_path.empty()) throw biotfe::report::ConfigError("give --preset or --config");
    if (!preset_name.empty()) cfg = biotfe::report::preset(preset_name, large);
    if (!config_path.empty()) cfg = biotfe::report::load_config(config_path, cfg);
    if (large && std::find(cfg.n_list.begin(), cfg.n_list.end(), 128) == cfg.n_list.end() &&
        cfg.experiment != biotfe::report::Experiment::diagnostics)
      cfg.n_list.push_back(128);
    cfg.large = cfg.large || large;
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (!mesh.empty()) cfg.mesh_path = mesh;
    if (!diagonal.empty()) cfg.diagonal = biotfe::parse_diagonal(diagonal);
    if (!schemes.empty()) cfg.schemes = biotfe::report::detail::parse_names(schemes);
    if (seed >= 0) cfg.seed = static_cast<std::uint32_t>(seed);
    cfg.validate();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  biotfe::report::RunOptions opt;
  opt.jobs = jobs;
  const std::string stem = to_string(cfg.experiment);
  if (checkpoint) opt.checkpoint_dir = (std::filesystem::path(cfg.out_dir) / "checkpoints").string();
  if (dump_matrix) opt.dump_matrix_dir = (std::filesystem::path(cfg.out_dir) / "matrices").string();

  biotfe::report::ExperimentResult res;
  try {
    res = biotfe::report::run_experiment(cfg, opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  std::filesystem::create_directories(cfg.out_dir);
  const std::string csv = (std::filesystem::path(cfg.out_dir) / (stem + ".csv")).string();
  {
    std::ofstream os(csv);
    if (!os) {
      std::cerr << "error: cannot write " << csv << '\n';
      return 1;
    }
    biotfe::report::write_csv(os, res.rows, res.header);
  }
  print_summary(res);
  std::printf("wrote %s\n", csv.c_str());
  try {
    const auto plots = biotfe::report::write_plots(res.rows, cfg.out_dir, stem);
    for (const auto& w : plots.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& f : plots.files) std::printf("wrote %s\n", f.c_str());
  } catch (const std::exception& e) {
    std::cerr << "warning: no plots: " << e.what() << '\n';
  }
  if (!res.all_ok()) {
    for (const auto& r : res.rows)
      if (r.status != "ok")
        std::fprintf(stderr, "failed: %s kappa=%s N=%ld: %s\n", r.scheme.c_str(),
                     biotfe::report::format_number(r.kappa).c_str(), static_cast<long>(r.n), r.status.c_str());
    return 1;
  }
  return 0;
}

int plot_command(const std::string& csv_path, const std::string& out_dir) {
  std::ifstream is(csv_path);
  if (!is) {
    std::cerr << "error: cannot open " << csv_path << '\n';
    return 2;
  }
  try {
    const auto table = biotfe::report::read_csv(is);
    if (table.rows.empty()) throw std::invalid_argument("csv has no rows");
    const std::filesystem::path p(csv_path);
    const std::string dir = out_dir.empty() ? p.parent_path().string() : out_dir;
    const auto rep = biotfe::report::write_plots(table.rows, dir.empty() ? "." : dir, p.stem().string());
    for (const auto& w : rep.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    for (const auto& s : rep.slopes) std::printf("%s\n", s.c_str());
    for (const auto& f : rep.files) std::printf("wrote %s\n", f.c_str());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Face-bubble stabilized P1-RT0-P0 Biot and P1-P0 Stokes experiments"};
  app.require_subcommand(1);

  std::string preset_name, config_path, out_dir, mesh, diagonal, schemes;
  bool large = false, dump_matrix = false, checkpoint = false;
  std::int64_t seed = -1;
  unsigned jobs = 0;
  auto* run = app.add_subcommand("run", "Run an experiment and write CSV and SVG outputs");
  run->add_option("--preset", preset_name, "table1, table2, biot-convergence, stokes or diagnostics");
  run->add_option("--config", config_path, "key = value file with [experiment], [material], [output] sections")
      ->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory (default: results)");
  run->add_option("--mesh", mesh, "Imported 2D mesh replacing the structured grids")->check(CLI::ExistingFile);
  run->add_option("--diagonal", diagonal, "Structured grid diagonal: right-down or right-up");
  run->add_option("--schemes", schemes, "Comma separated scheme list (P1,A,AD,ADc or AS,ASD,ASDc)");
  run->add_flag("--large", large, "Append N = 128");
  run->add_flag("--dump-matrix", dump_matrix, "Write every assembled matrix to <out>/matrices in Matrix Market");
  run->add_flag("--checkpoint", checkpoint, "Write final Biot states to <out>/checkpoints as (dof, value) CSV");
  run->add_option("--seed", seed, "Seed of the eigenvalue iterations");
  run->add_option("--jobs", jobs, "Worker threads (0: all cores)");

  std::string csv_path, plot_out;
  auto* plot = app.add_subcommand("plot", "Plot a result CSV as log-log SVGs");
  plot->add_option("csv", csv_path, "Result CSV")->required();
  plot->add_option("--out", plot_out, "Output directory (default: next to the CSV)");

  CLI11_PARSE(app, argc, argv);
  if (run->parsed())
    return run_command(preset_name, config_path, out_dir, mesh, diagonal, schemes, large, dump_matrix, checkpoint, seed, jobs);
  return plot_command(csv_path, plot_out);
}

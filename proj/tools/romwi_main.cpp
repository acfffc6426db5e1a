// Command-line driver: simulate | build-rom | sweep | invert | compare.
// Exit codes: 0 ok, 2 config problem, 3 numerical failure.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "../vendor/CLI11.hpp"
#include "../vendor/json.hpp"
#include "romwi/experiment.hpp"

using namespace romwi;

namespace {

struct CommonArgs {
  std::string config;
  std::vector<std::string> sets;
};

void add_common(CLI::App* sc, CommonArgs& a) {
  sc->add_option("-c,--config", a.config, "experiment config (JSON)")->required();
  sc->add_option("--set", a.sets, "override a config key, key=value (repeatable)");
}

ExperimentConfig resolve_config(const CommonArgs& a) {
  ExperimentConfig cfg = load_config(a.config);
  for (const std::string& kv : a.sets) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got: " + kv);
    apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  std::filesystem::create_directories(cfg.outdir);
  return cfg;
}

std::string joined(const std::string& dir, const std::string& name) {
  return (std::filesystem::path(dir) / name).string();
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

void write_manifest(const ExperimentConfig& cfg, const std::string& cmd,
                    const std::vector<std::string>& outputs) {
  const std::string canon = canonical_json(cfg);
  std::ostringstream hash;
  hash << std::hex << std::setw(16) << std::setfill('0') << fnv1a(canon);
  nlohmann::ordered_json m;
  m["tool"] = "romwi 0.1.0";
  m["command"] = cmd;
  m["config_hash"] = hash.str();
  m["seed"] = cfg.seed;
  m["outputs"] = outputs;
  m["config"] = nlohmann::ordered_json::parse(canon);
  std::ofstream out(joined(cfg.outdir, "manifest.json"));
  if (!out) throw ConfigError("cannot write manifest in " + cfg.outdir);
  out << m.dump(2) << '\n';
}

int cmd_simulate(const CommonArgs& a) {
  ExperimentConfig cfg = resolve_config(a);
  VelocityField truth = build_model(cfg);
  SimulatedData sim = simulate_experiment(cfg, truth);
  save_velocity(joined(cfg.outdir, "velocity.bin"), truth);
  save_response(joined(cfg.outdir, "response.bin"), sim.response);
  save_series(joined(cfg.outdir, "series.bin"), sim.series);
  write_manifest(cfg, "simulate", {"velocity.bin", "response.bin", "series.bin"});
  std::cout << "wrote velocity.bin response.bin series.bin in " << cfg.outdir << "\n";
  return 0;
}

int cmd_build_rom(const CommonArgs& a, std::string series_path) {
  ExperimentConfig cfg = resolve_config(a);
  if (series_path.empty()) series_path = joined(cfg.outdir, "series.bin");
  DataSeries data = load_series(series_path);

  RomOperator rom;
  if (cfg.r > 0 || cfg.auto_r) {
    int r = cfg.r;
    if (r == 0) {
      DataSeries bg = background_series(cfg, build_model(cfg).grid);
      r = choose_threshold(data, bg);
    }
    rom = regularized_rom(data, r).rom;
    std::cout << "regularized operator, rank r = " << r << "\n";
  } else {
    rom = rom_operator(data);
    std::cout << "exact operator, " << rom.n << " blocks of size " << rom.m << "\n";
  }
  save_rom(joined(cfg.outdir, "rom.bin"), rom);
  write_manifest(cfg, "build-rom", {"rom.bin"});
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  ExperimentConfig cfg = resolve_config(a);
  SweepResult s = run_sweep(cfg);
  save_sweep_csv(joined(cfg.outdir, "sweep.csv"), s);
  write_manifest(cfg, "sweep", {"sweep.csv"});
  std::cout << "wrote sweep.csv (" << s.positions.size() * s.contrasts.size() << " rows) in "
            << cfg.outdir << "\n";
  return 0;
}

int cmd_invert(const CommonArgs& a, std::string series_path, bool force_both) {
  ExperimentConfig cfg = resolve_config(a);
  DataSeries data = series_path.empty() ? simulate_experiment(cfg, build_model(cfg)).series
                                        : load_series(series_path);

  std::vector<std::string> methods;
  if (force_both || cfg.method == "both") methods = {"rom", "fwi"};
  else methods = {cfg.method};

  VelocityField truth = build_model(cfg);
  BasisSpec win = default_basis(cfg, truth.grid);
  std::vector<std::string> outputs;
  std::ofstream summary;
  if (methods.size() > 1) {
    summary.open(joined(cfg.outdir, "compare.csv"));
    summary << "method,rmse,final_objective,iterations\n" << std::setprecision(17);
    outputs.push_back("compare.csv");
  }
  for (const std::string& method : methods) {
    InvertOutput out = run_invert(cfg, method, data);
    save_velocity(joined(cfg.outdir, "estimate_" + method + ".bin"), out.estimate);
    save_iteration_log(joined(cfg.outdir, "iters_" + method + ".csv"), out.result.log);
    outputs.push_back("estimate_" + method + ".bin");
    outputs.push_back("iters_" + method + ".csv");
    double rmse = rmse_in_window(out.estimate, truth, win.x0, win.x1, win.z0, win.z1);
    double obj = out.result.log.empty() ? 0.0 : out.result.log.back().objective;
    std::cout << method << ": rmse " << rmse << " m/s over the imaging window, final objective "
              << obj;
    if (out.r_used > 0) std::cout << ", rank r = " << out.r_used;
    std::cout << "\n";
    if (summary.is_open())
      summary << method << ',' << rmse << ',' << obj << ',' << out.result.log.size() << '\n';
  }
  write_manifest(cfg, force_both ? "compare" : "invert", outputs);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wave-operator reduced order modeling toolkit for velocity estimation"};
  app.require_subcommand(1);

  CommonArgs sim_a, rom_a, sweep_a, inv_a, cmp_a;
  std::string rom_series, inv_series, cmp_series;

  CLI::App* sim = app.add_subcommand("simulate", "simulate the configured acquisition");
  add_common(sim, sim_a);
  CLI::App* rom = app.add_subcommand("build-rom", "assemble the data-driven operator");
  add_common(rom, rom_a);
  rom->add_option("--series", rom_series, "input series file (default <outdir>/series.bin)");
  CLI::App* swp = app.add_subcommand("sweep", "two-parameter objective landscape");
  add_common(swp, sweep_a);
  CLI::App* inv = app.add_subcommand("invert", "layer-stripping Gauss-Newton inversion");
  add_common(inv, inv_a);
  inv->add_option("--series", inv_series, "measured series file (default: simulate)");
  CLI::App* cmp = app.add_subcommand("compare", "run rom and fwi on the same data");
  add_common(cmp, cmp_a);
  cmp->add_option("--series", cmp_series, "measured series file (default: simulate)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;  // usage problems are config problems
  }

  try {
    if (sim->parsed()) return cmd_simulate(sim_a);
    if (rom->parsed()) return cmd_build_rom(rom_a, rom_series);
    if (swp->parsed()) return cmd_sweep(sweep_a);
    if (inv->parsed()) return cmd_invert(inv_a, inv_series, false);
    if (cmp->parsed()) return cmd_invert(cmp_a, cmp_series, true);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

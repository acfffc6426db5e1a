#pragma once
#include <optional>

#include "romwi/fwi.hpp"
#include "romwi/models.hpp"
#include "romwi/streamer.hpp"

namespace romwi {

// One experiment = model + acquisition + data treatment + optional inversion
// settings. Parsed from a JSON config file; CLI flags override single keys.
struct ExperimentConfig {
  // model
  std::string model = "camembert";  // camembert|slant|gauss-bump|layered|file
  double h = 25.0;
  double position = 1200.0, contrast = 2.0;  // slant parameters
  std::string velocity_file;
  double cbar = 0;  // required for file models; built-ins know their own

  // acquisition
  int m = 10;
  double array_depth = 150.0, array_spacing = 150.0;
  double array_x0 = -1.0;  // <0: center the line
  bool streamer = false;
  double dense_dx = 50.0;

  // pulse / time sampling
  double f0 = 6.0, bandwidth = 4.0;
  double tau = 0.0435;
  int n = 16;
  int stride = 20;

  // noise + regularization
  double noise_b = 0.0;
  std::uint64_t seed = 1;
  int r = 0;         // >0: fixed truncation rank
  bool auto_r = false;  // pick r with the threshold rule

  // inversion
  std::string method = "rom";  // rom|fwi|both
  int ell = 1, q = 1, d = 0;   // d = 0 -> full bandwidth
  double gamma = 0.25, alpha_max = 3.0, fd_scale = 1e-2;
  std::vector<int> schedule;
  BasisSpec basis;  // nbx == 0 -> model-specific default window/widths

  // sweep (slant model)
  int sweep_np = 12, sweep_nc = 12;
  double sweep_pos0 = 660, sweep_pos1 = 1320;
  double sweep_con0 = 1.25, sweep_con1 = 2.90;

  std::string outdir = ".";
};

ExperimentConfig load_config(const std::string& path);
// "a.b=c" style overrides on top of a parsed config (flat keys, see README)
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
std::string canonical_json(const ExperimentConfig& cfg);

VelocityField build_model(const ExperimentConfig& cfg);
ArrayGeometry build_array(const ExperimentConfig& cfg, const Grid2D& g);
Pulse build_pulse(const ExperimentConfig& cfg);
BasisSpec default_basis(const ExperimentConfig& cfg, const Grid2D& g);

// Simulate the configured acquisition: colocated (or streamer-assembled)
// response, then noise on the fine even series, then the coarse series.
struct SimulatedData {
  ArrayResponse response;  // raw (colocated) or assembled (streamer)
  DataSeries series;
};
SimulatedData simulate_experiment(const ExperimentConfig& cfg, const VelocityField& v);

// Background (c0 = cbar) series for threshold selection / references.
DataSeries background_series(const ExperimentConfig& cfg, const Grid2D& g);

struct SweepResult {
  std::vector<double> positions, contrasts;
  MatX obj_rom, obj_fwi;  // contrasts x positions
};
SweepResult run_sweep(const ExperimentConfig& cfg);
void save_sweep_csv(const std::string& path, const SweepResult& s);

struct InvertOutput {
  VelocityField estimate;
  InversionResult result;
  int r_used = 0;  // 0 = exact path
};
InvertOutput run_invert(const ExperimentConfig& cfg, const std::string& method,
                        const DataSeries& data);
void save_iteration_log(const std::string& path, const std::vector<IterRecord>& log);

}  // namespace romwi

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "../vendor/json.hpp"
#include "romwi/experiment.hpp"

namespace romwi {

using nlohmann::json;
using nlohmann::ordered_json;

static void set_key(ExperimentConfig& c, const std::string& key, const json& v) {
  try {
    if (key == "model") c.model = v.get<std::string>();
    else if (key == "h") c.h = v.get<double>();
    else if (key == "position") c.position = v.get<double>();
    else if (key == "contrast") c.contrast = v.get<double>();
    else if (key == "velocity_file") c.velocity_file = v.get<std::string>();
    else if (key == "cbar") c.cbar = v.get<double>();
    else if (key == "m") c.m = v.get<int>();
    else if (key == "array_depth") c.array_depth = v.get<double>();
    else if (key == "array_spacing") c.array_spacing = v.get<double>();
    else if (key == "array_x0") c.array_x0 = v.get<double>();
    else if (key == "streamer") c.streamer = v.get<bool>();
    else if (key == "dense_dx") c.dense_dx = v.get<double>();
    else if (key == "f0") c.f0 = v.get<double>();
    else if (key == "bandwidth") c.bandwidth = v.get<double>();
    else if (key == "tau") c.tau = v.get<double>();
    else if (key == "n") c.n = v.get<int>();
    else if (key == "stride") c.stride = v.get<int>();
    else if (key == "noise_b") c.noise_b = v.get<double>();
    else if (key == "seed") c.seed = v.get<std::uint64_t>();
    else if (key == "r") c.r = v.get<int>();
    else if (key == "auto_r") c.auto_r = v.get<bool>();
    else if (key == "method") c.method = v.get<std::string>();
    else if (key == "ell") c.ell = v.get<int>();
    else if (key == "q") c.q = v.get<int>();
    else if (key == "d") c.d = v.get<int>();
    else if (key == "gamma") c.gamma = v.get<double>();
    else if (key == "alpha_max") c.alpha_max = v.get<double>();
    else if (key == "fd_scale") c.fd_scale = v.get<double>();
    else if (key == "schedule") c.schedule = v.get<std::vector<int>>();
    else if (key == "basis.gaussian") c.basis.gaussian = v.get<bool>();
    else if (key == "basis.nbx") c.basis.nbx = v.get<int>();
    else if (key == "basis.nbz") c.basis.nbz = v.get<int>();
    else if (key == "basis.x0") c.basis.x0 = v.get<double>();
    else if (key == "basis.x1") c.basis.x1 = v.get<double>();
    else if (key == "basis.z0") c.basis.z0 = v.get<double>();
    else if (key == "basis.z1") c.basis.z1 = v.get<double>();
    else if (key == "basis.sig_x") c.basis.sig_x = v.get<double>();
    else if (key == "basis.sig_z") c.basis.sig_z = v.get<double>();
    else if (key == "sweep_np") c.sweep_np = v.get<int>();
    else if (key == "sweep_nc") c.sweep_nc = v.get<int>();
    else if (key == "sweep_pos0") c.sweep_pos0 = v.get<double>();
    else if (key == "sweep_pos1") c.sweep_pos1 = v.get<double>();
    else if (key == "sweep_con0") c.sweep_con0 = v.get<double>();
    else if (key == "sweep_con1") c.sweep_con1 = v.get<double>();
    else if (key == "outdir") c.outdir = v.get<std::string>();
    else throw ConfigError("unknown config key: " + key);
  } catch (const json::exception& e) {
    throw ConfigError("bad value for config key '" + key + "': " + e.what());
  }
}

static void validate(const ExperimentConfig& c) {
  if (c.h <= 0 || c.tau <= 0 || c.m < 1 || c.n < 1 || c.stride < 1)
    throw ConfigError("h, tau, m, n, stride must all be positive");
  if (c.f0 <= 0 || c.bandwidth <= 0) throw ConfigError("pulse needs f0 > 0 and bandwidth > 0");
  if (c.model == "file" && c.velocity_file.empty())
    throw ConfigError("model=file requires velocity_file");
  if (c.model == "file" && c.cbar <= 0) throw ConfigError("model=file requires cbar > 0");
  if (c.noise_b < 0) throw ConfigError("noise_b must be >= 0");
  if (c.gamma <= 0 || c.gamma >= 1) throw ConfigError("gamma must lie in (0,1)");
  if (c.alpha_max <= 0) throw ConfigError("alpha_max must be positive");
  if (c.ell < 1 || c.q < 1) throw ConfigError("ell and q must be >= 1");
  if (c.r < 0 || c.r > c.n) throw ConfigError("r must lie in [0, n]");
  if (c.method != "rom" && c.method != "fwi" && c.method != "both")
    throw ConfigError("method must be rom|fwi|both");
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw ConfigError("config is not valid JSON: " + std::string(e.what()));
  }
  if (!j.is_object()) throw ConfigError("config root must be a JSON object");
  ExperimentConfig cfg;
  for (const auto& [k, v] : j.items()) {
    if (k == "basis" && v.is_object()) {
      for (const auto& [bk, bv] : v.items()) set_key(cfg, "basis." + bk, bv);
    } else {
      set_key(cfg, k, v);
    }
  }
  validate(cfg);
  return cfg;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  json v = json::parse(value, nullptr, false);  // bare words fall back to strings
  if (v.is_discarded()) v = value;
  set_key(cfg, key, v);
  validate(cfg);
}

std::string canonical_json(const ExperimentConfig& c) {
  ordered_json j;
  j["model"] = c.model;
  j["h"] = c.h;
  j["position"] = c.position;
  j["contrast"] = c.contrast;
  j["velocity_file"] = c.velocity_file;
  j["cbar"] = c.cbar;
  j["m"] = c.m;
  j["array_depth"] = c.array_depth;
  j["array_spacing"] = c.array_spacing;
  j["array_x0"] = c.array_x0;
  j["streamer"] = c.streamer;
  j["dense_dx"] = c.dense_dx;
  j["f0"] = c.f0;
  j["bandwidth"] = c.bandwidth;
  j["tau"] = c.tau;
  j["n"] = c.n;
  j["stride"] = c.stride;
  j["noise_b"] = c.noise_b;
  j["seed"] = c.seed;
  j["r"] = c.r;
  j["auto_r"] = c.auto_r;
  j["method"] = c.method;
  j["ell"] = c.ell;
  j["q"] = c.q;
  j["d"] = c.d;
  j["gamma"] = c.gamma;
  j["alpha_max"] = c.alpha_max;
  j["fd_scale"] = c.fd_scale;
  j["schedule"] = c.schedule;
  j["basis"] = ordered_json{{"gaussian", c.basis.gaussian}, {"nbx", c.basis.nbx},
                            {"nbz", c.basis.nbz},           {"x0", c.basis.x0},
                            {"x1", c.basis.x1},             {"z0", c.basis.z0},
                            {"z1", c.basis.z1},             {"sig_x", c.basis.sig_x},
                            {"sig_z", c.basis.sig_z}};
  j["sweep_np"] = c.sweep_np;
  j["sweep_nc"] = c.sweep_nc;
  j["sweep_pos0"] = c.sweep_pos0;
  j["sweep_pos1"] = c.sweep_pos1;
  j["sweep_con0"] = c.sweep_con0;
  j["sweep_con1"] = c.sweep_con1;
  j["outdir"] = c.outdir;
  return j.dump(2);
}

VelocityField build_model(const ExperimentConfig& c) {
  if (c.model == "camembert") return camembert_model(c.h);
  if (c.model == "slant") return slanted_model(c.h, c.position, c.contrast);
  if (c.model == "gauss-bump") return gaussian_bump_model(c.h);
  if (c.model == "layered") return layered_model(c.h, c.seed);
  if (c.model == "file") return load_velocity(c.velocity_file, c.cbar);
  throw ConfigError("unknown model: " + c.model);
}

ArrayGeometry build_array(const ExperimentConfig& c, const Grid2D& g) {
  double span = (c.m - 1) * c.array_spacing;
  double x0 = c.array_x0 >= 0 ? c.array_x0 : ((g.nx - 1) * g.h - span) / 2.0;
  return line_array(g, c.m, x0, c.array_depth, c.array_spacing);
}

Pulse build_pulse(const ExperimentConfig& c) { return Pulse{c.f0, c.bandwidth}; }

BasisSpec default_basis(const ExperimentConfig& c, const Grid2D& g) {
  // imaging window inset ~4.75% from every edge, centers on a uniform grid,
  // widths at 0.583x the center spacing (keeps 2*sigma under half the
  // essential wavelength for the default acquisitions)
  BasisSpec b = c.basis;
  if (b.nbx <= 0) b.nbx = 9;
  if (b.nbz <= 0) b.nbz = 9;
  const double W = (g.nx - 1) * g.h, H = (g.nz - 1) * g.h;
  if (b.x1 <= b.x0) {
    b.x0 = 0.0475 * W;
    b.x1 = W - b.x0;
  }
  if (b.z1 <= b.z0) {
    b.z0 = 0.0476 * H;
    b.z1 = H - b.z0;
  }
  if (b.sig_x <= 0) b.sig_x = 0.583 * (b.x1 - b.x0) / std::max(1, b.nbx - 1);
  if (b.sig_z <= 0) b.sig_z = 0.583 * (b.z1 - b.z0) / std::max(1, b.nbz - 1);
  return b;
}

SimulatedData simulate_experiment(const ExperimentConfig& cfg, const VelocityField& v) {
  ArrayGeometry ar = build_array(cfg, v.grid);
  Pulse f = build_pulse(cfg);
  SimOptions opt = sim_window(f, cfg.tau, cfg.n, cfg.stride);

  SimulatedData out;
  if (cfg.streamer) {
    StreamerData sd = simulate_streamer(v, ar, cfg.dense_dx, f, opt);
    out.response = streamer_assemble(sd);
  } else {
    out.response = simulate_shots(v, ar, f, opt);
  }
  std::vector<MatX> fine = build_even_data(out.response, opt.j_end);
  if (cfg.noise_b > 0) fine = add_noise(fine, cfg.noise_b, cfg.seed);
  out.series = spectral_second_derivative(fine, opt.tau_f, cfg.stride, cfg.n, f.cutoff_hz());
  return out;
}

DataSeries background_series(const ExperimentConfig& cfg, const Grid2D& g) {
  VelocityField bg;
  bg.grid = g;
  bg.cbar = build_model(cfg).cbar;  // built-ins know their reference speed
  if (cfg.cbar > 0) bg.cbar = cfg.cbar;
  bg.c = ArrX::Constant(g.nodes(), bg.cbar);
  ExperimentConfig quiet = cfg;
  quiet.noise_b = 0;
  quiet.streamer = false;
  return simulate_experiment(quiet, bg).series;
}

SweepResult run_sweep(const ExperimentConfig& cfg) {
  if (cfg.model != "slant") throw ConfigError("sweep needs the two-parameter slant model");
  if (cfg.sweep_np < 2 || cfg.sweep_nc < 2) throw ConfigError("sweep grid must be >= 2x2");

  VelocityField truth = build_model(cfg);
  DataSeries data = simulate_experiment(cfg, truth).series;
  RomOperator data_rom = rom_operator(data);
  const int m = data.m, n = data.n;
  const int d = cfg.d > 0 ? std::min(cfg.d, n) : n;

  SweepResult s;
  for (int i = 0; i < cfg.sweep_np; ++i)
    s.positions.push_back(cfg.sweep_pos0 +
                          i * (cfg.sweep_pos1 - cfg.sweep_pos0) / (cfg.sweep_np - 1));
  for (int j = 0; j < cfg.sweep_nc; ++j)
    s.contrasts.push_back(cfg.sweep_con0 +
                          j * (cfg.sweep_con1 - cfg.sweep_con0) / (cfg.sweep_nc - 1));
  s.obj_rom.resize(cfg.sweep_nc, cfg.sweep_np);
  s.obj_fwi.resize(cfg.sweep_nc, cfg.sweep_np);

  ExperimentConfig trial = cfg;
  trial.noise_b = 0;
  trial.streamer = false;
  for (int j = 0; j < cfg.sweep_nc; ++j)
    for (int i = 0; i < cfg.sweep_np; ++i) {
      trial.position = s.positions[static_cast<size_t>(i)];
      trial.contrast = s.contrasts[static_cast<size_t>(j)];
      DataSeries ms = simulate_experiment(trial, build_model(trial)).series;
      RomOperator mr = rom_operator(ms);
      s.obj_rom(j, i) = (rest_map(mr.A, m, d, n) - rest_map(data_rom.A, m, d, n)).squaredNorm();
      s.obj_fwi(j, i) = fwi_objective(ms, data, n);
    }
  return s;
}

void save_sweep_csv(const std::string& path, const SweepResult& s) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "position,contrast,log10_obj_fwi,log10_obj_rom\n";
  out << std::setprecision(17);
  // Objectives can be exactly zero when the truth lies on a sweep node; clamp
  // so the CSV never contains "-inf".
  auto safe_log10 = [](double v) { return std::log10(std::max(v, 1e-300)); };
  for (size_t j = 0; j < s.contrasts.size(); ++j)
    for (size_t i = 0; i < s.positions.size(); ++i)
      out << s.positions[i] << ',' << s.contrasts[j] << ','
          << safe_log10(s.obj_fwi(static_cast<long>(j), static_cast<long>(i))) << ','
          << safe_log10(s.obj_rom(static_cast<long>(j), static_cast<long>(i))) << '\n';
}

InvertOutput run_invert(const ExperimentConfig& cfg, const std::string& method,
                        const DataSeries& data) {
  if (data.m != cfg.m || data.n != cfg.n)
    throw ConfigError("data series shape does not match the config");

  VelocityField truth = build_model(cfg);  // grid + cbar; values unused below
  VelocityField c0;
  c0.grid = truth.grid;
  c0.cbar = truth.cbar;
  c0.c = ArrX::Constant(c0.grid.nodes(), c0.cbar);

  ForwardModel fm;
  fm.c0 = c0;
  fm.array = build_array(cfg, c0.grid);
  fm.pulse = build_pulse(cfg);
  fm.tau = cfg.tau;
  fm.n = cfg.n;
  fm.stride = cfg.stride;
  fm.param = make_parametrization(c0.grid, default_basis(cfg, c0.grid));

  GnOptions opt;
  opt.ell = cfg.ell;
  opt.q = cfg.q;
  opt.d = cfg.d;
  opt.gamma = cfg.gamma;
  opt.alpha_max = cfg.alpha_max;
  opt.fd_step = cfg.fd_scale * c0.cbar / fm.param.phi_peak;
  opt.schedule = cfg.schedule;

  InvertOutput out;
  InversionResult res;
  if (method == "fwi") {
    FwiProvider prov(fm, data);
    res = gauss_newton_drive(prov, opt);
  } else if (method == "rom") {
    if (cfg.r > 0 || cfg.auto_r) {
      int r = cfg.r;
      if (cfg.auto_r && r == 0) {
        DataSeries bg = background_series(cfg, c0.grid);
        r = choose_threshold(data, bg);
      }
      RegRomProvider prov(fm, regularized_rom(data, r), cfg.d);
      res = gauss_newton_drive(prov, opt);
      out.r_used = r;
    } else {
      RomProvider prov(fm, data, cfg.d);
      res = gauss_newton_drive(prov, opt);
    }
  } else {
    throw ConfigError("invert method must be rom or fwi");
  }
  out.estimate = fm.param.apply(c0, res.eta);
  out.result = std::move(res);
  return out;
}

void save_iteration_log(const std::string& path, const std::vector<IterRecord>& log) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write " + path);
  out << "i,layer,k_l,mu_i,alpha_i,objective,eta_norm\n";
  out << std::setprecision(17);
  for (const auto& r : log)
    out << r.i << ',' << r.layer << ',' << r.k << ',' << r.mu << ',' << r.alpha << ','
        << r.objective << ',' << r.eta_norm << '\n';
}

}  // namespace romwi

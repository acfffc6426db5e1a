#include <cmath>
#include <cstdint>
#include <fstream>

#include "romwi/wave.hpp"

namespace romwi {

void check_cfl(const VelocityField& v, double tau_f) {
  if (tau_f <= 0) throw ConfigError("tau_f must be positive");
  double need = v.cmax() * tau_f * std::sqrt(2.0);
  if (v.grid.h < need)
    throw ConfigError("CFL violated: h = " + std::to_string(v.grid.h) +
                      " < cmax*tau_f*sqrt(2) = " + std::to_string(need));
}

SimOptions sim_window(const Pulse& f, double tau, int n, int stride) {
  SimOptions o;
  o.tau_f = tau / stride;
  o.j_begin = -static_cast<long>(std::ceil(f.t_support() / o.tau_f));
  o.j_end = static_cast<long>(stride) * (2 * n - 1);
  return o;
}

namespace {

struct ShotResult {
  // trace block: receivers x samples
  MatX traces;
};

ShotResult run_shot(const VelocityField& v, const std::vector<double>& lam, int src_ix,
                    int src_iz, const std::vector<int>& rec_idx, const Pulse& f,
                    const SimOptions& opt) {
  const Grid2D& g = v.grid;
  long nsmp = opt.j_end - opt.j_begin + 1;
  ShotResult out;
  out.traces = MatX::Zero(static_cast<long>(rec_idx.size()), nsmp);

  std::vector<double> a(g.nodes(), 0.0), b(g.nodes(), 0.0), c(g.nodes(), 0.0);
  double* prev = a.data();
  double* cur = b.data();
  double* next = c.data();
  const double src_scale = opt.tau_f * opt.tau_f / (g.h * g.h);
  const int src_node = g.idx(src_ix, src_iz);

  // field is quiescent at j_begin (pulse support starts there)
  for (long j = opt.j_begin; j <= opt.j_end; ++j) {
    for (size_t r = 0; r < rec_idx.size(); ++r)
      out.traces(static_cast<long>(r), j - opt.j_begin) = cur[rec_idx[r]];
    if (j == opt.j_end) break;
    if (opt.serial_reference || !opt.omp_kernel)
      step_interior_serial(cur, prev, next, lam.data(), g.nx, g.nz);
    else
      step_interior_omp(cur, prev, next, lam.data(), g.nx, g.nz);
    next[src_node] += src_scale * f.deriv(static_cast<double>(j) * opt.tau_f);
    double* t = prev;
    prev = cur;
    cur = next;
    next = t;
  }
  return out;
}

}  // namespace

ArrayResponse simulate_shots(const VelocityField& v, const ArrayGeometry& src,
                             const ArrayGeometry& rec, const Pulse& f, const SimOptions& opt) {
  check_cfl(v, opt.tau_f);
  if (opt.j_end < opt.j_begin) throw ConfigError("empty simulation window");
  const Grid2D& g = v.grid;

  std::vector<double> lam(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    double q = v.c[i] * opt.tau_f / g.h;
    lam[i] = q * q;
  }
  std::vector<int> rec_idx(rec.m());
  for (int r = 0; r < rec.m(); ++r) rec_idx[r] = g.idx(rec.ix[r], rec.iz[r]);

  ArrayResponse resp;
  resp.m = rec.m();  // receivers rows, sources columns
  resp.tau_f = opt.tau_f;
  resp.j_begin = opt.j_begin;
  long nsmp = opt.j_end - opt.j_begin + 1;
  resp.samples.assign(static_cast<size_t>(nsmp), MatX::Zero(rec.m(), src.m()));

#pragma omp parallel for schedule(dynamic) if (opt.parallel_shots)
  for (int s = 0; s < src.m(); ++s) {
    ShotResult shot = run_shot(v, lam, src.ix[s], src.iz[s], rec_idx, f, opt);
    for (long j = 0; j < nsmp; ++j)
      resp.samples[static_cast<size_t>(j)].col(s) = shot.traces.col(j);
  }
  return resp;
}

void simulate_shot_observed(const VelocityField& v, int src_ix, int src_iz, const Pulse& f,
                            const SimOptions& opt,
                            const std::function<void(long, const std::vector<double>&)>& observe) {
  check_cfl(v, opt.tau_f);
  const Grid2D& g = v.grid;
  std::vector<double> lam(g.nodes());
  for (int i = 0; i < g.nodes(); ++i) {
    double q = v.c[i] * opt.tau_f / g.h;
    lam[i] = q * q;
  }
  std::vector<double> prev(g.nodes(), 0.0), cur(g.nodes(), 0.0), next(g.nodes(), 0.0);
  const double src_scale = opt.tau_f * opt.tau_f / (g.h * g.h);
  const int src_node = g.idx(src_ix, src_iz);
  for (long j = opt.j_begin; j <= opt.j_end; ++j) {
    observe(j, cur);
    if (j == opt.j_end) break;
    step_interior_serial(cur.data(), prev.data(), next.data(), lam.data(), g.nx, g.nz);
    next[src_node] += src_scale * f.deriv(static_cast<double>(j) * opt.tau_f);
    std::swap(prev, cur);
    std::swap(cur, next);
  }
}

namespace {
void write_i64(std::ofstream& f, std::int64_t x) { f.write(reinterpret_cast<char*>(&x), 8); }
void write_f64(std::ofstream& f, double x) { f.write(reinterpret_cast<char*>(&x), 8); }
std::int64_t read_i64(std::ifstream& f) {
  std::int64_t x = 0;
  f.read(reinterpret_cast<char*>(&x), 8);
  return x;
}
double read_f64(std::ifstream& f) {
  double x = 0;
  f.read(reinterpret_cast<char*>(&x), 8);
  return x;
}
}  // namespace

void save_response(const std::string& path, const ArrayResponse& r) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  write_i64(f, r.m);
  write_f64(f, r.tau_f);
  write_i64(f, static_cast<std::int64_t>(r.samples.size()));
  write_i64(f, r.j_begin);
  for (const MatX& M : r.samples) {
    if (M.rows() != r.m || M.cols() != r.m)
      throw ConfigError("response file format requires square m x m samples");
    MatX rm = M;  // row-major on disk
    rm.transposeInPlace();
    f.write(reinterpret_cast<const char*>(rm.data()), 8 * rm.size());
  }
  if (!f) throw ConfigError("short write on " + path);
}

ArrayResponse load_response(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  ArrayResponse r;
  r.m = static_cast<int>(read_i64(f));
  r.tau_f = read_f64(f);
  long cnt = static_cast<long>(read_i64(f));
  r.j_begin = static_cast<long>(read_i64(f));
  if (r.m <= 0 || cnt < 0 || r.tau_f <= 0) throw ConfigError("bad response header in " + path);
  r.samples.assign(static_cast<size_t>(cnt), MatX::Zero(r.m, r.m));
  for (MatX& M : r.samples) {
    MatX rm(r.m, r.m);
    f.read(reinterpret_cast<char*>(rm.data()), 8 * rm.size());
    M = rm.transpose();
  }
  if (!f) throw ConfigError("short read on " + path);
  return r;
}

}  // namespace romwi

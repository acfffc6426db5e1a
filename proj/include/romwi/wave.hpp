#pragma once
#include <functional>

#include "romwi/grid.hpp"
#include "romwi/pulse.hpp"

namespace romwi {

// Array response M(t): entry (r,s) is the pressure at receiver r for the shot
// fired at source s. Samples are on the fine time grid, t = j*tau_f for
// j = j_begin .. j_begin+samples.size()-1. Recording starts before t=0 (the
// source is quiescent-start at -t_support) so the even-time continuation can
// read negative times directly.
struct ArrayResponse {
  int m = 0;
  double tau_f = 0;
  long j_begin = 0;
  std::vector<MatX> samples;

  long j_end() const { return j_begin + static_cast<long>(samples.size()) - 1; }
  const MatX& at(long j) const { return samples[static_cast<size_t>(j - j_begin)]; }
  MatX& at(long j) { return samples[static_cast<size_t>(j - j_begin)]; }
};

// file header: int64 m, double tau_f, int64 n_samples, int64 j_begin
void save_response(const std::string& path, const ArrayResponse& r);
ArrayResponse load_response(const std::string& path);

struct SimOptions {
  double tau_f = 0;
  long j_begin = 0;     // first recorded/updated step; field is zero here
  long j_end = 0;       // last recorded step
  bool parallel_shots = true;    // OpenMP over sources
  bool omp_kernel = false;       // OpenMP inside the stencil update
  bool serial_reference = false; // force the plain serial stencil (testing)
};

// stencil kernels; one leapfrog update of the interior, Dirichlet boundary
// stays zero. lam[i] = (c_i * tau_f / h)^2. Kept in serial and OpenMP variants
// that must produce identical results.
void step_interior_serial(const double* cur, const double* prev, double* next,
                          const double* lam, int nx, int nz);
void step_interior_omp(const double* cur, const double* prev, double* next,
                       const double* lam, int nx, int nz);

// CFL bound for the five-point scheme: h >= cmax * tau_f * sqrt(2).
void check_cfl(const VelocityField& v, double tau_f);

// Multi-shot forward simulation. Sample (r,s) records receiver rec[r] for a
// point source (nearest node, 1/h^2 scaled) at src[s] driven by f'(t).
ArrayResponse simulate_shots(const VelocityField& v, const ArrayGeometry& src,
                             const ArrayGeometry& rec, const Pulse& f, const SimOptions& opt);
inline ArrayResponse simulate_shots(const VelocityField& v, const ArrayGeometry& ar,
                                    const Pulse& f, const SimOptions& opt) {
  return simulate_shots(v, ar, ar, f, opt);
}

// Single shot with a per-step wavefield observer (serial); for diagnostics.
void simulate_shot_observed(const VelocityField& v, int src_ix, int src_iz, const Pulse& f,
                            const SimOptions& opt,
                            const std::function<void(long, const std::vector<double>&)>& observe);

// Options covering t in [-t_support, (2n-1)*tau] at tau_f = tau/stride.
SimOptions sim_window(const Pulse& f, double tau, int n, int stride = 20);

}  // namespace romwi

#pragma once
#include <functional>

#include "romwi/regularize.hpp"

namespace romwi {

// Velocity parametrization v(x; eta) = c0(x) + sum_l eta_l phi_l(x) on a
// rectangular grid of basis centers inside the imaging window.
struct BasisSpec {
  bool gaussian = true;  // false: piecewise-linear hats on the center grid
  int nbx = 0, nbz = 0;
  double x0 = 0, x1 = 0, z0 = 0, z1 = 0;
  double sig_x = 0, sig_z = 0;  // Gaussian widths; ignored for hats
};

struct Parametrization {
  Grid2D grid;
  BasisSpec spec;
  std::vector<ArrX> phi;  // basis fields sampled on the grid
  double phi_peak = 1.0;  // peak of one basis function, sets the FD step scale

  int N() const { return static_cast<int>(phi.size()); }
  ArrX delta_c(const VecX& eta) const;
  VelocityField apply(const VelocityField& c0, const VecX& eta) const;
};

Parametrization make_parametrization(const Grid2D& g, const BasisSpec& bs);

// Restriction: first dm upper diagonals of the leading km x km window,
// diagonal-offset major, positions ascending along each diagonal.
VecX rest_map(const MatX& A, int m, int d, int k);
long rest_len(int m, int d, int k);

// Misfit suppliers for the shared Gauss-Newton driver. residual(eta, k) is the
// stacked misfit vector for time window k; the driver only ever sees this
// interface, so the reduced-model and plain-waveform inversions run through
// identical machinery.
struct ResidualProvider {
  virtual VecX residual(const VecX& eta, int k) = 0;
  virtual int n() const = 0;
  virtual int nparams() const = 0;
  virtual ~ResidualProvider() = default;
};

struct GnOptions {
  int ell = 1, q = 1;
  int d = 0;  // restriction bandwidth; 0 or >k is capped at the window size
  double gamma = 0.25;     // mu_i = sigma_{floor(gamma N)}^2 of the Jacobian
  double alpha_max = 3.0;  // line search upper bound
  double fd_step = 0;      // Jacobian step in eta units (caller sets scale)
  std::vector<int> schedule;  // size ell; empty -> default_schedule(n, ell)
  int golden_iters = 10;
  int max_halvings = 5;
  bool parallel_jacobian = true;
};

// k_l = round(k1 + (l-1)(n-k1)/(ell-1)), k1 = max(2, ceil(n/ell)); k_ell = n.
std::vector<int> default_schedule(int n, int ell);

struct IterRecord {
  int i = 0, layer = 0, k = 0;
  double mu = 0, alpha = 0;
  double objective = 0;  // ||residual||^2 after the step
  double eta_norm = 0;
  double L_pre = 0, L_post = 0;  // penalized objective before/after (fixed mu_i)
};

struct InversionResult {
  VecX eta;
  std::vector<IterRecord> log;
};

MatX fd_jacobian(ResidualProvider& rp, const VecX& eta, int k, double step,
                 bool parallel = true);
double adaptive_mu(const MatX& J, double gamma);

// Seeded golden-section search for phi on (0, alpha_max]; seeds at
// {1/4, 1/2, 1, 2, 3} * (alpha_max/3), `iters` refinements around the best
// seed, then the non-increase guard: halve up to `halvings` times, else 0.
// Returns {alpha, phi(alpha)} with phi(0) = phi0 implied for alpha = 0.
std::pair<double, double> golden_line_search(const std::function<double(double)>& phi,
                                             double phi0, double alpha_max, int iters,
                                             int halvings);

InversionResult gauss_newton_drive(ResidualProvider& rp, const GnOptions& opt);

// Forward modeling shared by both misfits: simulate the array response for
// v(.; eta), continue even in time, differentiate, subsample.
struct ForwardModel {
  VelocityField c0;
  ArrayGeometry array;
  Pulse pulse;
  double tau = 0;
  int n = 0;
  int stride = 20;
  Parametrization param;

  DataSeries series_for(const VecX& eta, int k) const;  // window k <= n
  double default_fd_step() const;  // 1e-2 * cbar / phi_peak
};

// Reduced-model misfit, exact (noise-free) path: data-side operator assembled
// once; model side rebuilt per evaluation; residual is the restricted
// difference of the leading k-block windows.
struct RomProvider final : ResidualProvider {
  ForwardModel fm;
  int d = 0;
  RomOperator data_rom;

  RomProvider(ForwardModel f, const DataSeries& data, int d_bandwidth);
  VecX residual(const VecX& eta, int k) override;
  int n() const override { return fm.n; }
  int nparams() const override { return fm.param.N(); }
};

// Regularized path: the data-side projector Pi is fixed; every model
// evaluation projects its own mass/stiffness with the same Pi. Windows are
// capped at the truncation rank.
struct RegRomProvider final : ResidualProvider {
  ForwardModel fm;
  int d = 0;
  RegularizedRom data;

  RegRomProvider(ForwardModel f, RegularizedRom data_side, int d_bandwidth);
  VecX residual(const VecX& eta, int k) override;
  int n() const override { return fm.n; }
  int nparams() const override { return fm.param.N(); }
};

}  // namespace romwi

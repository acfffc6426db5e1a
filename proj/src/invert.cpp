#include <algorithm>
#include <cmath>
#include <map>

#include "romwi/invert.hpp"

namespace romwi {

ArrX Parametrization::delta_c(const VecX& eta) const {
  ArrX dc = ArrX::Zero(grid.nodes());
  for (int l = 0; l < N(); ++l) dc += eta[l] * phi[static_cast<size_t>(l)];
  return dc;
}

VelocityField Parametrization::apply(const VelocityField& c0, const VecX& eta) const {
  if (!c0.grid.same_layout(grid)) throw ConfigError("parametrization grid mismatch");
  VelocityField v = c0;
  v.c += delta_c(eta);
  return v;
}

Parametrization make_parametrization(const Grid2D& g, const BasisSpec& bs) {
  if (bs.nbx < 1 || bs.nbz < 1) throw ConfigError("basis grid must be nonempty");
  Parametrization p;
  p.grid = g;
  p.spec = bs;
  const double dx = bs.nbx > 1 ? (bs.x1 - bs.x0) / (bs.nbx - 1) : 0;
  const double dz = bs.nbz > 1 ? (bs.z1 - bs.z0) / (bs.nbz - 1) : 0;
  for (int jz = 0; jz < bs.nbz; ++jz) {
    for (int jx = 0; jx < bs.nbx; ++jx) {
      const double xc = bs.x0 + jx * dx, zc = bs.z0 + jz * dz;
      ArrX f(g.nodes());
      if (bs.gaussian) {
        const double amp = 1.0 / (2.0 * M_PI * bs.sig_x * bs.sig_z);
        for (int iz = 0; iz < g.nz; ++iz)
          for (int ix = 0; ix < g.nx; ++ix) {
            double ex = (g.x(ix) - xc) / bs.sig_x, ez = (g.z(iz) - zc) / bs.sig_z;
            f[g.idx(ix, iz)] = amp * std::exp(-0.5 * (ex * ex + ez * ez));
          }
      } else {
        for (int iz = 0; iz < g.nz; ++iz)
          for (int ix = 0; ix < g.nx; ++ix) {
            double tx = dx > 0 ? 1.0 - std::abs(g.x(ix) - xc) / dx : (g.x(ix) == xc);
            double tz = dz > 0 ? 1.0 - std::abs(g.z(iz) - zc) / dz : (g.z(iz) == zc);
            f[g.idx(ix, iz)] = std::max(0.0, tx) * std::max(0.0, tz);
          }
      }
      p.phi.push_back(std::move(f));
    }
  }
  p.phi_peak = bs.gaussian ? 1.0 / (2.0 * M_PI * bs.sig_x * bs.sig_z) : 1.0;
  return p;
}

long rest_len(int m, int d, int k) {
  const long dm = static_cast<long>(d) * m, km = static_cast<long>(k) * m;
  return dm * km - dm * (dm - 1) / 2;
}

VecX rest_map(const MatX& A, int m, int d, int k) {
  const long km = static_cast<long>(k) * m, dm = static_cast<long>(d) * m;
  if (d < 1 || dm > km || A.rows() < km || A.cols() < km)
    throw ConfigError("rest_map: bandwidth/window out of range");
  VecX v(rest_len(m, d, k));
  long at = 0;
  for (long o = 0; o < dm; ++o)
    for (long i = 0; i + o < km; ++i) v[at++] = A(i, i + o);
  return v;
}

std::vector<int> default_schedule(int n, int ell) {
  if (ell < 1 || n < 1) throw ConfigError("bad schedule request");
  std::vector<int> ks;
  int k1 = std::max(2, (n + ell - 1) / ell);
  if (ell == 1) return {n};
  for (int l = 1; l <= ell; ++l) {
    double k = k1 + static_cast<double>(l - 1) * (n - k1) / (ell - 1);
    ks.push_back(std::min(n, std::max(1, static_cast<int>(std::lround(k)))));
  }
  ks.back() = n;
  return ks;
}

MatX fd_jacobian(ResidualProvider& rp, const VecX& eta, int k, double step, bool parallel) {
  if (step <= 0) throw ConfigError("fd_jacobian: step must be positive");
  const int N = static_cast<int>(eta.size());
  std::vector<VecX> plus(static_cast<size_t>(N)), minus(static_cast<size_t>(N));
  std::exception_ptr err;
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int l = 0; l < N; ++l) {
    try {
      VecX e = eta;
      e[l] += step;
      plus[static_cast<size_t>(l)] = rp.residual(e, k);
      e[l] = eta[l] - step;
      minus[static_cast<size_t>(l)] = rp.residual(e, k);
    } catch (...) {
#pragma omp critical
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);
  MatX J(plus[0].size(), N);
  for (int l = 0; l < N; ++l)
    J.col(l) = (plus[static_cast<size_t>(l)] - minus[static_cast<size_t>(l)]) / (2.0 * step);
  return J;
}

double adaptive_mu(const MatX& J, double gamma) {
  Eigen::BDCSVD<MatX> svd(J);
  const VecX& s = svd.singularValues();
  long idx = static_cast<long>(std::floor(gamma * static_cast<double>(J.cols())));
  idx = std::max<long>(1, std::min<long>(idx, s.size()));  // 1-based, clamped
  double sv = s[idx - 1];
  return sv * sv;
}

std::pair<double, double> golden_line_search(const std::function<double(double)>& phi,
                                             double phi0, double alpha_max, int iters,
                                             int halvings) {
  std::map<double, double> cache;
  auto eval = [&](double a) {
    auto it = cache.find(a);
    if (it != cache.end()) return it->second;
    double v = phi(a);
    cache[a] = v;
    return v;
  };

  const double seeds[5] = {0.25 * alpha_max / 3.0, 0.5 * alpha_max / 3.0, alpha_max / 3.0,
                           2.0 * alpha_max / 3.0, alpha_max};
  int best = 0;
  for (int i = 0; i < 5; ++i)
    if (eval(seeds[i]) < eval(seeds[best])) best = i;

  double lo = best == 0 ? 0.0 : seeds[best - 1];
  double hi = best == 4 ? alpha_max : seeds[best + 1];
  if (best == 4) lo = seeds[3];

  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = eval(x1), f2 = eval(x2);
  for (int it = 0; it < iters; ++it) {
    if (f1 <= f2) {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = eval(x1);
    } else {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = eval(x2);
    }
  }
  double alpha = 0, val = std::numeric_limits<double>::infinity();
  for (const auto& [a, v] : cache)
    if (a > 0 && v < val) {
      alpha = a;
      val = v;
    }
  // never accept an increase; shrink, then give up
  for (int hv = 0; hv <= halvings; ++hv) {
    if (val <= phi0) return {alpha, val};
    alpha *= 0.5;
    val = eval(alpha);
  }
  return {0.0, phi0};
}

InversionResult gauss_newton_drive(ResidualProvider& rp, const GnOptions& opt) {
  const int n = rp.n(), N = rp.nparams();
  if (opt.fd_step <= 0) throw ConfigError("fd_step must be set");
  std::vector<int> sched = opt.schedule.empty() ? default_schedule(n, opt.ell) : opt.schedule;
  if (static_cast<int>(sched.size()) != opt.ell) throw ConfigError("schedule size != ell");
  for (size_t l = 1; l < sched.size(); ++l)
    if (sched[l] < sched[l - 1]) throw ConfigError("schedule must be nondecreasing");

  InversionResult res;
  res.eta = VecX::Zero(N);
  int i = 0;
  for (int l = 0; l < opt.ell; ++l) {
    const int k = sched[static_cast<size_t>(l)];
    for (int j = 0; j < opt.q; ++j) {
      ++i;
      VecX r0 = rp.residual(res.eta, k);
      MatX J = fd_jacobian(rp, res.eta, k, opt.fd_step, opt.parallel_jacobian);
      double mu = adaptive_mu(J, opt.gamma);
      MatX H = J.transpose() * J + mu * MatX::Identity(N, N);
      VecX delta = Eigen::LDLT<MatX>(H).solve(-J.transpose() * r0);

      double L0 = r0.squaredNorm() + mu * res.eta.squaredNorm();
      auto phi = [&](double a) {
        VecX e = res.eta + a * delta;
        try {
          return rp.residual(e, k).squaredNorm() + mu * e.squaredNorm();
        } catch (const NumericalError&) {
          return std::numeric_limits<double>::infinity();  // reject this step length
        }
      };
      auto [alpha, Lbest] = golden_line_search(phi, L0, opt.alpha_max, opt.golden_iters,
                                               opt.max_halvings);
      if (alpha > 0) res.eta += alpha * delta;

      IterRecord rec;
      rec.i = i;
      rec.layer = l + 1;
      rec.k = k;
      rec.mu = mu;
      rec.alpha = alpha;
      rec.objective = alpha > 0 ? Lbest - mu * res.eta.squaredNorm() : r0.squaredNorm();
      rec.eta_norm = res.eta.norm();
      rec.L_pre = L0;
      rec.L_post = alpha > 0 ? Lbest : L0;
      res.log.push_back(rec);
    }
  }
  return res;
}

DataSeries ForwardModel::series_for(const VecX& eta, int k) const {
  VelocityField v = param.apply(c0, eta);
  if ((v.c <= 0).any()) throw NumericalError("velocity update went nonpositive");
  SimOptions opt = sim_window(pulse, tau, k, stride);
  ArrayResponse resp = simulate_shots(v, array, pulse, opt);
  std::vector<MatX> fine = build_even_data(resp, opt.j_end);
  return spectral_second_derivative(fine, opt.tau_f, stride, k, pulse.cutoff_hz());
}

double ForwardModel::default_fd_step() const { return 1e-2 * c0.cbar / param.phi_peak; }

RomProvider::RomProvider(ForwardModel f, const DataSeries& data, int d_bandwidth)
    : fm(std::move(f)), d(d_bandwidth) {
  data_rom = rom_operator(data);
}

VecX RomProvider::residual(const VecX& eta, int k) {
  // one full-record simulation, then the causal window: the windowed operator
  // must reuse the full-record derivative samples, exactly like the data side,
  // or the misfit at the true velocity picks up a window-length bias
  DataSeries ms = fm.series_for(eta, fm.n);
  RomOperator mr = principal_rom(ms, k);
  int de = d > 0 ? std::min(d, k) : k;
  return rest_map(mr.A, fm.array.m(), de, k) - rest_map(data_rom.A, fm.array.m(), de, k);
}

RegRomProvider::RegRomProvider(ForwardModel f, RegularizedRom data_side, int d_bandwidth)
    : fm(std::move(f)), d(d_bandwidth), data(std::move(data_side)) {}

VecX RegRomProvider::residual(const VecX& eta, int k) {
  DataSeries ms = fm.series_for(eta, fm.n);  // projector needs the full window
  RomOperator mr = regularized_rom_for_velocity(ms, data.proj);
  int ke = std::min(k, data.proj.r);
  int de = d > 0 ? std::min(d, ke) : ke;
  return rest_map(mr.A, fm.array.m(), de, ke) - rest_map(data.rom.A, fm.array.m(), de, ke);
}

}  // namespace romwi

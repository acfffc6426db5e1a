#include <fftw3.h>

#include <cmath>
#include <complex>
#include <cstdint>
#include <fstream>
#include <mutex>
#include <random>

#include "fftw_lock.hpp"
#include "romwi/data.hpp"

namespace romwi {

std::vector<MatX> build_even_data(const ArrayResponse& resp, long n_f) {
  if (resp.j_end() < n_f)
    throw ConfigError("response too short: need fine samples through index " + std::to_string(n_f));
  std::vector<MatX> F(static_cast<size_t>(n_f + 1));
  for (long k = 0; k <= n_f; ++k) {
    MatX v = resp.at(k);
    if (-k >= resp.j_begin) v += resp.at(-k);  // beyond the stored window the field is quiescent
    F[static_cast<size_t>(k)] = v;
  }
  return F;
}

std::vector<MatX> build_even_data(const ArrayResponse& resp, long n_f,
                                  const ArrayResponse& reference, double t_f) {
  if (resp.j_end() < n_f) throw ConfigError("response too short for requested n_f");
  std::vector<MatX> F(static_cast<size_t>(n_f + 1));
  for (long k = 0; k <= n_f; ++k) {
    double t = k * resp.tau_f;
    if (t < t_f) {
      // early window: both arrivals live in the reference medium near the array
      MatX v = reference.at(k);
      if (-k >= reference.j_begin) v += reference.at(-k);
      F[static_cast<size_t>(k)] = v;
    } else {
      F[static_cast<size_t>(k)] = resp.at(k);  // M(-t) = 0 for t > t_f
    }
  }
  return F;
}

std::vector<MatX> add_noise(const std::vector<MatX>& fine, double b, std::uint64_t seed) {
  std::vector<MatX> out = fine;
  if (b == 0.0 || fine.empty()) return out;
  double energy = 0;
  for (const MatX& F : fine) energy += F.squaredNorm();
  const long m = fine[0].rows();
  const double beta = b / (m * std::sqrt(static_cast<double>(fine.size()))) * std::sqrt(energy);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, beta);
  for (size_t k = 1; k < out.size(); ++k)
    for (long r = 0; r < out[k].rows(); ++r)
      for (long s = 0; s < out[k].cols(); ++s) out[k](r, s) += gauss(rng);
  return out;
}

std::vector<MatX> noise_realizations(const std::vector<MatX>& series) {
  std::vector<MatX> E(series.size());
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (size_t j = 0; j < series.size(); ++j)
    E[j] = (series[j] - series[j].transpose()) * inv_sqrt2;
  return E;
}

void symmetrize_series(DataSeries& d) {
  for (MatX& M : d.D) M = sym_part(M);
  for (MatX& M : d.Ddot) M = sym_part(M);
}

DataSeries spectral_second_derivative(const std::vector<MatX>& fine, double tau_f,
                                      int stride, int n, double cutoff_hz) {
  const long n_f = static_cast<long>(stride) * (2 * n - 1);
  if (static_cast<long>(fine.size()) < n_f + 1)
    throw ConfigError("fine series too short: need " + std::to_string(n_f + 1) + " samples");
  if (cutoff_hz >= 0.5 / tau_f) throw ConfigError("cutoff above the fine Nyquist rate");
  const long L = 2 * n_f + 1;  // odd-length grid of the even extension
  const int m = static_cast<int>(fine[0].rows());

  using cplx = std::complex<double>;
  std::vector<cplx> buf(static_cast<size_t>(L)), freq(static_cast<size_t>(L));
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fwd = fftw_plan_dft_1d(static_cast<int>(L), reinterpret_cast<fftw_complex*>(buf.data()),
                           reinterpret_cast<fftw_complex*>(freq.data()), FFTW_FORWARD,
                           FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(L), reinterpret_cast<fftw_complex*>(freq.data()),
                           reinterpret_cast<fftw_complex*>(buf.data()), FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  }

  // -omega^2 multipliers with the hard band cutoff
  std::vector<double> mult(static_cast<size_t>(L));
  for (long q = 0; q < L; ++q) {
    long qs = q <= n_f ? q : q - L;
    double omega = 2.0 * M_PI * qs / (L * tau_f);
    mult[static_cast<size_t>(q)] = std::abs(omega) <= 2.0 * M_PI * cutoff_hz ? -omega * omega : 0.0;
  }

  std::vector<MatX> dd(static_cast<size_t>(n_f + 1), MatX::Zero(m, m));
  for (int r = 0; r < m; ++r) {
    for (int s = 0; s < m; ++s) {
      buf[0] = fine[0](r, s);
      for (long j = 1; j <= n_f; ++j) {
        double v = fine[static_cast<size_t>(j)](r, s);
        buf[static_cast<size_t>(j)] = v;
        buf[static_cast<size_t>(L - j)] = v;  // even extension, wrapped indices
      }
      fftw_execute(fwd);
      for (long q = 0; q < L; ++q) freq[static_cast<size_t>(q)] *= mult[static_cast<size_t>(q)];
      fftw_execute(bwd);
      for (long j = 0; j <= n_f; ++j)
        dd[static_cast<size_t>(j)](r, s) = buf[static_cast<size_t>(j)].real() / L;
    }
  }
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }

  DataSeries out;
  out.m = m;
  out.n = n;
  out.tau = stride * tau_f;
  out.D.resize(static_cast<size_t>(2 * n));
  out.Ddot.resize(static_cast<size_t>(2 * n));
  for (int k = 0; k < 2 * n; ++k) {
    out.D[static_cast<size_t>(k)] = fine[static_cast<size_t>(k) * stride];  // unfiltered
    out.Ddot[static_cast<size_t>(k)] = dd[static_cast<size_t>(k) * stride];
  }
  return out;
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
void write_block(std::ofstream& f, const MatX& M) {
  MatX rm = M;
  rm.transposeInPlace();  // row-major on disk
  f.write(reinterpret_cast<const char*>(rm.data()), 8 * rm.size());
}
MatX read_block(std::ifstream& f, int m) {
  MatX rm(m, m);
  f.read(reinterpret_cast<char*>(rm.data()), 8 * rm.size());
  return rm.transpose();
}
}  // namespace

void save_series(const std::string& path, const DataSeries& d) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  write_i64(f, d.m);
  write_i64(f, d.n);
  write_f64(f, d.tau);
  for (const MatX& M : d.D) write_block(f, M);
  for (const MatX& M : d.Ddot) write_block(f, M);
  if (!f) throw ConfigError("short write on " + path);
}

DataSeries load_series(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  DataSeries d;
  d.m = static_cast<int>(read_i64(f));
  d.n = static_cast<int>(read_i64(f));
  d.tau = read_f64(f);
  if (d.m <= 0 || d.n <= 0 || d.tau <= 0) throw ConfigError("bad series header in " + path);
  d.D.resize(static_cast<size_t>(2 * d.n));
  d.Ddot.resize(static_cast<size_t>(2 * d.n));
  for (MatX& M : d.D) M = read_block(f, d.m);
  for (MatX& M : d.Ddot) M = read_block(f, d.m);
  if (!f) throw ConfigError("short read on " + path);
  return d;
}

}  // namespace romwi

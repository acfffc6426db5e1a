#pragma once
#include <cstdint>

#include "romwi/wave.hpp"

namespace romwi {

// Coarse even-time data series: D_j = D(j*tau) and its second time derivative,
// j = 0 .. 2n-1. Indices 0 .. 2n-2 feed the Galerkin matrices; index 2n-1 is
// kept for the propagator stiffness and the plain waveform misfit.
struct DataSeries {
  int m = 0, n = 0;
  double tau = 0;
  std::vector<MatX> D, Ddot;

  int count() const { return 2 * n; }
};

// file header: int64 m, int64 n, double tau; then 2n D blocks + 2n Ddot blocks
void save_series(const std::string& path, const DataSeries& d);
DataSeries load_series(const std::string& path);

// Even continuation D(t) = M(t) + M(-t) on the fine grid, k = 0..n_f.
// resp must cover t in [-t_support, n_f*tau_f]; samples earlier than j_begin
// are quiescent zeros.
std::vector<MatX> build_even_data(const ArrayResponse& resp, long n_f);
// Variant for acquisitions that only start at t >= 0: the early window
// [0, t_f) is taken from a reference-medium response (which must cover
// [-t_f, t_f)); beyond t_f the measured samples are used as-is since
// M(-t) = 0 there.
std::vector<MatX> build_even_data(const ArrayResponse& resp, long n_f,
                                  const ArrayResponse& reference, double t_f);

// Additive iid Gaussian noise on the fine even series, entries k >= 1.
// beta = b/(m*sqrt(n_f+1)) * sqrt(sum_k ||F_k||_F^2). Deterministic in seed.
std::vector<MatX> add_noise(const std::vector<MatX>& fine, double b, std::uint64_t seed);

// Noise realizations from the antisymmetric part: E_j = (D_j - D_j^T)/sqrt(2).
std::vector<MatX> noise_realizations(const std::vector<MatX>& series);

// Symmetrize every block, D_j <- (D_j + D_j^T)/2 (orthogonal projection onto
// symmetric matrices in the Frobenius sense).
void symmetrize_series(DataSeries& d);

// Band-limited spectral second derivative of the fine even series, then
// subsampling at the coarse step tau = stride*tau_f. Uses the odd-length DFT
// of the even extension (exact for sequences even about 0). Frequencies above
// cutoff_hz are zeroed before multiplying by -omega^2. The undifferentiated
// series is subsampled unfiltered. Requires fine.size() >= stride*(2n-1)+1 and
// cutoff below the fine Nyquist rate.
DataSeries spectral_second_derivative(const std::vector<MatX>& fine, double tau_f,
                                      int stride, int n, double cutoff_hz);

}  // namespace romwi

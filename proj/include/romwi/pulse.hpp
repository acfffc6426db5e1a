#pragma once
#include <vector>

namespace romwi {

// Even probing pulse: f(t) = cos(w0 t) * exp(-(2 pi B)^2 t^2 / 2).
// The source term of the wave equation uses f'(t); the data pipeline relies on
// f being even so that the even-in-time field continuation works.
struct Pulse {
  double f0 = 6.0;  // carrier, Hz
  double B = 4.0;   // envelope bandwidth, Hz

  double omega0() const;
  double a() const;  // envelope rate 2*pi*B
  double eval(double t) const;
  double deriv(double t) const;
  // Fourier transform integral f(t) e^{i w t} dt; real, nonnegative.
  double spectrum(double omega) const;
  // effective support: |f| < ~1.5e-8 outside (-t_support, t_support)
  double t_support() const;
  // band limit used by the spectral differentiation filter
  double cutoff_hz() const { return f0 + 4.0 * B; }
};

// Autocorrelation w_j = sum_k phi_k phi_{k-j} of a sampled wavelet. Produces an
// even sequence (index 0 is lag 0) usable as probing pulse for arbitrary wavelets.
std::vector<double> symmetrize_wavelet(const std::vector<double>& phi);

}  // namespace romwi

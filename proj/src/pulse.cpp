#include "romwi/pulse.hpp"

#include <cmath>

namespace romwi {

double Pulse::omega0() const { return 2.0 * M_PI * f0; }
double Pulse::a() const { return 2.0 * M_PI * B; }

double Pulse::eval(double t) const {
  double ar = a();
  return std::cos(omega0() * t) * std::exp(-0.5 * ar * ar * t * t);
}

double Pulse::deriv(double t) const {
  double w0 = omega0(), ar = a();
  double env = std::exp(-0.5 * ar * ar * t * t);
  return (-w0 * std::sin(w0 * t) - ar * ar * t * std::cos(w0 * t)) * env;
}

double Pulse::spectrum(double omega) const {
  // transform of the Gaussian envelope: sqrt(2 pi)/a * exp(-w^2/(2 a^2));
  // the cosine carrier splits it symmetrically about +-omega0.
  double ar = a(), w0 = omega0();
  double g = std::sqrt(2.0 * M_PI) / ar;
  auto bell = [&](double w) { return std::exp(-0.5 * (w / ar) * (w / ar)); };
  return 0.5 * g * (bell(omega - w0) + bell(omega + w0));
}

double Pulse::t_support() const { return 6.0 / a(); }

std::vector<double> symmetrize_wavelet(const std::vector<double>& phi) {
  long L = static_cast<long>(phi.size());
  std::vector<double> w(static_cast<size_t>(L), 0.0);
  for (long j = 0; j < L; ++j) {
    double s = 0;
    for (long k = j; k < L; ++k) s += phi[k] * phi[k - j];
    w[j] = s;
  }
  return w;
}

}  // namespace romwi

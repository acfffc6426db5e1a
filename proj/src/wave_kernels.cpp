#include "romwi/wave.hpp"

namespace romwi {

// Reference implementation: plain loops, no threading. The OpenMP variant must
// stay expression-identical so results are bitwise equal.
void step_interior_serial(const double* cur, const double* prev, double* next,
                          const double* lam, int nx, int nz) {
  for (int iz = 1; iz < nz - 1; ++iz) {
    const double* c = cur + static_cast<long>(iz) * nx;
    const double* cN = c - nx;
    const double* cS = c + nx;
    const double* p = prev + static_cast<long>(iz) * nx;
    const double* l = lam + static_cast<long>(iz) * nx;
    double* out = next + static_cast<long>(iz) * nx;
    for (int ix = 1; ix < nx - 1; ++ix) {
      out[ix] = 2.0 * c[ix] - p[ix] +
                l[ix] * (cN[ix] + cS[ix] + c[ix - 1] + c[ix + 1] - 4.0 * c[ix]);
    }
  }
}

void step_interior_omp(const double* cur, const double* prev, double* next,
                       const double* lam, int nx, int nz) {
#pragma omp parallel for schedule(static)
  for (int iz = 1; iz < nz - 1; ++iz) {
    const double* c = cur + static_cast<long>(iz) * nx;
    const double* cN = c - nx;
    const double* cS = c + nx;
    const double* p = prev + static_cast<long>(iz) * nx;
    const double* l = lam + static_cast<long>(iz) * nx;
    double* out = next + static_cast<long>(iz) * nx;
    for (int ix = 1; ix < nx - 1; ++ix) {
      out[ix] = 2.0 * c[ix] - p[ix] +
                l[ix] * (cN[ix] + cS[ix] + c[ix - 1] + c[ix + 1] - 4.0 * c[ix]);
    }
  }
}

}  // namespace romwi

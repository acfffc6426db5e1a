#include <cmath>
#include <random>

#include "romwi/models.hpp"

namespace romwi {

static Grid2D make_grid(double w, double hgt, double h) {
  Grid2D g;
  g.h = h;
  g.nx = static_cast<int>(std::lround(w / h)) + 1;
  g.nz = static_cast<int>(std::lround(hgt / h)) + 1;
  return g;
}

VelocityField camembert_model(double h) {
  VelocityField v;
  v.grid = make_grid(2000.0, 2500.0, h);
  v.cbar = 3000.0;
  v.c = ArrX::Constant(v.grid.nodes(), 3000.0);
  for (int iz = 0; iz < v.grid.nz; ++iz)
    for (int ix = 0; ix < v.grid.nx; ++ix) {
      double dx = v.grid.x(ix) - kCamembertDiskX, dz = v.grid.z(iz) - kCamembertDiskZ;
      if (dx * dx + dz * dz <= kCamembertDiskR * kCamembertDiskR)
        v.c[v.grid.idx(ix, iz)] = 4000.0;
    }
  return v;
}

VelocityField slanted_model(double h, double position, double contrast) {
  VelocityField v;
  v.grid = make_grid(kSlantW, kSlantH, h);
  v.cbar = kSlantTop;
  v.c = ArrX::Constant(v.grid.nodes(), kSlantTop);
  for (int iz = 0; iz < v.grid.nz; ++iz)
    for (int ix = 0; ix < v.grid.nx; ++ix)
      if (v.grid.z(iz) > position + kSlantSlope * v.grid.x(ix))
        v.c[v.grid.idx(ix, iz)] = kSlantTop * contrast;
  return v;
}

VelocityField gaussian_bump_model(double h) {
  VelocityField v;
  v.grid = make_grid(2000.0, 2000.0, h);
  v.cbar = 2500.0;
  v.c = ArrX::Constant(v.grid.nodes(), 2500.0);
  const double s2 = 2.0 * 250.0 * 250.0;
  for (int iz = 0; iz < v.grid.nz; ++iz)
    for (int ix = 0; ix < v.grid.nx; ++ix) {
      double dx = v.grid.x(ix) - 1000.0, dz = v.grid.z(iz) - 1000.0;
      v.c[v.grid.idx(ix, iz)] += 300.0 * std::exp(-(dx * dx + dz * dz) / s2);
    }
  return v;
}

VelocityField layered_model(double h, std::uint64_t seed) {
  VelocityField v;
  v.grid = make_grid(2000.0, 2000.0, h);
  v.cbar = 2000.0;
  v.c = ArrX::Constant(v.grid.nodes(), 2000.0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> speed(2200.0, 3600.0);
  std::uniform_real_distribution<double> thick(150.0, 350.0);
  double ztop = 400.0;  // homogeneous cap above the stack
  while (ztop < 2000.0) {
    double zbot = ztop + thick(rng), c = speed(rng);
    for (int iz = 0; iz < v.grid.nz; ++iz) {
      if (v.grid.z(iz) < ztop || v.grid.z(iz) >= zbot) continue;
      for (int ix = 0; ix < v.grid.nx; ++ix) v.c[v.grid.idx(ix, iz)] = c;
    }
    ztop = zbot;
  }
  return v;
}

}  // namespace romwi

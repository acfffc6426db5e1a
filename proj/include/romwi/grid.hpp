#pragma once
#include "romwi/core.hpp"

namespace romwi {

// Uniform 2D grid. x is lateral (nx columns), z is depth (nz rows).
// Fields are stored row-major with the depth index slow: value(ix, iz) = v[iz*nx + ix].
struct Grid2D {
  int nx = 0, nz = 0;
  double h = 0;        // node spacing, m
  double ox = 0, oz = 0;

  double x(int ix) const { return ox + ix * h; }
  double z(int iz) const { return oz + iz * h; }
  int idx(int ix, int iz) const { return iz * nx + ix; }
  int nodes() const { return nx * nz; }
  bool same_layout(const Grid2D& o) const {
    return nx == o.nx && nz == o.nz && h == o.h && ox == o.ox && oz == o.oz;
  }
};

struct VelocityField {
  Grid2D grid;
  ArrX c;             // m/s, grid.nodes() entries
  double cbar = 0;    // reference speed near the array

  double at(int ix, int iz) const { return c[grid.idx(ix, iz)]; }
  double cmax() const { return c.maxCoeff(); }
  // true when |c - cbar| <= tol*cbar within the given radius of node (ix,iz)
  bool reference_near(int ix, int iz, double radius, double tol = 1e-2) const;
};

// Colocated source/receiver line. Positions are snapped to grid nodes.
struct ArrayGeometry {
  std::vector<int> ix, iz;
  int m() const { return static_cast<int>(ix.size()); }
};

ArrayGeometry line_array(const Grid2D& g, int m, double x_first, double depth, double spacing);

// Velocity grid file: int64 nx, int64 nz, double h, double ox, double oz,
// then nx*nz row-major doubles (depth-major rows).
void save_velocity(const std::string& path, const VelocityField& v);
VelocityField load_velocity(const std::string& path, double cbar);

double rmse_in_window(const VelocityField& est, const VelocityField& truth,
                      double x0, double x1, double z0, double z1);

}  // namespace romwi

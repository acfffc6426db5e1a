#include "romwi/grid.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

namespace romwi {

namespace {
void write_i64(std::ofstream& f, std::int64_t v) { f.write(reinterpret_cast<char*>(&v), 8); }
void write_f64(std::ofstream& f, double v) { f.write(reinterpret_cast<char*>(&v), 8); }
std::int64_t read_i64(std::ifstream& f) {
  std::int64_t v = 0;
  f.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
double read_f64(std::ifstream& f) {
  double v = 0;
  f.read(reinterpret_cast<char*>(&v), 8);
  return v;
}
}  // namespace

bool VelocityField::reference_near(int ix, int iz, double radius, double tol) const {
  int rad = static_cast<int>(std::ceil(radius / grid.h));
  for (int dz = -rad; dz <= rad; ++dz) {
    for (int dx = -rad; dx <= rad; ++dx) {
      int jx = ix + dx, jz = iz + dz;
      if (jx < 0 || jx >= grid.nx || jz < 0 || jz >= grid.nz) continue;
      if (std::hypot(dx * grid.h, dz * grid.h) > radius) continue;
      if (std::abs(at(jx, jz) - cbar) > tol * cbar) return false;
    }
  }
  return true;
}

ArrayGeometry line_array(const Grid2D& g, int m, double x_first, double depth, double spacing) {
  ArrayGeometry ar;
  int iz = static_cast<int>(std::lround((depth - g.oz) / g.h));
  if (iz <= 0 || iz >= g.nz - 1) throw ConfigError("line_array: depth outside interior");
  for (int s = 0; s < m; ++s) {
    int ix = static_cast<int>(std::lround((x_first + s * spacing - g.ox) / g.h));
    if (ix <= 0 || ix >= g.nx - 1) throw ConfigError("line_array: sensor outside interior");
    ar.ix.push_back(ix);
    ar.iz.push_back(iz);
  }
  return ar;
}

void save_velocity(const std::string& path, const VelocityField& v) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  write_i64(f, v.grid.nx);
  write_i64(f, v.grid.nz);
  write_f64(f, v.grid.h);
  write_f64(f, v.grid.ox);
  write_f64(f, v.grid.oz);
  f.write(reinterpret_cast<const char*>(v.c.data()), 8 * v.grid.nodes());
  if (!f) throw ConfigError("short write on " + path);
}

VelocityField load_velocity(const std::string& path, double cbar) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  VelocityField v;
  v.grid.nx = static_cast<int>(read_i64(f));
  v.grid.nz = static_cast<int>(read_i64(f));
  v.grid.h = read_f64(f);
  v.grid.ox = read_f64(f);
  v.grid.oz = read_f64(f);
  if (v.grid.nx <= 2 || v.grid.nz <= 2 || v.grid.h <= 0)
    throw ConfigError("bad velocity header in " + path);
  v.c.resize(v.grid.nodes());
  f.read(reinterpret_cast<char*>(v.c.data()), 8 * v.grid.nodes());
  if (!f) throw ConfigError("short read on " + path);
  v.cbar = cbar > 0 ? cbar : v.c[0];
  return v;
}

double rmse_in_window(const VelocityField& est, const VelocityField& truth,
                      double x0, double x1, double z0, double z1) {
  if (!est.grid.same_layout(truth.grid)) throw ConfigError("rmse: grid mismatch");
  const Grid2D& g = est.grid;
  double acc = 0;
  long cnt = 0;
  for (int iz = 0; iz < g.nz; ++iz) {
    if (g.z(iz) < z0 || g.z(iz) > z1) continue;
    for (int ix = 0; ix < g.nx; ++ix) {
      if (g.x(ix) < x0 || g.x(ix) > x1) continue;
      double e = est.at(ix, iz) - truth.at(ix, iz);
      acc += e * e;
      ++cnt;
    }
  }
  if (cnt == 0) throw ConfigError("rmse: empty window");
  return std::sqrt(acc / cnt);
}

}  // namespace romwi

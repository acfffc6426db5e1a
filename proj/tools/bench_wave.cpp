// Microbenchmark: serial stencil vs the OpenMP one, then the shot loop with
// and without parallel sources. Prints node-updates/s so grid-size changes
// stay comparable.
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <vector>

#include "romwi/models.hpp"
#include "romwi/wave.hpp"

using namespace romwi;
using clk = std::chrono::steady_clock;

static double seconds_since(clk::time_point t0) {
  return std::chrono::duration<double>(clk::now() - t0).count();
}

int main(int argc, char** argv) {
  const double h = argc > 1 ? std::atof(argv[1]) : 12.5;
  const int steps = argc > 2 ? std::atoi(argv[2]) : 400;

  VelocityField v = camembert_model(h);
  const int nx = v.grid.nx, nz = v.grid.nz;
  const double tau_f = 0.0435 / 20.0;
  check_cfl(v, tau_f);

  std::vector<double> lam(v.grid.nodes()), a(v.grid.nodes(), 0), b(v.grid.nodes(), 0),
      c(v.grid.nodes(), 0);
  for (int i = 0; i < v.grid.nodes(); ++i) {
    double l = v.c[i] * tau_f / h;
    lam[static_cast<size_t>(i)] = l * l;
  }
  // seed a bump so the kernels chew on nonzero data
  a[static_cast<size_t>(v.grid.idx(nx / 2, nz / 2))] = 1.0;

  std::printf("grid %d x %d, %d steps\n", nx, nz, steps);
  const double updates = static_cast<double>(nx - 2) * (nz - 2) * steps;

  for (int pass = 0; pass < 2; ++pass) {
    const bool omp = pass == 1;
    std::vector<double> prev = a, cur = a, next = b;
    auto t0 = clk::now();
    for (int s = 0; s < steps; ++s) {
      if (omp)
        step_interior_omp(cur.data(), prev.data(), next.data(), lam.data(), nx, nz);
      else
        step_interior_serial(cur.data(), prev.data(), next.data(), lam.data(), nx, nz);
      std::swap(prev, cur);
      std::swap(cur, next);
    }
    double dt = seconds_since(t0);
    std::printf("stencil %-6s  %8.3f s   %8.1f Mupd/s\n", omp ? "omp" : "serial", dt,
                updates / dt / 1e6);
  }

  Pulse f;
  SimOptions opt = sim_window(f, 0.0435, 4);
  ArrayGeometry ar = line_array(v.grid, 8, 300.0, 150.0, 150.0);
  for (int pass = 0; pass < 2; ++pass) {
    SimOptions o = opt;
    o.parallel_shots = pass == 1;
    o.omp_kernel = false;
    auto t0 = clk::now();
    ArrayResponse r = simulate_shots(v, ar, f, o);
    double dt = seconds_since(t0);
    std::printf("shots   %-6s  %8.3f s   (m=%d, %zu samples)\n",
                pass ? "omp" : "serial", dt, r.m, r.samples.size());
  }
  return 0;
}

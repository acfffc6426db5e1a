#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <mutex>

#include "fftw_lock.hpp"
#include "romwi/streamer.hpp"

namespace romwi {

namespace {
// cubic Lagrange basis on offsets {-2,-1,+1,+2} evaluated at 0
constexpr double kW[4] = {-1.0 / 6.0, 2.0 / 3.0, 2.0 / 3.0, -1.0 / 6.0};
}  // namespace

ArrayResponse streamer_assemble(const StreamerData& sd) {
  const int m = sd.m;
  const long ns = sd.n_samples;
  if (m <= 0 || ns <= 0) throw ConfigError("empty streamer data");
  for (int s = 0; s < m; ++s) {
    if (static_cast<int>(sd.lower[static_cast<size_t>(s)].size()) != m - 1 - s)
      throw ConfigError("streamer coverage must include every pair on one side");
    for (const auto& t : sd.near[static_cast<size_t>(s)])
      if (static_cast<long>(t.size()) != ns)
        throw ConfigError("missing interpolation neighbor (array edge?)");
  }

  ArrayResponse out;
  out.m = m;
  out.tau_f = sd.tau_f;
  out.j_begin = sd.j_begin;
  out.samples.assign(static_cast<size_t>(ns), MatX::Zero(m, m));

  // one-sided pairs + reciprocity
  for (int s = 0; s < m; ++s) {
    for (int r = s + 1; r < m; ++r) {
      const std::vector<double>& tr = sd.lower[static_cast<size_t>(s)][static_cast<size_t>(r - s - 1)];
      for (long j = 0; j < ns; ++j) {
        out.samples[static_cast<size_t>(j)](r, s) = tr[static_cast<size_t>(j)];
        out.samples[static_cast<size_t>(j)](s, r) = tr[static_cast<size_t>(j)];
      }
    }
  }

  // zero offset: interpolate the scattered part across the four dense
  // neighbors per frequency, then add the reference back
  using cplx = std::complex<double>;
  std::vector<cplx> buf(static_cast<size_t>(ns)), acc(static_cast<size_t>(ns));
  fftw_plan fwd, bwd;
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fwd = fftw_plan_dft_1d(static_cast<int>(ns), reinterpret_cast<fftw_complex*>(buf.data()),
                           reinterpret_cast<fftw_complex*>(buf.data()), FFTW_FORWARD,
                           FFTW_ESTIMATE);
    bwd = fftw_plan_dft_1d(static_cast<int>(ns), reinterpret_cast<fftw_complex*>(acc.data()),
                           reinterpret_cast<fftw_complex*>(acc.data()), FFTW_BACKWARD,
                           FFTW_ESTIMATE);
  }
  for (int s = 0; s < m; ++s) {
    std::fill(acc.begin(), acc.end(), cplx(0));
    for (int q = 0; q < 4; ++q) {
      const auto& tr = sd.near[static_cast<size_t>(s)][static_cast<size_t>(q)];
      const auto& rf = sd.ref_near[static_cast<size_t>(s)][static_cast<size_t>(q)];
      for (long j = 0; j < ns; ++j)
        buf[static_cast<size_t>(j)] = tr[static_cast<size_t>(j)] - rf[static_cast<size_t>(j)];
      fftw_execute(fwd);
      for (long j = 0; j < ns; ++j) acc[static_cast<size_t>(j)] += kW[q] * buf[static_cast<size_t>(j)];
    }
    fftw_execute(bwd);
    const auto& rz = sd.ref_zero[static_cast<size_t>(s)];
    for (long j = 0; j < ns; ++j)
      out.samples[static_cast<size_t>(j)](s, s) =
          acc[static_cast<size_t>(j)].real() / static_cast<double>(ns) + rz[static_cast<size_t>(j)];
  }
  {
    std::lock_guard<std::mutex> lk(fftw_plan_mutex);
    fftw_destroy_plan(fwd);
    fftw_destroy_plan(bwd);
  }
  return out;
}

StreamerData simulate_streamer(const VelocityField& v, const ArrayGeometry& ar,
                               double dense_dx, const Pulse& f, const SimOptions& opt) {
  const Grid2D& g = v.grid;
  const int m = ar.m();
  int doff = static_cast<int>(std::lround(dense_dx / g.h));
  if (doff < 1) throw ConfigError("dense receiver spacing below the grid step");

  // receiver union: every sensor + the four dense neighbors of every source
  std::map<std::pair<int, int>, int> row_of;
  ArrayGeometry rec;
  auto add_rec = [&](int ix, int iz) {
    if (ix <= 0 || ix >= g.nx - 1) throw ConfigError("streamer neighbor outside interior");
    auto key = std::make_pair(ix, iz);
    auto it = row_of.find(key);
    if (it != row_of.end()) return it->second;
    int row = rec.m();
    rec.ix.push_back(ix);
    rec.iz.push_back(iz);
    row_of[key] = row;
    return row;
  };
  std::vector<int> sensor_row(static_cast<size_t>(m));
  std::vector<std::array<int, 4>> near_row(static_cast<size_t>(m));
  const int offs[4] = {-2 * doff, -doff, doff, 2 * doff};
  for (int s = 0; s < m; ++s) sensor_row[static_cast<size_t>(s)] = add_rec(ar.ix[s], ar.iz[s]);
  for (int s = 0; s < m; ++s)
    for (int q = 0; q < 4; ++q)
      near_row[static_cast<size_t>(s)][static_cast<size_t>(q)] = add_rec(ar.ix[s] + offs[q], ar.iz[s]);

  ArrayResponse meas = simulate_shots(v, ar, rec, f, opt);
  VelocityField ref = v;
  ref.c.setConstant(v.cbar);
  ArrayResponse refr = simulate_shots(ref, ar, rec, f, opt);

  StreamerData sd;
  sd.m = m;
  sd.tau_f = opt.tau_f;
  sd.j_begin = opt.j_begin;
  sd.n_samples = static_cast<long>(meas.samples.size());
  sd.lower.resize(static_cast<size_t>(m));
  sd.near.resize(static_cast<size_t>(m));
  sd.ref_near.resize(static_cast<size_t>(m));
  sd.ref_zero.resize(static_cast<size_t>(m));
  auto trace = [&](const ArrayResponse& a, int row, int s) {
    std::vector<double> t(static_cast<size_t>(sd.n_samples));
    for (long j = 0; j < sd.n_samples; ++j) t[static_cast<size_t>(j)] = a.samples[static_cast<size_t>(j)](row, s);
    return t;
  };
  for (int s = 0; s < m; ++s) {
    for (int r = s + 1; r < m; ++r)
      sd.lower[static_cast<size_t>(s)].push_back(trace(meas, sensor_row[static_cast<size_t>(r)], s));
    for (int q = 0; q < 4; ++q) {
      sd.near[static_cast<size_t>(s)][static_cast<size_t>(q)] =
          trace(meas, near_row[static_cast<size_t>(s)][static_cast<size_t>(q)], s);
      sd.ref_near[static_cast<size_t>(s)][static_cast<size_t>(q)] =
          trace(refr, near_row[static_cast<size_t>(s)][static_cast<size_t>(q)], s);
    }
    sd.ref_zero[static_cast<size_t>(s)] = trace(refr, sensor_row[static_cast<size_t>(s)], s);
  }
  return sd;
}

}  // namespace romwi

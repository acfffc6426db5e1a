#include "romwi/fwi.hpp"

namespace romwi {

long triu_len(int m) { return static_cast<long>(m) * (m + 1) / 2; }

VecX triu_vec(const MatX& A) {
  const long m = A.rows();
  VecX v(m * (m + 1) / 2);
  long at = 0;
  for (long i = 0; i < m; ++i)
    for (long j = i; j < m; ++j) v[at++] = A(i, j);
  return v;
}

static int fwi_sample_count(int k_window, int n) {
  // intermediate windows mirror the Galerkin data content (2k-1 blocks); the
  // final window keeps the spare trailing sample too
  return k_window == n ? 2 * n : 2 * k_window - 1;
}

static VecX fwi_residual(const DataSeries& model, const DataSeries& data, int k_window) {
  const int nk = fwi_sample_count(k_window, data.n);
  if (model.m != data.m || static_cast<int>(model.D.size()) < nk ||
      static_cast<int>(data.D.size()) < nk)
    throw ConfigError("waveform misfit: series shapes do not cover the window");
  const long per = triu_len(data.m);
  VecX r(per * nk);
  for (int k = 0; k < nk; ++k) r.segment(k * per, per) = triu_vec(model.D[k] - data.D[k]);
  return r;
}

double fwi_objective(const DataSeries& model, const DataSeries& data, int k_window) {
  return fwi_residual(model, data, k_window).squaredNorm();
}

FwiProvider::FwiProvider(ForwardModel f, DataSeries d) : fm(std::move(f)), data(std::move(d)) {
  if (data.n != fm.n) throw ConfigError("waveform misfit: data window != model window");
}

VecX FwiProvider::residual(const VecX& eta, int k) {
  // simulate only as far as the window needs
  DataSeries ms = fm.series_for(eta, k);
  return fwi_residual(ms, data, k);
}

}  // namespace romwi

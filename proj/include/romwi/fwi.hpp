#pragma once
#include "romwi/invert.hpp"

namespace romwi {

// Row-major upper triangle (diagonal included), length m(m+1)/2.
VecX triu_vec(const MatX& A);
long triu_len(int m);

// Plain least-squares waveform misfit on the coarse even series:
// sum_k ||Triu(D_k(v) - D_k)||^2 over k = 0..2k_window-2, or k = 0..2n-1 when
// k_window == n (the full sum keeps the trailing sample).
double fwi_objective(const DataSeries& model, const DataSeries& data, int k_window);

struct FwiProvider final : ResidualProvider {
  ForwardModel fm;
  DataSeries data;

  FwiProvider(ForwardModel f, DataSeries d);
  VecX residual(const VecX& eta, int k) override;
  int n() const override { return fm.n; }
  int nparams() const override { return fm.param.N(); }
};

}  // namespace romwi

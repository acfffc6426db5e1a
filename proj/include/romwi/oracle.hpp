#pragma once
#include <cstdint>

#include "romwi/pulse.hpp"
#include "romwi/rom.hpp"

namespace romwi {

// Exact-by-construction data generator for a small SPD operator A_h = Y L Y^T
// and an initial snapshot block U0:
//   D_j    =  U0^T cos(j tau sqrt(A_h)) U0
//   Ddot_j = -U0^T A_h cos(j tau sqrt(A_h)) U0
// Everything downstream of the data pipeline can be checked against direct
// Gramians of the snapshots cos(j tau sqrt(A_h)) U0.
struct SpectralOracle {
  VecX lambda;  // eigenvalues, > 0
  MatX Y;       // orthonormal eigenvectors
  MatX U0;      // N x m

  int m() const { return static_cast<int>(U0.cols()); }
  int N() const { return static_cast<int>(lambda.size()); }

  MatX cos_weights(double t) const;      // Y diag(cos(t sqrt(lambda))) Y^T
  MatX snapshot(int j, double tau) const;
  DataSeries series(int n, double tau) const;

  MatX mass_direct(int n, double tau) const;        // Gramian U_i^T U_j
  MatX stiffness_direct(int n, double tau) const;   // U_i^T A_h U_j
  MatX propagator_direct(int n, double tau) const;  // U_i^T cos(tau sqrt(A_h)) U_j

  // Independent route to the projected operator: thin QR of the snapshot
  // matrix with the positive-diagonal convention, then Q^T A_h Q.
  MatX projected_operator(int n, double tau) const;
};

// Random well-conditioned instance: frequencies sqrt(lambda)*tau spread over
// (0.3, 2.6), Gaussian U0. Deterministic in seed.
SpectralOracle random_oracle(int N, int m, double tau, std::uint64_t seed);

// Wave-like instance: A_h = cbar^2 * (1D Dirichlet Laplacian / h^2) on N nodes
// with m sensor columns (8 nodes apart, starting one pulse-width inside the
// domain) filtered by sqrt of the pulse spectrum. Produces data with the
// off-diagonal decay of physical measurements. Needs N >= 80 + 8m.
SpectralOracle line_oracle(int N, int m, double cbar, double h, const Pulse& f);

}  // namespace romwi

#pragma once
#include "romwi/rom.hpp"

namespace romwi {

// Top rm eigenpairs of a symmetric matrix, eigenvalues descending.
struct SpectralBasis {
  MatX Z;       // nm x rm
  VecX lambda;  // rm, descending
};
SpectralBasis spectral_truncate(const MatX& Msym, int m, int r);

// Block Lanczos tridiagonalization of symmetric P with starting block B0
// (orthonormalized internally), full reorthogonalization each step, thin-QR
// positive-diagonal sign convention. Returns orthogonal Q with Q^T P Q block
// tridiagonal. Throws NumericalError on breakdown (rank-deficient new block):
// the requested rank is too large for the noise level.
MatX lanczos_recausalize(const MatX& P, const MatX& B0, int m);

// Fixed data-side projection basis, reused unchanged for every search velocity.
struct CausalProjector {
  int m = 0, n = 0, r = 0;
  MatX Pi;  // nm x rm, Pi = Z_r Q
};

struct RegularizedRom {
  RomOperator rom;  // rom.r = r, matrix rm x rm
  CausalProjector proj;
};

// Data-side regularized operator from a noisy series: symmetrize blocks, keep
// the top rm spectral modes of the mass matrix, restore causality with the
// block-Lanczos pass on the projected propagator, then factor the projected
// mass and form the operator.
RegularizedRom regularized_rom(const DataSeries& noisy, int r);

// Model-side operator for a search velocity, with the data-side projector held
// fixed: factor Pi^T M(v) Pi and project the stiffness.
RomOperator regularized_rom_for_velocity(const DataSeries& model_series,
                                         const CausalProjector& proj);

// Truncation rank rule: compare singular values of the background mass with
// and without the measured noise realizations; the first index j (1-based)
// where |sig_N_j / sig_o_j - 1| >= eps gives r = floor(j / m); no violation
// gives r = n.
int threshold_rule(const VecX& sig_o, const VecX& sig_noisy, int m, int n,
                   double eps_sigma = 1e-2);
int choose_threshold(const DataSeries& noisy, const DataSeries& background,
                     double eps_sigma = 1e-2);

}  // namespace romwi

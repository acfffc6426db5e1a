#pragma once
#include "romwi/data.hpp"

namespace romwi {

// Galerkin matrices assembled purely from the data series (block Hankel +
// Toeplitz combinations). k = number of snapshot blocks (default n).
//   mass      M_ij = (D_{i+j} + D_{|i-j|}) / 2
//   stiffness S_ij = -(Ddot_{i+j} + Ddot_{|i-j|}) / 2
//   propagator stiffness
//             St_ij = (D_{i+j+1} + D_{|i-j-1|} + D_{|i+j-1|} + D_{|i-j+1|}) / 4
MatX assemble_mass(const DataSeries& d, int k = 0);
MatX assemble_stiffness(const DataSeries& d, int k = 0);
MatX assemble_propagator_stiffness(const DataSeries& d, int k = 0);

// Block Cholesky M = R^T R with R block upper triangular; diagonal blocks are
// upper triangular with positive diagonal (scalar Cholesky of each pivot), so
// R is unique. Throws NumericalError naming the failing pivot block when M is
// not positive definite.
MatX block_cholesky(const MatX& M, int m);

// A = R^{-T} S R^{-1} by two triangular solves (no explicit inverse).
MatX rom_from_factors(const MatX& R, const MatX& S);

struct RomOperator {
  int m = 0, n = 0;
  int r = 0;  // 0: exact data-driven provenance; >0: spectrally truncated rank
  MatX A;

  int dim() const { return (r > 0 ? r : n) * m; }
};

// file header: int64 m, int64 n, int64 r(provenance); then dim^2 doubles
void save_rom(const std::string& path, const RomOperator& rom);
RomOperator load_rom(const std::string& path);

RomOperator rom_operator(const DataSeries& d);
// Same pipeline restricted to the data subset D_0..D_{2k-2}; by causality this
// equals the leading km x km block of the full operator.
RomOperator principal_rom(const DataSeries& d, int k);

}  // namespace romwi

#include <cmath>

#include "romwi/regularize.hpp"

namespace romwi {

SpectralBasis spectral_truncate(const MatX& Msym, int m, int r) {
  const long dim = Msym.rows();
  if (r <= 0 || static_cast<long>(r) * m > dim) throw ConfigError("spectral_truncate: bad rank");
  Eigen::SelfAdjointEigenSolver<MatX> eig(sym_part(Msym));
  if (eig.info() != Eigen::Success) throw NumericalError("eigendecomposition failed");
  // Eigen sorts ascending; flip to descending and keep the top rm
  SpectralBasis b;
  const long keep = static_cast<long>(r) * m;
  b.Z.resize(dim, keep);
  b.lambda.resize(keep);
  for (long i = 0; i < keep; ++i) {
    b.Z.col(i) = eig.eigenvectors().col(dim - 1 - i);
    b.lambda[i] = eig.eigenvalues()[dim - 1 - i];
  }
  return b;
}

namespace {
// thin QR with positive-diagonal R; returns {Q, R}
std::pair<MatX, MatX> thin_qr_pos(const MatX& W) {
  Eigen::HouseholderQR<MatX> qr(W);
  const long c = W.cols();
  MatX Q = qr.householderQ() * MatX::Identity(W.rows(), c);
  MatX R = qr.matrixQR().topRows(c).triangularView<Eigen::Upper>();
  for (long i = 0; i < c; ++i)
    if (R(i, i) < 0) {
      Q.col(i) = -Q.col(i);
      R.row(i) = -R.row(i);
    }
  return {Q, R};
}
}  // namespace

MatX lanczos_recausalize(const MatX& P, const MatX& B0, int m) {
  const long dim = P.rows();
  if (P.cols() != dim || B0.rows() != dim || B0.cols() != m || dim % m != 0)
    throw ConfigError("lanczos_recausalize: bad shapes");
  const long nb = dim / m;
  const double btol = 1e-12 * P.norm();

  MatX Q(dim, dim);
  auto Qj = [&](long j) { return Q.middleCols(j * m, m); };

  auto [Q0, R0] = thin_qr_pos(B0);
  Q.middleCols(0, m) = Q0;
  MatX Bprev;  // R factor connecting block j to j-1
  for (long j = 0; j < nb - 1; ++j) {
    MatX W = P * Qj(j);
    if (j > 0) W.noalias() -= Qj(j - 1) * Bprev.transpose();
    W.noalias() -= Qj(j) * (Qj(j).transpose() * W);
    // full reorthogonalization, two passes
    for (int pass = 0; pass < 2; ++pass) {
      MatX done = Q.leftCols((j + 1) * m);
      W.noalias() -= done * (done.transpose() * W);
    }
    auto [Qn, B] = thin_qr_pos(W);
    for (int i = 0; i < m; ++i)
      if (B(i, i) <= btol)
        throw NumericalError("block Lanczos breakdown at block " + std::to_string(j + 1) +
                             ": requested rank too large for the noise level; reduce r");
    Q.middleCols((j + 1) * m, m) = Qn;
    Bprev = B;
  }
  return Q;
}

namespace {
// shared tail of the data-side chain: given symmetric M^N, S^N, S~^N
CausalProjector projector_from(const MatX& Mn, const MatX& St, int m, int n, int r) {
  SpectralBasis sb = spectral_truncate(Mn, m, r);
  if (sb.lambda[sb.lambda.size() - 1] <= 0)
    throw NumericalError("truncated mass not positive: reduce r");
  VecX isq = sb.lambda.cwiseSqrt().cwiseInverse();
  MatX Pr = isq.asDiagonal() * (sb.Z.transpose() * St * sb.Z) * isq.asDiagonal();
  // starting block: image of the first snapshot block e0 in the scaled basis
  MatX B0 = isq.asDiagonal() * sb.Z.topRows(m).transpose();
  MatX Q = lanczos_recausalize(sym_part(Pr), B0, m);
  CausalProjector cp;
  cp.m = m;
  cp.n = n;
  cp.r = r;
  cp.Pi = sb.Z * Q;
  return cp;
}
}  // namespace

RegularizedRom regularized_rom(const DataSeries& noisy, int r) {
  if (r < 1 || r > noisy.n) throw ConfigError("regularized_rom: rank out of range");
  DataSeries d = noisy;
  symmetrize_series(d);
  MatX Mn = assemble_mass(d);
  MatX Sn = assemble_stiffness(d);
  MatX St = assemble_propagator_stiffness(d);
  RegularizedRom out;
  out.proj = projector_from(Mn, St, d.m, d.n, r);
  MatX G = out.proj.Pi.transpose() * Mn * out.proj.Pi;
  MatX R = block_cholesky(sym_part(G), d.m);
  out.rom.m = d.m;
  out.rom.n = d.n;
  out.rom.r = r;
  out.rom.A = rom_from_factors(R, out.proj.Pi.transpose() * Sn * out.proj.Pi);
  return out;
}

RomOperator regularized_rom_for_velocity(const DataSeries& model_series,
                                         const CausalProjector& proj) {
  if (model_series.n != proj.n || model_series.m != proj.m)
    throw ConfigError("projector does not match the model series");
  MatX Mv = assemble_mass(model_series);
  MatX Sv = assemble_stiffness(model_series);
  MatX G = proj.Pi.transpose() * Mv * proj.Pi;
  MatX R = block_cholesky(sym_part(G), proj.m);
  RomOperator rom;
  rom.m = proj.m;
  rom.n = proj.n;
  rom.r = proj.r;
  rom.A = rom_from_factors(R, proj.Pi.transpose() * Sv * proj.Pi);
  return rom;
}

int threshold_rule(const VecX& sig_o, const VecX& sig_noisy, int m, int n, double eps_sigma) {
  if (sig_o.size() != sig_noisy.size() || sig_o.size() == 0)
    throw ConfigError("threshold_rule: size mismatch");
  for (long j = 0; j < sig_o.size(); ++j) {
    if (sig_o[j] <= 0)
      throw NumericalError("degenerate background: zero singular value before the threshold");
    if (std::abs(sig_noisy[j] / sig_o[j] - 1.0) >= eps_sigma) {
      int r = static_cast<int>((j + 1) / m);  // first violating index, 1-based
      if (r < 1)
        throw NumericalError("noise dominates the leading block; no usable rank");
      return r;
    }
  }
  return n;
}

int choose_threshold(const DataSeries& noisy, const DataSeries& background, double eps_sigma) {
  if (noisy.m != background.m || noisy.n != background.n)
    throw ConfigError("choose_threshold: series shapes differ");
  std::vector<MatX> E = noise_realizations(noisy.D);
  DataSeries bg_noisy = background;
  for (size_t j = 0; j < bg_noisy.D.size(); ++j) bg_noisy.D[j] += E[j];
  VecX sig_o = Eigen::BDCSVD<MatX>(assemble_mass(background)).singularValues();
  VecX sig_n = Eigen::BDCSVD<MatX>(assemble_mass(bg_noisy)).singularValues();
  return threshold_rule(sig_o, sig_n, noisy.m, noisy.n, eps_sigma);
}

}  // namespace romwi

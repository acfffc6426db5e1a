#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>

#include "romwi/rom.hpp"

namespace romwi {

namespace {
int blocks_or_default(const DataSeries& d, int k) {
  int kk = k > 0 ? k : d.n;
  if (kk > d.n) throw ConfigError("window exceeds the series length");
  return kk;
}
}  // namespace

MatX assemble_mass(const DataSeries& d, int k) {
  const int kk = blocks_or_default(d, k), m = d.m;
  if (static_cast<int>(d.D.size()) < 2 * kk - 1) throw ConfigError("series too short for mass");
  MatX M(kk * m, kk * m);
  for (int i = 0; i < kk; ++i)
    for (int j = 0; j < kk; ++j)
      M.block(i * m, j * m, m, m) =
          0.5 * (d.D[static_cast<size_t>(i + j)] + d.D[static_cast<size_t>(std::abs(i - j))]);
  return M;
}

MatX assemble_stiffness(const DataSeries& d, int k) {
  const int kk = blocks_or_default(d, k), m = d.m;
  if (static_cast<int>(d.Ddot.size()) < 2 * kk - 1) throw ConfigError("series too short for stiffness");
  MatX S(kk * m, kk * m);
  for (int i = 0; i < kk; ++i)
    for (int j = 0; j < kk; ++j)
      S.block(i * m, j * m, m, m) =
          -0.5 * (d.Ddot[static_cast<size_t>(i + j)] + d.Ddot[static_cast<size_t>(std::abs(i - j))]);
  return S;
}

MatX assemble_propagator_stiffness(const DataSeries& d, int k) {
  const int kk = blocks_or_default(d, k), m = d.m;
  if (static_cast<int>(d.D.size()) < 2 * kk) throw ConfigError("series too short for propagator");
  MatX St(kk * m, kk * m);
  for (int i = 0; i < kk; ++i)
    for (int j = 0; j < kk; ++j)
      St.block(i * m, j * m, m, m) =
          0.25 * (d.D[static_cast<size_t>(i + j + 1)] + d.D[static_cast<size_t>(std::abs(i - j - 1))] +
                  d.D[static_cast<size_t>(std::abs(i + j - 1))] + d.D[static_cast<size_t>(std::abs(i - j + 1))]);
  return St;
}

MatX block_cholesky(const MatX& M, int m) {
  const long dim = M.rows();
  if (dim != M.cols() || m <= 0 || dim % m != 0) throw ConfigError("block_cholesky: bad shape");
  const long nb = dim / m;
  MatX R = MatX::Zero(dim, dim);
  for (long j = 0; j < nb; ++j) {
    MatX G = M.block(j * m, j * m, m, m);
    for (long q = 0; q < j; ++q)
      G.noalias() -= R.block(q * m, j * m, m, m).transpose() * R.block(q * m, j * m, m, m);
    Eigen::LLT<MatX> llt(sym_part(G));
    if (llt.info() != Eigen::Success)
      throw NumericalError("mass matrix is not positive definite at pivot block " +
                           std::to_string(j) + " (regularize or reduce the window)");
    // G = U^T U with U upper triangular, positive diagonal: makes R unique
    R.block(j * m, j * m, m, m) = llt.matrixU();
    for (long c = j + 1; c < nb; ++c) {
      MatX Gc = M.block(j * m, c * m, m, m);
      for (long q = 0; q < j; ++q)
        Gc.noalias() -= R.block(q * m, j * m, m, m).transpose() * R.block(q * m, c * m, m, m);
      R.block(j * m, c * m, m, m) =
          R.block(j * m, j * m, m, m).transpose().triangularView<Eigen::Lower>().solve(Gc);
    }
  }
  return R;
}

MatX rom_from_factors(const MatX& R, const MatX& S) {
  // A = R^{-T} S R^{-1} via two triangular solves
  MatX X = R.transpose().triangularView<Eigen::Lower>().solve(S);
  MatX At = R.transpose().triangularView<Eigen::Lower>().solve(X.transpose());
  return At.transpose();
}

RomOperator rom_operator(const DataSeries& d) {
  RomOperator rom;
  rom.m = d.m;
  rom.n = d.n;
  rom.r = 0;
  MatX R = block_cholesky(assemble_mass(d), d.m);
  rom.A = rom_from_factors(R, assemble_stiffness(d));
  return rom;
}

RomOperator principal_rom(const DataSeries& d, int k) {
  if (k < 1 || k > d.n) throw ConfigError("principal_rom: window out of range");
  RomOperator rom;
  rom.m = d.m;
  rom.n = k;
  rom.r = 0;
  MatX R = block_cholesky(assemble_mass(d, k), d.m);
  rom.A = rom_from_factors(R, assemble_stiffness(d, k));
  return rom;
}

namespace {
void write_i64(std::ofstream& f, std::int64_t x) { f.write(reinterpret_cast<char*>(&x), 8); }
std::int64_t read_i64(std::ifstream& f) {
  std::int64_t x = 0;
  f.read(reinterpret_cast<char*>(&x), 8);
  return x;
}
}  // namespace

void save_rom(const std::string& path, const RomOperator& rom) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  write_i64(f, rom.m);
  write_i64(f, rom.n);
  write_i64(f, rom.r);
  MatX rm = rom.A;
  rm.transposeInPlace();
  f.write(reinterpret_cast<const char*>(rm.data()), 8 * rm.size());
  if (!f) throw ConfigError("short write on " + path);
}

RomOperator load_rom(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read " + path);
  RomOperator rom;
  rom.m = static_cast<int>(read_i64(f));
  rom.n = static_cast<int>(read_i64(f));
  rom.r = static_cast<int>(read_i64(f));
  if (rom.m <= 0 || rom.n <= 0 || rom.r < 0) throw ConfigError("bad rom header in " + path);
  long dim = rom.dim();
  MatX rm(dim, dim);
  f.read(reinterpret_cast<char*>(rm.data()), 8 * dim * dim);
  if (!f) throw ConfigError("short read on " + path);
  rom.A = rm.transpose();
  return rom;
}

}  // namespace romwi

#include <cmath>
#include <random>

#include "romwi/oracle.hpp"

namespace romwi {

MatX SpectralOracle::cos_weights(double t) const {
  VecX w(lambda.size());
  for (long i = 0; i < lambda.size(); ++i) w[i] = std::cos(t * std::sqrt(lambda[i]));
  return Y * w.asDiagonal() * Y.transpose();
}

MatX SpectralOracle::snapshot(int j, double tau) const { return cos_weights(j * tau) * U0; }

DataSeries SpectralOracle::series(int n, double tau) const {
  DataSeries d;
  d.m = m();
  d.n = n;
  d.tau = tau;
  MatX A = Y * lambda.asDiagonal() * Y.transpose();
  for (int j = 0; j < 2 * n; ++j) {
    MatX C = cos_weights(j * tau);
    d.D.push_back(U0.transpose() * C * U0);
    d.Ddot.push_back(-U0.transpose() * A * C * U0);
  }
  return d;
}

MatX SpectralOracle::mass_direct(int n, double tau) const {
  MatX M(n * m(), n * m());
  std::vector<MatX> U;
  for (int j = 0; j < n; ++j) U.push_back(snapshot(j, tau));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      M.block(i * m(), j * m(), m(), m()) = U[static_cast<size_t>(i)].transpose() * U[static_cast<size_t>(j)];
  return M;
}

MatX SpectralOracle::stiffness_direct(int n, double tau) const {
  MatX A = Y * lambda.asDiagonal() * Y.transpose();
  MatX S(n * m(), n * m());
  std::vector<MatX> U;
  for (int j = 0; j < n; ++j) U.push_back(snapshot(j, tau));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      S.block(i * m(), j * m(), m(), m()) =
          U[static_cast<size_t>(i)].transpose() * A * U[static_cast<size_t>(j)];
  return S;
}

MatX SpectralOracle::propagator_direct(int n, double tau) const {
  MatX P = cos_weights(tau);
  MatX S(n * m(), n * m());
  std::vector<MatX> U;
  for (int j = 0; j < n; ++j) U.push_back(snapshot(j, tau));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      S.block(i * m(), j * m(), m(), m()) =
          U[static_cast<size_t>(i)].transpose() * P * U[static_cast<size_t>(j)];
  return S;
}

MatX SpectralOracle::projected_operator(int n, double tau) const {
  // snapshots -> thin QR with positive-diagonal convention == the causal
  // Gram-Schmidt basis; then project A_h
  MatX Usnap(N(), n * m());
  for (int j = 0; j < n; ++j) Usnap.middleCols(j * m(), m()) = snapshot(j, tau);
  Eigen::HouseholderQR<MatX> qr(Usnap);
  MatX Q = qr.householderQ() * MatX::Identity(N(), n * m());
  MatX R = qr.matrixQR().topRows(n * m()).triangularView<Eigen::Upper>();
  for (long i = 0; i < R.rows(); ++i)
    if (R(i, i) < 0) Q.col(i) = -Q.col(i);
  MatX A = Y * lambda.asDiagonal() * Y.transpose();
  return Q.transpose() * A * Q;
}

SpectralOracle random_oracle(int N, int m, double tau, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> th(0.3, 2.6);
  MatX G(N, N);
  for (long i = 0; i < G.size(); ++i) G.data()[i] = gauss(rng);
  Eigen::HouseholderQR<MatX> qr(G);
  SpectralOracle o;
  o.Y = qr.householderQ() * MatX::Identity(N, N);
  o.lambda.resize(N);
  for (int i = 0; i < N; ++i) {
    double t = th(rng) / tau;  // frequency; keeps samples well inside Nyquist
    o.lambda[i] = t * t;
  }
  o.U0.resize(N, m);
  for (long i = 0; i < o.U0.size(); ++i) o.U0.data()[i] = gauss(rng) / std::sqrt(static_cast<double>(N));
  return o;
}

SpectralOracle line_oracle(int N, int m, double cbar, double h, const Pulse& f) {
  // 1D Dirichlet Laplacian, A = cbar^2 K / h^2; analytic eigenpairs
  SpectralOracle o;
  o.lambda.resize(N);
  o.Y.resize(N, N);
  for (int k = 0; k < N; ++k) {
    double s = 2.0 * std::sin(0.5 * M_PI * (k + 1) / (N + 1)) / h;
    o.lambda[k] = cbar * cbar * s * s;
    for (int i = 0; i < N; ++i)
      o.Y(i, k) = std::sqrt(2.0 / (N + 1)) * std::sin(M_PI * (k + 1) * (i + 1) / (N + 1));
  }
  // Pulse-filtered delta columns on a line of sensors. Placement matters for
  // conditioning: the first sensor sits well inside the domain (a boundary
  // image one or two nodes away makes the column nearly odd and the Gramian
  // numerically singular), and the spacing keeps cross-sensor travel within a
  // couple of coarse steps so echo coupling lands in the near block diagonals.
  if (N < 40 + 8 * m + 40) throw ConfigError("line_oracle: N too small for the sensor line");
  MatX E = MatX::Zero(N, m);
  for (int s = 0; s < m; ++s) E(40 + 8 * s, s) = 1.0 / std::sqrt(h);
  VecX flt(N);
  for (int k = 0; k < N; ++k) flt[k] = std::sqrt(f.spectrum(std::sqrt(o.lambda[k])));
  o.U0 = o.Y * flt.asDiagonal() * o.Y.transpose() * E;
  return o;
}

}  // namespace romwi

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "romwi/fwi.hpp"

using namespace romwi;

namespace {
DataSeries scalar_series(std::vector<double> d, int n) {
  DataSeries s;
  s.m = 1;
  s.n = n;
  s.tau = 1.0;
  for (double v : d) {
    s.D.push_back(MatX::Constant(1, 1, v));
    s.Ddot.push_back(MatX::Zero(1, 1));
  }
  return s;
}
}  // namespace

TEST_CASE("upper triangle vector: row-major order, diagonal included") {
  CHECK(triu_len(1) == 1);
  CHECK(triu_len(2) == 3);
  CHECK(triu_len(3) == 6);

  MatX A(3, 3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) A(i, j) = 10.0 * i + j;
  VecX v = triu_vec(A);
  REQUIRE(v.size() == 6);
  VecX want(6);
  want << 0, 1, 2, 11, 12, 22;
  CHECK((v - want).norm() == 0.0);
}

TEST_CASE("waveform misfit: windowed sums with frozen hand values") {
  DataSeries data = scalar_series({0, 0, 0, 0, 0, 0}, 3);
  DataSeries model = scalar_series({1, 2, 3, 4, 5, 6}, 3);

  CHECK(fwi_objective(model, data, 1) == 1.0);          // one sample
  CHECK(fwi_objective(model, data, 2) == 14.0);         // 2k-1 = 3 samples
  CHECK(fwi_objective(model, data, 3) == 91.0);         // full window: all 2n

  // the misfit reads the upper triangle only
  DataSeries d2, m2;
  d2.m = m2.m = 2;
  d2.n = m2.n = 2;
  d2.tau = m2.tau = 1.0;
  for (int j = 0; j < 4; ++j) {
    d2.D.push_back(MatX::Zero(2, 2));
    m2.D.push_back(MatX::Zero(2, 2));
    d2.Ddot.push_back(MatX::Zero(2, 2));
    m2.Ddot.push_back(MatX::Zero(2, 2));
  }
  MatX B(2, 2);
  B << 1, 2, 3, 4;
  m2.D[0] = B;
  CHECK(fwi_objective(m2, d2, 2) == 21.0);  // 1 + 4 + 16; the (1,0) entry is ignored

  DataSeries shorty = scalar_series({1, 2, 3}, 3);  // only 3 of 6 blocks present
  CHECK_THROWS_WITH_AS(fwi_objective(shorty, data, 3), doctest::Contains("cover the window"),
                       ConfigError);
}

namespace {
struct TinySetup {
  ForwardModel fm;
  VecX eta_true;

  TinySetup() {
    Grid2D g{21, 21, 100.0};
    VelocityField c0;
    c0.grid = g;
    c0.c = ArrX::Constant(g.nodes(), 2500.0);
    c0.cbar = 2500.0;

    BasisSpec bs;
    bs.gaussian = true;
    bs.nbx = bs.nbz = 2;
    bs.x0 = 850.0;
    bs.x1 = 1150.0;
    bs.z0 = 700.0;
    bs.z1 = 1100.0;
    bs.sig_x = bs.sig_z = 250.0;

    fm.c0 = c0;
    fm.array = line_array(g, 2, 800.0, 100.0, 400.0);
    fm.pulse = Pulse{};
    fm.tau = 0.0435;
    fm.n = 3;
    fm.param = make_parametrization(g, bs);

    eta_true.resize(4);
    const double s = 100.0 / fm.param.phi_peak;
    eta_true << 0.4 * s, 0.4 * s, 0.25 * s, 0.25 * s;
  }
};
}  // namespace

TEST_CASE("waveform provider: zero at the truth for every window") {
  TinySetup su;
  DataSeries data = su.fm.series_for(su.eta_true, su.fm.n);
  FwiProvider fp(su.fm, data);

  // same deterministic pipeline on both sides; shorter windows reuse a prefix
  // of the same samples, so the misfit vanishes bitwise
  CHECK(fp.residual(su.eta_true, su.fm.n).norm() == 0.0);
  CHECK(fp.residual(su.eta_true, 2).norm() == 0.0);
  CHECK(fp.residual(VecX::Zero(4), su.fm.n).norm() > 0.0);

  CHECK(fp.residual(VecX::Zero(4), 2).size() == triu_len(2) * 3);
  CHECK(fp.residual(VecX::Zero(4), 3).size() == triu_len(2) * 6);

  ForwardModel wrong = su.fm;
  wrong.n = 4;
  CHECK_THROWS_WITH_AS(FwiProvider(wrong, data), doctest::Contains("window"), ConfigError);
}

TEST_CASE("waveform misfit runs through the shared driver") {
  TinySetup su;
  DataSeries data = su.fm.series_for(su.eta_true, su.fm.n);
  FwiProvider fp(su.fm, data);

  GnOptions opt;
  opt.ell = 1;
  opt.q = 2;
  opt.fd_step = su.fm.default_fd_step();
  InversionResult res = gauss_newton_drive(fp, opt);

  REQUIRE(res.log.size() == 2);
  CHECK(res.log[0].k == 3);
  for (const IterRecord& rec : res.log) CHECK(rec.L_post <= rec.L_pre * (1.0 + 1e-12));
  double r0 = fp.residual(VecX::Zero(4), 3).squaredNorm();
  double r1 = fp.residual(res.eta, 3).squaredNorm();
  CHECK(r1 < r0);
}

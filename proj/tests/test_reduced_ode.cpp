#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "nlslab/error.hpp"
#include "nlslab/reduced_ode.hpp"

using namespace nlslab;
using testing::geometry;
using testing::rel;

TEST_CASE("right-hand side at rest") {
  const auto& c = geometry(2);
  ReducedState st;
  st.s = 100.0;
  st.p.z = 6.0;
  const ParamVelocity v = reduced_rhs(st, c);
  CHECK(v.z_dot == 0.0);
  CHECK(v.lambda_dot == 0.0);
  CHECK(v.gamma_dot == 1.0);
  CHECK(v.b_dot == a_of_z(c, 6.0));
  CHECK(v.b_dot < 0.0);

  st.p.b = 3e-3;
  st.p.beta = 1e-4;
  st.p.lambda = 0.4;
  CHECK(modulation_vector(st.p, reduced_rhs(st, c), c).norm() < 1e-14);
}

TEST_CASE("formal regime") {
  const auto& c = geometry(2);
  double prev = 1.0;
  for (double s : {1e3, 1e5, 1e7, 1e9}) {
    const double dev = std::abs(regime_reference(c, s).z * c.kappa / (2.0 * std::log(s)) - 1.0);
    CHECK(dev < prev);
    prev = dev;
  }

  // Residuals in units of s^{-2} log^{-3/2} s.
  for (double s : {1e3, 1e4, 1e5, 1e6}) {
    const double h = 1e-4 * s;
    const ParamState p = regime_reference(c, s);
    const double bdot = (regime_reference(c, s + h).b - regime_reference(c, s - h).b) / (2.0 * h);
    const double unit = std::pow(s, -2.0) * std::pow(std::log(s), -1.5);
    const double r1 = std::abs(bdot + p.b * p.b - a_of_z(c, p.z)) / unit;
    const double r2 = std::abs(a_of_z(c, p.z) + 1.0 / (s * s * std::log(s))) / unit;
    CHECK(std::isfinite(r1));
    CHECK(r1 < 10.0);
    CHECK(r2 < 10.0);
  }
}

TEST_CASE("final data") {
  const auto& c = geometry(2);
  const double s_in = 1e6;
  const ParamState p = final_data(c, s_in, 0.0);
  CHECK(std::abs(zeta_of(c, p.z) - s_in) <= 1e-9 * s_in);
  CHECK(p.b * p.b == doctest::Approx(2.0 * c.c_a / c.kappa * std::pow(p.z, -0.5) * std::exp(-c.kappa * p.z))
                         .epsilon(1e-14));
  double z = final_data(c, s_in, -1.0).z;
  for (double zs : {-0.5, 0.0, 0.5, 1.0}) {
    const double next = final_data(c, s_in, zs).z;
    CHECK(next > z);
    z = next;
  }
}

TEST_CASE("endpoint exits and transversality") {
  const auto& c = geometry(2);
  ShootingConfig cfg;
  cfg.s_in = 1e6;
  cfg.s0 = 1e3;
  const ReducedRun up = integrate_backward(cfg, 1.0, c);
  const ReducedRun down = integrate_backward(cfg, -1.0, c);
  REQUIRE(up.exit.exited);
  REQUIRE(down.exit.exited);
  CHECK(up.exit.band == TubeBand::zeta);
  CHECK(down.exit.band == TubeBand::zeta);
  CHECK(up.exit.sign == 1);
  CHECK(down.exit.sign == -1);
  CHECK(up.exit.xi_dot < 0.0);
  CHECK(down.exit.xi_dot < 0.0);
}

TEST_CASE("shooting survivor") {
  const auto& c = geometry(2);
  ShootingConfig cfg;
  cfg.s_in = 1e6;
  cfg.s0 = 1e3;
  const ShootResult sr = shoot(cfg, c);
  REQUIRE(sr.success);
  CHECK(sr.monotone);
  const SurvivorBands sb = survivor_bands(c, sr.survivor.trajectory);
  MESSAGE("lambda log s in [" << sb.lambda_log_min << ", " << sb.lambda_log_max << "], b s log s in ["
                              << sb.b_slog_min << ", " << sb.b_slog_max << "], z excess " << sb.z_excess_max);
  CHECK(sb.lambda_log_min >= 0.9);
  CHECK(sb.lambda_log_max <= 1.1);
  CHECK(sb.b_slog_min >= 0.8);
  CHECK(sb.b_slog_max <= 1.2);
  CHECK(sb.z_excess_max < 5.0);

  const std::vector<double> t = time_map(sr.survivor.trajectory);
  bool monotone = true;
  for (std::size_t i = 1; i < t.size(); ++i) monotone = monotone && t[i] < t[i - 1];
  CHECK(monotone);
}

TEST_CASE("time map") {
  Trajectory tr;
  ParamState p;
  p.lambda = 0.3;
  p.z = 5.0;
  tr.start(100.0, p);
  for (double s : {90.0, 75.0, 40.0, 10.0}) tr.append(s, p, {});
  const std::vector<double> t = time_map(tr);
  for (std::size_t i = 0; i < t.size(); ++i)
    CHECK(t[i] == doctest::Approx(0.09 * (tr.s()[i] - 100.0)).epsilon(1e-14));
}

TEST_CASE("backward and forward integration round trip") {
  const auto& c = geometry(2);
  IntegratorOptions opt;
  opt.tube.reset();
  opt.rtol = 1e-13;
  ReducedState st{1e4, final_data(c, 1e4, 0.0)};
  const ReducedRun back = integrate(c, st, 1e3, opt);
  const ReducedState mid{back.trajectory.s_back(), back.trajectory.params().back()};
  const ReducedRun fwd = integrate(c, mid, 1e4, opt);
  const ParamState& e = fwd.trajectory.params().back();
  CHECK(rel(e.lambda, st.p.lambda) < 1e-8);
  CHECK(rel(e.z, st.p.z) < 1e-8);
  CHECK(rel(e.b, st.p.b) < 1e-8);
  CHECK(std::abs(e.beta - st.p.beta) < 1e-8);
  CHECK(rel(e.gamma - st.p.gamma + 1.0, 1.0) < 1e-8);
}

TEST_CASE("configuration checks") {
  ShootingConfig cfg;
  cfg.s0 = 2e6;
  CHECK_THROWS_AS(validate(cfg), Error);
}

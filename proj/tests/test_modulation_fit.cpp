#include <doctest.h>

#include <cmath>

#include "fixture.hpp"
#include "nlslab/error.hpp"
#include "nlslab/modulation_fit.hpp"

using namespace nlslab;
using testing::geometry;
using testing::ground_state;

namespace {

const ParamState kTrue{0.5, 8.0, 0.3, 0.0, 1e-3};

}  // namespace

TEST_CASE("exact ansatz is a fixed point") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  const Grid2D yg(256, 24.0);
  const ComplexField2D u = to_physical(build_ansatz(gs, c, kTrue, yg), kTrue);
  ParamState guess = kTrue;
  guess.lambda *= 1.005;
  guess.z += 0.03;
  guess.gamma += 0.02;
  guess.b *= 1.3;
  guess.beta = 1e-4;
  const Decomposition d = decompose(u, gs, c, guess);
  CHECK(std::abs(d.p.lambda - kTrue.lambda) < 1e-9 * kTrue.lambda);
  CHECK(std::abs(d.p.z - kTrue.z) < 1e-9 * kTrue.z);
  CHECK(std::abs(d.p.gamma - kTrue.gamma) < 1e-9);
  CHECK(std::abs(d.p.beta - kTrue.beta) < 1e-9);
  CHECK(std::abs(d.p.b - kTrue.b) < 1e-9);
  CHECK(d.eps_H1 < 1e-8);
  for (double t : d.transverse) CHECK(std::abs(t) < 1e-12);

  const FunctionalValues f = functionals(d, gs, c, 100.0);
  CHECK(std::abs(f.H) < 1e-15);
  CHECK(std::abs(f.J) < 1e-15);
}

TEST_CASE("momentum kick is absorbed by the parameters") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  const Grid2D yg(256, 24.0);
  const BubbleSet bs(gs, c, kTrue);
  const double delta = 1e-3;
  const ComplexField2D v = ComplexField2D::sample(yg, [&](double y1, double y2) {
    cplx s = bs.sum(y1, y2);
    for (int k = 0; k < c.K; ++k) {
      const auto zk = bs.center(k);
      const auto& e = c.directions[static_cast<std::size_t>(k)];
      const double w1 = y1 - zk[0], w2 = y2 - zk[1], r = std::hypot(w1, w2);
      if (r <= 0.0 || r >= gs.Q.grid().r_max()) continue;
      const double dQ = gs.Q.sample(r).slope * (e[0] * w1 + e[1] * w2) / r;
      s += cplx(0.0, delta * dQ) * std::polar(1.0, bs.phase(k, w1, w2));
    }
    return s;
  });
  const Decomposition d = decompose(to_physical(v, kTrue), gs, c, kTrue);
  CHECK(std::abs(d.ortho_residuals[3]) < 1e-8);
  CHECK(std::abs(d.p.beta - kTrue.beta) + std::abs(d.p.z - kTrue.z) > 0.1 * delta);
  MESSAGE("beta shift " << d.p.beta - kTrue.beta << ", z shift " << d.p.z - kTrue.z);
}

TEST_CASE("box-size sensitivity of the remainder norm") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  std::vector<double> norms;
  for (double L : {24.0, 48.0}) {
    const Grid2D yg(L == 24.0 ? 256 : 512, L);
    ComplexField2D v = build_ansatz(gs, c, kTrue, yg);
    v += ComplexField2D::sample(yg, [](double x, double y) {
      return cplx(2e-3 * std::exp(-((x - 8.5) * (x - 8.5) + y * y)), 1e-3 * std::exp(-((x + 7.0) * (x + 7.0) + (y - 1.0) * (y - 1.0))));
    });
    norms.push_back(decompose(to_physical(v, kTrue), gs, c, kTrue).eps_H1);
  }
  MESSAGE("||eps||_H1 at half widths 24, 48: " << norms[0] << ", " << norms[1]);
  CHECK(std::abs(norms[1] / norms[0] - 1.0) < 1e-3);
}

TEST_CASE("guess outside the closeness window") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  const Grid2D yg(256, 24.0);
  ComplexField2D u = to_physical(build_ansatz(gs, c, kTrue, yg), kTrue);
  u *= 2.0;
  try {
    decompose(u, gs, c, kTrue);
    FAIL("expected outside-closeness-window");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::outside_closeness_window);
  }
}

TEST_CASE("functionals") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  const Grid2D yg(256, 24.0);
  ParamState p = kTrue;
  p.lambda = 1.0;
  const FunctionalValues z = functionals(gs, c, p, ComplexField2D(yg), 100.0);
  CHECK(z.H == 0.0);
  CHECK(z.J == 0.0);
  CHECK(z.F == 0.0);

  const ComplexField2D real = ComplexField2D::sample(yg, [](double x, double y) {
    return cplx(1e-3 * std::exp(-0.3 * ((x - 8.0) * (x - 8.0) + y * y)), 0.0);
  });
  CHECK(std::abs(functionals(gs, c, p, real, 100.0).J) < 1e-20);

  CHECK(cutoff_chi(0.05) == 1.0);
  CHECK(cutoff_chi(0.2) == 0.0);
  CHECK(cutoff_chi(0.1125) == doctest::Approx(0.5));
}

TEST_CASE("coercivity on admissible perturbations") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  ParamState p = kTrue;
  p.lambda = 1.0;
  const CoercivityProbe cp = random_coercivity(gs, c, p, Grid2D(256, 24.0), 100.0, 100);
  MESSAGE("F / ||eps||^2 in [" << cp.min_quotient << ", " << cp.max_quotient << "]");
  CHECK(cp.samples == 100);
  CHECK(cp.min_quotient > 0.0);
  // The rotated copy of bubble 1 leaks a little into the bubble-0 pairings.
  CHECK(cp.max_ortho < 1e-2 * 1e-3);
}

TEST_CASE("short backward track") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  TrackConfig cfg;
  cfg.n = 256;
  cfg.dt = 2e-4;
  cfg.cadence = 250;
  cfg.max_records = 5;
  cfg.zeta_sharp = -0.25;
  const TrackResult run = track(gs, c, cfg);
  REQUIRE(run.records.size() == 5);
  CHECK_FALSE(run.truncated);
  CHECK(run.records.front().eps_H1 < 1e-10);
  CHECK(run.records.front().s_proxy == doctest::Approx(cfg.s_in));
  for (const auto& r : run.records) CHECK(std::abs(r.snap.mass / run.records.front().snap.mass - 1.0) < 1e-10);
  for (std::size_t i = 1; i < run.records.size(); ++i) CHECK(run.records[i].s_proxy < run.records[i - 1].s_proxy);
  const TrackAssessment a = assess(run);
  CHECK(a.all_converged);
  CHECK(a.mass_drift < 1e-10);
}

TEST_CASE("track configuration checks") {
  TrackConfig cfg;
  cfg.s_floor = 200.0;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = TrackConfig{};
  cfg.cadence = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
}

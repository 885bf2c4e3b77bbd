#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixture.hpp"
#include "nlslab/error.hpp"
#include "nlslab/pde.hpp"

using namespace nlslab;
using testing::geometry;
using testing::ground_state;
using testing::rel;

namespace {

constexpr double pi = std::numbers::pi;

ComplexField2D gaussian(const Grid2D& g, double amp = 1.0) {
  return ComplexField2D::sample(g, [&](double x, double y) { return cplx(amp * std::exp(-0.5 * (x * x + y * y)), 0.0); });
}

double l2_dist(const ComplexField2D& a, const ComplexField2D& b) { return std::sqrt((a - b).l2_norm_sq()); }

}  // namespace

TEST_CASE("short soliton hold") {
  const auto& gs = ground_state();
  const Grid2D g(256, 20.0);
  ComplexField2D u = sample_radial(gs.Q, g);
  ComplexField2D ex = u;
  const double dt = 1e-4, t = 0.1;
  SplitStepSolver solver(g, dt);
  solver.advance(u, 1000);
  ex *= std::polar(1.0, t);
  CHECK(l2_dist(u, ex) < 1e-7);
  CHECK_FALSE(solver.aliasing_warning());
}

TEST_CASE("linear regime matches the free flow") {
  const Grid2D g(128, 12.0);
  ComplexField2D u = gaussian(g, 1e-9);
  const ComplexField2D u0 = u;
  SplitStepSolver solver(g, 1e-3);
  solver.advance(u, 500);
  const ComplexField2D v = free_propagate(u0, 0.5);
  CHECK(l2_dist(u, v) / std::sqrt(u0.l2_norm_sq()) < 1e-12);
}

TEST_CASE("mass drift over many steps") {
  const Grid2D g(64, 10.0);
  ComplexField2D u = gaussian(g);
  const double m0 = u.l2_norm_sq();
  SplitStepSolver solver(g, 1e-3);
  solver.advance(u, 10000);
  CHECK(std::abs(u.l2_norm_sq() - m0) / m0 <= 1e-12);
}

TEST_CASE("second-order convergence in dt") {
  const Grid2D g(128, 12.0);
  const ComplexField2D u0 = gaussian(g, 1.2);
  auto run = [&](double dt) {
    ComplexField2D u = u0;
    SplitStepSolver s(g, dt);
    s.advance(u, static_cast<std::size_t>(std::llround(0.2 / dt)));
    return u;
  };
  const ComplexField2D ref = run(1.25e-4);
  const double e1 = l2_dist(run(4e-3), ref), e2 = l2_dist(run(2e-3), ref), e3 = l2_dist(run(1e-3), ref);
  CHECK(e1 / e2 == doctest::Approx(4.0).epsilon(0.2));
  CHECK(e2 / e3 == doctest::Approx(4.0).epsilon(0.2));
}

TEST_CASE("symmetric configurations stay symmetric") {
  const auto& gs = ground_state();
  for (int K : {2, 4}) {
    const auto& c = geometry(K);
    ParamState p;
    p.z = 6.0;
    p.b = 2e-3;
    p.beta = 1e-3;
    const Grid2D g(128, 24.0);
    ComplexField2D u = build_ansatz(gs, c, p, g);
    SplitStepSolver solver(g, 1e-3);
    solver.advance(u, 1000);
    const std::size_t n = g.n;
    double err = 0.0, scale = u.max_abs();
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 1; i < n; ++i) {
        const std::size_t ri = K == 2 ? n - i : n - j, rj = K == 2 ? n - j : i;
        err = std::max(err, std::abs(u(ri, rj) - u(i, j)));
      }
    CHECK(err / scale < 1e-10);
  }
}

TEST_CASE("conserved quantities") {
  const auto& gs = ground_state();
  const Grid2D g(256, 20.0);
  const ComplexField2D q = sample_radial(gs.Q, g);
  const ConservedSnapshot sq = conserved(q, 0.0);
  CHECK(std::abs(sq.energy) < 1e-6 * sq.mass);

  ComplexField2D qr = q;
  qr *= std::polar(1.0, 1.234);
  const ConservedSnapshot sr = conserved(qr, 0.0);
  CHECK(sr.mass == doctest::Approx(sq.mass).epsilon(1e-14));
  CHECK(sr.energy == doctest::Approx(sq.energy).epsilon(1e-12).scale(sq.mass));
  CHECK(sr.variance == doctest::Approx(sq.variance).epsilon(1e-14));
  CHECK(sr.max_amp == doctest::Approx(sq.max_amp).epsilon(1e-14));

  const ConservedSnapshot s = conserved(gaussian(Grid2D(256, 12.0)), 0.0);
  CHECK(rel(s.mass, pi) < 1e-8);
  CHECK(rel(s.variance, pi) < 1e-8);
  // E = 1/2 int |grad u|^2 - 1/4 int |u|^4 = pi/2 - pi/8
  CHECK(rel(s.energy, 3.0 * pi / 8.0) < 1e-8);
  CHECK(s.variance_valid);
}

TEST_CASE("energy drift stays small") {
  const Grid2D g(128, 12.0);
  ComplexField2D u = gaussian(g, 1.5);
  const double e0 = conserved(u, 0.0).energy;
  SplitStepSolver solver(g, 5e-4);
  solver.advance(u, 2000);
  CHECK(std::abs(conserved(u, 1.0).energy - e0) / std::abs(e0) < 1e-4);
}

TEST_CASE("virial identity") {
  const Grid2D g(256, 10.0);
  const double dt = 1e-4;
  ComplexField2D u = gaussian(g);
  SplitStepSolver solver(g, dt);
  std::vector<ConservedSnapshot> snaps{conserved(u, 0.0)};
  for (int k = 1; k <= 4; ++k) {
    solver.advance(u, 100);
    snaps.push_back(conserved(u, k * 100 * dt));
  }
  const VirialReport v = virial_check(snaps);
  CHECK(v.rel_error <= 1e-2);
  CHECK_THROWS_AS(virial_check(std::span(snaps).first(3)), Error);

  // e^{it} Q: stationary variance and zero energy.
  const auto& gs = ground_state();
  const Grid2D gq(256, 20.0);
  ComplexField2D q = sample_radial(gs.Q, gq);
  SplitStepSolver sq(gq, 5e-5);
  std::vector<ConservedSnapshot> qs{conserved(q, 0.0)};
  for (int k = 1; k <= 4; ++k) {
    sq.advance(q, 200);
    qs.push_back(conserved(q, k * 200 * 5e-5));
  }
  const VirialReport vq = virial_check(qs);
  CHECK(std::abs(vq.second_difference) < 1e-6);
  CHECK(std::abs(vq.sixteen_energy / 16.0) < 1e-6);

  // Boosted Gaussian with negative energy: variance is concave.
  ComplexField2D b = gaussian(g, 2.5);
  REQUIRE(conserved(b, 0.0).energy < 0.0);
  SplitStepSolver sb(g, dt);
  std::vector<ConservedSnapshot> bs{conserved(b, 0.0)};
  for (int k = 1; k <= 4; ++k) {
    sb.advance(b, 100);
    bs.push_back(conserved(b, k * 100 * dt));
  }
  CHECK(virial_check(bs).second_difference < 0.0);
}

TEST_CASE("pseudo-conformal transform of the soliton") {
  const auto& gs = ground_state();
  const Grid2D g(512, 40.0);
  const ComplexField2D q = sample_radial(gs.Q, g);
  double prev_gap = 1e9;
  for (double t : {-0.2, -0.1, -0.05}) {
    ComplexField2D u = q;
    u *= std::polar(1.0, 1.0 / std::abs(t));
    const ComplexField2D v = pseudo_conformal(u, t);
    const ComplexField2D S = minimal_mass_solution(gs.Q, t, v.grid());
    double err = 0.0;
    for (std::size_t i = 0; i < v.data().size(); ++i) err = std::max(err, std::abs(v.data()[i] - S.data()[i]));
    CHECK(err <= 1e-8);
    CHECK(rel(v.l2_norm_sq(), u.l2_norm_sq()) <= 1e-8);
    const double rate = std::sqrt(Spectral(v.grid()).dirichlet(v)) * std::abs(t);
    const double gap = std::abs(rate - std::sqrt(gs.grad_sq));
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
}

TEST_CASE("Gagliardo-Nirenberg quotient") {
  const auto& gs = ground_state();
  const Grid2D g(256, 20.0);
  const GagliardoReport rq = gagliardo_check(sample_radial(gs.Q, g), gs.mass);
  CHECK(rel(rq.quotient, 2.0 / gs.mass) < 1e-6);

  const GagliardoReport rg = gagliardo_check(gaussian(g), gs.mass);
  CHECK(rg.quotient < rq.quotient);
  CHECK(rg.below_sharp);
  CHECK(rg.energy_bound_holds);

  const double lam = 0.7;
  const ComplexField2D scaled = ComplexField2D::sample(g, [&](double x, double y) {
    return cplx(std::exp(-0.5 * (x * x + y * y) / (lam * lam)) / lam, 0.0);
  });
  CHECK(rel(gagliardo_check(scaled, gs.mass).quotient, rg.quotient) < 1e-10);
}

TEST_CASE("solver guards") {
  const Grid2D g(64, 10.0);
  CHECK_THROWS_AS(validate(EvolutionConfig{g, 1.0, 1.0, 100}, gaussian(g)), Error);
  validate(EvolutionConfig{g, 1e-3, 1.0, 100}, gaussian(g));

  ComplexField2D bad = gaussian(g);
  bad(3, 3) = cplx(std::nan(""), 0.0);
  SplitStepSolver s(g, 1e-3);
  try {
    s.step(bad);
    FAIL("expected nan-detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::nan_detected);
  }

  // A narrow spike on a coarse grid fills the top of the spectrum.
  ComplexField2D spike = ComplexField2D::sample(g, [](double x, double y) {
    return cplx(std::exp(-8.0 * (x * x + y * y)), 0.0);
  });
  SplitStepSolver sa(g, 1e-4, 1);
  sa.advance(spike, 2);
  CHECK(sa.aliasing_warning());
}

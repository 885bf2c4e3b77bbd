#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fixture.hpp"
#include "nlslab/error.hpp"
#include "nlslab/pde.hpp"

using namespace nlslab;
using testing::geometry;
using testing::ground_state;
using testing::rel;

namespace {

ParamState sample_params() {
  ParamState p;
  p.z = 8.0;
  p.b = 1e-3;
  p.beta = 2e-4;
  p.gamma = 0.3;
  return p;
}

double max_diff(const ComplexField2D& a, const ComplexField2D& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

}  // namespace

TEST_CASE("bare bubbles are translated ground states") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  ParamState p;
  p.z = 8.0;
  const Grid2D g(128, 24.0);
  const ComplexField2D u = build_bubble(gs, c, p, 0, g, 0.0);
  const BubbleSet bs(gs, c, p, 0.0);
  const auto z0 = bs.center(0);
  double err = 0.0, lowest = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const cplx v = u(i, j);
      err = std::max({err, std::abs(v.imag()), std::abs(v.real() - gs.Q(std::hypot(g.x(i) - z0[0], g.y(j) - z0[1])))});
      lowest = std::min(lowest, v.real());
    }
  CHECK(err < 1e-14);
  CHECK(lowest >= 0.0);
}

TEST_CASE("rotation maps bubble k to bubble k+1") {
  const auto& gs = ground_state();
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> U(-15.0, 15.0);
  for (int K : {2, 4}) {
    const auto& c = geometry(K);
    const BubbleSet bs(gs, c, sample_params());
    const double th = 2.0 * std::numbers::pi / K;
    const cplx phase = std::polar(1.0, 0.7);
    double err = 0.0;
    for (int s = 0; s < 200; ++s) {
      const double y1 = U(rng), y2 = U(rng);
      const double r1 = std::cos(th) * y1 - std::sin(th) * y2, r2 = std::sin(th) * y1 + std::cos(th) * y2;
      for (int k = 0; k < K; ++k)
        err = std::max(err, std::abs(phase * bs.bubble((k + 1) % K, r1, r2) - phase * bs.bubble(k, y1, y2)));
    }
    CHECK(err < 1e-10);

    // On a periodic grid a quarter or half turn permutes the nodes.
    const Grid2D g(128, 24.0);
    const ComplexField2D P = build_ansatz(gs, c, sample_params(), g);
    const ComplexField2D b0 = build_bubble(gs, c, sample_params(), 0, g);
    const ComplexField2D b1 = build_bubble(gs, c, sample_params(), 1, g);
    const std::size_t n = g.n;
    double grid_err = 0.0, sym_err = 0.0;
    // Row and column 0 sit on the seam of the box and have no rotated partner.
    for (std::size_t j = 1; j < n; ++j)
      for (std::size_t i = 1; i < n; ++i) {
        std::size_t ri = i, rj = j;
        if (K == 2) {
          ri = (n - i) % n;
          rj = (n - j) % n;
        } else {
          ri = (n - j) % n;
          rj = i;
        }
        grid_err = std::max(grid_err, std::abs(b1(ri, rj) - b0(i, j)));
        sym_err = std::max(sym_err, std::abs(P(ri, rj) - P(i, j)));
      }
    CHECK(grid_err < 1e-10);
    CHECK(sym_err < 1e-10);
  }
}

TEST_CASE("ansatz mass and scale independence") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  ParamState p;
  p.z = 10.0;
  const Grid2D g(256, 28.0);
  const ComplexField2D P = build_ansatz(gs, c, p, g);
  const double budget = std::pow(p.z, -0.5) * std::exp(-c.kappa * p.z) + std::abs(a_of_z(c, p.z));
  const double dev = std::abs(P.l2_norm_sq() - 2.0 * gs.mass);
  MESSAGE("mass deviation " << dev << " against " << budget);
  CHECK(dev < 100.0 * budget);

  ParamState q = p;
  q.lambda = 2.5;
  q.gamma = 1.0;
  CHECK(max_diff(build_ansatz(gs, c, q, g), P) == 0.0);

  GroundStateData zero{gs};
  const RadialGrid& rg = gs.Q.grid();
  zero.Q = RadialProfile(rg, std::vector<double>(rg.size(), 0.0));
  zero.rho = zero.Q;
  CHECK(build_ansatz(zero, c, p, g).max_abs() == 0.0);
}

TEST_CASE("scaling to physical variables") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  const Grid2D g(256, 24.0);
  ParamState p = sample_params();
  const ComplexField2D v = build_ansatz(gs, c, p, g);

  p.lambda = 1.0;
  p.gamma = 0.0;
  CHECK(max_diff(to_physical(v, p), v) == 0.0);

  p.lambda = 0.37;
  p.gamma = 0.9;
  const ComplexField2D u = to_physical(v, p);
  CHECK(rel(u.l2_norm_sq(), v.l2_norm_sq()) < 1e-10);
  Spectral sv(g), su(u.grid());
  CHECK(rel(std::sqrt(su.dirichlet(u)), std::sqrt(sv.dirichlet(v)) / p.lambda) < 1e-8);
}

TEST_CASE("modulation vector") {
  const auto& c = geometry(2);
  const ParamState p = sample_params();
  const ModulationVector m0 = modulation_vector(p, zero_set_velocity(p, c), c);
  CHECK(m0.norm() < 1e-14);

  ParamState q;
  q.z = 8.0;
  ParamVelocity v = zero_set_velocity(q, c);
  v.gamma_dot = 1.0 + 0.125;
  const ModulationVector m = modulation_vector(q, v, c);
  CHECK(m.phase == doctest::Approx(0.125).epsilon(1e-15));
  CHECK(m.scale == 0.0);
  CHECK(m.translate == 0.0);
  CHECK(m.drift == 0.0);
  CHECK(m.conformal == 0.0);

  // lambda_dot = -b lambda with every other velocity zero.
  ParamState r = sample_params();
  r.beta = 0.0;
  ParamVelocity w;
  w.lambda_dot = -r.b * r.lambda;
  const ModulationVector mw = modulation_vector(r, w, c);
  CHECK(mw.scale == doctest::Approx(0.0).epsilon(1e-18));
  CHECK(mw.translate == doctest::Approx(-r.b * r.z));
  CHECK(mw.phase == doctest::Approx(-1.0));
  CHECK(mw.conformal == doctest::Approx(r.b * r.b - a_of_z(c, r.z)));
}

TEST_CASE("ansatz error field") {
  const auto& gs = ground_state();
  CHECK_THROWS_AS(make_geometry(gs, 1), Error);

  const auto& c = geometry(2);
  const Grid2D g(256, 24.0);
  std::vector<double> z{6.0, 8.0}, e;
  for (double zz : z) {
    ParamState p;
    p.z = zz;
    const ErrorField ef = error_field(gs, c, p, zero_set_velocity(p, c), g);
    e.push_back(ef.decomposed_norm);
    CHECK(ef.route_gap <= 10.0 * ef.spectral_floor);
  }
  const double q = std::log(e[1] / e[0] * std::exp(c.kappa * (z[1] - z[0]))) / std::log(z[1] / z[0]);
  const double C = e[0] / (std::pow(z[0], q) * std::exp(-c.kappa * z[0]));
  MESSAGE("E_P envelope C = " << C << ", q = " << q);
  CHECK(std::isfinite(C));
  CHECK(std::abs(q) < 4.0);

  // Pointwise envelope in units of sum_k Q^{1/2}(y - z_k).
  ParamState p = sample_params();
  const ErrorField ef = error_field(gs, c, p, zero_set_velocity(p, c), g);
  const BubbleSet bs(gs, c, p);
  double ratio = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      double env = 0.0;
      for (int k = 0; k < c.K; ++k) {
        const auto zk = bs.center(k);
        const double r = std::hypot(g.x(i) - zk[0], g.y(j) - zk[1]);
        env += r < gs.Q.grid().r_max() ? std::sqrt(std::max(gs.Q(r), 0.0)) : 0.0;
      }
      if (env > 1e-6) ratio = std::max(ratio, std::abs(ef.decomposed(i, j)) / env);
    }
  MESSAGE("pointwise envelope constant " << ratio);
  CHECK(std::isfinite(ratio));
  CHECK(ratio < 1.0);
}

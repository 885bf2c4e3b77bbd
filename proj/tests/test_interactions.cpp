#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixture.hpp"
#include "nlslab/error.hpp"

using namespace nlslab;
using testing::geometry;
using testing::ground_state;
using testing::rel;

TEST_CASE("bubble distance") {
  CHECK(kappa_of(2) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(kappa_of(4) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(kappa_of(6) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("two-bubble overlap") {
  const auto& gs = ground_state();
  CHECK(rel(overlap_two(gs.Q, {0.0, 0.0}), 2.0 * gs.mass) < 1e-6);

  const double r10 = overlap_two(gs.Q, {10.0, 0.0}) / asymptotic_overlap(gs, 10.0);
  CHECK(std::abs(r10 - 1.0) < 0.15);

  double prev = 1.0;
  for (double w : {8.0, 10.0, 12.0, 14.0}) {
    const double dev = std::abs(1.0 - overlap_two(gs.Q, {w, 0.0}) / asymptotic_overlap(gs, w));
    CHECK(dev < prev);
    prev = dev;
  }

  const double a = overlap_two(gs.Q, {10.0, 0.0});
  const double d = 10.0 / std::sqrt(2.0);
  CHECK(rel(overlap_two(gs.Q, {d, d}), a) < 1e-9);
  CHECK(rel(overlap_two(gs.Q, {0.0, -10.0}), a) < 1e-9);
}

TEST_CASE("asymptotic law") {
  const auto& gs = ground_state();
  CHECK(asymptotic_overlap(gs, 16.0) / asymptotic_overlap(gs, 8.0) ==
        doctest::Approx(std::exp(-8.0) / std::sqrt(2.0)).epsilon(1e-13));
  CHECK_THROWS_AS(asymptotic_overlap(gs, 0.0), Error);

  // |quad - asym| |w|^{3/2} e^{|w|} should settle to a constant.
  std::vector<double> C;
  for (double w : {8.0, 10.0, 12.0})
    C.push_back(std::abs(overlap_two(gs.Q, {w, 0.0}) - asymptotic_overlap(gs, w)) * std::pow(w, 1.5) * std::exp(w));
  const auto [lo, hi] = std::minmax_element(C.begin(), C.end());
  CHECK(*hi / *lo < 1.5);
}

TEST_CASE("three-body and pair overlaps") {
  const auto& gs = ground_state();
  const std::array<double, 2> w{8.0, 0.0};
  CHECK(rel(overlap_three(gs.Q, w, w), overlap_pair_squared(gs.Q, w)) < 1e-9);

  // Direct polar quadrature of Q^2(y) Q^2(y - w).
  const double h = 0.01;
  double direct = 0.0;
  for (double r = 0.5 * h; r < 30.0; r += h) {
    const double q = gs.Q(r);
    double ang = 0.0;
    const int nt = 512;
    for (int j = 0; j < nt; ++j) {
      const double t = 2.0 * std::numbers::pi * j / nt;
      const double d = std::hypot(r * std::cos(t) - 8.0, r * std::sin(t));
      const double qd = d < 30.0 ? gs.Q(d) : 0.0;
      ang += qd * qd;
    }
    direct += q * q * ang * (2.0 * std::numbers::pi / nt) * r * h;
  }
  CHECK(rel(overlap_pair_squared(gs.Q, w), direct) < 1e-4);

  const double ang = 2.0 * std::numbers::pi / 3.0;
  const double v = overlap_three(gs.Q, w, {8.0 * std::cos(ang), 8.0 * std::sin(ang)});
  const double C = v * std::exp(12.0);
  MESSAGE("three-body constant at angle 2pi/3: " << C);
  CHECK(v > 0.0);
  CHECK(C < 1e3);

  const RadialGrid g = RadialGrid::with_spacing(30.0, 0.01);
  const RadialProfile zero(g, std::vector<double>(g.size(), 0.0));
  CHECK(overlap_three(zero, w, w) == 0.0);
  CHECK(overlap_two(zero, w) == 0.0);
}

TEST_CASE("interaction coefficient a(z)") {
  const auto& c = geometry(2);
  CHECK(c.c_a > 0.0);
  for (double z : {1e-4, 1e-8, 1e-12}) CHECK(std::abs(a_of_z(c, z)) <= c.c_a * std::sqrt(z));
  for (double z : {1.0, 5.0, 10.0}) CHECK(a_of_z(c, z) < 0.0);

  for (double z : {10.0, 20.0, 40.0}) {
    const double lead = c.c_a * c.kappa * std::sqrt(z) * std::exp(-c.kappa * z);
    CHECK(std::abs(a_prime_of_z(c, z) / lead - 1.0) < 1.0 / z);
    CHECK(std::abs((a_prime_of_z(c, z) - lead) * std::sqrt(z) * std::exp(c.kappa * z)) < c.c_a);
  }

  const double z = 5.0, ex = a_prime_of_z(c, z);
  double prev = 0.0;
  for (double h : {1e-2, 5e-3}) {
    const double fd = (a_of_z(c, z + h) - a_of_z(c, z - h)) / (2.0 * h);
    const double err = std::abs(fd - ex);
    if (prev > 0.0) CHECK(prev / err == doctest::Approx(4.0).epsilon(0.05));
    prev = err;
  }
}

TEST_CASE("projection of the interaction on i Q_a") {
  const auto& gs = ground_state();
  const auto& c = geometry(2);
  ParamState p;
  p.z = 8.0;
  p.b = 1e-3;
  const double v = projection_G1_iQa(gs, c, p);
  CHECK(std::abs(v / projection_G1_leading(gs, c, p) - 1.0) < 0.25);
  if (gs.rho_dot_Q > 0.0) CHECK(v < 0.0);

  p.b = 0.0;
  for (double z : {6.0, 8.0}) {
    p.z = z;
    const double bound = std::pow(z, 3.0) * std::exp(-2.0 * c.kappa * z);
    CHECK(std::abs(projection_G1_iQa(gs, c, p)) <= 10.0 * bound);
  }
}

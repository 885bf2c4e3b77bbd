#include "nlslab/interactions.hpp"

#include <cmath>
#include <string>

#include "nlslab/ansatz.hpp"
#include "nlslab/error.hpp"

namespace nlslab {

double kappa_of(int K) {
  require(K >= 2, "bubble count K must be at least 2");
  return 2.0 * std::sin(M_PI / K);
}

GeometryConstants make_geometry(const GroundStateData& gs, int K) {
  GeometryConstants c;
  c.K = K;
  c.kappa = kappa_of(K);
  require(gs.rho_dot_Q != 0.0, "<rho, Q> vanishes; c_a undefined");
  const double neighbours = K == 2 ? 4.0 : 2.0;
  c.c_a = std::sqrt(c.kappa) * gs.c_Q * gs.I_Q / (neighbours * gs.rho_dot_Q);
  for (int k = 0; k < K; ++k) {
    const double th = 2.0 * M_PI * k / K;
    c.directions.push_back({std::cos(th), std::sin(th)});
  }
  return c;
}

double a_of_z(const GeometryConstants& c, double z) {
  require(z > 0.0, "z must be positive");
  return -c.c_a * std::sqrt(z) * std::exp(-c.kappa * z);
}

double a_prime_of_z(const GeometryConstants& c, double z) {
  require(z > 0.0, "z must be positive");
  return -c.c_a * (0.5 / std::sqrt(z) - c.kappa * std::sqrt(z)) * std::exp(-c.kappa * z);
}

namespace {

// Trapezoid over [-L, L]^2 with L = r_max / sqrt(2).
template <class F>
double cartesian_quadrature(const RadialProfile& q, double spacing, F&& f) {
  require(spacing > 0.0, "quadrature spacing must be positive");
  const double L = q.grid().r_max() / std::sqrt(2.0);
  const auto m = static_cast<long>(std::ceil(L / spacing));
  const double h = L / static_cast<double>(m);
  double s = 0.0;
  for (long j = -m; j <= m; ++j) {
    const double y2 = h * static_cast<double>(j);
    const double wy = (j == -m || j == m) ? 0.5 : 1.0;
    double row = 0.0;
    for (long i = -m; i <= m; ++i) {
      const double y1 = h * static_cast<double>(i);
      const double wx = (i == -m || i == m) ? 0.5 : 1.0;
      row += wx * f(y1, y2);
    }
    s += wy * row;
  }
  return s * h * h;
}

double moment(double y1, double y2, double power) {
  return power == 0.0 ? 1.0 : 1.0 + std::pow(std::hypot(y1, y2), power);
}

void check_omega(const RadialProfile& q, std::array<double, 2> w) {
  const double n = std::hypot(w[0], w[1]);
  if (n > 0.5 * q.grid().r_max())
    fail(ErrorKind::omega_out_of_range,
         "|omega| = " + std::to_string(n) + " exceeds r_max/2 = " + std::to_string(0.5 * q.grid().r_max()));
}

}  // namespace

double overlap_two(const RadialProfile& q, std::array<double, 2> omega, double power, double spacing) {
  check_omega(q, omega);
  require(power >= 0.0, "moment power must be non-negative");
  return cartesian_quadrature(q, spacing, [&](double y1, double y2) {
    const double a = q(std::hypot(y1, y2));
    if (a == 0.0) return 0.0;
    return moment(y1, y2, power) * a * a * a * q(std::hypot(y1 - omega[0], y2 - omega[1]));
  });
}

double asymptotic_overlap(const GroundStateData& gs, double omega_norm) {
  require(omega_norm >= 5.0, "asymptotic law is only meaningful for |omega| >= 5");
  return gs.c_Q * gs.I_Q * std::exp(-omega_norm) / std::sqrt(omega_norm);
}

double overlap_three(const RadialProfile& q, std::array<double, 2> omega, std::array<double, 2> omega_t,
                     double power, double spacing) {
  check_omega(q, omega);
  check_omega(q, omega_t);
  require(power >= 0.0, "moment power must be non-negative");
  return cartesian_quadrature(q, spacing, [&](double y1, double y2) {
    const double a = q(std::hypot(y1, y2));
    if (a == 0.0) return 0.0;
    return moment(y1, y2, power) * a * a * q(std::hypot(y1 - omega[0], y2 - omega[1])) *
           q(std::hypot(y1 - omega_t[0], y2 - omega_t[1]));
  });
}

double overlap_pair_squared(const RadialProfile& q, std::array<double, 2> omega, double power, double spacing) {
  check_omega(q, omega);
  return cartesian_quadrature(q, spacing, [&](double y1, double y2) {
    const double a = q(std::hypot(y1, y2));
    const double b = q(std::hypot(y1 - omega[0], y2 - omega[1]));
    return moment(y1, y2, power) * a * a * b * b;
  });
}

double projection_G1_iQa(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                         double spacing) {
  if (c.kappa * p.z > gs.Q.grid().r_max())
    fail(ErrorKind::unresolved_bubbles, "kappa z exceeds r_max; neighbours fall off the quadrature box");
  const BubbleSet bubbles(gs, c, p);
  const auto z1 = bubbles.center(0);
  return cartesian_quadrature(gs.Q, spacing, [&](double w1, double w2) {
    const double qa = bubbles.profile(std::hypot(w1, w2));
    if (qa == 0.0) return 0.0;
    const double y1 = w1 + z1[0], y2 = w2 + z1[1];
    cplx s1(0.0, 0.0), s2(0.0, 0.0);
    for (int j = 1; j < bubbles.count(); ++j) {
      const cplx pj = bubbles.bubble(j, y1, y2);
      s1 += pj;
      s2 += pj * pj;
    }
    const double g = bubbles.phase(0, w1, w2);
    const cplx gI = std::polar(qa * qa, -g) * s1;
    const cplx gII = std::polar(qa, -2.0 * g) * (s1 * s1 - s2);
    const cplx G = 2.0 * gI + std::conj(gI) + gII;
    // Re(G conj(i Q_a)) = Im(G) Q_a
    return G.imag() * qa;
  });
}

double projection_G1_leading(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p) {
  return -c.kappa * c.c_a * gs.rho_dot_Q * p.b * std::pow(p.z, 1.5) * std::exp(-c.kappa * p.z);
}

}  // namespace nlslab

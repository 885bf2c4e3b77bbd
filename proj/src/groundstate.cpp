#include "nlslab/groundstate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "nlslab/error.hpp"
#include "nlslab/field.hpp"

namespace nlslab {

namespace {

constexpr double kMatchRadius = 10.0;
constexpr double kMaxInternalStep = 0.0025;

struct State {
  double q, p;
};

State rhs(double r, const State& s) { return {s.p, -s.p / r + s.q - s.q * s.q * s.q}; }

State rk4(double r, const State& s, double h) {
  const State k1 = rhs(r, s);
  const State k2 = rhs(r + 0.5 * h, {s.q + 0.5 * h * k1.q, s.p + 0.5 * h * k1.p});
  const State k3 = rhs(r + 0.5 * h, {s.q + 0.5 * h * k2.q, s.p + 0.5 * h * k2.p});
  const State k4 = rhs(r + h, {s.q + h * k3.q, s.p + h * k3.p});
  return {s.q + h / 6.0 * (k1.q + 2 * k2.q + 2 * k3.q + k4.q),
          s.p + h / 6.0 * (k1.p + 2 * k2.p + 2 * k3.p + k4.p)};
}

// Regular series Q = q0 + A r^2 + B r^4 near the origin.
State series(double q0, double r) {
  const double f = q0 - q0 * q0 * q0;
  const double A = f / 4.0;
  const double B = (1.0 - 3.0 * q0 * q0) * A / 16.0;
  return {q0 + A * r * r + B * r * r * r * r, 2.0 * A * r + 4.0 * B * r * r * r};
}

enum class Fate { overshoot, undershoot, undecided };

class Shooter {
 public:
  explicit Shooter(const RadialGrid& grid)
      : grid_(grid),
        substeps_(std::max(1, static_cast<int>(std::ceil(grid.spacing() / kMaxInternalStep)))) {}

  // Integrates node by node up to r_stop. Stops early on a zero crossing
  // (overshoot) or on Q' > 0 (undershoot).
  template <class Visit>
  Fate run(double q0, double r_stop, Visit&& visit) const {
    const double h = grid_.spacing();
    const double dh = h / substeps_;
    visit(0, State{q0, 0.0});
    State s = series(q0, h);
    for (std::size_t i = 1; i < grid_.size(); ++i) {
      if (i > 1) {
        double r = grid_.node(i - 1);
        for (int k = 0; k < substeps_; ++k, r += dh) s = rk4(r, s, dh);
      }
      if (s.q < 0.0) return Fate::overshoot;
      if (s.p > 0.0) return Fate::undershoot;
      if (grid_.node(i) > r_stop + 1e-12) break;
      visit(i, s);
    }
    return Fate::undecided;
  }

  Fate classify(double q0) const {
    return run(q0, grid_.r_max(), [](std::size_t, const State&) {});
  }

 private:
  const RadialGrid& grid_;
  int substeps_;
};

}  // namespace

RadialProfile solve_ground_state(const RadialGrid& grid, double tol, ShootingReport* report) {
  require(std::isfinite(tol) && tol >= 0.0, "tolerance must be a finite non-negative number");
  const Shooter shooter(grid);

  double lo = 1.0, hi = 4.0;
  for (int widen = 0;; ++widen) {
    const bool lo_under = shooter.classify(lo) != Fate::overshoot;
    const bool hi_over = shooter.classify(hi) == Fate::overshoot;
    if (lo_under && hi_over) break;
    if (widen == 8) fail(ErrorKind::bracket_not_found, "no undershoot/overshoot bracket for Q(0)");
    if (!lo_under) lo = 1.0 + 0.5 * (lo - 1.0);
    if (!hi_over) hi *= 2.0;
  }

  int it = 0;
  constexpr int kMaxBisections = 200;
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi || ++it > kMaxBisections)
      fail(ErrorKind::non_convergence,
           "bisection cannot reach tolerance " + std::to_string(tol) + " (bracket width " +
               std::to_string(hi - lo) + ")");
    if (shooter.classify(mid) == Fate::overshoot)
      hi = mid;
    else
      lo = mid;
  }
  const double q0 = 0.5 * (lo + hi);

  const std::size_t n = grid.size();
  std::vector<double> q(n, 0.0), dq(n, 0.0);
  std::size_t last = 0;
  shooter.run(q0, kMatchRadius, [&](std::size_t i, const State& s) {
    q[i] = s.q;
    dq[i] = s.p;
    last = i;
  });
  const double rm = grid.node(last);
  require(rm > 0.5 * kMatchRadius, "shooting trajectory left the bound-state branch early");

  // Split Q = alpha K0 + beta I0 at the match; keep the decaying part.
  const double k0 = std::cyl_bessel_k(0.0, rm), k1 = std::cyl_bessel_k(1.0, rm);
  const double i0 = std::cyl_bessel_i(0.0, rm), i1 = std::cyl_bessel_i(1.0, rm);
  const double alpha = rm * (q[last] * i1 - dq[last] * i0);
  const double beta = rm * (q[last] * k1 + dq[last] * k0);
  for (std::size_t i = 1; i <= last; ++i) {
    const double r = grid.node(i);
    q[i] -= beta * std::cyl_bessel_i(0.0, r);
    dq[i] -= beta * std::cyl_bessel_i(1.0, r);
  }
  q[0] -= beta;
  for (std::size_t i = last + 1; i < n; ++i) {
    const double r = grid.node(i);
    q[i] = alpha * std::cyl_bessel_k(0.0, r);
    dq[i] = -alpha * std::cyl_bessel_k(1.0, r);
  }

  if (report) {
    report->q0 = q[0];
    report->bracket_width = hi - lo;
    report->iterations = it;
    report->match_radius = rm;
    report->tail_amplitude = alpha;
    report->growing_mode = beta;
  }
  return RadialProfile(grid, std::move(q), std::move(dq));
}

double fit_asymptotic_cQ(const RadialProfile& q, double r_lo, double r_hi, AsymptoticModel model) {
  const RadialGrid& g = q.grid();
  require(r_lo >= 5.0 && r_lo < r_hi && r_hi <= g.r_max() - 2.0,
          "fit window must satisfy 5 <= r_lo < r_hi <= r_max - 2");
  double num = 0.0, den = 0.0;
  std::size_t count = 0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r < r_lo - 1e-12 || r > r_hi + 1e-12) continue;
    const double f = model == AsymptoticModel::leading ? std::exp(-r) / std::sqrt(r)
                                                       : std::sqrt(2.0 / M_PI) * std::cyl_bessel_k(0.0, r);
    num += q.at_node(i) * f;
    den += f * f;
    ++count;
  }
  if (count < 50) fail(ErrorKind::window_too_small, "fit window holds fewer than 50 nodes");
  return num / den;
}

double compute_IQ(const RadialProfile& q, std::size_t n_theta, std::array<double, 2> direction) {
  require(n_theta >= 8, "angular resolution too low");
  require(q.is_finite(), "profile has non-finite values");
  const double dn = std::hypot(direction[0], direction[1]);
  require(dn > 0.0, "direction must be non-zero");
  const double phi = std::atan2(direction[1], direction[0]);
  const RadialGrid& g = q.grid();
  std::vector<double> f(g.size());
  const double dth = 2.0 * M_PI / static_cast<double>(n_theta);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    double a = 0.0;
    for (std::size_t j = 0; j < n_theta; ++j) a += std::exp(r * std::cos(j * dth - phi));
    const double v = q.at_node(i);
    f[i] = v * v * v * a * dth;
  }
  // radial_integral carries 2 pi for the angle; undo it
  return radial_integral(g, f) / (2.0 * M_PI);
}

std::vector<double> lambda_of(const RadialProfile& f) {
  std::vector<double> out(f.grid().size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = f.at_node(i) + f.grid().node(i) * f.slopes()[i];
  return out;
}

RhoSolution solve_rho(const RadialProfile& q) {
  const RadialGrid& g = q.grid();
  SectorOperator op(q, 0, OperatorKind::plus, 4);
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = 0.25 * g.node(i) * g.node(i) * q.at_node(i);
  f.back() = 0.0;
  std::vector<double> rho = op.solve(f);
  const double res = op.residual_norm(rho, f);

  double growth = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.node(i);
    if (r > g.r_max() - 5.0) break;
    const double qi = q.at_node(i);
    if (qi <= 0.0) continue;
    growth = std::max(growth, std::abs(rho[i]) / ((1.0 + r * r * r) * qi));
  }
  return {RadialProfile(g, std::move(rho)), res, growth};
}

GroundStateData compute_ground_state_data(const RadialGrid& grid, const GroundStateOptions& opt) {
  ShootingReport rep;
  RadialProfile Q = solve_ground_state(grid, opt.tol, &rep);
  RhoSolution rs = solve_rho(Q);

  GroundStateData d{Q, rs.rho};
  d.shooting = rep;
  d.rho_residual = rs.residual;
  d.rho_growth = rs.growth_constant;
  d.Q0 = Q.at_node(0);

  const std::size_t n = grid.size();
  std::vector<double> q2(n), dq2(n), q4(n), rq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double v = Q.at_node(i);
    q2[i] = v * v;
    q4[i] = v * v * v * v;
    dq2[i] = Q.slopes()[i] * Q.slopes()[i];
    rq[i] = d.rho.at_node(i) * v;
  }
  d.mass = radial_integral(grid, q2);
  d.grad_sq = radial_integral(grid, dq2);
  d.quartic = radial_integral(grid, q4);
  d.rho_dot_Q = radial_integral(grid, rq);

  d.c_Q = fit_asymptotic_cQ(Q, opt.fit_lo, opt.fit_hi, AsymptoticModel::bessel);
  d.c_Q_leading = fit_asymptotic_cQ(Q, opt.fit_lo, opt.fit_hi, AsymptoticModel::leading);
  for (double shift : {-2.0, 2.0}) {
    const double lo = opt.fit_lo + shift, hi = opt.fit_hi + shift;
    if (lo < 5.0 || hi > grid.r_max() - 2.0) continue;
    const double c = fit_asymptotic_cQ(Q, lo, hi, AsymptoticModel::bessel);
    d.c_Q_window_spread = std::max(d.c_Q_window_spread, std::abs(c - d.c_Q) / d.c_Q);
  }
  d.I_Q = compute_IQ(Q, opt.n_theta);
  return d;
}

double NullSpaceResiduals::max() const {
  return std::max({L_minus_Q, L_plus_LambdaQ, L_minus_r2Q, L_plus_gradQ, L_minus_xQ});
}

NullSpaceResiduals null_space_residuals(const GroundStateData& gs) {
  const RadialProfile& Q = gs.Q;
  const RadialGrid& g = Q.grid();
  const std::size_t n = g.size();
  std::vector<double> q(Q.values().begin(), Q.values().end());
  std::vector<double> dq(Q.slopes().begin(), Q.slopes().end());
  std::vector<double> lq = lambda_of(Q);
  std::vector<double> r2q(n), rq(n), zero(n, 0.0), m2q(n), m4lq(n), m2dq(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = g.node(i);
    r2q[i] = r * r * q[i];
    rq[i] = r * q[i];
    m2q[i] = -2.0 * q[i];
    m4lq[i] = -4.0 * lq[i];
    m2dq[i] = -2.0 * dq[i];
  }
  const SectorOperator lm0(Q, 0, OperatorKind::minus), lp0(Q, 0, OperatorKind::plus);
  const SectorOperator lm1(Q, 1, OperatorKind::minus), lp1(Q, 1, OperatorKind::plus);
  // The test functions do not vanish at the wall, so the wall rows see the
  // Dirichlet truncation of the tail rather than the identity.
  return {lm0.residual_norm(q, zero, true), lp0.residual_norm(lq, m2q, true), lm0.residual_norm(r2q, m4lq, true),
          lp1.residual_norm(dq, zero, true), lm1.residual_norm(rq, m2dq, true)};
}

CoercivityReport coercivity_spectrum(const GroundStateData& gs, int m_max) {
  require(m_max >= 0, "m_max must be non-negative");
  const RadialGrid fine = gs.Q.grid();
  const RadialGrid coarse = fine.coarsened();
  const RadialProfile Qc = gs.Q.resampled(coarse);
  const RadialProfile rhoc = gs.rho.resampled(coarse);

  auto constraints_for = [](const RadialProfile& Q, const RadialProfile& rho, int m, OperatorKind k) {
    const RadialGrid& g = Q.grid();
    std::vector<std::vector<double>> c;
    auto make = [&](auto f) {
      std::vector<double> v(g.size());
      for (std::size_t i = 0; i < g.size(); ++i) v[i] = f(g.node(i), i);
      c.push_back(std::move(v));
    };
    if (m == 0 && k == OperatorKind::plus) {
      make([&](double, std::size_t i) { return Q.at_node(i); });
      make([&](double r, std::size_t i) { return r * r * Q.at_node(i); });
    } else if (m == 0) {
      make([&](double, std::size_t i) { return rho.at_node(i); });
    } else if (m == 1 && k == OperatorKind::plus) {
      make([&](double r, std::size_t i) { return r * Q.at_node(i); });
    } else if (m == 1) {
      make([&](double, std::size_t i) { return Q.slopes()[i]; });
    }
    return c;
  };

  CoercivityReport rep{{}, std::numeric_limits<double>::infinity()};
  for (int m = 0; m <= m_max; ++m) {
    for (OperatorKind k : {OperatorKind::plus, OperatorKind::minus}) {
      const SectorOperator of(gs.Q, m, k, 2), oc(Qc, m, k, 2);
      const auto cf = constraints_for(gs.Q, gs.rho, m, k);
      const auto cc = constraints_for(Qc, rhoc, m, k);
      const double uf = of.lowest_eigenvalue(), uc = oc.lowest_eigenvalue();
      const double lf = cf.empty() ? uf : of.lowest_eigenvalue(cf);
      const double lc = cc.empty() ? uc : oc.lowest_eigenvalue(cc);
      SectorMinimum s{m, k, cf.size(), (4.0 * lf - lc) / 3.0, (4.0 * uf - uc) / 3.0, lf, lc};
      rep.mu = std::min(rep.mu, s.constrained);
      rep.sectors.push_back(s);
    }
  }
  return rep;
}

}  // namespace nlslab

namespace nlslab {

GridGroundState spectral_renormalization(std::size_t n, double half_width, double tol, int max_iter) {
  const Grid2D g(n, half_width);
  FourierTransform2D fft(n);
  Spectral sp(g);
  std::vector<double> symbol(g.size());
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double kx = g.wavenumber(i), ky = g.wavenumber(j);
      symbol[j * n + i] = 1.0 + kx * kx + ky * ky;
    }
  ComplexField2D u = ComplexField2D::sample(g, [](double x, double y) { return cplx(2.0 * std::exp(-0.5 * (x * x + y * y)), 0.0); });

  GridGroundState out;
  std::vector<cplx> uh(g.size()), nh(g.size());
  for (int it = 1; it <= max_iter; ++it) {
    for (std::size_t k = 0; k < g.size(); ++k) {
      const double v = u.data()[k].real();
      uh[k] = v;
      nh[k] = v * v * v;
    }
    fft.forward(uh);
    fft.forward(nh);
    double num = 0.0, den = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      num += symbol[k] * std::norm(uh[k]);
      den += (nh[k] * std::conj(uh[k])).real();
    }
    const double M = num / den;
    const double scale = M * std::sqrt(M);
    for (std::size_t k = 0; k < g.size(); ++k) nh[k] *= scale / symbol[k];
    fft.backward(nh);
    double change = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      change = std::max(change, std::abs(nh[k].real() - u.data()[k].real()));
      u.data()[k] = nh[k].real();
    }
    out.iterations = it;
    out.change = change;
    out.stabilizer = M;
    if (change < tol) break;
  }
  if (out.change >= tol)
    fail(ErrorKind::non_convergence, "spectral renormalization stalled at change " + std::to_string(out.change));

  out.peak = u(n / 2, n / 2).real();
  out.mass = u.l2_norm_sq();
  out.grad_sq = sp.dirichlet(u);
  double q4 = 0.0;
  for (const cplx& v : u.data()) q4 += std::pow(v.real(), 4);
  out.quartic = q4 * g.cell_area();
  return out;
}

}  // namespace nlslab

#include "nlslab/modulation_fit.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlslab/reduced_ode.hpp"

namespace nlslab {

namespace {

cplx expi(double t) { return {std::cos(t), std::sin(t)}; }

struct Pairings {
  std::array<double, 5> main{};
  std::array<double, 2> transverse{};
  double eta_Q = 0.0;
};

std::array<double, 2> perp(const std::array<double, 2>& e) { return {-e[1], e[0]}; }

// Pairings of eta1 against the constraint directions, summed on the
// physical grid with y = x / lambda.
Pairings evaluate(const ComplexField2D& u, const GroundStateData& gs, const GeometryConstants& c,
                  const ParamState& p) {
  const BubbleSet bs(gs, c, p);
  const Grid2D& g = u.grid();
  const double lam = p.lambda;
  const cplx rot = lam * expi(-p.gamma);
  const auto c0 = bs.center(0);
  const auto e = c.directions[0];
  const auto ep = perp(e);
  const double rmax = gs.Q.grid().r_max();
  std::array<double, 8> acc{};
  for (std::size_t j = 0; j < g.n; ++j) {
    const double y2 = g.y(j) / lam;
    const double w2 = y2 - c0[1];
    for (std::size_t i = 0; i < g.n; ++i) {
      const double y1 = g.x(i) / lam;
      const double w1 = y1 - c0[0];
      const double r = std::hypot(w1, w2);
      if (r >= rmax) continue;
      const cplx eps = rot * u(i, j) - bs.sum(y1, y2);
      const cplx eta = eps * expi(-bs.phase(0, w1, w2));
      const auto q = gs.Q.sample(r);
      const double rho = gs.rho(r);
      const double we = e[0] * w1 + e[1] * w2;
      const double wp = ep[0] * w1 + ep[1] * w2;
      const double dr = r > 0.0 ? q.slope / r : 0.0;
      acc[0] += eta.real() * r * r * q.value;
      acc[1] += eta.real() * we * q.value;
      acc[2] += eta.imag() * rho;
      acc[3] += eta.imag() * dr * we;
      acc[4] += eta.imag() * (q.value + r * q.slope);
      acc[5] += eta.real() * wp * q.value;
      acc[6] += eta.imag() * dr * wp;
      acc[7] += eta.real() * q.value;
    }
  }
  const double dA = g.cell_area() / (lam * lam);
  Pairings out;
  for (int k = 0; k < 5; ++k) out.main[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)] * dA;
  out.transverse = {acc[5] * dA, acc[6] * dA};
  out.eta_Q = acc[7] * dA;
  return out;
}

double max_abs(const std::array<double, 5>& r) {
  double m = 0.0;
  for (double v : r) m = std::max(m, std::abs(v));
  return m;
}

Grid2D rescaled_grid(const Grid2D& g, double lambda) {
  return Grid2D(g.n, g.half_width / lambda, g.cx / lambda, g.cy / lambda);
}

// eps on the rescaled grid; build_ansatz enforces the box clearance.
ComplexField2D residual_field(const ComplexField2D& u, const GroundStateData& gs, const GeometryConstants& c,
                              const ParamState& p) {
  const Grid2D yg = rescaled_grid(u.grid(), p.lambda);
  ComplexField2D eps = build_ansatz(gs, c, p, yg);
  const cplx rot = p.lambda * expi(-p.gamma);
  auto a = eps.data();
  auto b = u.data();
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = rot * b[i] - a[i];
  return eps;
}

double h1_sq(const ComplexField2D& f) {
  Spectral sp(f.grid());
  return sp.dirichlet(f) + f.l2_norm_sq();
}

ParamState shifted(ParamState p, int k, double h) {
  switch (k) {
    case 0: p.lambda += h; break;
    case 1: p.z += h; break;
    case 2: p.gamma += h; break;
    case 3: p.beta += h; break;
    default: p.b += h; break;
  }
  return p;
}

double fd_step(const ParamState& p, int k) {
  switch (k) {
    case 0: return 1e-6 * p.lambda;
    case 1: return 1e-6 * std::max(p.z, 1.0);
    default: return 1e-6;
  }
}

}  // namespace

Decomposition decompose(const ComplexField2D& u, const GroundStateData& gs, const GeometryConstants& c,
                        const ParamState& guess, const DecomposeOptions& opt) {
  require(opt.tol > 0.0 && opt.closeness > 0.0 && opt.max_iter > 0, "invalid decomposition options");
  require(guess.lambda > 0.0 && guess.z > 0.0, "guess needs positive lambda and z");

  Decomposition dec;
  {
    const ComplexField2D eps0 = residual_field(u, gs, c, guess);
    const ComplexField2D P0 = build_ansatz(gs, c, guess, eps0.grid());
    dec.closeness = std::sqrt(h1_sq(eps0) / h1_sq(P0));
    if (!(dec.closeness < opt.closeness))
      fail(ErrorKind::outside_closeness_window,
           "relative H1 distance " + std::to_string(dec.closeness) + " to the guessed bubble sum");
  }

  const double target = opt.tol * std::sqrt(gs.mass);
  ParamState p = guess;
  Pairings cur = evaluate(u, gs, c, p);
  int it = 0;
  while (max_abs(cur.main) > target) {
    if (it == opt.max_iter)
      fail(ErrorKind::newton_stall, "no convergence in " + std::to_string(opt.max_iter) + " Newton steps");
    Eigen::Matrix<double, 5, 5> J;
    for (int k = 0; k < 5; ++k) {
      const double h = fd_step(p, k);
      const auto plus = evaluate(u, gs, c, shifted(p, k, h)).main;
      const auto minus = evaluate(u, gs, c, shifted(p, k, -h)).main;
      for (int r = 0; r < 5; ++r)
        J(r, k) = (plus[static_cast<std::size_t>(r)] - minus[static_cast<std::size_t>(r)]) / (2.0 * h);
    }
    Eigen::Matrix<double, 5, 1> rhs;
    for (int r = 0; r < 5; ++r) rhs(r) = -cur.main[static_cast<std::size_t>(r)];
    const Eigen::Matrix<double, 5, 1> d = J.fullPivLu().solve(rhs);
    if (!d.allFinite()) fail(ErrorKind::newton_stall, "singular orthogonality Jacobian");

    double step = 1.0;
    bool accepted = false;
    for (int halving = 0; halving < 12 && !accepted; ++halving, step *= 0.5) {
      ParamState trial = p;
      trial.lambda += step * d(0);
      trial.z += step * d(1);
      trial.gamma += step * d(2);
      trial.beta += step * d(3);
      trial.b += step * d(4);
      if (!(trial.lambda > 0.0 && trial.z > 0.0)) continue;
      const Pairings next = evaluate(u, gs, c, trial);
      if (max_abs(next.main) < max_abs(cur.main)) {
        p = trial;
        cur = next;
        accepted = true;
      }
    }
    if (!accepted) fail(ErrorKind::newton_stall, "line search failed to reduce the orthogonality residual");
    ++it;
  }

  dec.p = p;
  dec.iterations = it;
  dec.ortho_residuals = cur.main;
  dec.transverse = cur.transverse;
  dec.eta1_dot_Q = cur.eta_Q;
  dec.epsilon = residual_field(u, gs, c, p);
  dec.eps_H1 = std::sqrt(h1_sq(dec.epsilon));

  const BubbleSet bs(gs, c, p);
  const auto c0 = bs.center(0);
  const Grid2D& yg = dec.epsilon.grid();
  const Grid2D wg(yg.n, yg.half_width, yg.cx - c0[0], yg.cy - c0[1]);
  std::vector<cplx> eta(dec.epsilon.data().begin(), dec.epsilon.data().end());
  for (std::size_t j = 0; j < wg.n; ++j)
    for (std::size_t i = 0; i < wg.n; ++i) eta[j * wg.n + i] *= expi(-bs.phase(0, wg.x(i), wg.y(j)));
  dec.eta1 = ComplexField2D(wg, std::move(eta));
  return dec;
}

double cutoff_chi(double r) {
  r = std::abs(r);
  if (r <= 0.1) return 1.0;
  if (r >= 0.125) return 0.0;
  const double t = (r - 0.1) / 0.025;
  return 1.0 - t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
}

FunctionalValues functionals(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                             const ComplexField2D& eps, double s_proxy) {
  require(s_proxy > 1.0, "s_proxy must exceed 1");
  const Grid2D& g = eps.grid();
  const ComplexField2D P = build_ansatz(gs, c, p, g);
  Spectral sp(g);
  const Gradient grad = sp.gradient(eps);
  const double dA = g.cell_area();
  const double inv_log = 1.0 / std::log(s_proxy);
  const BubbleSet bs(gs, c, p);

  double kin = 0.0, mass = 0.0, pot = 0.0, J = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const cplx e = eps(i, j);
      const cplx ex = grad.dx(i, j), ey = grad.dy(i, j);
      const double e2 = std::norm(e);
      const double a = std::norm(P(i, j));
      const double delta = 2.0 * (e * std::conj(P(i, j))).real() + e2;
      kin += std::norm(ex) + std::norm(ey);
      mass += e2;
      pot += 2.0 * a * e2 + delta * delta;
      if (p.b != 0.0) {
        for (int k = 0; k < c.K; ++k) {
          const auto ck = bs.center(k);
          const double chi = cutoff_chi(inv_log * std::hypot(g.x(i) - ck[0], g.y(j) - ck[1]));
          if (chi == 0.0) continue;
          J += chi * ((ck[0] * ex + ck[1] * ey) * std::conj(e)).imag();
        }
      }
    }
  FunctionalValues f;
  f.eps_H1_sq = (kin + mass) * dA;
  f.H = 0.5 * f.eps_H1_sq - 0.25 * pot * dA;
  f.J = p.b * J * dA;
  f.F = f.H - f.J;
  return f;
}

FunctionalValues functionals(const Decomposition& dec, const GroundStateData& gs, const GeometryConstants& c,
                             double s_proxy) {
  return functionals(gs, c, dec.p, dec.epsilon, s_proxy);
}

CoercivityProbe random_coercivity(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                                  const Grid2D& grid, double s_proxy, std::size_t samples, double amplitude,
                                  std::uint64_t seed) {
  require(samples > 0 && amplitude > 0.0, "need a positive sample count and amplitude");
  const BubbleSet bs(gs, c, p);
  const auto c0 = bs.center(0);
  const Grid2D wg(grid.n, grid.half_width, grid.cx - c0[0], grid.cy - c0[1]);

  // Constraint directions in the bubble frame; the first four are real,
  // the rest purely imaginary.
  auto direction = [&](int k, double w1, double w2) -> cplx {
    const double r = std::hypot(w1, w2);
    const auto q = gs.Q.sample(r);
    const double dr = r > 0.0 ? q.slope / r : 0.0;
    switch (k) {
      case 0: return q.value;
      case 1: return r * r * q.value;
      case 2: return w1 * q.value;
      case 3: return w2 * q.value;
      case 4: return {0.0, gs.rho(r)};
      case 5: return {0.0, dr * w1};
      case 6: return {0.0, dr * w2};
      default: return {0.0, q.value + r * q.slope};
    }
  };
  constexpr int nd = 8;
  std::vector<ComplexField2D> dirs;
  for (int k = 0; k < nd; ++k)
    dirs.push_back(ComplexField2D::sample(wg, [&](double x, double y) { return direction(k, x, y); }));
  Eigen::Matrix<double, nd, nd> G;
  for (int a = 0; a < nd; ++a)
    for (int b = 0; b < nd; ++b) G(a, b) = inner(dirs[static_cast<std::size_t>(a)], dirs[static_cast<std::size_t>(b)]);
  const auto Glu = G.fullPivLu();

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::normal_distribution<double> normal(0.0, 1.0);

  CoercivityProbe out;
  out.samples = samples;
  out.min_quotient = std::numeric_limits<double>::infinity();
  out.max_quotient = -std::numeric_limits<double>::infinity();
  constexpr int bumps = 6;
  for (std::size_t s = 0; s < samples; ++s) {
    std::array<std::array<double, 3>, bumps> geo{};
    std::array<cplx, bumps> coef{};
    for (int m = 0; m < bumps; ++m) {
      const double rad = 3.0 * std::sqrt(unif(rng)), th = 2.0 * M_PI * unif(rng);
      geo[static_cast<std::size_t>(m)] = {rad * std::cos(th), rad * std::sin(th), 0.6 + 1.4 * unif(rng)};
      coef[static_cast<std::size_t>(m)] = {normal(rng), normal(rng)};
    }
    auto raw = [&](double w1, double w2) {
      cplx v(0.0, 0.0);
      for (std::size_t m = 0; m < bumps; ++m) {
        const double d2 = (w1 - geo[m][0]) * (w1 - geo[m][0]) + (w2 - geo[m][1]) * (w2 - geo[m][1]);
        v += coef[m] * std::exp(-0.5 * d2 / (geo[m][2] * geo[m][2]));
      }
      return v;
    };
    const ComplexField2D eta_raw = ComplexField2D::sample(wg, raw);
    Eigen::Matrix<double, nd, 1> rhs;
    for (int k = 0; k < nd; ++k) rhs(k) = inner(eta_raw, dirs[static_cast<std::size_t>(k)]);
    const Eigen::Matrix<double, nd, 1> alpha = Glu.solve(rhs);
    auto eta = [&](double w1, double w2) {
      cplx v = raw(w1, w2);
      for (int k = 0; k < nd; ++k) v -= alpha(k) * direction(k, w1, w2);
      return v;
    };

    ComplexField2D eps = ComplexField2D::sample(grid, [&](double y1, double y2) {
      cplx v(0.0, 0.0);
      for (int k = 0; k < c.K; ++k) {
        const auto ck = bs.center(k);
        const double w1 = y1 - ck[0], w2 = y2 - ck[1];
        const double th = -2.0 * M_PI * k / c.K;
        const double cs = std::cos(th), sn = std::sin(th);
        v += expi(bs.phase(k, w1, w2)) * eta(cs * w1 - sn * w2, sn * w1 + cs * w2);
      }
      return v;
    });
    eps *= amplitude / std::sqrt(eps.l2_norm_sq());

    std::vector<cplx> e1(eps.data().begin(), eps.data().end());
    for (std::size_t j = 0; j < wg.n; ++j)
      for (std::size_t i = 0; i < wg.n; ++i) e1[j * wg.n + i] *= expi(-bs.phase(0, wg.x(i), wg.y(j)));
    const ComplexField2D eta1(wg, std::move(e1));
    for (int k = 0; k < nd; ++k)
      out.max_ortho = std::max(out.max_ortho, std::abs(inner(eta1, dirs[static_cast<std::size_t>(k)])));

    const FunctionalValues f = functionals(gs, c, p, eps, s_proxy);
    const double q = f.F / f.eps_H1_sq;
    out.min_quotient = std::min(out.min_quotient, q);
    out.max_quotient = std::max(out.max_quotient, q);
  }
  return out;
}

void validate(const TrackConfig& cfg) {
  require(cfg.s_in > cfg.s_floor && cfg.s_floor > std::exp(1.0), "need s_in > s_floor > e");
  require(cfg.n >= 64 && (cfg.n & (cfg.n - 1)) == 0, "grid size must be a power of two");
  require(cfg.rescaled_half_width > kBubbleClearance, "rescaled box too small for the bubble clearance");
  require(cfg.dt > 0.0 && cfg.cadence > 0 && cfg.max_records > 0, "dt, cadence and record count must be positive");
}

namespace {

// t(s) along the reduced trajectory on a dense log-spaced table.
struct TimeTable {
  std::vector<double> s, t;

  TimeTable(const Trajectory& traj, std::size_t nodes) {
    const double a = traj.s_front(), b = traj.s_back();
    s.resize(nodes);
    t.assign(nodes, 0.0);
    for (std::size_t i = 0; i < nodes; ++i)
      s[i] = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(nodes - 1));
    double prev = std::pow(traj.sample(s[0]).lambda, 2);
    for (std::size_t i = 1; i < nodes; ++i) {
      const double cur = std::pow(traj.sample(s[i]).lambda, 2);
      t[i] = t[i - 1] + 0.5 * (s[i] - s[i - 1]) * (prev + cur);
      prev = cur;
    }
  }

  // NaN once t runs past the table.
  double s_of(double time) const {
    if (time > t.front()) return s.front();
    for (std::size_t i = 1; i < t.size(); ++i)
      if (time >= t[i]) {
        const double w = (time - t[i - 1]) / (t[i] - t[i - 1]);
        return s[i - 1] + w * (s[i] - s[i - 1]);
      }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

ParamState extrapolate(const ParamState& a, const ParamState& b) {
  ParamState p;
  p.lambda = b.lambda * b.lambda / a.lambda;
  p.z = 2.0 * b.z - a.z;
  p.gamma = 2.0 * b.gamma - a.gamma;
  p.beta = 2.0 * b.beta - a.beta;
  p.b = 2.0 * b.b - a.b;
  return p;
}

ParamState advance_guess(const ParamState& prev, const ParamState& from, const ParamState& to) {
  ParamState p = prev;
  p.lambda *= to.lambda / from.lambda;
  p.z += to.z - from.z;
  p.gamma += to.gamma - from.gamma;
  p.beta += to.beta - from.beta;
  p.b += to.b - from.b;
  return p;
}

}  // namespace

TrackResult track(const GroundStateData& gs, const GeometryConstants& c, const TrackConfig& cfg) {
  validate(cfg);
  const ParamState p_in = final_data(c, cfg.s_in, cfg.zeta_sharp);

  IntegratorOptions io;
  io.tube.reset();
  const ReducedRun reduced = integrate(c, {cfg.s_in, p_in}, 0.5 * cfg.s_floor, io);
  const TimeTable table(reduced.trajectory, 8001);

  const Grid2D yg(cfg.n, cfg.rescaled_half_width);
  const ComplexField2D P_in = build_ansatz(gs, c, p_in, yg);
  ComplexField2D u = to_physical(P_in, p_in);

  EvolutionConfig ec{u.grid(), -cfg.dt, 0.0, cfg.cadence};
  validate(ec, u);
  SplitStepSolver solver(u.grid(), -cfg.dt, cfg.cadence);

  TrackResult out;
  ParamState prev_fit = p_in, prev_ode = p_in;
  for (;;) {
    const double t = -static_cast<double>(solver.steps_taken()) * cfg.dt;
    const double s = table.s_of(t);
    if (!std::isfinite(s)) {
      out.truncated = true;
      out.truncation = "time map exhausted at t = " + std::to_string(t);
      break;
    }
    const ParamState ode = reduced.trajectory.sample(s);
    const std::size_t nr = out.records.size();
    ParamState guess = p_in;
    if (nr == 1) guess = advance_guess(prev_fit, prev_ode, ode);
    if (nr >= 2) guess = extrapolate(out.records[nr - 2].p, out.records[nr - 1].p);

    TrackRecord rec;
    try {
      const Decomposition dec = decompose(u, gs, c, guess, cfg.decompose);
      rec.t = t;
      rec.s_proxy = s;
      rec.p = dec.p;
      rec.eps_H1 = dec.eps_H1;
      rec.eta1_dot_Q = dec.eta1_dot_Q;
      rec.ortho = dec.ortho_residuals;
      rec.transverse = dec.transverse;
      rec.iterations = dec.iterations;
      rec.f = functionals(dec, gs, c, s);
      rec.snap = conserved(u, t);
      const ComplexField2D P = build_ansatz(gs, c, dec.p, dec.epsilon.grid());
      rec.P_mass = P.l2_norm_sq();
    } catch (const Error& e) {
      out.truncated = true;
      out.truncation_kind = e.kind();
      out.truncation = e.what();
      break;
    }
    out.records.push_back(rec);
    prev_fit = rec.p;
    prev_ode = ode;
    if (s <= cfg.s_floor || out.records.size() >= cfg.max_records) break;
    try {
      solver.advance(u, cfg.cadence);
    } catch (const Error& e) {
      out.truncated = true;
      out.truncation_kind = e.kind();
      out.truncation = e.what();
      break;
    }
  }
  out.steps = solver.steps_taken();
  out.aliasing_warning = solver.aliasing_warning();

  auto& r = out.records;
  for (std::size_t i = 0; i < r.size(); ++i)
    r[i].s_fit = i == 0 ? cfg.s_in
                        : r[i - 1].s_fit + 0.5 * (r[i].t - r[i - 1].t) *
                                               (1.0 / (r[i].p.lambda * r[i].p.lambda) +
                                                1.0 / (r[i - 1].p.lambda * r[i - 1].p.lambda));
  for (std::size_t i = 0; i < r.size() && r.size() >= 2; ++i) {
    const std::size_t a = i == 0 ? 0 : i - 1;
    const std::size_t b = i + 1 == r.size() ? i : i + 1;
    const double ds = r[b].s_fit - r[a].s_fit;
    ParamVelocity v;
    v.lambda_dot = (r[b].p.lambda - r[a].p.lambda) / ds;
    v.z_dot = (r[b].p.z - r[a].p.z) / ds;
    v.gamma_dot = (r[b].p.gamma - r[a].p.gamma) / ds;
    v.beta_dot = (r[b].p.beta - r[a].p.beta) / ds;
    v.b_dot = (r[b].p.b - r[a].p.b) / ds;
    r[i].mod = modulation_vector(r[i].p, v, c);
  }
  return out;
}

namespace {

EnvelopeCheck fit_envelope(const std::vector<double>& value, const std::vector<double>& shape, double factor) {
  EnvelopeCheck ec;
  double num = 0.0, den = 0.0;
  int used = 0;
  for (std::size_t i = 0; i < value.size() && used < 3; ++i) {
    if (shape[i] <= 0.0) continue;
    num += value[i] * shape[i];
    den += shape[i] * shape[i];
    ++used;
  }
  if (used < 3 || den == 0.0) return ec;
  ec.constant = num / den;
  if (!(ec.constant > 0.0)) return ec;
  for (std::size_t i = 0; i < value.size(); ++i)
    if (shape[i] > 0.0) ec.worst_ratio = std::max(ec.worst_ratio, value[i] / (ec.constant * shape[i]));
  ec.pass = ec.worst_ratio <= factor;
  return ec;
}

}  // namespace

TrackAssessment assess(const TrackResult& run, double factor) {
  TrackAssessment a;
  const auto& r = run.records;
  a.records = r.size();
  a.all_converged = !(run.truncation_kind && (*run.truncation_kind == ErrorKind::newton_stall ||
                                              *run.truncation_kind == ErrorKind::outside_closeness_window));
  if (r.size() < 4) {
    a.all_converged = false;
    return a;
  }
  a.s_reached = r.back().s_proxy;

  std::vector<double> eps, eps_shape, eta, eta_shape, drift(r.size(), 0.0), drift_shape(r.size(), 0.0);
  for (const auto& rec : r) {
    const double L = std::log(rec.s_proxy);
    eps.push_back(rec.eps_H1);
    eps_shape.push_back(1.0 / (rec.s_proxy * std::pow(L, 1.5)));
    eta.push_back(std::abs(rec.eta1_dot_Q));
    eta_shape.push_back(1.0 / (rec.s_proxy * rec.s_proxy * L * L));
  }
  auto rate = [](const TrackRecord& x) {
    const double L = std::log(x.s_proxy);
    return x.eps_H1 / (x.s_proxy * x.s_proxy * L * L) + x.eps_H1 * x.eps_H1 / (x.s_proxy * L);
  };
  for (std::size_t i = 1; i < r.size(); ++i) {
    drift[i] = std::abs(r[i].f.F - r[0].f.F);
    drift_shape[i] = drift_shape[i - 1] + 0.5 * std::abs(r[i].s_proxy - r[i - 1].s_proxy) * (rate(r[i]) + rate(r[i - 1]));
  }
  a.eps = fit_envelope(eps, eps_shape, factor);
  a.eta = fit_envelope(eta, eta_shape, factor);
  a.drift = fit_envelope(drift, drift_shape, factor);

  for (const auto& rec : r) {
    a.mass_drift = std::max(a.mass_drift, std::abs(rec.snap.mass - r[0].snap.mass) / r[0].snap.mass);
    a.P_mass_drift = std::max(a.P_mass_drift, std::abs(rec.P_mass - r[0].P_mass));
  }
  a.pass = a.all_converged && a.eps.pass && a.eta.pass && a.drift.pass && a.mass_drift <= 1e-9;
  return a;
}

}  // namespace nlslab

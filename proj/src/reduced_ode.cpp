#include "nlslab/reduced_ode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

using Vec = std::array<double, 5>;

Vec pack(const ParamState& p) { return {p.lambda, p.z, p.gamma, p.beta, p.b}; }
ParamState unpack(const Vec& y) { return {y[0], y[1], y[2], y[3], y[4]}; }

Vec rhs(const GeometryConstants& c, const Vec& y) {
  const ParamState p = unpack(y);
  const ParamVelocity v = zero_set_velocity(p, c);
  return {v.lambda_dot, v.z_dot, v.gamma_dot, v.beta_dot, v.b_dot};
}

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [a, k] : terms)
    for (int i = 0; i < 5; ++i) out[i] += h * a * (*k)[i];
  return out;
}

// Dormand-Prince 5(4) coefficients.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                 a76 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432, d3 = 87487479700.0 / 32700410799,
                 d4 = -10690763975.0 / 1880347072, d5 = 701980252875.0 / 199316789632,
                 d6 = -1453857185.0 / 822651844, d7 = 69997945.0 / 29380423;

Vec dense_eval(const Trajectory::Segment& seg, double theta) {
  const auto& r = seg.rcont;
  const double t1 = 1.0 - theta;
  Vec out;
  for (int i = 0; i < 5; ++i)
    out[i] = r[0][i] + theta * (r[1][i] + t1 * (r[2][i] + theta * (r[3][i] + t1 * r[4][i])));
  return out;
}

Vec rk4_fixed(const GeometryConstants& c, Vec y, double h, int steps) {
  for (int n = 0; n < steps; ++n) {
    const Vec k1 = rhs(c, y);
    const Vec k2 = rhs(c, axpy(y, 0.5 * h, {{1.0, &k1}}));
    const Vec k3 = rhs(c, axpy(y, 0.5 * h, {{1.0, &k2}}));
    const Vec k4 = rhs(c, axpy(y, h, {{1.0, &k3}}));
    y = axpy(y, h / 6.0, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}});
  }
  return y;
}

double band_value(const BootstrapTube& tube, const GeometryConstants& c, TubeBand band, double s,
                  const ParamState& p) {
  switch (band) {
    case TubeBand::zeta: return tube.zeta_band(c, s, p);
    case TubeBand::b_lower: return tube.b_lower(s, p);
    case TubeBand::b_upper: return tube.b_upper(s, p);
    case TubeBand::beta: return tube.beta_band(s, p);
    case TubeBand::none: break;
  }
  return 1.0;
}

constexpr TubeBand kBands[] = {TubeBand::zeta, TubeBand::b_lower, TubeBand::b_upper, TubeBand::beta};

}  // namespace

std::string to_string(TubeBand band) {
  switch (band) {
    case TubeBand::none: return "none";
    case TubeBand::zeta: return "zeta";
    case TubeBand::b_lower: return "b_lower";
    case TubeBand::b_upper: return "b_upper";
    case TubeBand::beta: return "beta";
  }
  return "unknown";
}

ParamVelocity reduced_rhs(const ReducedState& state, const GeometryConstants& c) {
  require(state.p.z > 0.0, "z must be positive");
  return zero_set_velocity(state.p, c);
}

double zeta_of(const GeometryConstants& c, double z) {
  return std::sqrt(2.0 / (c.kappa * c.c_a)) * std::pow(z, -0.75) * std::exp(0.5 * c.kappa * z);
}

double xi_of(const GeometryConstants& c, double s, double z) {
  const double d = zeta_of(c, z) - s;
  return d * d * std::log(s) / (s * s);
}

double BootstrapTube::zeta_band(const GeometryConstants& c, double s, const ParamState& p) const {
  return 1.0 - xi_of(c, s, p.z);
}

double BootstrapTube::b_lower(double s, const ParamState& p) const { return p.b * s * std::log(s) - 0.5; }

double BootstrapTube::b_upper(double s, const ParamState& p) const { return 2.0 - p.b * s * std::log(s); }

double BootstrapTube::beta_band(double s, const ParamState& p) const {
  return 1.0 / (s * std::pow(std::log(s), 1.5)) - std::abs(p.beta);
}

TubeBand BootstrapTube::violated(const GeometryConstants& c, double s, const ParamState& p) const {
  TubeBand worst = TubeBand::none;
  double vmin = 0.0;
  for (TubeBand b : kBands) {
    const double v = band_value(*this, c, b, s, p);
    if (v < vmin) {
      vmin = v;
      worst = b;
    }
  }
  return worst;
}

namespace {

// Largest root of k1 z - k2 log z = rhs by Newton from the right.
double convex_root(double k1, double k2, double target, double z_guess) {
  auto g = [&](double z) { return k1 * z - k2 * std::log(z) - target; };
  const double z_min = k2 / k1;
  double z = std::max(z_guess, 2.0 * z_min);
  for (int i = 0; i < 200 && g(z) <= 0.0; ++i) z = 2.0 * z + 1.0;
  for (int it = 0; it < 100; ++it) {
    const double step = g(z) / (k1 - k2 / z);
    const double next = z - step;
    if (!std::isfinite(next) || next <= z_min) fail(ErrorKind::newton_divergence, "implicit z equation diverged");
    if (std::abs(next - z) <= 1e-14 * z) return next;
    z = next;
  }
  fail(ErrorKind::newton_divergence, "implicit z equation did not converge");
}

}  // namespace

ParamState regime_reference(const GeometryConstants& c, double s) {
  require(s >= std::exp(2.0), "regime reference needs s >= e^2");
  if (!(c.c_a > 0.0)) fail(ErrorKind::newton_divergence, "c_a <= 0: the implicit z equation has no root");
  const double L = std::log(s);
  ParamState p;
  p.z = convex_root(c.kappa, 1.5, std::log(0.5 * c.kappa * c.c_a) + 2.0 * L, 2.0 * L / c.kappa);
  p.lambda = 1.0 / L;
  p.b = 1.0 / (s * L);
  p.beta = 0.0;
  return p;
}

ParamState final_data(const GeometryConstants& c, double s_in, double zeta_sharp) {
  require(s_in > 10.0, "final time must exceed 10");
  require(zeta_sharp >= -1.0 && zeta_sharp <= 1.0, "zeta_sharp must lie in [-1, 1]");
  if (!(c.c_a > 0.0)) fail(ErrorKind::newton_divergence, "c_a <= 0: zeta(z) is undefined");
  const double L = std::log(s_in);
  const double target = s_in + zeta_sharp * s_in / std::sqrt(L);
  ParamState p;
  p.z = convex_root(0.5 * c.kappa, 0.75, std::log(target) - 0.5 * std::log(2.0 / (c.kappa * c.c_a)),
                    2.0 * L / c.kappa);
  p.lambda = 1.0 / L;
  p.b = std::sqrt(2.0 * c.c_a / c.kappa) * std::pow(p.z, -0.25) * std::exp(-0.5 * c.kappa * p.z);
  p.gamma = 0.0;
  p.beta = 0.0;
  return p;
}

void Trajectory::start(double s, const ParamState& p) {
  s_.assign(1, s);
  p_.assign(1, p);
  seg_.clear();
}

void Trajectory::append(double s, const ParamState& p, const Segment& seg) {
  s_.push_back(s);
  p_.push_back(p);
  seg_.push_back(seg);
}

void Trajectory::truncate_at(double s, const ParamState& p) {
  s_.back() = s;
  p_.back() = p;
}

ParamState Trajectory::sample(double s) const {
  require(!seg_.empty() || s == s_.front(), "trajectory has no steps");
  if (seg_.empty()) return p_.front();
  const bool backward = s_.back() < s_.front();
  const double lo = std::min(s_.front(), s_.back()), hi = std::max(s_.front(), s_.back());
  require(s >= lo - 1e-9 * std::abs(lo) && s <= hi + 1e-9 * std::abs(hi), "sample outside trajectory");
  // nodes are monotone along the integration direction
  std::size_t k;
  if (backward)
    k = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), s, std::greater<double>()) - s_.begin());
  else
    k = static_cast<std::size_t>(std::upper_bound(s_.begin(), s_.end(), s) - s_.begin());
  k = std::clamp<std::size_t>(k, 1, seg_.size());
  const Segment& seg = seg_[k - 1];
  return unpack(dense_eval(seg, (s - seg.s0) / seg.h));
}

ReducedRun integrate(const GeometryConstants& c, const ReducedState& start, double s_end,
                     const IntegratorOptions& opt) {
  require(opt.rtol > 0.0, "rtol must be positive");
  ReducedRun run;
  Trajectory& tr = run.trajectory;
  tr.start(start.s, start.p);
  if (s_end == start.s) return run;
  const double dir = s_end < start.s ? -1.0 : 1.0;

  double s = start.s;
  Vec y = pack(start.p);
  Vec k1 = rhs(c, y);
  double h = dir * 1e-4 * std::max(1.0, std::abs(s));
  h = dir * std::min(std::abs(h), std::abs(s_end - s));

  auto err_norm = [&](const Vec& y0, const Vec& y1, const Vec& e) {
    double acc = 0.0;
    for (int i = 0; i < 5; ++i) {
      const double sc = opt.atol + opt.rtol * std::max(std::abs(y0[i]), std::abs(y1[i]));
      acc += (e[i] / sc) * (e[i] / sc);
    }
    return std::sqrt(acc / 5.0);
  };

  constexpr std::size_t kMaxSteps = 10000000;
  while (dir * (s_end - s) > 0.0) {
    if (run.steps + run.rejected > kMaxSteps) fail(ErrorKind::step_underflow, "step budget exhausted");
    if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(s)))
      fail(ErrorKind::step_underflow, "step size underflow at s = " + std::to_string(s));
    if (dir * (s + h - s_end) > 0.0) h = s_end - s;

    const Vec k2 = rhs(c, axpy(y, h, {{a21, &k1}}));
    const Vec k3 = rhs(c, axpy(y, h, {{a31, &k1}, {a32, &k2}}));
    const Vec k4 = rhs(c, axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}));
    const Vec k5 = rhs(c, axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}}));
    const Vec k6 = rhs(c, axpy(y, h, {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4}, {a65, &k5}}));
    const Vec y1 = axpy(y, h, {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5}, {a76, &k6}});
    const Vec k7 = rhs(c, y1);
    Vec e;
    for (int i = 0; i < 5; ++i)
      e[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    const double err = err_norm(y, y1, e);
    if (!std::isfinite(err)) fail(ErrorKind::step_underflow, "non-finite error estimate");

    if (err > 1.0) {
      ++run.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      continue;
    }

    Trajectory::Segment seg{s, h, {}};
    for (int i = 0; i < 5; ++i) {
      seg.rcont[0][i] = y[i];
      seg.rcont[1][i] = y1[i] - y[i];
      seg.rcont[2][i] = h * k1[i] - seg.rcont[1][i];
      seg.rcont[3][i] = seg.rcont[1][i] - h * k7[i] - seg.rcont[2][i];
      seg.rcont[4][i] = h * (d1 * k1[i] + d3 * k3[i] + d4 * k4[i] + d5 * k5[i] + d6 * k6[i] + d7 * k7[i]);
    }
    const double s1 = s + h;
    tr.append(s1, unpack(y1), seg);
    ++run.steps;

    if (opt.tube) {
      const BootstrapTube& tube = *opt.tube;
      double best_theta = 2.0;
      TubeBand best = TubeBand::none;
      for (TubeBand band : kBands) {
        const double g1 = band_value(tube, c, band, s1, unpack(y1));
        if (g1 >= 0.0) continue;
        const double g0 = band_value(tube, c, band, s, unpack(y));
        double theta = 0.0;
        if (g0 > 0.0) {
          double lo = 0.0, hi = 1.0;
          while ((hi - lo) * std::abs(h) > 1e-12 * std::abs(s) && hi - lo > 1e-15) {
            const double mid = 0.5 * (lo + hi);
            if (band_value(tube, c, band, s + mid * h, unpack(dense_eval(seg, mid))) >= 0.0)
              lo = mid;
            else
              hi = mid;
          }
          theta = hi;
        }
        if (theta < best_theta) {
          best_theta = theta;
          best = band;
        }
      }
      if (best != TubeBand::none) {
        const double s_star = s + best_theta * h;
        const Vec y_star = best_theta == 0.0 ? y : dense_eval(seg, best_theta);
        tr.truncate_at(s_star, unpack(y_star));
        run.exit.exited = true;
        run.exit.s_star = s_star;
        run.exit.band = best;
        if (best == TubeBand::zeta) {
          run.exit.sign = zeta_of(c, y_star[1]) >= s_star ? 1 : -1;
          const double d = 1e-6 * s_star;
          const Vec yp = rk4_fixed(c, y_star, d / 10.0, 10);
          const Vec ym = rk4_fixed(c, y_star, -d / 10.0, 10);
          run.exit.xi_dot = (xi_of(c, s_star + d, yp[1]) - xi_of(c, s_star - d, ym[1])) / (2.0 * d);
        }
        return run;
      }
    }

    s = s1;
    y = y1;
    k1 = k7;
    const double fac = err > 0.0 ? std::min(5.0, std::max(0.2, 0.9 * std::pow(err, -0.2))) : 5.0;
    h *= fac;
  }
  return run;
}

void validate(const ShootingConfig& cfg) {
  require(cfg.s0 > 10.0, "s0 must exceed 10");
  require(cfg.s_in > cfg.s0, "s_in must exceed s0");
  require(cfg.bisection_tol > 0.0, "bisection tolerance must be positive");
  require(cfg.zeta_lo >= -1.0 && cfg.zeta_hi <= 1.0 && cfg.zeta_lo < cfg.zeta_hi,
          "zeta_sharp interval must lie in [-1, 1]");
  require(cfg.rtol > 0.0, "rtol must be positive");
}

ReducedRun integrate_backward(const ShootingConfig& cfg, double zeta_sharp, const GeometryConstants& c) {
  validate(cfg);
  const ParamState p = final_data(c, cfg.s_in, zeta_sharp);
  IntegratorOptions opt;
  opt.rtol = cfg.rtol;
  opt.tube = cfg.tube;
  return integrate(c, {cfg.s_in, p}, cfg.s0, opt);
}

ShootResult shoot(const ShootingConfig& cfg, const GeometryConstants& c) {
  validate(cfg);
  ShootResult res;
  auto probe = [&](double zs) {
    ReducedRun run = integrate_backward(cfg, zs, c);
    const bool survived = !run.exit.exited;
    BisectionProbe pr{zs, survived, survived ? 0 : run.exit.sign, run.exit.s_star, run.exit.band, run.exit.xi_dot};
    if (!survived && run.exit.band != TubeBand::zeta) {
      // A b- or beta-band exit carries no shooting sign; use the side of zeta.
      const ParamState pe = run.trajectory.params().back();
      pr.sign = zeta_of(c, pe.z) >= run.exit.s_star ? 1 : -1;
    }
    res.history.push_back(pr);
    return std::make_pair(pr, std::move(run));
  };

  double lo = cfg.zeta_lo, hi = cfg.zeta_hi;
  auto [plo, rlo] = probe(lo);
  if (plo.survived) {
    res.success = true;
    res.zeta_sharp = lo;
    res.survivor = std::move(rlo);
  }
  if (!res.success) {
    auto [phi, rhi] = probe(hi);
    if (phi.survived) {
      res.success = true;
      res.zeta_sharp = hi;
      res.survivor = std::move(rhi);
    } else if (plo.sign == phi.sign) {
      fail(ErrorKind::same_sign_endpoints, "both ends of the zeta_sharp interval exit with sign " +
                                               std::to_string(plo.sign));
    }
  }
  const int sign_lo = plo.sign;
  while (!res.success && hi - lo > cfg.bisection_tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    auto [pm, rm] = probe(mid);
    if (pm.survived) {
      res.success = true;
      res.zeta_sharp = mid;
      res.survivor = std::move(rm);
      break;
    }
    if (pm.sign == sign_lo)
      lo = mid;
    else
      hi = mid;
  }
  res.lo = lo;
  res.hi = hi;

  std::vector<BisectionProbe> sorted = res.history;
  std::sort(sorted.begin(), sorted.end(),
            [](const BisectionProbe& a, const BisectionProbe& b) { return a.zeta_sharp < b.zeta_sharp; });
  for (std::size_t i = 1; i < sorted.size(); ++i)
    if (sorted[i].sign < sorted[i - 1].sign) res.monotone = false;
  return res;
}

std::vector<double> time_map(const Trajectory& traj) {
  const auto& s = traj.s();
  const auto& p = traj.params();
  std::vector<double> t(s.size(), 0.0);
  for (std::size_t i = 1; i < s.size(); ++i) {
    const double l0 = p[i - 1].lambda, l1 = p[i].lambda;
    t[i] = t[i - 1] + 0.5 * (s[i] - s[i - 1]) * (l0 * l0 + l1 * l1);
  }
  return t;
}

SurvivorBands survivor_bands(const GeometryConstants& c, const Trajectory& traj, std::size_t samples) {
  require(samples >= 2, "need at least two samples");
  const double a = std::min(traj.s_front(), traj.s_back()), b = std::max(traj.s_front(), traj.s_back());
  SurvivorBands out{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(),
                    std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0,
                    true};
  for (std::size_t i = 0; i < samples; ++i) {
    const double s = a * std::pow(b / a, static_cast<double>(i) / static_cast<double>(samples - 1));
    const ParamState p = traj.sample(s);
    const double L = std::log(s);
    out.lambda_log_min = std::min(out.lambda_log_min, p.lambda * L);
    out.lambda_log_max = std::max(out.lambda_log_max, p.lambda * L);
    out.b_slog_min = std::min(out.b_slog_min, p.b * s * L);
    out.b_slog_max = std::max(out.b_slog_max, p.b * s * L);
    out.z_excess_max = std::max(out.z_excess_max, std::abs(p.z - 2.0 * L / c.kappa) / std::log(L));
    if (!(p.b > 0.0)) out.b_positive = false;
  }
  return out;
}

}  // namespace nlslab

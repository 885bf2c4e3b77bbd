#include "nlslab/pde.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

double effective_wavenumber(const ComplexField2D& u, double tail) {
  const Grid2D& g = u.grid();
  FourierTransform2D fft(g.n);
  std::vector<cplx> hat(u.data().begin(), u.data().end());
  fft.forward(hat);
  std::vector<std::pair<double, double>> spec;
  spec.reserve(hat.size());
  double total = 0.0;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const double e = std::norm(hat[j * g.n + i]);
      spec.emplace_back(std::hypot(g.wavenumber(i), g.wavenumber(j)), e);
      total += e;
    }
  if (total == 0.0) return 0.0;
  std::sort(spec.begin(), spec.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  double acc = 0.0;
  for (const auto& [k, e] : spec) {
    acc += e;
    if (acc > tail * total) return k;
  }
  return 0.0;
}

void validate(const EvolutionConfig& cfg, const ComplexField2D& u0) {
  require(cfg.dt != 0.0 && std::isfinite(cfg.dt), "time step must be non-zero and finite");
  require(cfg.monitor_stride > 0, "monitor stride must be positive");
  require(u0.grid().n == cfg.grid.n, "field and config grids differ");
  const double amp = u0.max_abs();
  const double k = effective_wavenumber(u0);
  const double bound = kStabilityConstant / std::max(amp * amp, k * k);
  if (std::abs(cfg.dt) > bound)
    fail(ErrorKind::invalid_argument, "|dt| = " + std::to_string(std::abs(cfg.dt)) + " exceeds c_stab bound " +
                                          std::to_string(bound));
}

SplitStepSolver::SplitStepSolver(const Grid2D& grid, double dt, std::size_t monitor_stride)
    : grid_(grid), dt_(dt), stride_(monitor_stride), fft_(grid.n), propagator_(grid.size()), k_(grid.n) {
  require(dt != 0.0 && std::isfinite(dt), "time step must be non-zero and finite");
  require(monitor_stride > 0, "monitor stride must be positive");
  for (std::size_t i = 0; i < grid.n; ++i) k_[i] = grid.wavenumber(i);
  for (std::size_t j = 0; j < grid.n; ++j)
    for (std::size_t i = 0; i < grid.n; ++i) {
      const double k2 = k_[i] * k_[i] + k_[j] * k_[j];
      propagator_[j * grid.n + i] = std::polar(1.0, -dt * k2);
    }
}

void SplitStepSolver::step(ComplexField2D& u) {
  require(u.grid().n == grid_.n, "field grid does not match solver");
  auto a = u.data();
  if (steps_ == 0) guard_ = 4.0 * u.max_abs();
  const double half = 0.5 * dt_;
  for (cplx& v : a) v *= std::polar(1.0, half * std::norm(v));
  fft_.forward(a);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= propagator_[i];

  if (steps_ % stride_ == 0) {
    const double cut = (2.0 / 3.0) * grid_.nyquist();
    double hi = 0.0, all = 0.0;
    for (std::size_t j = 0; j < grid_.n; ++j)
      for (std::size_t i = 0; i < grid_.n; ++i) {
        const double e = std::norm(a[j * grid_.n + i]);
        all += e;
        if (std::max(std::abs(k_[i]), std::abs(k_[j])) > cut) hi += e;
      }
    high_band_ = all > 0.0 ? hi / all : 0.0;
    if (high_band_ > 1e-8) aliasing_ = true;
  }

  fft_.backward(a);
  double amax = 0.0;
  bool finite = true;
  for (cplx& v : a) {
    v *= std::polar(1.0, half * std::norm(v));
    const double m = std::abs(v);
    finite = finite && std::isfinite(m);
    amax = std::max(amax, m);
  }
  ++steps_;
  if (!finite) fail(ErrorKind::nan_detected, "non-finite field after step " + std::to_string(steps_));
  if (guard_ > 0.0 && amax > guard_)
    fail(ErrorKind::blow_up_guard, "max|u| quadrupled by step " + std::to_string(steps_));
}

void SplitStepSolver::advance(ComplexField2D& u, std::size_t steps) {
  for (std::size_t s = 0; s < steps; ++s) step(u);
}

ComplexField2D free_propagate(const ComplexField2D& u, double t) {
  const Grid2D& g = u.grid();
  FourierTransform2D fft(g.n);
  ComplexField2D out = u;
  auto a = out.data();
  fft.forward(a);
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const double kx = g.wavenumber(i), ky = g.wavenumber(j);
      a[j * g.n + i] *= std::polar(1.0, -t * (kx * kx + ky * ky));
    }
  fft.backward(a);
  return out;
}

ConservedSnapshot conserved(const ComplexField2D& u, double t) {
  const Grid2D& g = u.grid();
  Spectral sp(g);
  ConservedSnapshot s;
  s.t = t;
  const double dA = g.cell_area();
  double quartic = 0.0, var = 0.0, edge = 0.0;
  const double rim = 0.9 * g.half_width;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t i = 0; i < g.n; ++i) {
      const double m = std::norm(u(i, j));
      const double x = g.x(i), y = g.y(j);
      s.mass += m;
      quartic += m * m;
      var += (x * x + y * y) * m;
      if (std::abs(x - g.cx) > rim || std::abs(y - g.cy) > rim) edge += m;
      s.max_amp = std::max(s.max_amp, std::sqrt(m));
    }
  s.mass *= dA;
  quartic *= dA;
  s.variance = var * dA;
  const double grad = sp.dirichlet(u);
  s.grad_norm = std::sqrt(grad);
  s.energy = 0.5 * grad - 0.25 * quartic;
  s.variance_valid = s.mass == 0.0 || edge * dA <= 1e-10 * s.mass;
  return s;
}

VirialReport virial_check(std::span<const ConservedSnapshot> v) {
  if (v.size() < 5) fail(ErrorKind::insufficient_samples, "virial check needs five variance samples");
  const std::size_t c = v.size() / 2;
  const double dt = v[c].t - v[c - 1].t;
  for (std::size_t i = 1; i < v.size(); ++i)
    if (std::abs((v[i].t - v[i - 1].t) - dt) > 1e-9 * std::abs(dt))
      fail(ErrorKind::insufficient_samples, "variance samples are not uniformly spaced");
  VirialReport r;
  r.second_difference = (-v[c - 2].variance + 16.0 * v[c - 1].variance - 30.0 * v[c].variance +
                         16.0 * v[c + 1].variance - v[c + 2].variance) /
                        (12.0 * dt * dt);
  r.sixteen_energy = 16.0 * v[c].energy;
  r.rel_error = std::abs(r.second_difference - r.sixteen_energy) / std::abs(r.sixteen_energy);
  return r;
}

ComplexField2D pseudo_conformal(const ComplexField2D& u, double t) {
  require(t != 0.0 && std::isfinite(t), "pseudo-conformal time must be non-zero");
  const Grid2D& g = u.grid();
  const double at = std::abs(t);
  return pseudo_conformal(u, t, Grid2D(g.n, at * g.half_width, at * g.cx, at * g.cy));
}

ComplexField2D pseudo_conformal(const ComplexField2D& u, double t, const Grid2D& target) {
  require(t != 0.0 && std::isfinite(t), "pseudo-conformal time must be non-zero");
  const double at = std::abs(t);
  ComplexField2D v = resample_scaled(u, target, at);
  const double peak = v.max_abs();
  double reach = 0.0;
  for (std::size_t j = 0; j < target.n; ++j)
    for (std::size_t i = 0; i < target.n; ++i) {
      const double x = target.x(i), y = target.y(j);
      if (std::abs(v(i, j)) > 1e-10 * peak) reach = std::max(reach, std::hypot(x, y));
      v(i, j) *= std::polar(1.0 / at, -(x * x + y * y) / (4.0 * at));
    }
  if (reach / (2.0 * at) > target.nyquist())
    fail(ErrorKind::resample_under_resolved, "quadratic phase exceeds the target grid's Nyquist wavenumber");
  return v;
}

ComplexField2D sample_radial(const RadialProfile& f, const Grid2D& g, double x0, double y0) {
  return ComplexField2D::sample(g, [&](double x, double y) { return cplx(f(std::hypot(x - x0, y - y0)), 0.0); });
}

ComplexField2D minimal_mass_solution(const RadialProfile& Q, double t, const Grid2D& g) {
  require(t != 0.0, "S(t) is singular at t = 0");
  const double at = std::abs(t);
  return ComplexField2D::sample(g, [&](double x, double y) {
    const double r2 = x * x + y * y;
    return std::polar(Q(std::sqrt(r2) / at) / at, -r2 / (4.0 * at) + 1.0 / at);
  });
}

GagliardoReport gagliardo_check(const ComplexField2D& u, double mass_Q) {
  require(mass_Q > 0.0, "ground-state mass must be positive");
  const ConservedSnapshot s = conserved(u, 0.0);
  require(s.mass > 0.0, "field must be non-zero");
  const double grad = s.grad_norm * s.grad_norm;
  const double quartic = 4.0 * (0.5 * grad - s.energy);
  GagliardoReport r;
  r.quotient = quartic / (s.mass * grad);
  r.sharp_constant = 2.0 / mass_Q;
  r.energy = s.energy;
  r.energy_lower_bound = 0.5 * grad * (1.0 - s.mass / mass_Q);
  r.below_sharp = r.quotient <= r.sharp_constant * (1.0 + 1e-6);
  r.energy_bound_holds = r.energy >= r.energy_lower_bound - 1e-6 * std::abs(r.energy_lower_bound);
  return r;
}

}  // namespace nlslab

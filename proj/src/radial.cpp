#include "nlslab/radial.hpp"

#include <cmath>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid-argument";
    case ErrorKind::bracket_not_found: return "bracket-not-found";
    case ErrorKind::non_convergence: return "non-convergence";
    case ErrorKind::window_too_small: return "window-too-small";
    case ErrorKind::singular_system: return "singular-system";
    case ErrorKind::omega_out_of_range: return "omega-out-of-range";
    case ErrorKind::unresolved_bubbles: return "unresolved-bubbles";
    case ErrorKind::bubble_leaves_box: return "bubble-leaves-box";
    case ErrorKind::scale_under_resolved: return "scale-under-resolved";
    case ErrorKind::newton_divergence: return "newton-divergence";
    case ErrorKind::step_underflow: return "step-underflow";
    case ErrorKind::same_sign_endpoints: return "same-sign-endpoints";
    case ErrorKind::nan_detected: return "nan-detected";
    case ErrorKind::blow_up_guard: return "blow-up-guard";
    case ErrorKind::insufficient_samples: return "insufficient-samples";
    case ErrorKind::resample_under_resolved: return "resample-under-resolved";
    case ErrorKind::newton_stall: return "newton-stall";
    case ErrorKind::outside_closeness_window: return "outside-closeness-window";
    case ErrorKind::missing_column: return "missing-column";
    case ErrorKind::config_error: return "config-error";
    case ErrorKind::io_error: return "io-error";
  }
  return "unknown";
}

bool is_numerical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::missing_column:
    case ErrorKind::config_error:
    case ErrorKind::io_error:
      return false;
    default:
      return true;
  }
}

RadialGrid::RadialGrid(double r_max, std::size_t n_points) : r_max_(r_max), n_(n_points) {
  require(std::isfinite(r_max) && r_max >= min_r_max,
          "radial grid needs r_max >= " + std::to_string(min_r_max));
  require(n_points >= 64, "radial grid needs at least 64 nodes");
  h_ = r_max / static_cast<double>(n_points - 1);
}

RadialGrid RadialGrid::with_spacing(double r_max, double h) {
  require(h > 0.0, "radial spacing must be positive");
  const auto intervals = static_cast<std::size_t>(std::llround(r_max / h));
  return RadialGrid(r_max, intervals + 1);
}

std::vector<double> RadialGrid::nodes() const {
  std::vector<double> r(n_);
  for (std::size_t i = 0; i < n_; ++i) r[i] = node(i);
  return r;
}

RadialGrid RadialGrid::coarsened() const {
  require(n_ % 2 == 1, "coarsening needs an odd node count");
  return RadialGrid(r_max_, (n_ + 1) / 2);
}

std::vector<double> even_slopes(std::span<const double> u, double h) {
  const std::size_t n = u.size();
  std::vector<double> du(n, 0.0);
  auto at = [&](long j) { return u[static_cast<std::size_t>(j < 0 ? -j : j)]; };
  for (std::size_t i = 1; i + 2 < n; ++i) {
    const long k = static_cast<long>(i);
    du[i] = (at(k - 2) - 8.0 * at(k - 1) + 8.0 * at(k + 1) - at(k + 2)) / (12.0 * h);
  }
  // one-sided fourth-order stencils at the outer end
  for (std::size_t i = n - 2; i < n; ++i) {
    const double* p = (i == n - 2) ? &u[i - 3] : &u[i - 4];
    if (i == n - 2)
      du[i] = (-p[0] + 6.0 * p[1] - 18.0 * p[2] + 10.0 * p[3] + 3.0 * p[4]) / (12.0 * h);
    else
      du[i] = (3.0 * p[0] - 16.0 * p[1] + 36.0 * p[2] - 48.0 * p[3] + 25.0 * p[4]) / (12.0 * h);
  }
  du[0] = 0.0;
  return du;
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
  require(values_.size() == grid_.size(), "profile length does not match grid");
  slopes_ = even_slopes(values_, grid_.spacing());
}

RadialProfile::RadialProfile(RadialGrid grid, std::vector<double> values, std::vector<double> slopes)
    : grid_(grid), values_(std::move(values)), slopes_(std::move(slopes)) {
  require(values_.size() == grid_.size() && slopes_.size() == grid_.size(),
          "profile length does not match grid");
}

RadialProfile::Sample RadialProfile::sample(double r) const {
  r = std::abs(r);
  const double h = grid_.spacing();
  const double x = r / h;
  const auto last = grid_.size() - 1;
  if (!(x < static_cast<double>(last))) {
    if (r <= grid_.r_max() * (1.0 + 1e-14)) return {values_[last], slopes_[last]};
    return {0.0, 0.0};
  }
  const auto i = static_cast<std::size_t>(x);
  const double t = x - static_cast<double>(i);
  const double t2 = t * t, t3 = t2 * t;
  const double y0 = values_[i], y1 = values_[i + 1];
  const double m0 = slopes_[i] * h, m1 = slopes_[i + 1] * h;
  const double value = (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * m0 + (-2 * t3 + 3 * t2) * y1 +
                       (t3 - t2) * m1;
  const double dvalue = (6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * m0 + (-6 * t2 + 6 * t) * y1 +
                        (3 * t2 - 2 * t) * m1;
  return {value, dvalue / h};
}

RadialProfile RadialProfile::resampled(const RadialGrid& target) const {
  std::vector<double> v(target.size()), d(target.size());
  for (std::size_t i = 0; i < target.size(); ++i) {
    const auto s = sample(target.node(i));
    v[i] = s.value;
    d[i] = s.slope;
  }
  return RadialProfile(target, std::move(v), std::move(d));
}

bool RadialProfile::is_finite() const {
  for (double v : values_)
    if (!std::isfinite(v)) return false;
  for (double v : slopes_)
    if (!std::isfinite(v)) return false;
  return true;
}

double simpson(std::span<const double> f, double h) {
  const std::size_t n = f.size();
  require(n >= 4, "simpson needs at least four samples");
  const std::size_t intervals = n - 1;
  const std::size_t even_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= even_end; i += 2) s += f[i] + 4.0 * f[i + 1] + f[i + 2];
  s *= h / 3.0;
  if (even_end != intervals) {
    const std::size_t i = even_end;
    s += 3.0 * h / 8.0 * (f[i] + 3.0 * f[i + 1] + 3.0 * f[i + 2] + f[i + 3]);
  }
  return s;
}

double radial_integral(const RadialGrid& grid, std::span<const double> f) {
  require(f.size() == grid.size(), "integrand length does not match grid");
  std::vector<double> g(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) g[i] = f[i] * grid.node(i);
  return 2.0 * M_PI * simpson(g, grid.spacing());
}

}  // namespace nlslab

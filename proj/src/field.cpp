#include "nlslab/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

Grid2D::Grid2D(std::size_t n_, double half_width_, double cx_, double cy_)
    : n(n_), half_width(half_width_), cx(cx_), cy(cy_) {
  require(n >= 8 && (n & (n - 1)) == 0, "grid size must be a power of two >= 8");
  require(std::isfinite(half_width) && half_width > 0.0, "grid half-width must be positive");
}

double Grid2D::wavenumber(std::size_t i) const {
  const double k0 = M_PI / half_width;
  const auto ii = static_cast<long>(i), nn = static_cast<long>(n);
  return k0 * static_cast<double>(ii <= nn / 2 ? ii : ii - nn);
}

double Grid2D::nyquist() const { return M_PI / spacing(); }

ComplexField2D::ComplexField2D(const Grid2D& g, std::vector<cplx> data) : grid_(g), data_(std::move(data)) {
  require(data_.size() == g.size(), "field data length does not match grid");
}

double ComplexField2D::l2_norm_sq() const {
  double s = 0.0;
  for (const cplx& v : data_) s += std::norm(v);
  return s * grid_.cell_area();
}

double ComplexField2D::max_abs() const {
  double m = 0.0;
  for (const cplx& v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool ComplexField2D::all_finite() const {
  for (const cplx& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

ComplexField2D& ComplexField2D::operator+=(const ComplexField2D& o) {
  require(o.data_.size() == data_.size(), "field size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexField2D& ComplexField2D::operator-=(const ComplexField2D& o) {
  require(o.data_.size() == data_.size(), "field size mismatch");
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexField2D& ComplexField2D::operator*=(cplx a) {
  for (cplx& v : data_) v *= a;
  return *this;
}

ComplexField2D operator+(ComplexField2D a, const ComplexField2D& b) { return a += b; }
ComplexField2D operator-(ComplexField2D a, const ComplexField2D& b) { return a -= b; }

double inner(const ComplexField2D& f, const ComplexField2D& g) {
  require(f.data().size() == g.data().size(), "field size mismatch");
  double s = 0.0;
  auto a = f.data();
  auto b = g.data();
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return s * f.grid().cell_area();
}

namespace {

std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

void init_threads_once() {
  static const bool done = [] {
    fftw_init_threads();
    return true;
  }();
  (void)done;
}

}  // namespace

int fft_threads() {
  const char* env = std::getenv("NLSLAB_THREADS");
  if (!env) return 1;
  char* end = nullptr;
  const long v = std::strtol(env, &end, 10);
  if (end == env || v < 1) return 1;
  return static_cast<int>(std::min(v, 256L));
}

FourierTransform2D::FourierTransform2D(std::size_t n) : n_(n) {
  std::lock_guard<std::mutex> lock(planner_mutex());
  init_threads_once();
  fftw_plan_with_nthreads(fft_threads());
  buf_ = reinterpret_cast<cplx*>(fftw_malloc(sizeof(fftw_complex) * n * n));
  auto* b = reinterpret_cast<fftw_complex*>(buf_);
  const int ni = static_cast<int>(n);
  fwd_ = fftw_plan_dft_2d(ni, ni, b, b, FFTW_FORWARD, FFTW_ESTIMATE);
  bwd_ = fftw_plan_dft_2d(ni, ni, b, b, FFTW_BACKWARD, FFTW_ESTIMATE);
}

FourierTransform2D::~FourierTransform2D() {
  std::lock_guard<std::mutex> lock(planner_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(fwd_));
  fftw_destroy_plan(static_cast<fftw_plan>(bwd_));
  fftw_free(buf_);
}

void FourierTransform2D::forward(std::span<cplx> a) {
  require(a.size() == n_ * n_, "transform size mismatch");
  std::memcpy(buf_, a.data(), a.size() * sizeof(cplx));
  fftw_execute(static_cast<fftw_plan>(fwd_));
  std::memcpy(a.data(), buf_, a.size() * sizeof(cplx));
}

void FourierTransform2D::backward(std::span<cplx> a) {
  require(a.size() == n_ * n_, "transform size mismatch");
  std::memcpy(buf_, a.data(), a.size() * sizeof(cplx));
  fftw_execute(static_cast<fftw_plan>(bwd_));
  const double s = 1.0 / static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) a[i] = buf_[i] * s;
}

Spectral::Spectral(const Grid2D& g) : grid_(g), fft_(g.n), k_(g.n) {
  for (std::size_t i = 0; i < g.n; ++i) k_[i] = g.wavenumber(i);
}

Gradient Spectral::gradient(const ComplexField2D& u) {
  const std::size_t n = grid_.n;
  std::vector<cplx> hat(u.data().begin(), u.data().end());
  fft_.forward(hat);
  std::vector<cplx> gx(hat.size()), gy(hat.size());
  const cplx I(0.0, 1.0);
  for (std::size_t j = 0; j < n; ++j) {
    const double ky = (j == n / 2) ? 0.0 : k_[j];
    for (std::size_t i = 0; i < n; ++i) {
      const double kx = (i == n / 2) ? 0.0 : k_[i];
      gx[j * n + i] = I * kx * hat[j * n + i];
      gy[j * n + i] = I * ky * hat[j * n + i];
    }
  }
  fft_.backward(gx);
  fft_.backward(gy);
  return {ComplexField2D(grid_, std::move(gx)), ComplexField2D(grid_, std::move(gy))};
}

ComplexField2D Spectral::laplacian(const ComplexField2D& u) {
  const std::size_t n = grid_.n;
  std::vector<cplx> hat(u.data().begin(), u.data().end());
  fft_.forward(hat);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) hat[j * n + i] *= -(k_[i] * k_[i] + k_[j] * k_[j]);
  fft_.backward(hat);
  return ComplexField2D(grid_, std::move(hat));
}

double Spectral::dirichlet(const ComplexField2D& u) {
  const std::size_t n = grid_.n;
  std::vector<cplx> hat(u.data().begin(), u.data().end());
  fft_.forward(hat);
  double s = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) s += (k_[i] * k_[i] + k_[j] * k_[j]) * std::norm(hat[j * n + i]);
  return s * grid_.cell_area() / static_cast<double>(n * n);
}

double Spectral::high_band_fraction(const ComplexField2D& u) {
  const std::size_t n = grid_.n;
  std::vector<cplx> hat(u.data().begin(), u.data().end());
  fft_.forward(hat);
  const double cut = (2.0 / 3.0) * grid_.nyquist();
  double hi = 0.0, all = 0.0;
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const double e = std::norm(hat[j * n + i]);
      all += e;
      if (std::max(std::abs(k_[i]), std::abs(k_[j])) > cut) hi += e;
    }
  return all > 0.0 ? hi / all : 0.0;
}

namespace {

// Periodic sinc weights for evaluating a trigonometric interpolant at
// points t (in source coordinates) from n equispaced nodes.
std::vector<double> sinc_weights(const Grid2D& src, double origin, std::span<const double> t) {
  const std::size_t n = src.n;
  const double dx = src.spacing();
  const double period = 2.0 * src.half_width;
  std::vector<double> w(t.size() * n, 0.0);
  for (std::size_t a = 0; a < t.size(); ++a) {
    const double rel = t[a] - (origin - src.half_width);
    if (rel < -0.5 * dx || rel > period - 0.5 * dx) continue;
    const double pos = rel / dx;
    const double nearest = std::round(pos);
    if (std::abs(pos - nearest) < 1e-13) {
      w[a * n + static_cast<std::size_t>(nearest) % n] = 1.0;
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      const double th = M_PI * (pos - static_cast<double>(j)) / static_cast<double>(n);
      w[a * n + j] = std::sin(static_cast<double>(n) * th) / (static_cast<double>(n) * std::tan(th));
    }
  }
  return w;
}

}  // namespace

ComplexField2D resample_scaled(const ComplexField2D& src, const Grid2D& target, double scale) {
  require(scale > 0.0, "resampling scale must be positive");
  const Grid2D& g = src.grid();
  const std::size_t ns = g.n, nt = target.n;
  std::vector<double> tx(nt), ty(nt);
  for (std::size_t i = 0; i < nt; ++i) {
    tx[i] = target.x(i) / scale;
    ty[i] = target.y(i) / scale;
  }
  const std::vector<double> wx = sinc_weights(g, g.cx, tx);
  const std::vector<double> wy = sinc_weights(g, g.cy, ty);

  // rows first: tmp(j_src, i_tgt)
  std::vector<cplx> tmp(ns * nt, cplx(0.0, 0.0));
  auto s = src.data();
  for (std::size_t j = 0; j < ns; ++j)
    for (std::size_t a = 0; a < nt; ++a) {
      const double* w = &wx[a * ns];
      cplx acc(0.0, 0.0);
      for (std::size_t i = 0; i < ns; ++i) acc += w[i] * s[j * ns + i];
      tmp[j * nt + a] = acc;
    }
  ComplexField2D out(target);
  for (std::size_t b = 0; b < nt; ++b) {
    const double* w = &wy[b * ns];
    for (std::size_t a = 0; a < nt; ++a) {
      cplx acc(0.0, 0.0);
      for (std::size_t j = 0; j < ns; ++j) acc += w[j] * tmp[j * nt + a];
      out(a, b) = acc;
    }
  }
  return out;
}

}  // namespace nlslab

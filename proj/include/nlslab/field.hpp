#pragma once

#include <complex>
#include <cstddef>
#include <mutex>
#include <span>
#include <vector>

namespace nlslab {

using cplx = std::complex<double>;

// Periodic square grid of n x n nodes x_i = cx - L + i*dx, dx = 2L/n.
struct Grid2D {
  std::size_t n = 0;
  double half_width = 0.0;
  double cx = 0.0;
  double cy = 0.0;

  Grid2D() = default;
  Grid2D(std::size_t n_, double half_width_, double cx_ = 0.0, double cy_ = 0.0);

  double spacing() const { return 2.0 * half_width / static_cast<double>(n); }
  double x(std::size_t i) const { return cx - half_width + static_cast<double>(i) * spacing(); }
  double y(std::size_t j) const { return cy - half_width + static_cast<double>(j) * spacing(); }
  double cell_area() const { return spacing() * spacing(); }
  std::size_t size() const { return n * n; }
  // Angular wavenumber of FFT bin i (Nyquist bin carries +pi/dx).
  double wavenumber(std::size_t i) const;
  double nyquist() const;
};

// Row-major samples: index = j*n + i for node (x_i, y_j).
class ComplexField2D {
 public:
  ComplexField2D() = default;
  explicit ComplexField2D(const Grid2D& g) : grid_(g), data_(g.size(), cplx(0.0, 0.0)) {}
  ComplexField2D(const Grid2D& g, std::vector<cplx> data);

  template <class F>
  static ComplexField2D sample(const Grid2D& g, F&& f) {
    ComplexField2D u(g);
    for (std::size_t j = 0; j < g.n; ++j)
      for (std::size_t i = 0; i < g.n; ++i) u.data_[j * g.n + i] = f(g.x(i), g.y(j));
    return u;
  }

  const Grid2D& grid() const { return grid_; }
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }
  cplx& operator()(std::size_t i, std::size_t j) { return data_[j * grid_.n + i]; }
  const cplx& operator()(std::size_t i, std::size_t j) const { return data_[j * grid_.n + i]; }

  double l2_norm_sq() const;
  double max_abs() const;
  bool all_finite() const;

  ComplexField2D& operator+=(const ComplexField2D& o);
  ComplexField2D& operator-=(const ComplexField2D& o);
  ComplexField2D& operator*=(cplx a);

 private:
  Grid2D grid_;
  std::vector<cplx> data_;
};

ComplexField2D operator+(ComplexField2D a, const ComplexField2D& b);
ComplexField2D operator-(ComplexField2D a, const ComplexField2D& b);

// Re int f conj(g)
double inner(const ComplexField2D& f, const ComplexField2D& g);

// In-place 2D DFT of an n x n array through an aligned scratch buffer.
// The inverse is normalized.
class FourierTransform2D {
 public:
  explicit FourierTransform2D(std::size_t n);
  ~FourierTransform2D();
  FourierTransform2D(const FourierTransform2D&) = delete;
  FourierTransform2D& operator=(const FourierTransform2D&) = delete;

  void forward(std::span<cplx> a);
  void backward(std::span<cplx> a);
  std::size_t n() const { return n_; }

 private:
  std::size_t n_;
  cplx* buf_;
  void* fwd_;
  void* bwd_;
};

// Thread count for FFT plans, from NLSLAB_THREADS (default 1).
int fft_threads();

struct Gradient {
  ComplexField2D dx, dy;
};

// Spectral derivatives on the periodic grid. The Nyquist bin is dropped
// for first derivatives.
class Spectral {
 public:
  explicit Spectral(const Grid2D& g);
  const Grid2D& grid() const { return grid_; }

  Gradient gradient(const ComplexField2D& u);
  ComplexField2D laplacian(const ComplexField2D& u);
  // int |grad u|^2 by Parseval
  double dirichlet(const ComplexField2D& u);
  // fraction of spectral mass with max(|kx|,|ky|) above 2/3 of Nyquist
  double high_band_fraction(const ComplexField2D& u);

 private:
  Grid2D grid_;
  FourierTransform2D fft_;
  std::vector<double> k_;
};

// Samples src at the points x/scale of the target grid by separable
// trigonometric interpolation. Points outside the source box read as zero.
ComplexField2D resample_scaled(const ComplexField2D& src, const Grid2D& target, double scale);

}  // namespace nlslab

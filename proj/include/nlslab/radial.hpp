#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace nlslab {

// Uniform grid r_i = i*h, i = 0..n-1, with r_{n-1} = r_max.
class RadialGrid {
 public:
  RadialGrid(double r_max, std::size_t n_points);
  static RadialGrid with_spacing(double r_max, double h);

  double r_max() const { return r_max_; }
  std::size_t size() const { return n_; }
  double spacing() const { return h_; }
  double node(std::size_t i) const { return static_cast<double>(i) * h_; }
  std::vector<double> nodes() const;

  // Every other node. Needs an odd node count so r_max is kept.
  RadialGrid coarsened() const;

  static constexpr double min_r_max = 20.0;

 private:
  double r_max_;
  std::size_t n_;
  double h_;
};

// Even radial function sampled on a RadialGrid, with slopes for C^1
// cubic Hermite interpolation. Zero beyond r_max.
class RadialProfile {
 public:
  RadialProfile(RadialGrid grid, std::vector<double> values);
  RadialProfile(RadialGrid grid, std::vector<double> values, std::vector<double> slopes);

  const RadialGrid& grid() const { return grid_; }
  std::span<const double> values() const { return values_; }
  std::span<const double> slopes() const { return slopes_; }
  double at_node(std::size_t i) const { return values_[i]; }

  struct Sample {
    double value;
    double slope;
  };
  Sample sample(double r) const;
  double operator()(double r) const { return sample(r).value; }

  // Resample onto another grid by Hermite interpolation.
  RadialProfile resampled(const RadialGrid& target) const;

  bool is_finite() const;

 private:
  RadialGrid grid_;
  std::vector<double> values_;
  std::vector<double> slopes_;
};

// Fourth-order slopes of an even function (u_{-j} = u_j at the origin).
std::vector<double> even_slopes(std::span<const double> u, double h);

// 2*pi * int_0^{r_max} f(r) r dr by composite Simpson.
double radial_integral(const RadialGrid& grid, std::span<const double> f);

// int_a^b f on uniform samples by composite Simpson (3/8 on the last panel
// when the interval count is odd).
double simpson(std::span<const double> f, double h);

}  // namespace nlslab

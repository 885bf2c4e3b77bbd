#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "nlslab/field.hpp"
#include "nlslab/radial.hpp"

namespace nlslab {

// dt * max(|u|^2, k_eff^2) <= c_stab, where k_eff is the radius holding all
// but 1e-12 of the spectral mass of the initial field.
constexpr double kStabilityConstant = 1.0;

struct EvolutionConfig {
  Grid2D grid;
  double dt = 1e-4;
  double t_span = 1.0;
  std::size_t monitor_stride = 100;
};

double effective_wavenumber(const ComplexField2D& u, double tail = 1e-12);
void validate(const EvolutionConfig& cfg, const ComplexField2D& u0);

// Strang splitting for i u_t + Delta u + |u|^2 u = 0: half nonlinear
// phase, exact free flow in Fourier space, half nonlinear phase.
class SplitStepSolver {
 public:
  SplitStepSolver(const Grid2D& grid, double dt, std::size_t monitor_stride = 100);

  void step(ComplexField2D& u);
  void advance(ComplexField2D& u, std::size_t steps);

  double dt() const { return dt_; }
  std::size_t steps_taken() const { return steps_; }
  bool aliasing_warning() const { return aliasing_; }
  double high_band_fraction() const { return high_band_; }

 private:
  Grid2D grid_;
  double dt_;
  std::size_t stride_;
  FourierTransform2D fft_;
  std::vector<cplx> propagator_;
  std::vector<double> k_;
  std::size_t steps_ = 0;
  double guard_ = 0.0;
  bool aliasing_ = false;
  double high_band_ = 0.0;
};

// Exact free flow e^{i t Delta} applied spectrally.
ComplexField2D free_propagate(const ComplexField2D& u, double t);

struct ConservedSnapshot {
  double t = 0.0;
  double mass = 0.0;
  double energy = 0.0;
  double variance = 0.0;
  double max_amp = 0.0;
  double grad_norm = 0.0;
  bool variance_valid = true;  // false when the box edge carries mass
};

ConservedSnapshot conserved(const ComplexField2D& u, double t);

struct VirialReport {
  double second_difference = 0.0;
  double sixteen_energy = 0.0;
  double rel_error = 0.0;
};

VirialReport virial_check(std::span<const ConservedSnapshot> samples);

// v(t, x) = |t|^{-1} u(1/|t|, x/|t|) e^{-i|x|^2/(4|t|)} from u at time 1/|t|.
// The default target is the source grid scaled by |t|.
ComplexField2D pseudo_conformal(const ComplexField2D& u, double t);
ComplexField2D pseudo_conformal(const ComplexField2D& u, double t, const Grid2D& target);

// Radial profile sampled on a grid, centred at (x0, y0).
ComplexField2D sample_radial(const RadialProfile& f, const Grid2D& g, double x0 = 0.0, double y0 = 0.0);

// S(t, x) = |t|^{-1} Q(x/|t|) e^{-i|x|^2/(4|t|)} e^{i/|t|}
ComplexField2D minimal_mass_solution(const RadialProfile& Q, double t, const Grid2D& g);

struct GagliardoReport {
  double quotient = 0.0;       // ||u||_4^4 / (||u||_2^2 ||grad u||_2^2)
  double sharp_constant = 0.0;  // 2 / ||Q||_2^2
  double energy = 0.0;
  double energy_lower_bound = 0.0;  // 1/2 ||grad u||^2 (1 - ||u||^2/||Q||^2)
  bool below_sharp = false;
  bool energy_bound_holds = false;
};

GagliardoReport gagliardo_check(const ComplexField2D& u, double mass_Q);

}  // namespace nlslab

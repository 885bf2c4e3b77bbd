#pragma once

#include <array>
#include <optional>

#include "nlslab/field.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/interactions.hpp"

namespace nlslab {

struct ParamState {
  double lambda = 1.0;
  double z = 0.0;
  double gamma = 0.0;
  double beta = 0.0;
  double b = 0.0;
};

// Derivatives with respect to the rescaled time s.
struct ParamVelocity {
  double lambda_dot = 0.0;
  double z_dot = 0.0;
  double gamma_dot = 0.0;
  double beta_dot = 0.0;
  double b_dot = 0.0;
};

struct ModulationVector {
  double scale = 0.0;
  double translate = 0.0;
  double phase = 0.0;
  double drift = 0.0;
  double conformal = 0.0;
  double norm() const;
};

// Velocity on which the modulation vector vanishes.
ParamVelocity zero_set_velocity(const ParamState& p, const GeometryConstants& c);

ModulationVector modulation_vector(const ParamState& p, const ParamVelocity& v, const GeometryConstants& c);

// Pointwise bubbles e^{i Gamma_k(w)} Q_a(w), w = y - z e_k.
class BubbleSet {
 public:
  BubbleSet(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
            std::optional<double> a_override = std::nullopt);

  int count() const { return consts_.K; }
  double a() const { return a_; }
  std::array<double, 2> center(int k) const;
  cplx bubble(int k, double y1, double y2) const;
  cplx sum(double y1, double y2) const;
  double phase(int k, double w1, double w2) const;  // Gamma_k(w)
  double profile(double r) const;                    // Q_a(r)
  RadialProfile::Sample profile_sample(double r) const;

  const GroundStateData& ground_state() const { return gs_; }
  const GeometryConstants& geometry() const { return consts_; }
  const ParamState& params() const { return p_; }

 private:
  const GroundStateData& gs_;
  const GeometryConstants& consts_;
  ParamState p_;
  double a_;
};

constexpr double kBubbleClearance = 15.0;

ComplexField2D build_bubble(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p, int k,
                            const Grid2D& grid, std::optional<double> a_override = std::nullopt);
ComplexField2D build_ansatz(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                            const Grid2D& grid, std::optional<double> a_override = std::nullopt);

// u(x) = e^{i gamma} lambda^{-1} v(x / lambda) on the grid scaled by lambda.
ComplexField2D to_physical(const ComplexField2D& v, const ParamState& p);
// Same, resampled onto a given physical grid.
ComplexField2D to_physical(const ComplexField2D& v, const ParamState& p, const Grid2D& target);

struct ErrorField {
  ComplexField2D direct;      // from the equation with spectral derivatives
  ComplexField2D decomposed;  // modulation, interaction and profile terms
  double direct_norm = 0.0;
  double decomposed_norm = 0.0;
  double route_gap = 0.0;       // L2 distance between the two
  double spectral_floor = 0.0;  // ||Delta Q - Q + Q^3|| for one bubble on the grid
  double psi_projection = 0.0;  // <Psi_{Q_a}, i Q_a>
};

ErrorField error_field(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                       const ParamVelocity& v, const Grid2D& grid);

// Interaction field G_k of bubble k, sampled in the frame of bubble k.
ComplexField2D interaction_field(const BubbleSet& bubbles, int k, const Grid2D& frame_grid);

}  // namespace nlslab

#pragma once

#include <array>
#include <vector>

#include "nlslab/groundstate.hpp"

namespace nlslab {

// kappa_K = |e_1 - e_2| = 2 sin(pi/K), the bubble distance over z.
double kappa_of(int K);

struct GeometryConstants {
  int K = 2;
  double kappa = 2.0;
  double c_a = 0.0;  // sign follows <rho, Q>
  std::vector<std::array<double, 2>> directions;
};

GeometryConstants make_geometry(const GroundStateData& gs, int K);

// a(z) = -c_a z^{1/2} e^{-kappa z}
double a_of_z(const GeometryConstants& c, double z);
double a_prime_of_z(const GeometryConstants& c, double z);

// int w(y) Q^3(y) Q(y - omega) dy on a Cartesian grid, w = 1 for power 0
// and 1 + |y|^power otherwise. Same weight in the other overlaps.
double overlap_two(const RadialProfile& q, std::array<double, 2> omega, double power = 0.0,
                   double spacing = 0.05);

// c_Q I_Q |omega|^{-1/2} e^{-|omega|}
double asymptotic_overlap(const GroundStateData& gs, double omega_norm);

// int (1 + |y|^power) Q^2(y) Q(y - omega) Q(y - omega_t) dy
double overlap_three(const RadialProfile& q, std::array<double, 2> omega, std::array<double, 2> omega_t,
                     double power = 0.0, double spacing = 0.05);

// int (1 + |y|^power) Q^2(y) Q^2(y - omega) dy
double overlap_pair_squared(const RadialProfile& q, std::array<double, 2> omega, double power = 0.0,
                            double spacing = 0.05);

struct ParamState;

// <G_1, i Q_a> for the symmetric configuration, in the frame of bubble 1.
double projection_G1_iQa(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                         double spacing = 0.05);

// -(b/4) c_Q I_Q kappa^{3/2} z^{3/2} e^{-kappa z}, the two-bubble leading term.
double projection_G1_leading(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p);

}  // namespace nlslab

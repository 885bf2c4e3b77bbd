#pragma once

#include "nlslab/ansatz.hpp"
#include "nlslab/groundstate.hpp"
#include "nlslab/interactions.hpp"

namespace testing {

// Computed once per test binary.
inline const nlslab::GroundStateData& ground_state() {
  static const nlslab::GroundStateData gs =
      nlslab::compute_ground_state_data(nlslab::RadialGrid::with_spacing(30.0, 0.005));
  return gs;
}

inline const nlslab::GeometryConstants& geometry(int K) {
  static const nlslab::GeometryConstants g2 = nlslab::make_geometry(ground_state(), 2);
  static const nlslab::GeometryConstants g4 = nlslab::make_geometry(ground_state(), 4);
  return K == 2 ? g2 : g4;
}

inline double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

}  // namespace testing

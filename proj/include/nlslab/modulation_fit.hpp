#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/ansatz.hpp"
#include "nlslab/error.hpp"
#include "nlslab/pde.hpp"

namespace nlslab {

struct DecomposeOptions {
  double tol = 1e-10;        // residuals below tol * ||Q||
  double closeness = 0.3;    // admissible relative H1 distance at the guess
  int max_iter = 30;
};

// u(x) = e^{i gamma} lambda^{-1} (P + eps)(x / lambda). eta1 is the residual
// seen from bubble 0: eps(y) = e^{i Gamma_0(w)} eta1(w), w = y - z e_0.
struct Decomposition {
  ParamState p;
  ComplexField2D epsilon;  // on the rescaled grid
  ComplexField2D eta1;     // on the rescaled grid shifted by -z e_0
  // <eta,|y|^2 Q>, <eta, e.y Q>, <eta, i rho>, <eta, i e.grad Q>, <eta, i Lambda Q>
  std::array<double, 5> ortho_residuals{};
  // e-perpendicular components of <eta, y Q> and <eta, i grad Q>
  std::array<double, 2> transverse{};
  double eta1_dot_Q = 0.0;
  double eps_H1 = 0.0;
  double closeness = 0.0;  // relative H1 distance at the guess
  int iterations = 0;
};

Decomposition decompose(const ComplexField2D& u, const GroundStateData& gs, const GeometryConstants& c,
                        const ParamState& guess, const DecomposeOptions& opt = {});

struct FunctionalValues {
  double H = 0.0;
  double J = 0.0;
  double F = 0.0;
  double eps_H1_sq = 0.0;
};

// C^2 bump: 1 on [0, 0.1], 0 on [0.125, inf).
double cutoff_chi(double r);

FunctionalValues functionals(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                             const ComplexField2D& eps, double s_proxy);
FunctionalValues functionals(const Decomposition& dec, const GroundStateData& gs, const GeometryConstants& c,
                             double s_proxy);

struct CoercivityProbe {
  std::size_t samples = 0;
  double min_quotient = 0.0;  // min F / ||eps||_{H1}^2
  double max_quotient = 0.0;
  double max_ortho = 0.0;     // largest constraint pairing left after projection
};

// Random smooth tau_K-symmetric eps near the bubbles, projected off
// Q, |y|^2 Q, y Q, i rho, i grad Q, i Lambda Q in each bubble frame.
CoercivityProbe random_coercivity(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                                  const Grid2D& grid, double s_proxy, std::size_t samples = 100,
                                  double amplitude = 1e-3, std::uint64_t seed = 20240611);

struct TrackConfig {
  double s_in = 100.0;
  double zeta_sharp = 0.0;
  double s_floor = 15.0;          // stop once the reduced time map passes this
  std::size_t n = 256;
  double rescaled_half_width = 32.0;
  double dt = 2e-4;               // magnitude; the run goes backward
  std::size_t cadence = 500;      // steps between records
  std::size_t max_records = 400;
  DecomposeOptions decompose;
};

void validate(const TrackConfig& cfg);

struct TrackRecord {
  double t = 0.0;
  double s_proxy = 0.0;
  double s_fit = 0.0;  // s_in + int dt / lambda^2 over the fitted lambda
  ParamState p;
  double eps_H1 = 0.0;
  double eta1_dot_Q = 0.0;
  std::array<double, 5> ortho{};
  std::array<double, 2> transverse{};
  FunctionalValues f;
  ConservedSnapshot snap;
  double P_mass = 0.0;
  ModulationVector mod;
  int iterations = 0;
};

struct TrackResult {
  std::vector<TrackRecord> records;
  bool truncated = false;
  std::string truncation;  // reason the record ended early
  std::optional<ErrorKind> truncation_kind;
  std::size_t steps = 0;
  bool aliasing_warning = false;
};

TrackResult track(const GroundStateData& gs, const GeometryConstants& c, const TrackConfig& cfg);

struct EnvelopeCheck {
  double constant = 0.0;    // fitted on the first three usable records
  double worst_ratio = 0.0;  // max value / (constant * shape)
  bool pass = false;
};

struct TrackAssessment {
  bool all_converged = false;
  std::size_t records = 0;
  double s_reached = 0.0;
  EnvelopeCheck eps;    // s^{-1} log^{-3/2} s
  EnvelopeCheck eta;    // s^{-2} log^{-2} s
  EnvelopeCheck drift;  // integrated s^{-2}log^{-2}s ||eps|| + s^{-1}log^{-1}s ||eps||^2
  double mass_drift = 0.0;
  double P_mass_drift = 0.0;
  bool pass = false;
};

TrackAssessment assess(const TrackResult& run, double factor = 10.0);

}  // namespace nlslab

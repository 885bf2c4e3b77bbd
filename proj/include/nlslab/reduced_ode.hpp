#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "nlslab/ansatz.hpp"
#include "nlslab/interactions.hpp"

namespace nlslab {

struct ReducedState {
  double s = 0.0;
  ParamState p;
};

ParamVelocity reduced_rhs(const ReducedState& state, const GeometryConstants& c);

// zeta(z) = (2/(kappa c_a))^{1/2} z^{-3/4} e^{kappa z/2}
double zeta_of(const GeometryConstants& c, double z);
// xi = (zeta - s)^2 s^{-2} log s
double xi_of(const GeometryConstants& c, double s, double z);

enum class TubeBand { none, zeta, b_lower, b_upper, beta };
std::string to_string(TubeBand band);

// The zeta, b and beta bands, each as g(s, p) >= 0 inside.
struct BootstrapTube {
  double zeta_band(const GeometryConstants& c, double s, const ParamState& p) const;
  double b_lower(double s, const ParamState& p) const;
  double b_upper(double s, const ParamState& p) const;
  double beta_band(double s, const ParamState& p) const;
  // Most violated band, or none when strictly inside.
  TubeBand violated(const GeometryConstants& c, double s, const ParamState& p) const;
};

ParamState regime_reference(const GeometryConstants& c, double s);
ParamState final_data(const GeometryConstants& c, double s_in, double zeta_sharp);

// Adaptive trajectory: accepted nodes plus Dormand-Prince dense output on
// each step, ordered along the direction of integration.
class Trajectory {
 public:
  struct Segment {
    double s0, h;
    std::array<std::array<double, 5>, 5> rcont;
  };

  void start(double s, const ParamState& p);
  void append(double s, const ParamState& p, const Segment& seg);
  void truncate_at(double s, const ParamState& p);

  std::size_t size() const { return s_.size(); }
  const std::vector<double>& s() const { return s_; }
  const std::vector<ParamState>& params() const { return p_; }
  double s_front() const { return s_.front(); }
  double s_back() const { return s_.back(); }
  // Dense-output evaluation for any s within the covered range.
  ParamState sample(double s) const;

 private:
  std::vector<double> s_;
  std::vector<ParamState> p_;
  std::vector<Segment> seg_;
};

struct IntegratorOptions {
  double rtol = 1e-10;
  double atol = 1e-20;
  std::optional<BootstrapTube> tube = BootstrapTube{};
};

struct TubeExit {
  bool exited = false;
  double s_star = 0.0;
  TubeBand band = TubeBand::none;
  int sign = 0;         // sign of zeta - s at a zeta-band exit
  double xi_dot = 0.0;  // d xi / ds at s*, zeta-band exits only
};

struct ReducedRun {
  Trajectory trajectory;
  TubeExit exit;
  std::size_t steps = 0;
  std::size_t rejected = 0;
};

// Integrates from start to s_end in either direction, stopping at the
// first tube violation when a tube is given.
ReducedRun integrate(const GeometryConstants& c, const ReducedState& start, double s_end,
                     const IntegratorOptions& opt = {});

struct ShootingConfig {
  double s_in = 1e6;
  double s0 = 1e3;
  double zeta_lo = -1.0;
  double zeta_hi = 1.0;
  double bisection_tol = 1e-12;
  BootstrapTube tube;
  double rtol = 1e-10;
};

void validate(const ShootingConfig& cfg);

ReducedRun integrate_backward(const ShootingConfig& cfg, double zeta_sharp, const GeometryConstants& c);

struct BisectionProbe {
  double zeta_sharp;
  bool survived;
  int sign;
  double s_star;
  TubeBand band;
  double xi_dot;
};

struct ShootResult {
  bool success = false;
  double zeta_sharp = 0.0;
  double lo = 0.0, hi = 0.0;  // final bracket when no survivor was found
  ReducedRun survivor;
  std::vector<BisectionProbe> history;
  bool monotone = true;
};

ShootResult shoot(const ShootingConfig& cfg, const GeometryConstants& c);

// t(s) = -int_s^{s_in} lambda^2 by trapezoid over the stored nodes, where
// s_in is the first node.
std::vector<double> time_map(const Trajectory& traj);

struct SurvivorBands {
  double lambda_log_min, lambda_log_max;  // lambda(s) log s
  double b_slog_min, b_slog_max;          // b(s) s log s
  double z_excess_max;                    // max |z - (2/kappa) log s| / log log s
  bool b_positive;
};

SurvivorBands survivor_bands(const GeometryConstants& c, const Trajectory& traj, std::size_t samples = 2000);

}  // namespace nlslab

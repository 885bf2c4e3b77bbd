#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "nlslab/radial.hpp"

namespace nlslab {

// Radial ground state of Q'' + Q'/r - Q + Q^3 = 0 by shooting on Q(0)
// with a modified-Bessel tail past the matching radius.
struct ShootingReport {
  double q0 = 0.0;
  double bracket_width = 0.0;
  int iterations = 0;
  double match_radius = 0.0;
  double tail_amplitude = 0.0;  // Q ~ tail_amplitude * K0(r)
  double growing_mode = 0.0;    // coefficient of I0 removed at the match
};

RadialProfile solve_ground_state(const RadialGrid& grid, double tol, ShootingReport* report = nullptr);

enum class AsymptoticModel {
  leading,  // c r^{-1/2} e^{-r}
  bessel,   // c sqrt(2/pi) K0(r), same leading term
};

double fit_asymptotic_cQ(const RadialProfile& q, double r_lo, double r_hi,
                         AsymptoticModel model = AsymptoticModel::leading);

// int Q^3(y) e^{y.omega_hat} dy by radial Simpson and angular trapezoid.
double compute_IQ(const RadialProfile& q, std::size_t n_theta = 256,
                  std::array<double, 2> direction = {1.0, 0.0});

enum class OperatorKind { plus, minus };

// Angular-harmonic block of L_+ or L_- on a radial grid. Dirichlet at
// r_max, and at r = 0 for m >= 1. Order 4 uses a five-point stencil with
// parity ghosts; order 2 is the self-adjoint three-point scheme under the
// weights w_0 = h^2/8, w_i = r_i h.
class SectorOperator {
 public:
  SectorOperator(const RadialProfile& q, int harmonic, OperatorKind kind, int order = 4);

  int harmonic() const { return m_; }
  OperatorKind kind() const { return kind_; }
  int order() const { return order_; }
  std::size_t first_active() const { return m_ == 0 ? 0 : 1; }
  std::size_t last_active() const { return grid_.size() - 2; }

  // Boundary rows are returned as zero.
  std::vector<double> apply(std::span<const double> u) const;
  // sqrt(2 pi sum r_i h |Au - f|^2) over the active rows, optionally
  // leaving out the rows whose stencil reaches the wall.
  double residual_norm(std::span<const double> u, std::span<const double> f, bool skip_wall_rows = false) const;
  std::vector<double> solve(std::span<const double> f) const;
  Eigen::SparseMatrix<double> matrix() const;

  // Order 2 only: S = W A restricted to the active nodes.
  struct SymmetricForm {
    std::size_t first = 0;
    std::vector<double> diag, off, weight;
  };
  SymmetricForm symmetric_form() const;

  // Smallest eigenvalue of A on the W-orthogonal complement of the given
  // full-length vectors, by shifted inverse iteration. Order 2 only.
  double lowest_eigenvalue(const std::vector<std::vector<double>>& constraints = {}) const;

 private:
  RadialGrid grid_;
  std::vector<double> potential_;
  int m_;
  OperatorKind kind_;
  int order_;
};

struct RhoSolution {
  RadialProfile rho;
  double residual;
  double growth_constant;  // max |rho| / ((1 + r^3) Q) away from the outer wall
};

// L_+ rho = |x|^2 Q / 4 on the radial sector.
RhoSolution solve_rho(const RadialProfile& q);

struct GroundStateData {
  RadialProfile Q;
  RadialProfile rho;
  double Q0 = 0.0;
  double mass = 0.0;      // int Q^2
  double grad_sq = 0.0;   // int |grad Q|^2
  double quartic = 0.0;   // int Q^4
  double c_Q = 0.0;       // Bessel-model fit on the default window
  double c_Q_leading = 0.0;
  double c_Q_window_spread = 0.0;  // relative spread of c_Q under +-2 window shifts
  double I_Q = 0.0;
  double rho_dot_Q = 0.0;
  double rho_residual = 0.0;
  double rho_growth = 0.0;
  ShootingReport shooting{};
};

struct GroundStateOptions {
  double tol = 1e-12;
  double fit_lo = 8.0;
  double fit_hi = 16.0;
  std::size_t n_theta = 256;
};

GroundStateData compute_ground_state_data(const RadialGrid& grid, const GroundStateOptions& opt = {});

// Lambda f = f + r f'
std::vector<double> lambda_of(const RadialProfile& f);

struct NullSpaceResiduals {
  double L_minus_Q;
  double L_plus_LambdaQ;      // L_+ Lambda Q + 2Q
  double L_minus_r2Q;         // L_- |x|^2 Q + 4 Lambda Q
  double L_plus_gradQ;        // m = 1
  double L_minus_xQ;          // L_- x Q + 2 grad Q, m = 1
  double max() const;
};

NullSpaceResiduals null_space_residuals(const GroundStateData& gs);

struct SectorMinimum {
  int harmonic;
  OperatorKind kind;
  std::size_t n_constraints;
  double constrained;     // Richardson-extrapolated
  double unconstrained;
  double constrained_fine;
  double constrained_coarse;
};

struct CoercivityReport {
  std::vector<SectorMinimum> sectors;
  double mu;  // min over constrained sector minima
};

CoercivityReport coercivity_spectrum(const GroundStateData& gs, int m_max);

// Petviashvili iteration u <- M^{3/2} (1 - Delta)^{-1} u^3 on a periodic
// n x n grid of half-width L, with M the stabilizing quotient.
struct GridGroundState {
  double peak = 0.0;  // value at the origin node
  double mass = 0.0;
  double grad_sq = 0.0;
  double quartic = 0.0;
  double stabilizer = 0.0;  // M at convergence, 1 for a fixed point
  double change = 0.0;      // last sup-norm update
  int iterations = 0;
};

GridGroundState spectral_renormalization(std::size_t n, double half_width, double tol = 1e-13, int max_iter = 1000);

}  // namespace nlslab

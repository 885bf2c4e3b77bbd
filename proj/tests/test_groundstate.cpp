#include <doctest.h>

#include <Eigen/Eigenvalues>
#include <Eigen/IterativeLinearSolvers>
#include <cmath>
#include <numbers>

#include "fixture.hpp"
#include "nlslab/error.hpp"

using namespace nlslab;
using testing::ground_state;
using testing::rel;

TEST_CASE("shooting agrees with spectral renormalization") {
  const auto& gs = ground_state();
  const GridGroundState pv = spectral_renormalization(256, 20.0);
  CHECK(pv.change < 1e-12);
  CHECK(std::abs(gs.Q0 - 2.2062) < 1e-4);
  CHECK(std::abs(gs.Q0 - pv.peak) < 1e-6);
  CHECK(rel(gs.mass, pv.mass) < 1e-6);
  CHECK(std::abs(gs.mass - 11.70) < 5e-3);
}

TEST_CASE("Pohozaev identities") {
  const auto& gs = ground_state();
  CHECK(rel(gs.grad_sq, gs.mass) < 1e-6);
  CHECK(rel(gs.quartic, 2.0 * gs.mass) < 1e-6);
}

TEST_CASE("zero tolerance cannot converge") {
  try {
    solve_ground_state(RadialGrid::with_spacing(30.0, 0.01), 0.0);
    FAIL("expected non-convergence");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::non_convergence);
  }
}

TEST_CASE("tail constant") {
  const auto& gs = ground_state();
  double direct = 0.0;
  for (double r : {10.0, 12.0, 14.0}) direct += gs.Q(r) * std::sqrt(r) * std::exp(r) / 3.0;
  CHECK(rel(gs.c_Q_leading, direct) < 1e-2);
  CHECK(std::abs(gs.c_Q - 3.52) < 0.01);

  const RadialGrid g = RadialGrid::with_spacing(30.0, 0.01);
  for (double c : {1.0, 2.0}) {
    std::vector<double> v(g.size());
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double r = std::max(g.node(i), 1e-3);
      v[i] = c * std::exp(-r) / std::sqrt(r);
    }
    CHECK(fit_asymptotic_cQ(RadialProfile(g, v), 8.0, 16.0) == doctest::Approx(c).epsilon(1e-10));
  }
}

TEST_CASE("exponential moment of Q^3") {
  const auto& gs = ground_state();
  const double iq = compute_IQ(gs.Q, 256);
  CHECK(iq > 0.0);
  CHECK(rel(compute_IQ(gs.Q, 512), iq) < 1e-8);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(rel(compute_IQ(gs.Q, 256, {s, s}), iq) < 1e-10);

  // Cartesian quadrature of Q^3 e^{x}
  const double h = 0.02;
  double cart = 0.0;
  for (double x = -30.0; x <= 30.0; x += h)
    for (double y = -30.0; y <= 30.0; y += h) {
      const double r = std::hypot(x, y);
      if (r >= 30.0) continue;
      const double q = gs.Q(r);
      cart += q * q * q * std::exp(x) * h * h;
    }
  CHECK(rel(cart, iq) < 1e-6);

  const RadialGrid g = RadialGrid::with_spacing(30.0, 0.01);
  CHECK(compute_IQ(RadialProfile(g, std::vector<double>(g.size(), 0.0))) == 0.0);
}

TEST_CASE("rho solve against an iterative oracle") {
  const auto& gs = ground_state();
  CHECK(gs.rho_dot_Q != 0.0);
  CHECK(gs.rho_residual < 1e-8);

  const RadialGrid& g = gs.Q.grid();
  SectorOperator op(gs.Q, 0, OperatorKind::plus, 4);
  Eigen::VectorXd f(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) f[static_cast<Eigen::Index>(i)] = 0.25 * g.node(i) * g.node(i) * gs.Q.at_node(i);
  f[f.size() - 1] = 0.0;
  Eigen::SparseMatrix<double> A = op.matrix();
  Eigen::BiCGSTAB<Eigen::SparseMatrix<double>, Eigen::IncompleteLUT<double>> it;
  it.preconditioner().setDroptol(1e-14);
  it.setTolerance(1e-15);
  it.setMaxIterations(20000);
  it.compute(A);
  const Eigen::VectorXd x = it.solve(f);
  double diff = 0.0, scale = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    diff = std::max(diff, std::abs(x[static_cast<Eigen::Index>(i)] - gs.rho.at_node(i)));
    scale = std::max(scale, std::abs(gs.rho.at_node(i)));
  }
  CHECK(diff / scale < 1e-8);
}

TEST_CASE("null-space relations") {
  const NullSpaceResiduals ns = null_space_residuals(ground_state());
  CHECK(ns.L_minus_Q < 1e-6);
  CHECK(ns.L_plus_LambdaQ < 1e-6);
  CHECK(ns.L_minus_r2Q < 1e-6);
  CHECK(ns.max() < 1e-5);
}

namespace {

// Dense tridiagonal eigensolve of W^{-1/2} S W^{-1/2}.
double dense_lowest(const SectorOperator& op) {
  const auto s = op.symmetric_form();
  const auto n = static_cast<Eigen::Index>(s.diag.size());
  Eigen::VectorXd d(n), e(n - 1);
  for (Eigen::Index i = 0; i < n; ++i) d[i] = s.diag[static_cast<std::size_t>(i)] / s.weight[static_cast<std::size_t>(i)];
  for (Eigen::Index i = 0; i + 1 < n; ++i)
    e[i] = s.off[static_cast<std::size_t>(i)] /
           std::sqrt(s.weight[static_cast<std::size_t>(i)] * s.weight[static_cast<std::size_t>(i + 1)]);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  return es.eigenvalues()[0];
}

}  // namespace

TEST_CASE("sector spectra") {
  const auto& gs = ground_state();
  const RadialProfile q = gs.Q.resampled(RadialGrid(30.0, 2001));

  SectorOperator m2(q, 2, OperatorKind::plus, 2);
  const double l2 = m2.lowest_eigenvalue();
  CHECK(l2 > 0.0);
  CHECK(std::abs(l2 - dense_lowest(m2)) < 1e-8);

  SectorOperator m0(q, 0, OperatorKind::plus, 2);
  const double l0 = m0.lowest_eigenvalue();
  CHECK(l0 < 0.0);
  CHECK(std::abs(l0 - dense_lowest(m0)) < 1e-8);

  const CoercivityReport rep = coercivity_spectrum(gs, 2);
  for (const auto& s : rep.sectors) {
    CHECK(s.constrained > 0.0);
    if (s.harmonic == 1 && s.kind == OperatorKind::plus) CHECK(std::abs(s.unconstrained) < 1e-4);
  }
  CHECK(rep.mu > 0.0);
}

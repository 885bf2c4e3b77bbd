#include "nlslab/ansatz.hpp"

#include <cmath>
#include <string>

#include "nlslab/error.hpp"

namespace nlslab {

namespace {

cplx expi(double t) { return {std::cos(t), std::sin(t)}; }

void check_clearance(const BubbleSet& bs, const Grid2D& g) {
  for (int k = 0; k < bs.count(); ++k) {
    const auto c = bs.center(k);
    if (std::abs(c[0] - g.cx) + kBubbleClearance > g.half_width ||
        std::abs(c[1] - g.cy) + kBubbleClearance > g.half_width)
      fail(ErrorKind::bubble_leaves_box, "bubble " + std::to_string(k + 1) + " is within " +
                                             std::to_string(kBubbleClearance) + " of the box edge");
  }
}

}  // namespace

double ModulationVector::norm() const {
  return std::sqrt(scale * scale + translate * translate + phase * phase + drift * drift + conformal * conformal);
}

ParamVelocity zero_set_velocity(const ParamState& p, const GeometryConstants& c) {
  ParamVelocity v;
  v.lambda_dot = -p.b * p.lambda;
  v.z_dot = 2.0 * p.beta + p.b * p.z;
  v.gamma_dot = 1.0 + p.beta * p.beta;
  v.beta_dot = -p.b * p.beta;
  v.b_dot = a_of_z(c, p.z) - p.b * p.b;
  return v;
}

ModulationVector modulation_vector(const ParamState& p, const ParamVelocity& v, const GeometryConstants& c) {
  require(p.lambda > 0.0, "lambda must be positive");
  const double ls = v.lambda_dot / p.lambda;
  ModulationVector m;
  m.scale = p.b + ls;
  m.translate = v.z_dot - 2.0 * p.beta + ls * p.z;
  m.phase = v.gamma_dot - 1.0 + p.beta * p.beta - ls * p.beta * p.z - p.beta * v.z_dot;
  m.drift = v.beta_dot - ls * p.beta + 0.5 * p.b * m.translate;
  m.conformal = v.b_dot + p.b * p.b - 2.0 * p.b * (p.b + ls) - a_of_z(c, p.z);
  return m;
}

BubbleSet::BubbleSet(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                     std::optional<double> a_override)
    : gs_(gs), consts_(c), p_(p) {
  require(p.lambda > 0.0, "lambda must be positive");
  require(p.z > 0.0, "z must be positive");
  a_ = a_override ? *a_override : a_of_z(c, p.z);
}

std::array<double, 2> BubbleSet::center(int k) const {
  const auto& e = consts_.directions[static_cast<std::size_t>(k)];
  return {p_.z * e[0], p_.z * e[1]};
}

double BubbleSet::phase(int k, double w1, double w2) const {
  const auto& e = consts_.directions[static_cast<std::size_t>(k)];
  return p_.beta * (e[0] * w1 + e[1] * w2) - 0.25 * p_.b * (w1 * w1 + w2 * w2);
}

double BubbleSet::profile(double r) const { return gs_.Q(r) + a_ * gs_.rho(r); }

RadialProfile::Sample BubbleSet::profile_sample(double r) const {
  const auto q = gs_.Q.sample(r);
  const auto p = gs_.rho.sample(r);
  return {q.value + a_ * p.value, q.slope + a_ * p.slope};
}

cplx BubbleSet::bubble(int k, double y1, double y2) const {
  const auto c = center(k);
  const double w1 = y1 - c[0], w2 = y2 - c[1];
  const double qa = profile(std::hypot(w1, w2));
  if (qa == 0.0) return {0.0, 0.0};
  return qa * expi(phase(k, w1, w2));
}

cplx BubbleSet::sum(double y1, double y2) const {
  cplx s(0.0, 0.0);
  for (int k = 0; k < count(); ++k) s += bubble(k, y1, y2);
  return s;
}

ComplexField2D build_bubble(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p, int k,
                            const Grid2D& grid, std::optional<double> a_override) {
  require(k >= 0 && k < c.K, "bubble index out of range");
  const BubbleSet bs(gs, c, p, a_override);
  check_clearance(bs, grid);
  return ComplexField2D::sample(grid, [&](double x, double y) { return bs.bubble(k, x, y); });
}

ComplexField2D build_ansatz(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                            const Grid2D& grid, std::optional<double> a_override) {
  const BubbleSet bs(gs, c, p, a_override);
  check_clearance(bs, grid);
  return ComplexField2D::sample(grid, [&](double x, double y) { return bs.sum(x, y); });
}

ComplexField2D to_physical(const ComplexField2D& v, const ParamState& p) {
  require(p.lambda > 0.0, "lambda must be positive");
  const Grid2D& g = v.grid();
  const Grid2D out_grid(g.n, p.lambda * g.half_width, p.lambda * g.cx, p.lambda * g.cy);
  ComplexField2D u(out_grid, std::vector<cplx>(v.data().begin(), v.data().end()));
  u *= expi(p.gamma) / p.lambda;
  return u;
}

ComplexField2D to_physical(const ComplexField2D& v, const ParamState& p, const Grid2D& target) {
  require(p.lambda > 0.0, "lambda must be positive");
  if (p.lambda < 4.0 * target.spacing())
    fail(ErrorKind::scale_under_resolved, "lambda " + std::to_string(p.lambda) + " is below four grid spacings");
  ComplexField2D u = resample_scaled(v, target, p.lambda);
  u *= expi(p.gamma) / p.lambda;
  return u;
}

ComplexField2D interaction_field(const BubbleSet& bs, int k, const Grid2D& frame_grid) {
  const auto ck = bs.center(k);
  return ComplexField2D::sample(frame_grid, [&](double w1, double w2) -> cplx {
    const double qa = bs.profile(std::hypot(w1, w2));
    if (qa == 0.0) return {0.0, 0.0};
    const double y1 = w1 + ck[0], y2 = w2 + ck[1];
    cplx s1(0.0, 0.0), s2(0.0, 0.0);
    for (int j = 0; j < bs.count(); ++j) {
      if (j == k) continue;
      const cplx pj = bs.bubble(j, y1, y2);
      s1 += pj;
      s2 += pj * pj;
    }
    const double g = bs.phase(k, w1, w2);
    const cplx gI = qa * qa * expi(-g) * s1;
    const cplx gII = qa * expi(-2.0 * g) * (s1 * s1 - s2);
    return 2.0 * gI + std::conj(gI) + gII;
  });
}

ErrorField error_field(const GroundStateData& gs, const GeometryConstants& c, const ParamState& p,
                       const ParamVelocity& v, const Grid2D& grid) {
  const BubbleSet bs(gs, c, p);
  check_clearance(bs, grid);
  const int K = bs.count();
  const double a = bs.a();
  const double ap = a_prime_of_z(c, p.z);
  const double ls = v.lambda_dot / p.lambda;
  const cplx I(0.0, 1.0);
  const std::size_t n = grid.n;
  Spectral sp(grid);

  // Direct route.
  ComplexField2D P(grid);
  ComplexField2D dsP(grid);
  for (int k = 0; k < K; ++k) {
    const auto ck = bs.center(k);
    const auto& e = c.directions[static_cast<std::size_t>(k)];
    ComplexField2D Pk = ComplexField2D::sample(grid, [&](double x, double y) { return bs.bubble(k, x, y); });
    const Gradient gk = sp.gradient(Pk);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double w1 = grid.x(i) - ck[0], w2 = grid.y(j) - ck[1];
        const double r2 = w1 * w1 + w2 * w2;
        const cplx pk = Pk(i, j);
        const cplx dz = -(e[0] * gk.dx(i, j) + e[1] * gk.dy(i, j)) +
                        expi(bs.phase(k, w1, w2)) * (ap * gs.rho(std::sqrt(r2)));
        const cplx db = -0.25 * I * r2 * pk;
        const cplx dbeta = I * (e[0] * w1 + e[1] * w2) * pk;
        dsP(i, j) += v.z_dot * dz + v.b_dot * db + v.beta_dot * dbeta;
      }
    P += Pk;
  }
  const ComplexField2D lapP = sp.laplacian(P);
  const Gradient gP = sp.gradient(P);
  ComplexField2D direct(grid);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) {
      const cplx u = P(i, j);
      const cplx lam = u + grid.x(i) * gP.dx(i, j) + grid.y(j) * gP.dy(i, j);
      direct(i, j) = I * dsP(i, j) + lapP(i, j) - u + std::norm(u) * u - I * ls * lam + (1.0 - v.gamma_dot) * u;
    }

  // Decomposed route.
  const ModulationVector m = modulation_vector(p, v, c);
  ComplexField2D dec(grid);
  double psi_proj = 0.0;
  for (int k = 0; k < K; ++k) {
    const auto ck = bs.center(k);
    const auto& e = c.directions[static_cast<std::size_t>(k)];
    const Grid2D frame(n, grid.half_width, grid.cx - ck[0], grid.cy - ck[1]);
    const ComplexField2D Gk = interaction_field(bs, k, frame);
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t i = 0; i < n; ++i) {
        const double w1 = frame.x(i), w2 = frame.y(j);
        const double r = std::hypot(w1, w2);
        const auto qa = bs.profile_sample(r);
        const double q = gs.Q(r), rho = gs.rho(r);
        const double ew = e[0] * w1 + e[1] * w2;
        const double e_grad = r > 0.0 ? qa.slope * ew / r : 0.0;
        const double lam = qa.value + r * qa.slope;
        const double psi_qa =
            qa.value * qa.value * qa.value - q * q * q - 3.0 * a * q * q * rho + 0.25 * a * a * r * r * rho;
        if (k == 0) psi_proj += (cplx(psi_qa, 0.0) * std::conj(I * qa.value)).real() * grid.cell_area();
        const cplx psi = m.scale * (-I * lam) + m.translate * (-I * e_grad) + m.phase * (-qa.value) +
                         m.drift * (-ew * qa.value) + m.conformal * 0.25 * r * r * qa.value +
                         I * v.z_dot * ap * rho + Gk(i, j) + psi_qa;
        dec(i, j) += expi(bs.phase(k, w1, w2)) * psi;
      }
  }

  // One unmodulated bubble at the first centre, same grid.
  const auto c0 = bs.center(0);
  const ComplexField2D q1 = ComplexField2D::sample(grid, [&](double x, double y) {
    return cplx(gs.Q(std::hypot(x - c0[0], y - c0[1])), 0.0);
  });
  ComplexField2D floor_field = sp.laplacian(q1);
  for (std::size_t idx = 0; idx < grid.size(); ++idx) {
    const double qv = q1.data()[idx].real();
    floor_field.data()[idx] += -qv + qv * qv * qv;
  }

  ErrorField out{direct, dec};
  out.direct_norm = std::sqrt(direct.l2_norm_sq());
  out.decomposed_norm = std::sqrt(dec.l2_norm_sq());
  out.route_gap = std::sqrt((direct - dec).l2_norm_sq());
  out.spectral_floor = std::sqrt(floor_field.l2_norm_sq());
  out.psi_projection = psi_proj;
  return out;
}

}  // namespace nlslab

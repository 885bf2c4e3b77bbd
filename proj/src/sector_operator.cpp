#include <cmath>
#include <numeric>

#include <Eigen/Dense>
#include <Eigen/SparseLU>

#include "nlslab/error.hpp"
#include "nlslab/groundstate.hpp"

namespace nlslab {

SectorOperator::SectorOperator(const RadialProfile& q, int harmonic, OperatorKind kind, int order)
    : grid_(q.grid()), m_(harmonic), kind_(kind), order_(order) {
  require(harmonic >= 0, "harmonic must be non-negative");
  require(order == 2 || order == 4, "operator order must be 2 or 4");
  const double c = kind == OperatorKind::plus ? 3.0 : 1.0;
  potential_.resize(grid_.size());
  for (std::size_t i = 0; i < grid_.size(); ++i) {
    const double v = q.at_node(i);
    potential_[i] = 1.0 - c * v * v;
    if (i > 0) potential_[i] += static_cast<double>(m_ * m_) / (grid_.node(i) * grid_.node(i));
  }
}

Eigen::SparseMatrix<double> SectorOperator::matrix() const {
  const std::size_t n = grid_.size();
  const double h = grid_.spacing();
  const double parity = (m_ % 2 == 0) ? 1.0 : -1.0;
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(5 * n);
  // Adds coefficient a for u_j into row i, folding ghosts onto real nodes.
  auto add = [&](std::size_t i, long j, double a) {
    const long last = static_cast<long>(n) - 1;
    if (j < 0) {
      j = -j;
      a *= parity;
    } else if (j > last) {
      j = 2 * last - j;
      a = -a;
    }
    if (j == last) return;
    if (m_ > 0 && j == 0) return;
    t.emplace_back(static_cast<int>(i), static_cast<int>(j), a);
  };

  for (std::size_t i = 0; i < n; ++i) {
    if (i == n - 1 || (m_ > 0 && i == 0)) {
      t.emplace_back(static_cast<int>(i), static_cast<int>(i), 1.0);
      continue;
    }
    const long k = static_cast<long>(i);
    if (i == 0) {
      // -u'' - u'/r -> -2u'' at the origin
      if (order_ == 4) {
        add(i, 0, 2.0 * 30.0 / (12.0 * h * h));
        add(i, 1, -2.0 * 32.0 / (12.0 * h * h));
        add(i, 2, 2.0 * 2.0 / (12.0 * h * h));
      } else {
        add(i, 0, 4.0 / (h * h));
        add(i, 1, -4.0 / (h * h));
      }
      add(i, 0, potential_[0]);
      continue;
    }
    const double r = grid_.node(i);
    if (order_ == 4) {
      const double d2[5] = {-1.0, 16.0, -30.0, 16.0, -1.0};
      const double d1[5] = {1.0, -8.0, 0.0, 8.0, -1.0};
      for (int s = 0; s < 5; ++s) {
        const double a = -d2[s] / (12.0 * h * h) - d1[s] / (12.0 * h * r);
        if (a != 0.0) add(i, k + s - 2, a);
      }
    } else {
      add(i, k - 1, -1.0 / (h * h) + 1.0 / (2.0 * h * r));
      add(i, k, 2.0 / (h * h));
      add(i, k + 1, -1.0 / (h * h) - 1.0 / (2.0 * h * r));
    }
    add(i, k, potential_[i]);
  }
  Eigen::SparseMatrix<double> A(static_cast<int>(n), static_cast<int>(n));
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

std::vector<double> SectorOperator::apply(std::span<const double> u) const {
  require(u.size() == grid_.size(), "vector length does not match grid");
  const Eigen::SparseMatrix<double> A = matrix();
  Eigen::Map<const Eigen::VectorXd> x(u.data(), static_cast<Eigen::Index>(u.size()));
  Eigen::VectorXd y = A * x;
  std::vector<double> out(y.data(), y.data() + y.size());
  out.back() = 0.0;
  if (m_ > 0) out.front() = 0.0;
  return out;
}

double SectorOperator::residual_norm(std::span<const double> u, std::span<const double> f,
                                     bool skip_wall_rows) const {
  require(f.size() == grid_.size(), "vector length does not match grid");
  std::vector<double> r = apply(u);
  const double h = grid_.spacing();
  double s = 0.0;
  const std::size_t last = skip_wall_rows ? last_active() - 2 : last_active();
  for (std::size_t i = first_active(); i <= last; ++i) {
    const double d = r[i] - f[i];
    const double w = i == 0 ? h * h / 8.0 : grid_.node(i) * h;
    s += w * d * d;
  }
  return std::sqrt(2.0 * M_PI * s);
}

std::vector<double> SectorOperator::solve(std::span<const double> f) const {
  require(f.size() == grid_.size(), "vector length does not match grid");
  Eigen::SparseMatrix<double> A = matrix();
  A.makeCompressed();
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) fail(ErrorKind::singular_system, "sector operator factorization failed");
  Eigen::VectorXd b(static_cast<Eigen::Index>(f.size()));
  for (std::size_t i = 0; i < f.size(); ++i) b[static_cast<Eigen::Index>(i)] = f[i];
  b[b.size() - 1] = 0.0;
  if (m_ > 0) b[0] = 0.0;
  Eigen::VectorXd x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite())
    fail(ErrorKind::singular_system, "sector operator solve failed");
  return {x.data(), x.data() + x.size()};
}

SectorOperator::SymmetricForm SectorOperator::symmetric_form() const {
  require(order_ == 2, "symmetric form exists for the second-order scheme only");
  const double h = grid_.spacing();
  SymmetricForm s;
  s.first = first_active();
  for (std::size_t i = s.first; i <= last_active(); ++i) {
    const double r = grid_.node(i);
    const double w = i == 0 ? h * h / 8.0 : r * h;
    const double r_lo = i == 0 ? 0.0 : r - 0.5 * h;
    const double r_hi = r + 0.5 * h;
    s.weight.push_back(w);
    s.diag.push_back((r_lo + r_hi) / h + w * potential_[i]);
    if (i < last_active()) s.off.push_back(-r_hi / h);
  }
  return s;
}

namespace {

// Solves (D + offdiag) x = b for a symmetric positive definite tridiagonal.
void thomas(const std::vector<double>& d, const std::vector<double>& e, std::vector<double>& x) {
  const std::size_t n = d.size();
  std::vector<double> c(n), dd(n);
  dd[0] = d[0];
  for (std::size_t i = 1; i < n; ++i) {
    c[i] = e[i - 1] / dd[i - 1];
    dd[i] = d[i] - c[i] * e[i - 1];
    x[i] -= c[i] * x[i - 1];
  }
  x[n - 1] /= dd[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = (x[i] - e[i] * x[i + 1]) / dd[i];
}

}  // namespace

double SectorOperator::lowest_eigenvalue(const std::vector<std::vector<double>>& constraints) const {
  const SymmetricForm s = symmetric_form();
  const std::size_t n = s.diag.size();

  // The kinetic part is non-negative, so min(potential) bounds the spectrum below.
  double vmin = 0.0;
  for (std::size_t i = s.first; i <= last_active(); ++i) vmin = std::min(vmin, potential_[i]);
  const double shift = vmin - 1.0;
  std::vector<double> tdiag(n);
  for (std::size_t i = 0; i < n; ++i) tdiag[i] = s.diag[i] - shift * s.weight[i];

  const std::size_t k = constraints.size();
  std::vector<std::vector<double>> D(k), Y(k);
  Eigen::MatrixXd G(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k));
  for (std::size_t a = 0; a < k; ++a) {
    require(constraints[a].size() == grid_.size(), "constraint length does not match grid");
    D[a].resize(n);
    for (std::size_t i = 0; i < n; ++i) D[a][i] = s.weight[i] * constraints[a][s.first + i];
    Y[a] = D[a];
    thomas(tdiag, s.off, Y[a]);
  }
  for (std::size_t a = 0; a < k; ++a)
    for (std::size_t b = 0; b < k; ++b)
      G(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b)) =
          std::inner_product(D[a].begin(), D[a].end(), Y[b].begin(), 0.0);
  Eigen::FullPivLU<Eigen::MatrixXd> Gf;
  if (k > 0) Gf.compute(G);
  if (k > 0 && !Gf.isInvertible()) fail(ErrorKind::singular_system, "dependent constraints");

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double r = grid_.node(s.first + i);
    x[i] = std::exp(-0.5 * r) * (1.0 + 0.1 * std::cos(3.0 * r));
  }
  auto rayleigh = [&](const std::vector<double>& v) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double sv = s.diag[i] * v[i];
      if (i > 0) sv += s.off[i - 1] * v[i - 1];
      if (i + 1 < n) sv += s.off[i] * v[i + 1];
      num += v[i] * sv;
      den += s.weight[i] * v[i] * v[i];
    }
    return num / den;
  };

  double lambda = std::numeric_limits<double>::infinity();
  constexpr int kMaxIter = 20000;
  for (int it = 0; it < kMaxIter; ++it) {
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) v[i] = s.weight[i] * x[i];
    thomas(tdiag, s.off, v);
    if (k > 0) {
      Eigen::VectorXd rhs(static_cast<Eigen::Index>(k));
      for (std::size_t a = 0; a < k; ++a)
        rhs[static_cast<Eigen::Index>(a)] = std::inner_product(D[a].begin(), D[a].end(), v.begin(), 0.0);
      const Eigen::VectorXd mu = Gf.solve(rhs);
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t i = 0; i < n; ++i) v[i] -= mu[static_cast<Eigen::Index>(a)] * Y[a][i];
    }
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) norm += s.weight[i] * v[i] * v[i];
    norm = std::sqrt(norm);
    if (!(norm > 0.0) || !std::isfinite(norm)) fail(ErrorKind::non_convergence, "inverse iteration collapsed");
    for (std::size_t i = 0; i < n; ++i) x[i] = v[i] / norm;
    const double next = rayleigh(x);
    if (std::abs(next - lambda) <= 1e-14 * std::max(1.0, std::abs(next))) return next;
    lambda = next;
  }
  fail(ErrorKind::non_convergence, "inverse iteration did not settle");
}

}  // namespace nlslab

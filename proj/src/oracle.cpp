#include "fsl/oracle.hpp"

#include <cmath>
#include <sstream>

#include "fsl/model.hpp"

namespace fsl::oracle {

namespace {

// Tridiagonal rows of the shifted operator T - sigma.
struct Tridiag {
  std::vector<cdouble> lower, diag, upper;
};

Tridiag shifted(const FdMatrix& m, cdouble sigma) {
  Tridiag t;
  const int n = m.dim;
  t.lower.assign(n, 0.0);
  t.diag.assign(n, 0.0);
  t.upper.assign(n, 0.0);
  const double inv_h2 = 1.0 / (m.h * m.h);
  for (int i = 0; i < n; ++i) {
    t.diag[i] = 2.0 * inv_h2 - sigma;
    if (i > 0) t.lower[i] = -inv_h2;
    if (i < n - 1) t.upper[i] = -inv_h2;
  }
  // Ghost-point elimination doubles the single neighbor of a Neumann row.
  if (!m.off.empty()) {
    if (m.off[0] != 0.0) t.upper[0] = m.off[0];
    if (m.off[1] != 0.0) t.lower[n - 1] = m.off[1];
  }
  return t;
}

// Thomas algorithm; the complex shift keeps the pivots away from zero.
std::vector<cdouble> solve_tridiag(const Tridiag& t, std::vector<cdouble> rhs) {
  const int n = static_cast<int>(rhs.size());
  std::vector<cdouble> c(n, 0.0);
  cdouble pivot = t.diag[0];
  if (std::abs(pivot) < 1e-300) throw numerical_error("oracle: zero pivot in tridiagonal solve");
  c[0] = t.upper[0] / pivot;
  rhs[0] /= pivot;
  for (int i = 1; i < n; ++i) {
    pivot = t.diag[i] - t.lower[i] * c[i - 1];
    if (std::abs(pivot) < 1e-300) throw numerical_error("oracle: zero pivot in tridiagonal solve");
    c[i] = t.upper[i] / pivot;
    rhs[i] = (rhs[i] - t.lower[i] * rhs[i - 1]) / pivot;
  }
  for (int i = n - 2; i >= 0; --i) rhs[i] -= c[i] * rhs[i + 1];
  return rhs;
}

}  // namespace

Eigen::MatrixXcd FdMatrix::dense() const {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(dim, dim);
  const double inv_h2 = 1.0 / (h * h);
  for (int i = 0; i < dim; ++i) {
    a(i, i) = 2.0 * inv_h2;
    if (i > 0) a(i, i - 1) = -inv_h2;
    if (i < dim - 1) a(i, i + 1) = -inv_h2;
  }
  if (!off.empty()) {
    if (off[0] != 0.0) a(0, 1) = off[0];
    if (off[1] != 0.0) a(dim - 1, dim - 2) = off[1];
  }
  if (frozen_index >= 0) {
    for (int i = 0; i < dim; ++i) a(i, frozen_index) += frozen_col[i];
  }
  return a;
}

FdMatrix fd_matrix(const Potential& q, const BvpConfig& config, int M) {
  if (M < 16) throw validation_error("oracle: M must be >= 16");
  if (q.grid_size() != M)
    throw validation_error("oracle: potential grid does not match the requested M");
  const double h = pi / M;
  const double a_idx_real = config.a / h;
  const long a_idx = std::lround(a_idx_real);
  if (std::abs(a_idx_real - a_idx) > 1e-9)
    throw validation_error("oracle: the frozen point a is not a node of the oracle grid");

  FdMatrix m;
  m.h = h;
  m.dim = M - 1 + config.alpha + config.beta;
  const int first_grid = config.alpha == 1 ? 0 : 1;  // grid index of unknown 0
  const double inv_h2 = 1.0 / (h * h);
  m.off = {config.alpha == 1 ? -2.0 * inv_h2 : 0.0,
           config.beta == 1 ? -2.0 * inv_h2 : 0.0};

  // Rank-one frozen-argument term q(x_i) * y(a); it vanishes when a
  // carries a Dirichlet condition.
  const long unknown_of_a = a_idx - first_grid;
  if (unknown_of_a >= 0 && unknown_of_a < m.dim) {
    m.frozen_index = static_cast<int>(unknown_of_a);
    m.frozen_col.resize(m.dim);
    for (int i = 0; i < m.dim; ++i) m.frozen_col[i] = q.samples[first_grid + i];
  }
  return m;
}

std::vector<cdouble> fd_eigenvalues_near(const FdMatrix& matrix,
                                         const std::vector<cdouble>& targets,
                                         double tol) {
  std::vector<cdouble> out;
  out.reserve(targets.size());
  const int n = matrix.dim;
  const double resolvable = 0.3 / (matrix.h * matrix.h);
  for (const cdouble& target : targets) {
    if (std::abs(target) > resolvable) {
      std::ostringstream msg;
      msg << "oracle: target " << target.real()
          << " is outside the resolvable range of the grid";
      throw validation_error(msg.str());
    }
  }

  // Deterministic start vector with no accidental symmetry.
  std::vector<cdouble> start(n);
  for (int i = 0; i < n; ++i) start[i] = 1.0 + 0.3 * std::sin(2.7 * (i + 1));

  auto apply = [&](const std::vector<cdouble>& y) {
    std::vector<cdouble> r(n, 0.0);
    const double inv_h2 = 1.0 / (matrix.h * matrix.h);
    for (int i = 0; i < n; ++i) {
      cdouble v = 2.0 * inv_h2 * y[i];
      if (i > 0) v += (i == n - 1 && matrix.off[1] != 0.0 ? matrix.off[1] : -inv_h2) * y[i - 1];
      if (i < n - 1) v += (i == 0 && matrix.off[0] != 0.0 ? matrix.off[0] : -inv_h2) * y[i + 1];
      r[i] = v;
    }
    if (matrix.frozen_index >= 0) {
      const cdouble ya = y[matrix.frozen_index];
      for (int i = 0; i < n; ++i) r[i] += matrix.frozen_col[i] * ya;
    }
    return r;
  };

  for (size_t t = 0; t < targets.size(); ++t) {
    const cdouble target = targets[t];
    const double scale = std::max(1.0, std::sqrt(std::abs(target)));
    const cdouble sigma = target + cdouble{1e-3, 1e-3} * scale;
    const Tridiag shifted_t = shifted(matrix, sigma);

    // Sherman-Morrison pieces for the rank-one term.
    std::vector<cdouble> v;
    cdouble denom = 1.0;
    if (matrix.frozen_index >= 0) {
      v = solve_tridiag(shifted_t, matrix.frozen_col);
      denom = 1.0 + v[matrix.frozen_index];
      if (std::abs(denom) < 1e-14)
        throw numerical_error("oracle: singular Sherman-Morrison denominator");
    }
    auto solve = [&](const std::vector<cdouble>& rhs) {
      std::vector<cdouble> u = solve_tridiag(shifted_t, rhs);
      if (matrix.frozen_index >= 0) {
        const cdouble factor = u[matrix.frozen_index] / denom;
        for (int i = 0; i < n; ++i) u[i] -= factor * v[i];
      }
      return u;
    };

    std::vector<cdouble> y = start;
    cdouble theta = target;
    bool converged = false;
    // rounding floor of the residual: applying A loses eps * ||A||
    double norm_bound = 4.0 / (matrix.h * matrix.h);
    for (const cdouble& c : matrix.frozen_col) norm_bound += std::abs(c) / matrix.dim;
    const double floor = 200.0 * 2.22e-16 * norm_bound;
    for (int it = 0; it < 200; ++it) {
      std::vector<cdouble> w = solve(y);
      double norm = 0.0;
      for (const cdouble& c : w) norm += std::norm(c);
      norm = std::sqrt(norm);
      if (!(norm > 0.0)) break;
      for (cdouble& c : w) c /= norm;
      y = std::move(w);
      const std::vector<cdouble> ay = apply(y);
      cdouble num = 0.0;
      for (int i = 0; i < n; ++i) num += std::conj(y[i]) * ay[i];
      theta = num;  // y has unit norm
      double resid = 0.0;
      for (int i = 0; i < n; ++i) resid += std::norm(ay[i] - theta * y[i]);
      resid = std::sqrt(resid);
      if (resid <= std::max(tol * std::max(1.0, std::abs(theta)), floor)) {
        converged = true;
        break;
      }
    }
    if (!converged) {
      std::ostringstream msg;
      msg << "oracle: inverse iteration failed for target " << target.real();
      throw convergence_error(static_cast<int>(t), theta, msg.str());
    }
    out.push_back(theta);
  }
  return out;
}

}  // namespace fsl::oracle

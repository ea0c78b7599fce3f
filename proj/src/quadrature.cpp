#include "fsl/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "fsl/detail/cells.hpp"
#include "fsl/model.hpp"

namespace fsl {

namespace detail {

std::vector<Cell> clip_cells(std::span<const cdouble> samples, double u, double v) {
  std::vector<Cell> cells;
  const int M = static_cast<int>(samples.size()) - 1;
  const double h = pi / M;
  u = std::max(u, 0.0);
  v = std::min(v, pi);
  if (!(v - u > h * 1e-12)) return cells;

  int j0 = std::clamp(static_cast<int>(std::floor(u / h)), 0, M - 1);
  int j1 = std::clamp(static_cast<int>(std::floor((v - h * 1e-12) / h)), 0, M - 1);
  cells.reserve(j1 - j0 + 1);
  for (int j = j0; j <= j1; ++j) {
    const double x0 = j * h, x1 = (j + 1) * h;
    const double a = std::max(u, x0), b = std::min(v, x1);
    if (!(b - a > h * 1e-12)) continue;
    const cdouble slope = (samples[j + 1] - samples[j]) / h;
    cells.push_back({a, b - a, samples[j] + slope * (a - x0), samples[j] + slope * (b - x0)});
  }
  return cells;
}

cdouble moment(std::span<const Cell> cells, int m, bool reflected) {
  cdouble sum = 0.0;
  for (const Cell& c : cells) {
    double t0 = c.t0, t1 = c.t0 + c.h;
    cdouble f0 = c.f0, f1 = c.f1;
    if (reflected) {  // substitute u = pi - t; endpoints swap
      const double u0 = pi - t1, u1 = pi - t0;
      t0 = u0;
      t1 = u1;
      std::swap(f0, f1);
    }
    const cdouble d = (f1 - f0) / (t1 - t0);
    const double p1 = (std::pow(t1, m + 1) - std::pow(t0, m + 1)) / (m + 1);
    const double p2 = (std::pow(t1, m + 2) - std::pow(t0, m + 2)) / (m + 2);
    sum += (f0 - d * t0) * p1 + d * p2;
  }
  return sum;
}

}  // namespace detail

cdouble oscillatory_integral(std::span<const cdouble> samples, double u, double v,
                             cdouble z, TrigKind kind, bool reflected) {
  const auto cells = detail::clip_cells(samples, u, v);
  if (cells.empty()) return 0.0;
  const auto trig = detail::trig_integrals(cells, z, false);
  if (!reflected) return kind == TrigKind::sine ? trig.sin_i : trig.cos_i;
  // trig(z(pi - t)) expanded by the angle-subtraction identities
  const cdouble sz = std::sin(z * pi), cz = std::cos(z * pi);
  if (kind == TrigKind::sine) return sz * trig.cos_i - cz * trig.sin_i;
  return cz * trig.cos_i + sz * trig.sin_i;
}

cdouble basis_coefficient(const Potential& q, const BvpConfig& config, int n) {
  const TrigKind kind = config.alpha == 0 ? TrigKind::sine : TrigKind::cosine;
  return oscillatory_integral(q.samples, 0.0, pi, config.node(n), kind, false);
}

std::map<int, cdouble> coefficients_by_quadrature(const Potential& q,
                                                  const BvpConfig& config, int N) {
  std::map<int, cdouble> out;
  for (int n = 1; n <= N; ++n) out[n] = basis_coefficient(q, config, n);
  return out;
}

Potential synthesize(const std::map<int, cdouble>& coefficients,
                     const BvpConfig& config, int M) {
  if (M < 2) throw validation_error("synthesize: M must be >= 2");
  Potential q;
  q.samples.assign(M + 1, cdouble{0.0, 0.0});
  const double h = pi / M;
  std::vector<std::pair<int, cdouble>> modes;
  modes.reserve(coefficients.size());
  for (const auto& [n, c] : coefficients) {
    if (n < 1) throw validation_error("synthesize: mode index must be >= 1");
    // Orthogonal-basis weights: every mode carries 2/pi except the
    // constant mode of the alpha=beta=1 case, which carries 1/pi.
    const bool constant_mode = (config.alpha == 1 && config.beta == 1 && n == 1);
    const cdouble weight = c * (constant_mode ? 1.0 / pi : 2.0 / pi);
    const double zn = config.node(n);
    for (int i = 0; i <= M; ++i) q.samples[i] += weight * phi(config.alpha, zn * (i * h));
    modes.emplace_back(n, c);
  }
  q.modes = std::move(modes);
  return q;
}

double l2_norm(const Potential& q) {
  const int M = q.grid_size();
  const double h = pi / M;
  double sum = 0.5 * (std::norm(q.samples.front()) + std::norm(q.samples.back()));
  for (int i = 1; i < M; ++i) sum += std::norm(q.samples[i]);
  return std::sqrt(h * sum);
}

double l2_distance(const Potential& a, const Potential& b) {
  if (a.grid_size() != b.grid_size())
    throw validation_error("l2_distance: potentials live on different grids");
  const int M = a.grid_size();
  const double h = pi / M;
  auto d2 = [&](int i) { return std::norm(a.samples[i] - b.samples[i]); };
  double sum = 0.5 * (d2(0) + d2(M));
  for (int i = 1; i < M; ++i) sum += d2(i);
  return std::sqrt(h * sum);
}

}  // namespace fsl

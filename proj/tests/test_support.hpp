#pragma once

// Test-only oracles, independent of the library's quadrature and
// characteristic-function code paths: composite Gauss-Legendre
// integration of callables and a direct evaluation of the closed-form
// characteristic function.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include "fsl/types.hpp"

namespace fsl::testing {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Nodes and weights by Newton iteration on the Legendre recurrence.
inline GaussRule gauss_rule(int order) {
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(pi * (i + 0.75) / (order + 0.5));
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      const double dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) {
        rule.nodes[i] = x;
        rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
        break;
      }
    }
  }
  return rule;
}

// Composite Gauss-Legendre over [a, b] with the given panel count.
inline cdouble integrate(const std::function<cdouble(double)>& f, double a, double b,
                         int panels = 64, int order = 20) {
  if (!(b > a)) return 0.0;
  static thread_local int cached_order = -1;
  static thread_local GaussRule cached;
  if (order != cached_order) {
    cached = gauss_rule(order);
    cached_order = order;
  }
  cdouble sum = 0.0;
  const double h = (b - a) / panels;
  for (int p = 0; p < panels; ++p) {
    const double mid = a + (p + 0.5) * h;
    cdouble local = 0.0;
    for (int i = 0; i < order; ++i) {
      local += cached.weights[i] * f(mid + 0.5 * h * cached.nodes[i]);
    }
    sum += 0.5 * h * local;
  }
  return sum;
}

// Piecewise-linear interpolant of grid samples on [0, pi].
inline cdouble pl_eval(const std::vector<cdouble>& samples, double x) {
  const int M = static_cast<int>(samples.size()) - 1;
  const double h = pi / M;
  int j = std::min(static_cast<int>(x / h), M - 1);
  if (j < 0) j = 0;
  const double t = (x - j * h) / h;
  return samples[j] * (1.0 - t) + samples[j + 1] * t;
}

// The characteristic function evaluated verbatim from its closed form,
// with plain std trig and high-order quadrature of a callable potential.
// Valid away from rho = 0.
inline cdouble charfn_direct(int alpha, int beta, double a,
                             const std::function<cdouble(double)>& q, cdouble lambda,
                             int panels = 200) {
  const cdouble rho = std::sqrt(lambda);
  auto phi = [](int idx, cdouble x) { return idx == 0 ? std::sin(x) : std::cos(x); };
  const double s0 = (alpha * (1 - beta)) % 2 ? -1.0 : 1.0;
  const double sq = alpha % 2 ? -1.0 : 1.0;
  const cdouble lead = s0 * phi(std::abs(beta - alpha), pi * rho) *
                       std::pow(rho, cdouble(alpha + beta - 1.0));
  const cdouble int_left =
      integrate([&](double t) { return q(t) * phi(alpha, t * rho); }, 0.0, a, panels);
  const cdouble int_right = integrate(
      [&](double t) { return q(t) * phi(beta, (pi - t) * rho); }, a, pi, panels);
  const cdouble tail = sq * (phi(beta, (pi - a) * rho) * int_left +
                             phi(alpha, a * rho) * int_right) *
                       std::pow(rho, cdouble(alpha + beta - 2.0));
  return lead + tail;
}

inline bool close(cdouble a, cdouble b, double tol) { return std::abs(a - b) <= tol; }

inline double rel_err(cdouble got, cdouble want) {
  const double scale = std::max(std::abs(want), 1e-300);
  return std::abs(got - want) / scale;
}

}  // namespace fsl::testing

#pragma once

#include <map>
#include <span>

#include "fsl/types.hpp"

namespace fsl {

enum class TrigKind { sine, cosine };

/// Integral of f(t)*trig(z t) (or f(t)*trig(z (pi - t)) when reflected)
/// over [u, v], where f is the piecewise-linear interpolant of the grid
/// samples.  The per-cell weights integrate linear*trig in closed form,
/// so the rule is exact for piecewise-linear f at every frequency,
/// including z far beyond the grid Nyquist rate.
cdouble oscillatory_integral(std::span<const cdouble> samples, double u, double v,
                             cdouble z, TrigKind kind, bool reflected = false);

/// Basis coefficient of the potential against phi_alpha(z_n t):
/// integral of q(t) phi_alpha(z_n t) over [0, pi].
cdouble basis_coefficient(const Potential& q, const BvpConfig& config, int n);

/// Coefficients for n = 1..N by quadrature.
std::map<int, cdouble> coefficients_by_quadrature(const Potential& q,
                                                  const BvpConfig& config, int N);

/// q(x) = (2/pi) sum c_n phi_alpha(z_n x), except that for alpha=beta=1
/// the constant n=1 mode enters with weight 1/pi.
Potential synthesize(const std::map<int, cdouble>& coefficients,
                     const BvpConfig& config, int M);

/// L2(0, pi) norm from the grid samples by the trapezoid rule on |q|^2.
double l2_norm(const Potential& q);

/// L2 norm of the difference of two potentials on a shared grid.
double l2_distance(const Potential& a, const Potential& b);

}  // namespace fsl

#pragma once

#include <map>

#include "fsl/types.hpp"

namespace fsl {

/// Basis coefficients on the informative indices from the spectrum data:
/// xi_n = (-1)^{n+1-alpha} z_n^{2-alpha-beta} Delta(z_n^2) / phi_alpha(z_n a),
/// with Delta(z_n^2) from the spectrum product.  The 0^0 power for
/// alpha=beta=1, n=1 is 1.
std::map<int, cdouble> coefficients_from_spectrum(const SpectralInput& input,
                                                  const BvpConfig& config);

/// Solves the inverse problem: merges the recovered coefficients with the
/// supplied degenerate ones and synthesizes the potential on an M-grid.
/// Truncation to n <= N is the only information loss.
Potential recover_potential(const SpectralInput& input, const BvpConfig& config, int M);

}  // namespace fsl

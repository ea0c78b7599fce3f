#pragma once

#include <map>

#include "fsl/types.hpp"

namespace fsl {

/// phi_alpha: sin for alpha = 0, cos for alpha = 1.
double phi(int alpha, double x);
cdouble phi(int alpha, cdouble x);

/// Exact partition of {1..N}.  For rational a = p*pi/q membership is the
/// integer congruence p*(2n - alpha - beta) == 0 (alpha = 0) resp.
/// == q (alpha = 1) modulo 2q; a real-literal a yields an empty
/// degenerate set.  phi values for rational a are evaluated from the
/// congruence-reduced argument, so they are exactly zero on the
/// degenerate set.
IndexClassification classify_indices(const BvpConfig& config, int N);

/// l2 norm of { values_n / phi_alpha(a z_n) } over the supplied keys.
/// Every key must be informative; a degenerate key is a division by an
/// exact zero and is rejected.
double weighted_norm(const std::map<int, cdouble>& values,
                     const IndexClassification& classification);

/// Plain l2 norm of the values.
double sequence_norm(const std::map<int, cdouble>& values);

/// Checks the key sets against classify_indices and throws
/// validation_error on any mismatch.
void validate_input(const SpectralInput& input, const BvpConfig& config);

/// Assembles a SpectralInput from a full spectrum plus coefficients on
/// the degenerate set.
SpectralInput make_spectral_input(const Spectrum& spectrum,
                                  const std::map<int, cdouble>& xi_degenerate,
                                  const BvpConfig& config);

}  // namespace fsl

#include "fsl/inverse.hpp"

#include <cmath>

#include "fsl/charfn.hpp"
#include "fsl/model.hpp"
#include "fsl/quadrature.hpp"

namespace fsl {

namespace {

Spectrum assemble_spectrum(const SpectralInput& input, const BvpConfig& config,
                           const IndexClassification& cls) {
  Spectrum spectrum;
  spectrum.rho.resize(input.N);
  for (int n = 1; n <= input.N; ++n) {
    if (cls.is_degenerate(n)) {
      // The degenerate part of the spectrum is potential-independent.
      spectrum.rho[n - 1] = config.node(n);
    } else {
      spectrum.rho[n - 1] = principal_sqrt_branch(input.rho.at(n));
    }
  }
  return spectrum;
}

}  // namespace

std::map<int, cdouble> coefficients_from_spectrum(const SpectralInput& input,
                                                  const BvpConfig& config) {
  validate_input(input, config);
  const auto cls = classify_indices(config, input.N);
  const SpectrumCharFn charfn(config, assemble_spectrum(input, config, cls));

  std::map<int, cdouble> xi;
  for (int n : cls.informative) {
    const double sign = ((n + 1 - config.alpha) % 2 == 0) ? 1.0 : -1.0;
    const int exponent = 2 - config.alpha - config.beta;
    const double zn = config.node(n);
    const double power = exponent == 0 ? 1.0 : std::pow(zn, exponent);
    xi[n] = sign * power * charfn.at_node(n) / cls.phi_n(n);
  }
  return xi;
}

Potential recover_potential(const SpectralInput& input, const BvpConfig& config, int M) {
  std::map<int, cdouble> coefficients = coefficients_from_spectrum(input, config);
  for (const auto& [n, xi] : input.xi) coefficients[n] = xi;
  return synthesize(coefficients, config, M);
}

}  // namespace fsl

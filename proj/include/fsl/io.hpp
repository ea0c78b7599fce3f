#pragma once

#include <filesystem>
#include <string>

#include "fsl/forward.hpp"
#include "fsl/stability.hpp"
#include "fsl/types.hpp"

namespace fsl::io {

/// Round-trippable decimal formatting (17 significant digits).
std::string format_double(double v);

/// Config file: JSON with keys
///   a:     {"pi_rational": [p, q]} or {"real": x}
///   alpha, beta, N, M  (N, M optional; defaults 200 / 2000)
BvpConfig load_config(const std::filesystem::path& path);

/// Potential CSV: header "x,re,im", one row per grid node.
Potential read_potential_csv(const std::filesystem::path& path, const BvpConfig& config);
void write_potential_csv(const std::filesystem::path& path, const Potential& q);

/// Spectrum CSV: header
/// "n,re_rho,im_rho,re_lambda,im_lambda,residual,in_omega".
void write_spectrum_csv(const std::filesystem::path& path, const Spectrum& spectrum,
                        const BvpConfig& config, const SolveDiagnostics* diagnostics);
Spectrum read_spectrum_csv(const std::filesystem::path& path);

/// Spectral-input CSV: header "n,kind,re,im" with kind in {rho, lambda, xi}.
SpectralInput read_spectral_input_csv(const std::filesystem::path& path,
                                      const BvpConfig& config);
void write_spectral_input_csv(const std::filesystem::path& path,
                              const SpectralInput& input);

/// Stability outputs: per-trial CSV "seed,Xi,xi_dist,q_dist,ratio" and a
/// JSON summary (r, trials, rejected, empirical constants, per-index phi).
void write_stability_csv(const std::filesystem::path& path, const StabilityReport& report);
void write_stability_summary_json(const std::filesystem::path& path,
                                  const StabilityReport& report);

}  // namespace fsl::io

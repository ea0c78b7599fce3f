#pragma once

#include <cstdint>
#include <vector>

#include "fsl/types.hpp"

namespace fsl {

/// l2 norm of {xi_n - xi~_n} over the degenerate indices.  Both inputs
/// must carry the same index partition.
double coefficient_distance(const SpectralInput& a, const SpectralInput& b);

/// Weighted distance between two spectra read from inverse-problem data:
/// ||{n(rho_n - rho~_n)}||_a over the informative indices.
double spectral_distance(const SpectralInput& a, const SpectralInput& b,
                         const BvpConfig& config);

/// ||{lambda_n - lambda~_n}||_a over the informative indices.  Only the
/// alpha = beta = 0 case is admitted.
double lambda_distance(const SpectralInput& a, const SpectralInput& b,
                       const BvpConfig& config);

/// Seeded perturbation of inverse-problem data.  Each rho_n moves by at
/// most magnitude*|phi_alpha(a z_n)|/n (so the weighted spectral distance
/// is at most magnitude*sqrt(N)) and each xi_n by at most magnitude/n.
/// Counter-based randomness: deterministic in (seed, n), independent of
/// evaluation order and of magnitude.
SpectralInput perturb(const SpectralInput& input, const BvpConfig& config,
                      double magnitude, std::uint64_t seed);

struct TrialRow {
  std::uint64_t seed = 0;
  double spectral_dist = 0.0;  // Xi
  double xi_dist = 0.0;        // ||{xi_n - xi~_n}||, degenerate indices
  double q_dist = 0.0;         // L2 distance of the recovered potentials
  double ratio = 0.0;          // max(0, q_dist - sqrt(2/pi) xi_dist) / Xi
  double lambda_dist = 0.0;    // Theorem-2 metric (alpha=beta=0 only, else 0)
  double ratio_lambda = 0.0;   // analogous ratio against lambda_dist
  double slack = 0.0;          // C*Xi + sqrt(2/pi)*xi_dist - q_dist, filled at summary
};

struct StabilityReport {
  double r = 0.0;
  double magnitude = 0.0;
  int trials = 0;
  int rejected = 0;
  double c_empirical = 0.0;        // max ratio over accepted trials
  double c_lambda_empirical = 0.0; // max ratio_lambda (alpha=beta=0)
  std::vector<TrialRow> rows;
  std::vector<double> per_index_phi;  // |phi_alpha(a z_n)|, n = 1..N
};

/// One stability trial: recovers both potentials, computes the distances
/// and the ratio sample.  Throws validation_error when either input
/// violates the ball condition for r.
TrialRow theorem1_trial(const SpectralInput& input, const SpectralInput& perturbed,
                        const BvpConfig& config, double r);

/// Randomized empirical estimate of the stability constant: seeded trials
/// over random synthesized base potentials inside the r-ball and random
/// perturbations; the estimate is the max ratio.  Trials violating the
/// ball condition are rejected and counted.
StabilityReport estimate_stability_constant(const BvpConfig& config, double r,
                                            int trials, std::uint64_t seed,
                                            double magnitude, int threads = 1);

/// Deterministic per-trial potential used by the estimator (exposed for
/// tests and for the scale experiment).
Potential random_base_potential(const BvpConfig& config, std::uint64_t seed,
                                std::uint64_t trial);

}  // namespace fsl

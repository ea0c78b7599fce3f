#include "fsl/stability.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

#include "fsl/detail/counter_rng.hpp"
#include "fsl/detail/parallel.hpp"
#include "fsl/forward.hpp"
#include "fsl/inverse.hpp"
#include "fsl/model.hpp"
#include "fsl/quadrature.hpp"

namespace fsl {

namespace {

constexpr std::uint64_t kStreamRho = 1;
constexpr std::uint64_t kStreamXi = 2;
constexpr std::uint64_t kStreamBase = 3;
constexpr std::uint64_t kStreamTrial = 4;

cdouble unit_disk(std::uint64_t seed, std::uint64_t stream, std::uint64_t index) {
  const double radius = std::sqrt(detail::uniform01(seed, stream, 2 * index));
  const double angle = 2.0 * pi * detail::uniform01(seed, stream, 2 * index + 1);
  return {radius * std::cos(angle), radius * std::sin(angle)};
}

void require_same_partition(const SpectralInput& a, const SpectralInput& b) {
  auto same_keys = [](const std::map<int, cdouble>& x, const std::map<int, cdouble>& y) {
    if (x.size() != y.size()) return false;
    auto it = y.begin();
    for (const auto& [k, v] : x) {
      if (it->first != k) return false;
      ++it;
    }
    return true;
  };
  if (a.N != b.N || !same_keys(a.rho, b.rho) || !same_keys(a.xi, b.xi))
    throw validation_error("stability: inputs carry different index partitions");
}

}  // namespace

double coefficient_distance(const SpectralInput& a, const SpectralInput& b) {
  require_same_partition(a, b);
  double sum = 0.0;
  for (const auto& [n, v] : a.xi) sum += std::norm(v - b.xi.at(n));
  return std::sqrt(sum);
}

double spectral_distance(const SpectralInput& a, const SpectralInput& b,
                         const BvpConfig& config) {
  require_same_partition(a, b);
  const auto cls = classify_indices(config, a.N);
  std::map<int, cdouble> diff;
  for (const auto& [n, v] : a.rho) diff[n] = static_cast<double>(n) * (v - b.rho.at(n));
  return weighted_norm(diff, cls);
}

double lambda_distance(const SpectralInput& a, const SpectralInput& b,
                       const BvpConfig& config) {
  if (config.alpha != 0 || config.beta != 0)
    throw validation_error("lambda distance is stated for alpha = beta = 0 only");
  require_same_partition(a, b);
  const auto cls = classify_indices(config, a.N);
  std::map<int, cdouble> diff;
  for (const auto& [n, v] : a.rho) {
    diff[n] = v * v - b.rho.at(n) * b.rho.at(n);
  }
  return weighted_norm(diff, cls);
}

SpectralInput perturb(const SpectralInput& input, const BvpConfig& config,
                      double magnitude, std::uint64_t seed) {
  if (magnitude < 0.0) throw validation_error("perturb: magnitude must be >= 0");
  const auto cls = classify_indices(config, input.N);
  SpectralInput out = input;
  for (auto& [n, rho] : out.rho) {
    // Each term moves the weighted spectral distance by at most
    // magnitude, so the total stays below magnitude*sqrt(N).
    rho += magnitude * cls.phi_n(n) / static_cast<double>(n) *
           unit_disk(seed, kStreamRho, static_cast<std::uint64_t>(n));
  }
  for (auto& [n, xi] : out.xi) {
    xi += magnitude / static_cast<double>(n) *
          unit_disk(seed, kStreamXi, static_cast<std::uint64_t>(n));
  }
  return out;
}

TrialRow theorem1_trial(const SpectralInput& input, const SpectralInput& perturbed,
                        const BvpConfig& config, double r) {
  require_same_partition(input, perturbed);
  const auto check_a = validate(input, config, r);
  if (!check_a.ok) {
    std::ostringstream msg;
    msg << "trial rejected: base data violates the ball condition (norm " << check_a.norm
        << " > r = " << r << ")";
    throw validation_error(msg.str());
  }
  const auto check_b = validate(perturbed, config, r);
  if (!check_b.ok) {
    std::ostringstream msg;
    msg << "trial rejected: perturbed data violates the ball condition (norm "
        << check_b.norm << " > r = " << r << ")";
    throw validation_error(msg.str());
  }

  const Potential q = recover_potential(input, config, config.M);
  const Potential q_tilde = recover_potential(perturbed, config, config.M);

  TrialRow row;
  row.spectral_dist = spectral_distance(input, perturbed, config);
  row.xi_dist = coefficient_distance(input, perturbed);
  row.q_dist = l2_distance(q, q_tilde);
  const double xi_part = std::sqrt(2.0 / pi) * row.xi_dist;
  row.ratio = row.spectral_dist > 0.0
                  ? std::max(0.0, row.q_dist - xi_part) / row.spectral_dist
                  : 0.0;
  if (config.alpha == 0 && config.beta == 0) {
    row.lambda_dist = lambda_distance(input, perturbed, config);
    row.ratio_lambda = row.lambda_dist > 0.0
                           ? std::max(0.0, row.q_dist - xi_part) / row.lambda_dist
                           : 0.0;
  }
  return row;
}

Potential random_base_potential(const BvpConfig& config, std::uint64_t seed,
                                std::uint64_t trial) {
  std::map<int, cdouble> coefficients;
  const int degree = 8;
  for (int n = 1; n <= degree; ++n) {
    coefficients[n] =
        unit_disk(seed, kStreamBase, trial * 64 + n) / static_cast<double>(n);
  }
  return synthesize(coefficients, config, config.M);
}

StabilityReport estimate_stability_constant(const BvpConfig& config, double r,
                                            int trials, std::uint64_t seed,
                                            double magnitude, int threads) {
  if (trials < 1) throw validation_error("stability: trials must be >= 1");
  StabilityReport report;
  report.r = r;
  report.magnitude = magnitude;
  report.trials = trials;
  const auto cls = classify_indices(config, config.N);
  report.per_index_phi.resize(config.N);
  for (int n = 1; n <= config.N; ++n) report.per_index_phi[n - 1] = std::abs(cls.phi_n(n));

  std::vector<std::optional<TrialRow>> slots(trials);
  detail::parallel_for(trials, threads, [&](int t) {
    const std::uint64_t trial_seed =
        detail::counter_hash(seed, kStreamTrial, static_cast<std::uint64_t>(t));
    const Potential q = random_base_potential(config, seed, static_cast<std::uint64_t>(t));
    const SpectralInput data = forward_data(q, config);
    const SpectralInput noisy = perturb(data, config, magnitude, trial_seed);
    try {
      TrialRow row = theorem1_trial(data, noisy, config, r);
      row.seed = trial_seed;
      slots[t] = row;
    } catch (const validation_error&) {
      slots[t].reset();  // ball condition violated: rejected
    }
  });

  for (auto& slot : slots) {
    if (slot) {
      report.rows.push_back(*slot);
    } else {
      ++report.rejected;
    }
  }
  for (const TrialRow& row : report.rows) {
    report.c_empirical = std::max(report.c_empirical, row.ratio);
    report.c_lambda_empirical = std::max(report.c_lambda_empirical, row.ratio_lambda);
  }
  for (TrialRow& row : report.rows) {
    row.slack = report.c_empirical * row.spectral_dist +
                std::sqrt(2.0 / pi) * row.xi_dist - row.q_dist;
  }
  return report;
}

}  // namespace fsl

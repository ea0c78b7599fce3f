#pragma once

#include <vector>

#include "fsl/detail/cells.hpp"
#include "fsl/types.hpp"

namespace fsl {

/// Characteristic function of the unperturbed problem (q = 0):
///   (0,0): sin(pi rho)/rho   (0,1): cos(pi rho)
///   (1,0): -cos(pi rho)      (1,1): rho sin(pi rho)
/// with rho = sqrt(lambda); removable singularities at rho = 0 are
/// evaluated by series, so the function is entire in lambda.
cdouble delta0(const BvpConfig& config, cdouble lambda);

/// d delta0 / d lambda, entire in lambda.
cdouble delta0_dlambda(const BvpConfig& config, cdouble lambda);

/// D0'(k) = lim_{lambda -> z_k^2} delta0(lambda) / (z_k^2 - lambda),
/// i.e. minus the slope of delta0 at its k-th zero.  Closed form.
double delta0_node_slope(const BvpConfig& config, int k);

struct ValueDeriv {
  cdouble value;
  cdouble dlambda;
};

/// Evaluates the characteristic function of B_{a,alpha,beta}(q) from the
/// closed form: the unperturbed part plus two oscillatory integrals of q
/// split at the frozen point a.  Immutable after construction; safe to
/// evaluate concurrently.
class PotentialCharFn {
public:
  PotentialCharFn(const BvpConfig& config, const Potential& q);

  cdouble operator()(cdouble lambda) const { return eval(lambda).value; }

  /// Value and lambda-derivative in one pass over the grid.
  ValueDeriv eval(cdouble lambda) const;

  const BvpConfig& config() const { return config_; }
  double potential_norm() const { return q_norm_; }

private:
  struct Segment {
    std::vector<detail::Cell> cells;
    // Moments of q against t^m and (pi-t)^m, m = 0..kMaxMoment, for the
    // series evaluation near rho = 0.
    std::vector<cdouble> mom_t, mom_rt;
  };

  ValueDeriv eval_series(cdouble lambda) const;

  static constexpr int kMaxMoment = 13;

  BvpConfig config_;
  Segment left_, right_;  // [0, a] and [a, pi]
  double q_norm_ = 0.0;
};

/// Characteristic function reconstructed from a truncated spectrum via
/// the regularized ratio product
///   delta0(lambda) * prod_{n<=N} (lambda_n - lambda)/(z_n^2 - lambda),
/// with the tail beyond N taken as exactly 1.
class SpectrumCharFn {
public:
  SpectrumCharFn(const BvpConfig& config, const Spectrum& spectrum);

  /// Throws numerical_error when lambda falls inside the exclusion
  /// radius 1e-6*max(1, z_n^2) of a retained node; use at_node there.
  cdouble operator()(cdouble lambda) const;

  /// Delta(z_k^2) by the limit formula
  ///   D0'(k) (lambda_k - z_k^2) prod_{n != k} (lambda_n - z_k^2)/(z_n^2 - z_k^2).
  cdouble at_node(int k) const;

  int order() const { return static_cast<int>(lambda_.size()); }
  const BvpConfig& config() const { return config_; }

private:
  BvpConfig config_;
  std::vector<cdouble> lambda_;  // lambda_[k] for n = k+1
  std::vector<double> node_sq_;  // z_n^2
};

}  // namespace fsl

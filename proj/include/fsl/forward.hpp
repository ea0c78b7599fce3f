#pragma once

#include <map>

#include "fsl/types.hpp"

namespace fsl {

struct SolveOptions {
  int max_iterations = 60;
  int max_halvings = 20;
  double snap_tolerance = 1e-8;  // |rho - z_n| bound for degenerate indices
  int threads = 1;
};

/// Per-index diagnostics of the root search.
struct SolveDiagnostics {
  std::vector<double> residual;         // |Delta(rho_n^2)| at acceptance
  std::vector<double> presnap_distance; // |rho_n - z_n| before snapping (degenerate n)
  std::vector<int> stage;               // 1: confined Newton, 2: deflated search
};

/// First N eigenvalue square roots, located by damped complex Newton on
/// the characteristic function, seeded at the unperturbed nodes and
/// confined to per-index disks.  Indices whose root left its disk are
/// retried by a deflated search over a wider region.  Degenerate indices
/// are asserted to sit at z_n and snapped there exactly.
Spectrum eigenvalues(const Potential& q, const BvpConfig& config, int N,
                     const SolveOptions& options = {},
                     SolveDiagnostics* diagnostics = nullptr);

struct Remainders {
  std::map<int, cdouble> nu;  // n -> n(rho_n - z_n)/phi_alpha(a z_n), informative n
  double partial_norm = 0.0;  // ||{n(rho_n - z_n)}||_a over the stored range
};

/// Asymptotic remainder terms of the spectrum.  Degenerate indices are
/// omitted: the asymptotics leave them unconstrained.
Remainders remainders(const Spectrum& spectrum, const BvpConfig& config);

struct ValidationReport {
  bool ok = false;
  double norm = 0.0;
  double r = 0.0;
};

/// Checks the a-priori ball condition ||{n(rho_n - z_n)}||_a <= r.
ValidationReport validate(const Spectrum& spectrum, const BvpConfig& config, double r);
ValidationReport validate(const SpectralInput& input, const BvpConfig& config, double r);

/// Full inverse-problem data of a potential: spectrum on the informative
/// indices plus quadrature coefficients on the degenerate ones.
SpectralInput forward_data(const Potential& q, const BvpConfig& config,
                           const SolveOptions& options = {});

}  // namespace fsl

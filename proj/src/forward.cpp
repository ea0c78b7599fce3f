#include "fsl/forward.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "fsl/charfn.hpp"
#include "fsl/detail/parallel.hpp"
#include "fsl/model.hpp"
#include "fsl/quadrature.hpp"

namespace fsl {

namespace {

struct RootResult {
  bool converged = false;
  cdouble rho;       // branch-normalized
  double residual = 0.0;
  int stage = 1;
  cdouble last;      // last iterate for diagnostics
};

double residual_tolerance(const BvpConfig& config, int n, double q_norm) {
  const int e = config.alpha + config.beta - 1;
  return 1e-12 * std::max(1.0, std::pow(static_cast<double>(n), e)) * (1.0 + q_norm);
}

// Damped Newton on rho -> Delta(rho^2), confined to |rho - z_n| <= radius.
RootResult newton_in_rho(const PotentialCharFn& cf, double zn, double radius,
                         double atol, const SolveOptions& opt) {
  RootResult out;
  cdouble rho = zn;
  ValueDeriv vd = cf.eval(rho * rho);
  double best = std::abs(vd.value);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (best <= atol) {
      out.converged = true;
      break;
    }
    const cdouble drho = 2.0 * rho * vd.dlambda;
    if (drho == cdouble{0.0, 0.0}) break;
    cdouble step = -vd.value / drho;
    bool accepted = false;
    for (int half = 0; half <= opt.max_halvings; ++half) {
      const cdouble cand = rho + step;
      if (std::abs(cand - zn) <= radius) {
        const ValueDeriv cand_vd = cf.eval(cand * cand);
        const double mag = std::abs(cand_vd.value);
        if (mag < best) {
          rho = cand;
          vd = cand_vd;
          best = mag;
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;  // stuck: boundary or rounding floor
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(rho))) break;
  }
  if (best <= atol) out.converged = true;
  out.rho = principal_sqrt_branch(rho);
  out.residual = best;
  out.last = rho;
  return out;
}

// Newton in lambda (needed where z_n = 0 makes the rho parametrization
// singular), same damping and confinement rules.
RootResult newton_in_lambda(const PotentialCharFn& cf, double zn, double radius,
                            double atol, const SolveOptions& opt) {
  RootResult out;
  cdouble lambda = zn * zn;
  ValueDeriv vd = cf.eval(lambda);
  double best = std::abs(vd.value);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (best <= atol) break;
    if (vd.dlambda == cdouble{0.0, 0.0}) break;
    cdouble step = -vd.value / vd.dlambda;
    bool accepted = false;
    for (int half = 0; half <= opt.max_halvings; ++half) {
      const cdouble cand = lambda + step;
      if (std::abs(principal_rho(cand) - zn) <= radius) {
        const ValueDeriv cand_vd = cf.eval(cand);
        if (std::abs(cand_vd.value) < best) {
          lambda = cand;
          vd = cand_vd;
          best = std::abs(cand_vd.value);
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
  }
  if (best <= atol) out.converged = true;
  out.rho = principal_rho(lambda);
  out.residual = best;
  out.last = out.rho;
  return out;
}

// Deflated Newton in lambda: iterates on Delta(lambda)/prod(lambda - d).
// Damping compares log-magnitudes so the deflation product cannot
// overflow; the step uses the logarithmic derivative.
RootResult deflated_newton(const PotentialCharFn& cf, double zn, double radius,
                           double atol, cdouble seed,
                           const std::vector<cdouble>& deflated,
                           const SolveOptions& opt) {
  RootResult out;
  out.stage = 2;
  auto log_h = [&](cdouble lambda, double delta_abs) {
    double lh = std::log(std::max(delta_abs, 1e-300));
    for (const cdouble& d : deflated) lh -= std::log(std::max(std::abs(lambda - d), 1e-300));
    return lh;
  };
  cdouble lambda = seed;
  ValueDeriv vd = cf.eval(lambda);
  double best_abs = std::abs(vd.value);
  double best_lh = log_h(lambda, best_abs);
  for (int it = 0; it < opt.max_iterations; ++it) {
    if (best_abs <= atol && std::abs(principal_rho(lambda) - zn) <= radius) break;
    // h'/h = Delta'/Delta - sum 1/(lambda - d)
    if (best_abs == 0.0) break;
    cdouble logderiv = vd.dlambda / vd.value;
    for (const cdouble& d : deflated) logderiv -= 1.0 / (lambda - d);
    if (logderiv == cdouble{0.0, 0.0}) break;
    cdouble step = -1.0 / logderiv;
    bool accepted = false;
    for (int half = 0; half <= opt.max_halvings; ++half) {
      const cdouble cand = lambda + step;
      const ValueDeriv cand_vd = cf.eval(cand);
      const double cand_abs = std::abs(cand_vd.value);
      const double cand_lh = log_h(cand, cand_abs);
      if (cand_lh < best_lh) {
        lambda = cand;
        vd = cand_vd;
        best_abs = cand_abs;
        best_lh = cand_lh;
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) break;
    if (std::abs(step) <= 1e-14 * std::max(1.0, std::abs(lambda))) break;
  }
  out.rho = principal_rho(lambda);
  out.residual = best_abs;
  out.last = out.rho;
  out.converged = best_abs <= atol && std::abs(out.rho - zn) <= radius;
  return out;
}

}  // namespace

Spectrum eigenvalues(const Potential& q, const BvpConfig& config, int N,
                     const SolveOptions& options, SolveDiagnostics* diagnostics) {
  if (N < 1) throw validation_error("eigenvalues: N must be >= 1");
  const PotentialCharFn cf(config, q);
  const auto cls = classify_indices(config, N);
  const double q_norm = cf.potential_norm();

  std::vector<RootResult> results(N);

  // Stage 1: confined Newton seeded at the unperturbed node.  The disk
  // radius caps at 0.45 times the unit node gap so the basins stay
  // disjoint for moderate potentials.
  const double radius1 = std::min(0.45, 1.0 + q_norm);
  detail::parallel_for(N, options.threads, [&](int idx) {
    const int n = idx + 1;
    const double zn = config.node(n);
    const double atol = residual_tolerance(config, n, q_norm);
    results[idx] = (zn == 0.0) ? newton_in_lambda(cf, zn, radius1, atol, options)
                               : newton_in_rho(cf, zn, radius1, atol, options);
  });

  // Stage 2: indices whose root left the confinement disk (strong
  // potentials displace low eigenvalues beyond the node gap) are retried
  // by a deflated search over |rho - z_n| <= 1 + ||q||, with the roots
  // already found divided out so the displaced root is the only
  // attractor left.  Sequential in n for determinism.
  const double radius2 = 1.0 + q_norm;
  for (int idx = 0; idx < N; ++idx) {
    if (results[idx].converged) continue;
    const int n = idx + 1;
    const double zn = config.node(n);
    const double atol = residual_tolerance(config, n, q_norm);
    std::vector<cdouble> deflated;
    for (int j = 0; j < N; ++j) {
      if (j != idx && results[j].converged) {
        deflated.push_back(results[j].rho * results[j].rho);
      }
    }
    const double scale = std::max(1.0, radius2 * (2.0 * zn + radius2));
    const cdouble zn2 = zn * zn;
    const std::array<cdouble, 9> offsets = {
        cdouble{0.0, 0.0},         cdouble{0.3, 0.0},  cdouble{-0.3, 0.0},
        cdouble{0.7, 0.0},         cdouble{-0.7, 0.0}, cdouble{0.0, 0.3},
        cdouble{0.0, -0.3},        cdouble{0.35, 0.35}, cdouble{0.35, -0.35}};
    for (const cdouble& w : offsets) {
      RootResult r = deflated_newton(cf, zn, radius2, atol, zn2 + scale * w, deflated, options);
      if (r.converged) {
        results[idx] = r;
        break;
      }
      results[idx] = r;  // keep last iterate for the diagnostic message
    }
    if (!results[idx].converged) {
      std::ostringstream msg;
      msg << "root search failed for index n = " << n << " (last iterate "
          << results[idx].last.real() << (results[idx].last.imag() < 0 ? "-" : "+")
          << std::abs(results[idx].last.imag()) << "i, residual " << results[idx].residual
          << ")";
      throw convergence_error(n, results[idx].last, msg.str());
    }
  }

  // Degenerate indices: the eigenvalue is potential-independent; assert
  // the root sat at the node and snap it exactly.
  Spectrum spectrum;
  spectrum.rho.resize(N);
  if (diagnostics) {
    diagnostics->residual.assign(N, 0.0);
    diagnostics->presnap_distance.assign(N, 0.0);
    diagnostics->stage.assign(N, 1);
  }
  for (int idx = 0; idx < N; ++idx) {
    const int n = idx + 1;
    cdouble rho = results[idx].rho;
    const double zn = config.node(n);
    if (cls.is_degenerate(n)) {
      const double presnap = std::abs(rho - zn);
      if (diagnostics) diagnostics->presnap_distance[idx] = presnap;
      if (presnap > options.snap_tolerance) {
        std::ostringstream msg;
        msg << "degenerate index n = " << n << " converged " << presnap
            << " away from its node";
        throw numerical_error(msg.str());
      }
      rho = zn;
    }
    spectrum.rho[idx] = rho;
    if (diagnostics) {
      diagnostics->residual[idx] = results[idx].residual;
      diagnostics->stage[idx] = results[idx].stage;
    }
  }

  // Simple-root assumption: no two indices may share a root.
  for (int i = 0; i < N; ++i) {
    for (int j = i + 1; j < N; ++j) {
      if (std::abs(spectrum.rho[i] - spectrum.rho[j]) < 1e-8) {
        std::ostringstream msg;
        msg << "indices n = " << (i + 1) << " and n = " << (j + 1)
            << " converged to the same root (multiple eigenvalue?)";
        throw multiplicity_error(i + 1, j + 1, msg.str());
      }
    }
  }
  return spectrum;
}

Remainders remainders(const Spectrum& spectrum, const BvpConfig& config) {
  const int N = spectrum.order();
  const auto cls = classify_indices(config, N);
  Remainders out;
  double sum = 0.0;
  for (int n : cls.informative) {
    const cdouble nu =
        static_cast<double>(n) * (spectrum.rho_n(n) - config.node(n)) / cls.phi_n(n);
    out.nu[n] = nu;
    sum += std::norm(nu);
  }
  out.partial_norm = std::sqrt(sum);
  return out;
}

ValidationReport validate(const Spectrum& spectrum, const BvpConfig& config, double r) {
  ValidationReport report;
  report.r = r;
  report.norm = remainders(spectrum, config).partial_norm;
  report.ok = report.norm <= r;
  return report;
}

ValidationReport validate(const SpectralInput& input, const BvpConfig& config, double r) {
  validate_input(input, config);
  const auto cls = classify_indices(config, input.N);
  double sum = 0.0;
  for (const auto& [n, rho] : input.rho) {
    sum += std::norm(static_cast<double>(n) * (rho - config.node(n)) / cls.phi_n(n));
  }
  ValidationReport report;
  report.r = r;
  report.norm = std::sqrt(sum);
  report.ok = report.norm <= r;
  return report;
}

SpectralInput forward_data(const Potential& q, const BvpConfig& config,
                           const SolveOptions& options) {
  const Spectrum spectrum = eigenvalues(q, config, config.N, options);
  const auto cls = classify_indices(config, config.N);
  std::map<int, cdouble> xi;
  for (int n : cls.degenerate) xi[n] = basis_coefficient(q, config, n);
  return make_spectral_input(spectrum, xi, config);
}

}  // namespace fsl

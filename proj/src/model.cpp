#include "fsl/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace fsl {

namespace {

long positive_mod(long value, long modulus) {
  long m = value % modulus;
  return m < 0 ? m + modulus : m;
}

}  // namespace

BvpConfig make_config(std::optional<RationalPi> a_rational, double a_real,
                      int alpha, int beta, int N, int M) {
  if (alpha != 0 && alpha != 1) throw validation_error("alpha must be 0 or 1");
  if (beta != 0 && beta != 1) throw validation_error("beta must be 0 or 1");
  if (N < 1) throw validation_error("N must be >= 1");
  if (M < 2) throw validation_error("M must be >= 2");

  BvpConfig config;
  config.alpha = alpha;
  config.beta = beta;
  config.N = N;

  if (a_rational) {
    auto [p, q] = *a_rational;
    if (q <= 0 || p < 0 || p > q) throw validation_error("pi_rational requires 0 <= p <= q, q > 0");
    long g = std::gcd(p, q);
    if (g > 1) {  // store in lowest terms
      p /= g;
      q /= g;
    }
    config.a_rational = RationalPi{p, q};
    // Snap M to a multiple of q so that a = p*pi/q is a grid node.
    long denom = q;
    long snapped = (static_cast<long>(M) + denom / 2) / denom * denom;
    if (snapped < denom) snapped = denom;
    if (snapped < 2) snapped = 2 * denom;
    config.M = static_cast<int>(snapped);
    config.a = static_cast<double>(p) * pi / static_cast<double>(q);
    config.a_index = static_cast<int>(p * (snapped / denom));
  } else {
    if (!(a_real >= 0.0 && a_real <= pi)) throw validation_error("a must lie in [0, pi]");
    config.M = M;
    config.a = a_real;
    double h = pi / M;
    double idx = a_real / h;
    double nearest = std::round(idx);
    if (std::abs(idx - nearest) < 1e-9 && nearest >= 0 && nearest <= M) {
      config.a_index = static_cast<int>(nearest);
      config.a = nearest * h;
    }
    // A real-literal endpoint can make phi_alpha(a z_n) vanish for every
    // n (a = 0 with alpha = 0; a = pi with beta = 0), which contradicts
    // the irrational treatment; such configurations must be declared
    // rational to get an exact degenerate set.
    if (alpha == 0 && config.a == 0.0)
      throw validation_error("a = 0 with alpha = 0 must be declared as pi_rational [0, 1]");
    if (beta == 0 && config.a_index && *config.a_index == M)
      throw validation_error("a = pi with beta = 0 must be declared as pi_rational [1, 1]");
  }
  return config;
}

Potential make_potential(std::vector<cdouble> samples) {
  if (samples.size() < 3) throw validation_error("potential needs at least 3 samples (M >= 2)");
  Potential q;
  q.samples = std::move(samples);
  return q;
}

bool IndexClassification::is_degenerate(int n) const {
  return std::binary_search(degenerate.begin(), degenerate.end(), n);
}

cdouble principal_sqrt_branch(cdouble rho) {
  if (rho.real() < 0.0 || (rho.real() == 0.0 && rho.imag() < 0.0)) return -rho;
  return rho;
}

cdouble principal_rho(cdouble lambda) {
  return principal_sqrt_branch(std::sqrt(lambda));
}

double phi(int alpha, double x) { return alpha == 0 ? std::sin(x) : std::cos(x); }

cdouble phi(int alpha, cdouble x) { return alpha == 0 ? std::sin(x) : std::cos(x); }

IndexClassification classify_indices(const BvpConfig& config, int N) {
  if (N < 1) throw validation_error("classification order must be >= 1");
  IndexClassification out;
  out.phi.resize(N);
  for (int n = 1; n <= N; ++n) {
    bool degenerate = false;
    double value;
    if (config.a_exact()) {
      const long p = config.a_rational->num;
      const long q = config.a_rational->den;
      // a z_n = pi * p (2n - alpha - beta) / (2q); reduce the phase in
      // integer arithmetic before any trig call.
      const long two_q = 2 * q;
      const long m = positive_mod(p * (2L * n - config.alpha - config.beta), 2 * two_q);
      if (config.alpha == 0) {
        degenerate = (m % two_q) == 0;
      } else {
        degenerate = positive_mod(m - q, two_q) == 0;
      }
      value = degenerate ? 0.0
                         : phi(config.alpha, pi * static_cast<double>(m) / static_cast<double>(two_q));
    } else {
      value = phi(config.alpha, config.a * config.node(n));
    }
    out.phi[n - 1] = value;
    (degenerate ? out.degenerate : out.informative).push_back(n);
  }
  return out;
}

double sequence_norm(const std::map<int, cdouble>& values) {
  double sum = 0.0;
  for (const auto& [n, v] : values) sum += std::norm(v);
  return std::sqrt(sum);
}

double weighted_norm(const std::map<int, cdouble>& values,
                     const IndexClassification& classification) {
  double sum = 0.0;
  for (const auto& [n, v] : values) {
    if (n < 1 || n > classification.order()) {
      std::ostringstream msg;
      msg << "weighted norm: index " << n << " outside classification range";
      throw validation_error(msg.str());
    }
    if (classification.is_degenerate(n)) {
      std::ostringstream msg;
      msg << "weighted norm: index " << n << " is degenerate (division by exact zero)";
      throw validation_error(msg.str());
    }
    sum += std::norm(v / classification.phi_n(n));
  }
  return std::sqrt(sum);
}

void validate_input(const SpectralInput& input, const BvpConfig& config) {
  if (input.N < 1) throw validation_error("spectral input: N must be >= 1");
  const auto cls = classify_indices(config, input.N);
  auto expect = [&](const std::vector<int>& keys, const std::map<int, cdouble>& values,
                    const char* what) {
    if (values.size() != keys.size()) {
      std::ostringstream msg;
      msg << "spectral input: expected " << keys.size() << " " << what << " entries, got "
          << values.size();
      throw validation_error(msg.str());
    }
    for (int n : keys) {
      if (!values.count(n)) {
        std::ostringstream msg;
        msg << "spectral input: missing " << what << " entry for n = " << n;
        throw validation_error(msg.str());
      }
    }
  };
  expect(cls.informative, input.rho, "rho");
  expect(cls.degenerate, input.xi, "xi");
}

SpectralInput make_spectral_input(const Spectrum& spectrum,
                                  const std::map<int, cdouble>& xi_degenerate,
                                  const BvpConfig& config) {
  SpectralInput input;
  input.N = spectrum.order();
  const auto cls = classify_indices(config, input.N);
  for (int n : cls.informative) input.rho[n] = spectrum.rho_n(n);
  for (int n : cls.degenerate) {
    auto it = xi_degenerate.find(n);
    if (it == xi_degenerate.end()) {
      std::ostringstream msg;
      msg << "spectral input: missing xi for degenerate index n = " << n;
      throw validation_error(msg.str());
    }
    input.xi[n] = it->second;
  }
  validate_input(input, config);
  return input;
}

}  // namespace fsl

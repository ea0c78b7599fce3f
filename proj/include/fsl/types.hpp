#pragma once

#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace fsl {

using cdouble = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Bad user input: config files, data files, inconsistent data partitions.
class validation_error : public std::runtime_error {
public:
  explicit validation_error(const std::string& what) : std::runtime_error(what) {}
};

/// Numerical failure: root search did not converge, or the simple-root
/// assumption was violated.
class numerical_error : public std::runtime_error {
public:
  explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

class convergence_error : public numerical_error {
public:
  convergence_error(int index, cdouble last_iterate, const std::string& what)
      : numerical_error(what), index(index), last_iterate(last_iterate) {}
  int index;
  cdouble last_iterate;
};

class multiplicity_error : public numerical_error {
public:
  multiplicity_error(int i, int j, const std::string& what)
      : numerical_error(what), first(i), second(j) {}
  int first, second;
};

/// a = num*pi/den in lowest terms, 0 <= num <= den.
struct RationalPi {
  long num = 1;
  long den = 2;
};

/// Problem parameters of the boundary value problem: the frozen point a,
/// the boundary condition selectors alpha/beta, the spectral truncation
/// order N and the quadrature grid size M.
///
/// When a is declared as a rational multiple of pi it is kept exact and
/// the degenerate index set is decided in integer arithmetic.  A plain
/// real a is treated as irrational by definition of the input format.
struct BvpConfig {
  std::optional<RationalPi> a_rational;  // engaged <=> a is exact
  double a = pi / 2;                     // numeric value, always in [0, pi]
  int alpha = 0;                         // 0: y(0)=0,  1: y'(0)=0
  int beta = 0;                          // 0: y(pi)=0, 1: y'(pi)=0
  int N = 200;                           // truncation order
  int M = 2000;                          // grid size (snapped, see make_config)
  std::optional<int> a_index;            // grid index of a when a is a node

  bool a_exact() const { return a_rational.has_value(); }

  /// Unperturbed node z_n = n - (alpha+beta)/2, n >= 1.
  double node(int n) const { return n - 0.5 * (alpha + beta); }
};

/// Validates fields, snaps M so that rational a lands on a grid node,
/// and records the node index (or leaves the straddled cell to be split
/// by the integrator for irrational a).
BvpConfig make_config(std::optional<RationalPi> a_rational, double a_real,
                      int alpha, int beta, int N = 200, int M = 2000);

/// A complex-valued function on [0, pi] sampled on the uniform grid
/// x_i = i*pi/M.  When the potential was synthesized from finitely many
/// basis modes the (n, c_n) list is kept alongside the samples.
struct Potential {
  std::vector<cdouble> samples;  // size M+1
  std::optional<std::vector<std::pair<int, cdouble>>> modes;

  int grid_size() const { return static_cast<int>(samples.size()) - 1; }
};

Potential make_potential(std::vector<cdouble> samples);

/// Square roots of the eigenvalues, principal branch, index-aligned with
/// the unperturbed nodes.  rho[k] corresponds to n = k+1.
struct Spectrum {
  std::vector<cdouble> rho;

  int order() const { return static_cast<int>(rho.size()); }
  cdouble rho_n(int n) const { return rho.at(n - 1); }
  cdouble lambda_n(int n) const { return rho_n(n) * rho_n(n); }
};

/// Partition of {1..N} into the degenerate set (phi_alpha(a z_n) = 0,
/// eigenvalue carries no information) and its complement.
struct IndexClassification {
  std::vector<int> degenerate;   // sorted
  std::vector<int> informative;  // sorted complement in [1, N]
  std::vector<double> phi;       // phi[n-1] = phi_alpha(a z_n)

  int order() const { return static_cast<int>(phi.size()); }
  bool is_degenerate(int n) const;
  double phi_n(int n) const { return phi.at(n - 1); }
};

/// Data of the inverse problem: rho_n on the informative indices and the
/// basis coefficients xi_n on the degenerate ones, n <= N.
struct SpectralInput {
  std::map<int, cdouble> rho;  // keys = informative indices
  std::map<int, cdouble> xi;   // keys = degenerate indices
  int N = 0;
};

/// Principal branch arg in (-pi/2, pi/2]: flips the sign when needed.
cdouble principal_sqrt_branch(cdouble rho);

/// Principal square root of lambda with the branch convention above.
cdouble principal_rho(cdouble lambda);

}  // namespace fsl

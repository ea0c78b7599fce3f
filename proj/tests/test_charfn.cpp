#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "fsl/charfn.hpp"
#include "fsl/forward.hpp"
#include "fsl/model.hpp"
#include "fsl/quadrature.hpp"
#include "test_support.hpp"

using namespace fsl;
using fsl::testing::charfn_direct;

namespace {

Potential sample_potential(const std::function<cdouble(double)>& f, int M) {
  Potential q;
  q.samples.resize(M + 1);
  for (int i = 0; i <= M; ++i) q.samples[i] = f(i * pi / M);
  return q;
}

std::vector<cdouble> lambda_grid() {
  std::vector<cdouble> grid;
  for (int i = 0; i < 12; ++i) {
    grid.push_back(cdouble{-3.0 + 2.3 * i + 0.4, 0.35 * ((i % 3) - 1)});
  }
  return grid;
}

}  // namespace

TEST_CASE("unperturbed characteristic function") {
  const auto c00 = make_config(RationalPi{1, 2}, 0, 0, 0);
  CHECK(std::abs(delta0(c00, cdouble{0.25}) - 2.0) < 1e-15);
  CHECK(std::abs(delta0(c00, cdouble{0.0}) - pi) < 1e-15);
  const auto c01 = make_config(RationalPi{1, 2}, 0, 0, 1);
  CHECK(std::abs(delta0(c01, cdouble{0.0}) - 1.0) < 1e-15);
  const auto c10 = make_config(RationalPi{1, 2}, 0, 1, 0);
  CHECK(std::abs(delta0(c10, cdouble{0.0}) + 1.0) < 1e-15);
  const auto c11 = make_config(RationalPi{1, 2}, 0, 1, 1);
  CHECK(std::abs(delta0(c11, cdouble{0.0})) < 1e-15);
  CHECK(std::abs(delta0(c11, cdouble{0.25}) - 0.5 * std::sin(pi / 2)) < 1e-15);
}

TEST_CASE("delta0 vanishes exactly at the nodes") {
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 2}, 0, alpha, beta);
      for (int n = 1; n <= 12; ++n) {
        const double z = config.node(n);
        CHECK(std::abs(delta0(config, cdouble{z * z})) < 1e-12);
      }
    }
  }
}

TEST_CASE("delta0 derivative matches finite differences") {
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 2}, 0, alpha, beta);
      for (const cdouble lambda :
           {cdouble{0.37}, cdouble{3.9, 0.8}, cdouble{-2.0, 0.1}, cdouble{26.3}}) {
        const double eps = 1e-6 * std::max(1.0, std::abs(lambda));
        const cdouble fd =
            (delta0(config, lambda + eps) - delta0(config, lambda - eps)) / (2.0 * eps);
        const cdouble an = delta0_dlambda(config, lambda);
        CHECK(std::abs(fd - an) < 1e-6 * std::max(1.0, std::abs(an)));
      }
    }
  }
}

TEST_CASE("node slope of delta0: closed form vs finite differences") {
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 2}, 0, alpha, beta);
      for (int k : {1, 2, 5, 9}) {
        const double zk2 = config.node(k) * config.node(k);
        const double slope = delta0_node_slope(config, k);
        const double eps = 1e-7 * std::max(1.0, zk2);
        const cdouble fd = delta0(config, cdouble{zk2 - eps}) / eps;
        CHECK(std::abs(fd - slope) < 1e-5 * std::max(1.0, std::abs(slope)));
      }
      if (alpha == 0 && beta == 0) {
        for (int k : {1, 2, 3, 7}) {
          const double want = pi * (k % 2 ? 1.0 : -1.0) / (2.0 * k * k);
          CHECK(delta0_node_slope(config, k) == doctest::Approx(want));
        }
      }
    }
  }
}

TEST_CASE("potential charfn reduces to delta0 for q = 0") {
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 3}, 0, alpha, beta, 50, 600);
      Potential q;
      q.samples.assign(config.M + 1, cdouble{0.0});
      const PotentialCharFn cf(config, q);
      for (const cdouble lambda : lambda_grid()) {
        CHECK(std::abs(cf(lambda) - delta0(config, lambda)) < 1e-13);
      }
    }
  }
}

TEST_CASE("potential charfn agrees with the direct closed-form quadrature") {
  // Independent path: the raw display with plain trig and high-order GL
  // panels on the same piecewise-linear integrand.
  auto f = [](double t) { return cdouble{std::sin(2 * t) + 0.3, 0.25 * std::cos(t)}; };
  const int M = 800;
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 3}, 0, alpha, beta, 50, M);
      const Potential q = sample_potential(f, config.M);
      const PotentialCharFn cf(config, q);
      auto pl = [&](double t) { return fsl::testing::pl_eval(q.samples, t); };
      for (const cdouble lambda : lambda_grid()) {
        const cdouble want = charfn_direct(alpha, beta, config.a, pl, lambda, 2400);
        const cdouble got = cf(lambda);
        CHECK(fsl::testing::rel_err(got, want) < 1e-9);
      }
    }
  }
}

TEST_CASE("series window joins the closed-form branch smoothly") {
  auto f = [](double t) { return cdouble{0.4 * std::cos(t), 0.1 * t}; };
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 2}, 0, alpha, beta, 50, 500);
      const Potential q = sample_potential(f, config.M);
      const PotentialCharFn cf(config, q);
      auto pl = [&](double t) { return fsl::testing::pl_eval(q.samples, t); };
      for (const double rho : {0.029, 0.0301, 0.02, 0.045}) {
        const cdouble lam{rho * rho, 0.0};
        const cdouble want = charfn_direct(alpha, beta, config.a, pl, lam, 1500);
        const auto got = cf.eval(lam);
        CHECK(std::abs(got.value - want) < 1e-10 * std::max(1.0, std::abs(want)));
        const double eps = 1e-7;
        const cdouble fd = (cf(lam + eps) - cf(lam - eps)) / (2.0 * eps);
        CHECK(std::abs(fd - got.dlambda) < 1e-5 * std::max(1.0, std::abs(got.dlambda)));
      }
    }
  }
}

TEST_CASE("shared characteristic function of sin 2x at a = pi/2") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 0, 50, 2000);
  const auto q = synthesize({{2, cdouble{pi / 2}}}, config, config.M);
  const PotentialCharFn cf(config, q);
  for (int n = 1; n <= 6; ++n) {
    CHECK(std::abs(cf(cdouble{static_cast<double>(n * n)})) < 1e-12);
  }
  for (const cdouble lambda : lambda_grid()) {
    CHECK(std::abs(cf(lambda) - delta0(config, lambda)) < 1e-12);
  }
  // the spectrum {n^2} rebuilt into a product reproduces the same Delta
  Spectrum integers;
  for (int n = 1; n <= 50; ++n) integers.rho.push_back(cdouble{double(n)});
  const SpectrumCharFn rebuilt(config, integers);
  for (const cdouble lambda : lambda_grid()) {
    CHECK(std::abs(rebuilt(lambda) - cf(lambda)) <
          1e-11 * std::max(1.0, std::abs(cf(lambda))));
  }
}

TEST_CASE("value at lambda = 1 for q = sin x, a = pi/2") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 0, 50, 2000);
  const auto q = synthesize({{1, cdouble{pi / 2}}}, config, config.M);
  const PotentialCharFn cf(config, q);
  // Delta(1) = xi_1 = pi/2; the tolerance carries the PL attenuation of
  // the sampled mode.
  CHECK(std::abs(cf(cdouble{1.0}) - pi / 2) < 2e-6);
}

TEST_CASE("q-dependence is affine") {
  const auto config = make_config(RationalPi{2, 3}, 0, 1, 0, 50, 600);
  const Potential q1 =
      sample_potential([](double t) { return cdouble{std::sin(t), 0.2 * t}; }, config.M);
  const Potential q2 = sample_potential(
      [](double t) { return cdouble{0.1 * t * t, -std::cos(3 * t)}; }, config.M);
  Potential sum;
  sum.samples.resize(config.M + 1);
  for (int i = 0; i <= config.M; ++i) sum.samples[i] = q1.samples[i] + q2.samples[i];
  const PotentialCharFn cf1(config, q1), cf2(config, q2), cfs(config, sum);
  for (const cdouble lambda : lambda_grid()) {
    const cdouble d0 = delta0(config, lambda);
    const cdouble lhs = cfs(lambda) - d0;
    const cdouble rhs = (cf1(lambda) - d0) + (cf2(lambda) - d0);
    CHECK(std::abs(lhs - rhs) < 1e-11 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("degenerate nodes annihilate the q-dependence") {
  for (auto [p, den] : {std::pair<long, long>{1, 2}, {1, 3}, {2, 3}}) {
    const auto config = make_config(RationalPi{p, den}, 0, 0, 0, 30, 1200);
    const auto cls = classify_indices(config, 30);
    const Potential q = sample_potential(
        [](double t) { return cdouble{std::sin(5 * t) + 0.4, std::cos(2 * t)}; },
        config.M);
    const PotentialCharFn cf(config, q);
    REQUIRE(!cls.degenerate.empty());
    for (int n : cls.degenerate) {
      const double z = config.node(n);
      CHECK(std::abs(cf(cdouble{z * z})) < 1e-12 * (1.0 + cf.potential_norm()));
    }
  }
}

TEST_CASE("node identity: quadrature coefficient vs characteristic function") {
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{1, 2}, 0, alpha, beta, 30, 2000);
      const auto cls = classify_indices(config, 30);
      const Potential q = sample_potential(
          [](double t) {
            return cdouble{std::sin(t) + 0.3 * std::cos(4 * t) + 0.2,
                           0.15 * std::sin(2 * t)};
          },
          config.M);
      const PotentialCharFn cf(config, q);
      for (int n : cls.informative) {
        const cdouble by_quadrature = basis_coefficient(q, config, n);
        const double sign = ((n + 1 - alpha) % 2 == 0) ? 1.0 : -1.0;
        const int e = 2 - alpha - beta;
        const double zn = config.node(n);
        const double power = e == 0 ? 1.0 : std::pow(zn, e);
        const cdouble by_formula = sign * power * cf(cdouble{zn * zn}) / cls.phi_n(n);
        CHECK(fsl::testing::rel_err(by_formula, by_quadrature) < 1e-8);
      }
    }
  }
}

TEST_CASE("structural form: the reduced q-part stays bounded") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 0, 50, 1500);
  const Potential q = sample_potential(
      [](double t) { return cdouble{std::sin(3 * t) + 0.5 * std::cos(t), 0.0}; },
      config.M);
  const PotentialCharFn cf(config, q);
  const double q1 = l2_norm(q) * std::sqrt(pi);  // L1 bound via Cauchy-Schwarz
  for (double rho = 0.0; rho <= 50.0; rho += 0.37) {
    const cdouble lambda{rho * rho, 0.0};
    const cdouble reduced = lambda * (cf(lambda) - delta0(config, lambda));
    CHECK(std::abs(reduced) <= 2.0 * q1 + 1e-9);
  }
  // alpha = beta = 0: the reduced part vanishes at rho = 0
  CHECK(std::abs(cdouble{0.0} * (cf(cdouble{0.0}) - delta0(config, cdouble{0.0}))) <
        1e-12);
}

TEST_CASE("spectrum charfn with unperturbed zeros equals delta0") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 1, 40, 500);
  Spectrum spectrum;
  for (int n = 1; n <= 40; ++n) spectrum.rho.push_back(cdouble{config.node(n)});
  const SpectrumCharFn cf(config, spectrum);
  for (const cdouble lambda : lambda_grid()) {
    CHECK(std::abs(cf(lambda) - delta0(config, lambda)) <
          1e-14 * std::max(1.0, std::abs(delta0(config, lambda))));
  }
  for (int k = 1; k <= 40; ++k) CHECK(cf.at_node(k) == cdouble{0.0});
}

TEST_CASE("exclusion radius routes node evaluations to at_node") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 0, 10, 500);
  Spectrum spectrum;
  for (int n = 1; n <= 10; ++n) spectrum.rho.push_back(cdouble{config.node(n)});
  const SpectrumCharFn cf(config, spectrum);
  CHECK_THROWS_AS(cf(cdouble{9.0 + 1e-8}), numerical_error);
  CHECK_NOTHROW(cf(cdouble{9.5}));
}

TEST_CASE("single perturbed eigenvalue: at_node equals slope times offset") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 0, 20, 500);
  Spectrum spectrum;
  for (int n = 1; n <= 20; ++n) spectrum.rho.push_back(cdouble{config.node(n)});
  const cdouble delta{3e-3, 1e-3};
  const int k = 3;
  spectrum.rho[k - 1] = std::sqrt(cdouble{9.0} + delta);
  const SpectrumCharFn cf(config, spectrum);
  const cdouble expected = delta0_node_slope(config, k) * delta;
  CHECK(std::abs(cf.at_node(k) - expected) < 1e-12);
  CHECK(std::abs(cf.at_node(5)) < 1e-15);
}

TEST_CASE("spectrum-product consistency with the potential form") {
  // Delta rebuilt from the first N computed eigenvalues converges to the
  // potential-form Delta as N grows; the empirical order is reported.
  const auto config_full = make_config(RationalPi{1, 2}, 0, 0, 1, 100, 2000);
  Potential q;
  q.samples.resize(config_full.M + 1);
  for (int i = 0; i <= config_full.M; ++i) q.samples[i] = std::sin(i * pi / config_full.M);
  const PotentialCharFn direct(config_full, q);
  const auto spectrum = eigenvalues(q, config_full, 100);

  const std::vector<cdouble> probes{{0.3, 0.0}, {2.2, 0.5}, {10.7, 0.0}, {31.4, -0.2}};
  auto sup_error = [&](int N) {
    Spectrum truncated;
    truncated.rho.assign(spectrum.rho.begin(), spectrum.rho.begin() + N);
    const SpectrumCharFn rebuilt(config_full, truncated);
    double worst = 0.0;
    for (const cdouble lambda : probes) {
      worst = std::max(worst, std::abs(rebuilt(lambda) - direct(lambda)) /
                                  std::max(1.0, std::abs(direct(lambda))));
    }
    return worst;
  };
  const double e25 = sup_error(25), e50 = sup_error(50), e100 = sup_error(100);
  CHECK(e50 < e25);
  CHECK(e100 < e50);
  MESSAGE("tail convergence: e25 = ", e25, ", e50 = ", e50, ", e100 = ", e100,
          ", observed order = ", std::log2(e50 / e100));
}

TEST_CASE("spectrum form of q = sin x matches the potential form at probe points") {
  const auto config = make_config(RationalPi{1, 2}, 0, 0, 0, 200, 2000);
  const auto q = synthesize({{1, cdouble{pi / 2}}}, config, config.M);
  const auto spectrum = eigenvalues(q, config, 200);
  const PotentialCharFn direct(config, q);
  const SpectrumCharFn rebuilt(config, spectrum);
  for (const cdouble lambda : {cdouble{0.3, 0.0}, cdouble{2.2, 0.5}, cdouble{10.7, 0.0}}) {
    CHECK(fsl::testing::rel_err(rebuilt(lambda), direct(lambda)) < 1e-3);
  }
  // node value: Delta(1) = xi_1 = pi/2
  CHECK(std::abs(rebuilt.at_node(1) - pi / 2) < 1e-3);
}

TEST_CASE("cached segments reproduce direct oscillatory integrals") {
  // The evaluator's cached cells must give the same split integrals as
  // standalone quadrature calls; only the removable-singularity
  // bookkeeping differs, so agreement is at rounding level.
  for (int alpha : {0, 1}) {
    for (int beta : {0, 1}) {
      const auto config = make_config(RationalPi{2, 5}, 0, alpha, beta, 20, 700);
      Potential q;
      q.samples.resize(config.M + 1);
      for (int i = 0; i <= config.M; ++i) {
        q.samples[i] = cdouble{std::sin(3.1 * i * pi / config.M), 0.2};
      }
      const PotentialCharFn cf(config, q);
      for (const cdouble lambda : {cdouble{3.7, 0.0}, cdouble{12.1, 0.6}}) {
        const cdouble rho = principal_rho(lambda);
        const TrigKind ka = alpha == 0 ? TrigKind::sine : TrigKind::cosine;
        const TrigKind kb = beta == 0 ? TrigKind::sine : TrigKind::cosine;
        const cdouble int_left = oscillatory_integral(q.samples, 0.0, config.a, rho, ka);
        const cdouble int_right =
            oscillatory_integral(q.samples, config.a, pi, rho, kb, true);
        const double s0 = (alpha * (1 - beta)) % 2 ? -1.0 : 1.0;
        const double sq = alpha % 2 ? -1.0 : 1.0;
        const cdouble lead = s0 * phi(std::abs(beta - alpha), pi * rho) *
                             std::pow(rho, cdouble(alpha + beta - 1.0));
        const cdouble manual =
            lead + sq * (phi(beta, (pi - config.a) * rho) * int_left +
                         phi(alpha, config.a * rho) * int_right) *
                       std::pow(rho, cdouble(alpha + beta - 2.0));
        CHECK(fsl::testing::rel_err(cf(lambda), manual) < 1e-13);
      }
    }
  }
}

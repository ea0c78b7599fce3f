#include "fsl/charfn.hpp"

#include <cmath>
#include <sstream>

#include "fsl/detail/cells.hpp"
#include "fsl/model.hpp"
#include "fsl/quadrature.hpp"

namespace fsl {

namespace {

// Series evaluation kicks in below this |rho|; the closed forms divide
// by rho powers and lose precision near the origin.
constexpr double kSeriesRadius = 0.03;
constexpr int kSeriesTerms = 7;  // lambda^k, k < kSeriesTerms

double factorial(int m) {
  double f = 1.0;
  for (int i = 2; i <= m; ++i) f *= i;
  return f;
}

cdouble sinc(cdouble w) {
  if (std::abs(w) < 0.5) {
    cdouble sum = 0.0, p = 1.0;
    const cdouble w2 = w * w;
    for (int k = 0; k < 10; ++k) {
      sum += p / factorial(2 * k + 1);
      p *= -w2;
    }
    return sum;
  }
  return std::sin(w) / w;
}

// Reduced trig factors, entire in lambda:
//   reduced(0, x; rho) = sin(x rho)/rho,  reduced(1, x; rho) = cos(x rho).
cdouble reduced_value(int kind, double x, cdouble rho) {
  if (kind == 0) return x * sinc(x * rho);
  return std::cos(x * rho);
}

// d/drho of the reduced factor (used away from rho = 0 only).
cdouble reduced_drho(int kind, double x, cdouble rho, cdouble value) {
  if (kind == 0) return (x * std::cos(x * rho) - value) / rho;
  return -x * std::sin(x * rho);
}

// Lambda power series of the reduced factor and its lambda-derivative:
//   reduced(0, x) = sum (-1)^k x^{2k+1} lambda^k / (2k+1)!
//   reduced(1, x) = sum (-1)^k x^{2k}   lambda^k / (2k)!
ValueDeriv reduced_series(int kind, double x, cdouble lambda) {
  cdouble value = 0.0, deriv = 0.0;
  double xp = (kind == 0) ? x : 1.0;  // x^{2k + (1 - kind)}
  double sign = 1.0;
  cdouble lp = 1.0, lp_prev = 0.0;  // lambda^k, lambda^{k-1}
  for (int k = 0; k < kSeriesTerms; ++k) {
    const int m = 2 * k + (kind == 0 ? 1 : 0);
    const double coeff = sign * xp / factorial(m);
    value += coeff * lp;
    if (k >= 1) deriv += coeff * static_cast<double>(k) * lp_prev;
    lp_prev = lp;
    lp *= lambda;
    xp *= x * x;
    sign = -sign;
  }
  return {value, deriv};
}

int leading_sign(const BvpConfig& c) { return (c.alpha * (1 - c.beta)) % 2 ? -1 : 1; }
int integral_sign(const BvpConfig& c) { return c.alpha % 2 ? -1 : 1; }

}  // namespace

cdouble delta0(const BvpConfig& config, cdouble lambda) {
  const cdouble rho = principal_rho(lambda);
  const double s0 = leading_sign(config);
  const cdouble base = config.alpha == config.beta
                           ? pi * sinc(pi * rho)       // kappa = 0
                           : std::cos(pi * rho);       // kappa = 1
  if (config.alpha + config.beta == 2) return s0 * lambda * base;
  return s0 * base;
}

namespace {

// d/dlambda of sin(pi rho)/rho, entire in lambda.
cdouble dlambda_sin_over_rho(cdouble lambda, cdouble rho) {
  if (std::abs(rho) < 0.1) {
    cdouble sum = 0.0, lp = 1.0;
    double pp = pi * pi * pi;  // pi^{2k+1}, k from 1
    double sign = -1.0;
    for (int k = 1; k < 10; ++k) {
      sum += sign * static_cast<double>(k) * pp / factorial(2 * k + 1) * lp;
      lp *= lambda;
      pp *= pi * pi;
      sign = -sign;
    }
    return sum;
  }
  return (pi * rho * std::cos(pi * rho) - std::sin(pi * rho)) / (2.0 * rho * rho * rho);
}

}  // namespace

cdouble delta0_dlambda(const BvpConfig& config, cdouble lambda) {
  const cdouble rho = principal_rho(lambda);
  const int ab = config.alpha + config.beta;
  if (ab == 0) return dlambda_sin_over_rho(lambda, rho);
  if (ab == 2) {
    const cdouble base = pi * sinc(pi * rho);
    return base + lambda * dlambda_sin_over_rho(lambda, rho);
  }
  // cos(pi rho): d/dlambda = -pi sin(pi rho)/(2 rho) = -(pi^2/2) sinc(pi rho)
  const cdouble d = -(pi * pi / 2.0) * sinc(pi * rho);
  return config.alpha == 1 ? -d : d;  // (1,0) carries the minus sign
}

double delta0_node_slope(const BvpConfig& config, int k) {
  if (k < 1) throw validation_error("node slope: index must be >= 1");
  const double zk = config.node(k);
  const int ab = config.alpha + config.beta;
  const double sign_k1 = (k % 2 == 0) ? -1.0 : 1.0;  // (-1)^{k+1}
  if (ab == 0) return pi * sign_k1 / (2.0 * zk * zk);
  if (ab == 2) {
    if (k == 1) return -pi;
    return -pi * sign_k1 / 2.0;  // pi (-1)^k / 2
  }
  if (config.alpha == 0) return pi * sign_k1 / (2.0 * zk);
  return -pi * sign_k1 / (2.0 * zk);
}

PotentialCharFn::PotentialCharFn(const BvpConfig& config, const Potential& q)
    : config_(config) {
  if (q.grid_size() < 2) throw validation_error("characteristic function: potential grid too small");
  left_.cells = detail::clip_cells(q.samples, 0.0, config.a);
  right_.cells = detail::clip_cells(q.samples, config.a, pi);
  for (auto* seg : {&left_, &right_}) {
    seg->mom_t.resize(kMaxMoment + 1);
    seg->mom_rt.resize(kMaxMoment + 1);
    for (int m = 0; m <= kMaxMoment; ++m) {
      seg->mom_t[m] = detail::moment(seg->cells, m, false);
      seg->mom_rt[m] = detail::moment(seg->cells, m, true);
    }
  }
  q_norm_ = l2_norm(q);
}

ValueDeriv PotentialCharFn::eval(cdouble lambda) const {
  const cdouble rho = principal_rho(lambda);
  if (std::abs(rho) < kSeriesRadius) return eval_series(lambda);

  const int alpha = config_.alpha, beta = config_.beta;
  const double a = config_.a;
  const auto lt = detail::trig_integrals(left_.cells, rho, true);
  const auto rt = detail::trig_integrals(right_.cells, rho, true);

  // Left integral against phi_alpha(t rho)/rho^{1-alpha}.
  cdouble jl, djl;  // value, d/drho
  if (alpha == 0) {
    jl = lt.sin_i / rho;
    djl = (lt.t_cos - jl) / rho;
  } else {
    jl = lt.cos_i;
    djl = -lt.t_sin;
  }

  // Right integral against phi_beta((pi-t) rho)/rho^{1-beta}; the
  // reflected kernels expand by angle subtraction.
  const cdouble sz = std::sin(rho * pi), cz = std::cos(rho * pi);
  const cdouble refl_sin = sz * rt.cos_i - cz * rt.sin_i;
  const cdouble refl_cos = cz * rt.cos_i + sz * rt.sin_i;
  const cdouble m_cos = pi * rt.cos_i - rt.t_cos;  // integral f (pi-t) cos(rho t) pieces
  const cdouble m_sin = pi * rt.sin_i - rt.t_sin;
  const cdouble refl_t_cos = cz * m_cos + sz * m_sin;  // integral f (pi-t) cos(rho(pi-t))
  const cdouble refl_t_sin = sz * m_cos - cz * m_sin;
  cdouble jr, djr;
  if (beta == 0) {
    jr = refl_sin / rho;
    djr = (refl_t_cos - jr) / rho;
  } else {
    jr = refl_cos;
    djr = -refl_t_sin;
  }

  // Prefactors reduced(beta, pi-a) and reduced(alpha, a).
  const cdouble pl = reduced_value(beta, pi - a, rho);
  const cdouble dpl = reduced_drho(beta, pi - a, rho, pl);
  const cdouble pr = reduced_value(alpha, a, rho);
  const cdouble dpr = reduced_drho(alpha, a, rho, pr);

  // Leading term.
  const int kappa = std::abs(beta - alpha);
  const cdouble base = reduced_value(kappa, pi, rho);
  const cdouble dbase = reduced_drho(kappa, pi, rho, base);
  const double s0 = leading_sign(config_);
  cdouble lead, dlead;  // value, d/drho
  if (alpha + beta == 2) {
    lead = s0 * lambda * base;
    dlead = s0 * (2.0 * rho * base + lambda * dbase);
  } else {
    lead = s0 * base;
    dlead = s0 * dbase;
  }

  const double sq = integral_sign(config_);
  const cdouble value = lead + sq * (pl * jl + pr * jr);
  const cdouble drho = dlead + sq * (dpl * jl + pl * djl + dpr * jr + pr * djr);
  return {value, drho / (2.0 * rho)};
}

ValueDeriv PotentialCharFn::eval_series(cdouble lambda) const {
  const int alpha = config_.alpha, beta = config_.beta;
  const double a = config_.a;

  // Integral factors as lambda series over the cached moments.
  auto integral_series = [&](const Segment& seg, int kind, bool reflected) -> ValueDeriv {
    const auto& mom = reflected ? seg.mom_rt : seg.mom_t;
    cdouble value = 0.0, deriv = 0.0;
    double sign = 1.0;
    cdouble lp = 1.0;  // lambda^k
    cdouble lp_prev = 0.0;
    for (int k = 0; k < kSeriesTerms; ++k) {
      const int m = 2 * k + (kind == 0 ? 1 : 0);
      if (m > kMaxMoment) break;
      const cdouble coeff = sign * mom[m] / factorial(m);
      value += coeff * lp;
      if (k >= 1) deriv += coeff * static_cast<double>(k) * lp_prev;
      lp_prev = lp;
      lp *= lambda;
      sign = -sign;
    }
    return {value, deriv};
  };

  const ValueDeriv jl = integral_series(left_, alpha, false);
  const ValueDeriv jr = integral_series(right_, beta, true);
  const ValueDeriv pl = reduced_series(beta, pi - a, lambda);
  const ValueDeriv pr = reduced_series(alpha, a, lambda);
  const ValueDeriv base = reduced_series(std::abs(beta - alpha), pi, lambda);

  const double s0 = leading_sign(config_);
  cdouble lead, dlead;
  if (alpha + beta == 2) {
    lead = s0 * lambda * base.value;
    dlead = s0 * (base.value + lambda * base.dlambda);
  } else {
    lead = s0 * base.value;
    dlead = s0 * base.dlambda;
  }

  const double sq = integral_sign(config_);
  const cdouble value = lead + sq * (pl.value * jl.value + pr.value * jr.value);
  const cdouble deriv = dlead + sq * (pl.dlambda * jl.value + pl.value * jl.dlambda +
                                      pr.dlambda * jr.value + pr.value * jr.dlambda);
  return {value, deriv};
}

SpectrumCharFn::SpectrumCharFn(const BvpConfig& config, const Spectrum& spectrum)
    : config_(config) {
  const int N = spectrum.order();
  if (N < 1) throw validation_error("spectrum characteristic function: empty spectrum");
  lambda_.resize(N);
  node_sq_.resize(N);
  for (int n = 1; n <= N; ++n) {
    const cdouble rho = principal_sqrt_branch(spectrum.rho_n(n));
    lambda_[n - 1] = rho * rho;
    const double z = config.node(n);
    node_sq_[n - 1] = z * z;
  }
}

cdouble SpectrumCharFn::operator()(cdouble lambda) const {
  cdouble product = delta0(config_, lambda);
  for (size_t k = 0; k < lambda_.size(); ++k) {
    const double exclusion = 1e-6 * std::max(1.0, node_sq_[k]);
    if (std::abs(lambda - node_sq_[k]) < exclusion) {
      std::ostringstream msg;
      msg << "lambda collides with node z_" << (k + 1)
          << "^2; evaluate with at_node instead";
      throw numerical_error(msg.str());
    }
    product *= (lambda_[k] - lambda) / (node_sq_[k] - lambda);
  }
  return product;
}

cdouble SpectrumCharFn::at_node(int k) const {
  if (k < 1 || k > order()) throw validation_error("at_node: index out of range");
  const double zk2 = node_sq_[k - 1];
  cdouble product = delta0_node_slope(config_, k) * (lambda_[k - 1] - zk2);
  for (int n = 1; n <= order(); ++n) {
    if (n == k) continue;
    product *= (lambda_[n - 1] - zk2) / (node_sq_[n - 1] - zk2);
  }
  return product;
}

}  // namespace fsl

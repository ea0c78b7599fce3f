#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <span>
#include <vector>

#include "fsl/types.hpp"

namespace fsl::detail {

// One integration cell: f is linear between (t0, f0) and (t0+h, f1).
struct Cell {
  double t0, h;
  cdouble f0, f1;
};

// Weights of the linear-times-exponential cell rule:
//   integral_0^1 tau^j-blend e^{s tau} dtau with s = i z h:
//   w0 = (e^s - 1 - s)/s^2, w1 = (e^s (s-1) + 1)/s^2,
//   w2 = (e^s (s^2 - 2s + 2) - 2)/s^3  (= integral of tau^2 e^{s tau}).
// The closed forms cancel catastrophically for small |s|; below |s| = 1
// the power series are exact to double precision.
inline std::array<cdouble, 3> cell_weights(cdouble s) {
  if (std::abs(s) < 1.0) {
    cdouble w0 = 0.0, w1 = 0.0, w2 = 0.0;
    cdouble pw = 1.0;      // s^j
    double fact = 2.0;     // (j+2)!
    double jfact = 1.0;    // j!
    for (int j = 0;; ++j) {
      w0 += pw / fact;
      w1 += pw * static_cast<double>(j + 1) / fact;
      w2 += pw / (jfact * static_cast<double>(j + 3));
      if (j > 3 && std::abs(pw) / fact < 1e-20) break;
      if (j > 30) break;
      pw *= s;
      jfact *= static_cast<double>(j + 1);
      fact *= static_cast<double>(j + 3);
    }
    return {w0, w1, w2};
  }
  const cdouble es = std::exp(s);
  const cdouble s2 = s * s;
  return {(es - 1.0 - s) / s2, (es * (s - 1.0) + 1.0) / s2,
          (es * (s2 - 2.0 * s + 2.0) - 2.0) / (s2 * s)};
}

struct ExpIntegrals {
  cdouble plain{0.0};     // integral of f(t) e^{izt}
  cdouble t_weighted{0.0};  // integral of f(t) t e^{izt}
};

// Marches the cell list once.  e^{izt0} advances by recurrence within
// uniform runs and is refreshed every 64 cells to stop drift.
inline ExpIntegrals exp_integrals(std::span<const Cell> cells, cdouble z,
                                  bool with_t_weight) {
  ExpIntegrals out;
  const cdouble iz(0.0, 1.0);
  cdouble e0 = 0.0, step = 0.0;
  double run_h = -1.0, run_end = -1.0;
  int since_refresh = 0;
  for (const Cell& c : cells) {
    if (c.h == run_h && c.t0 == run_end && since_refresh < 64) {
      e0 *= step;
      ++since_refresh;
    } else {
      e0 = std::exp(iz * z * c.t0);
      step = std::exp(iz * z * c.h);
      run_h = c.h;
      since_refresh = 0;
    }
    run_end = c.t0 + c.h;
    const auto [w0, w1, w2] = cell_weights(iz * z * c.h);
    const cdouble lin = c.f0 * w0 + c.f1 * w1;
    out.plain += c.h * e0 * lin;
    if (with_t_weight) {
      const cdouble taulin = c.f0 * (w1 - w2) + c.f1 * w2;
      out.t_weighted += c.h * e0 * (c.t0 * lin + c.h * taulin);
    }
  }
  return out;
}

// Real-line trig integrals of f over the cells, assembled from the two
// exponential marches.
struct TrigIntegrals {
  cdouble sin_i, cos_i;      // integral f sin(zt), f cos(zt)
  cdouble t_sin, t_cos;      // integral f t sin(zt), f t cos(zt)
};

inline TrigIntegrals trig_integrals(std::span<const Cell> cells, cdouble z,
                                    bool with_t_weight) {
  const ExpIntegrals ep = exp_integrals(cells, z, with_t_weight);
  const ExpIntegrals em = exp_integrals(cells, -z, with_t_weight);
  const cdouble half(0.5, 0.0);
  const cdouble half_i(0.0, -0.5);  // 1/(2i)
  TrigIntegrals out;
  out.cos_i = half * (ep.plain + em.plain);
  out.sin_i = half_i * (ep.plain - em.plain);
  out.t_cos = half * (ep.t_weighted + em.t_weighted);
  out.t_sin = half_i * (ep.t_weighted - em.t_weighted);
  return out;
}

// Cells covering [u, v] on the uniform grid of the samples, with partial
// cells at non-node endpoints (f interpolated along the segment).
std::vector<Cell> clip_cells(std::span<const cdouble> samples, double u, double v);

// Exact integral of f(t) t^m over the cells (t^m replaced by (pi-t)^m
// when reflected).
cdouble moment(std::span<const Cell> cells, int m, bool reflected);

}  // namespace fsl::detail

// Multiplier vector fields d/dt, K, G(f), H(h), their scalar profiles, and
// cut-off functions.  Null components:
//   d/dt: ( 1,  1)      K: (-w^2, -v^2)
//   G:    (-f,  f)      H: (-h/(1-mu), -h)
// The per-point MultiplierValues bundle carries the components together with
// the covariant-derivative pieces the bulk contraction needs, in groupings
// that keep the near-horizon 1/(1-mu) factors cancelled analytically where
// they cancel.
#pragma once

#include <memory>
#include <stdexcept>
#include <string>

#include "mhs/geometry.hpp"

namespace mhs {

enum class MultiplierKind { time_t, morawetz_k, radial_g, redshift_h };

// Radial profile f(r*) for G.
enum class RadialProfileKind { indicator, ramp, smooth_bump };

struct RadialProfile {
  RadialProfileKind kind = RadialProfileKind::smooth_bump;
  double lo = 0.0;      // core interval [lo, hi] in r*
  double hi = 1.0;
  double width = 0.5;   // transition width (smooth_bump)
  double value(double rstar) const;
  double derivative(double rstar) const;  // 0 for indicator (a.e.)
};

// Sharp or smooth cut-off: 1 on the core interval, 0 outside the widened
// interval, monotone C^2 transitions.
struct CutoffSpec {
  bool smooth = true;
  double lo = -1.0, hi = 1.0;
  double width = 0.5;  // transition width when smooth
  double value(double x) const;
};

// Redshift profile: h(r) = plateau (r/r1)^alpha for r <= r1 (so h(r1) =
// plateau), C^2 smoothstep descent to zero on (r1, 1.2 r1).  With
// 0 < alpha < 3 all four admissibility conditions hold strictly on r <= r1;
// a profile rising from zero at finite r* cannot satisfy mu h / r >= h'.
struct HProfile {
  double plateau = 1.0;
  double alpha = 2.0;
  double r1 = 2.3;  // must satisfy 2m < r1 and 1.2 r1 < 3m

  void validate(const BackgroundParams& bg) const;
  double value_r(double r) const;   // h as a function of r
  double derivative_r(double r) const;  // dh/dr
  // dh/dr* = (dh/dr)(1-mu)
  double derivative_rstar(double r, double lapse) const { return derivative_r(r) * lapse; }
};

struct MultiplierValues {
  double Vw = 0.0, Vv = 0.0;
  double lapseVw = 0.0;      // lapse * Vw, computed without dividing by lapse
  double lapse_dV = 0.0;     // lapse * (Vv - Vw)
  double gradWw = 0.0;       // nabla_w V^w
  double gradVv = 0.0;       // nabla_v V^v
  double gradWv = 0.0;       // nabla_w V^v
  double lapse_gradVw = 0.0; // lapse * nabla_v V^w
};

struct MultiplierSpec {
  MultiplierKind kind = MultiplierKind::time_t;
  RadialProfile f;   // radial_g
  HProfile h;        // redshift_h

  static MultiplierSpec time();
  static MultiplierSpec morawetz();
  static MultiplierSpec radial(RadialProfile f);
  static MultiplierSpec redshift(HProfile h);

  MultiplierValues at(const BackgroundParams& bg, double w, double v, double r,
                      double lapse) const;
  const char* name() const;
};

}  // namespace mhs

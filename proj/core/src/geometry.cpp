#include "mhs/geometry.hpp"

#include <cmath>

namespace mhs {

double lapse(const BackgroundParams& bg, double r) {
  if (bg.flat()) return 1.0;
  if (!(r > 2.0 * bg.m)) throw std::domain_error("lapse: r must exceed the horizon radius 2m");
  return 1.0 - 2.0 * bg.m / r;
}

double tortoise(const BackgroundParams& bg, double r) {
  if (bg.flat()) return r;
  if (!(r > 2.0 * bg.m)) throw std::domain_error("tortoise: r must exceed the horizon radius 2m");
  return r + 2.0 * bg.m * std::log(r - 2.0 * bg.m);
}

double z_from_tortoise(const BackgroundParams& bg, double rstar) {
  if (bg.flat()) return rstar;
  const double m = bg.m;
  const double tm = 2.0 * m;
  // Solve z + 2m log z = rstar - 2m for z = r - 2m; g is strictly increasing.
  const double target = rstar - tm;
  const double t = target / tm;
  if (t < -30.0) {
    // z = e^t e^{-z/2m}; one fixed-point refinement, relative error < e^t/2m.
    double z = std::exp(t);
    z = std::exp(t - z / tm);
    return z > 0.0 ? z : 5e-324;
  }
  double z;
  if (rstar > 5.0 * tm) {
    z = target;  // large r: log term subdominant
  } else {
    z = std::exp(std::min(t, 30.0));
  }
  if (!(z > 0.0)) z = 1e-300;
  bool converged = false;
  for (int it = 0; it < 100; ++it) {
    const double g = z + tm * std::log(z) - target;
    const double dg = 1.0 + tm / z;
    double z2 = z - g / dg;
    if (!(z2 > 0.0)) z2 = 0.5 * z;  // bracket: solution is positive
    if (std::abs(z2 - z) <= 1e-16 * std::max(z2, 1e-300)) {
      z = z2;
      converged = true;
      break;
    }
    z = z2;
  }
  if (!converged) {
    // The map is monotone; failure to converge indicates an internal fault.
    const double g = z + tm * std::log(z) - target;
    if (std::abs(g) > 1e-10 * std::max(1.0, std::abs(rstar)))
      throw std::runtime_error("radius_from_tortoise: Newton failed to converge");
  }
  return z;
}

double radius_from_tortoise(const BackgroundParams& bg, double rstar) {
  if (bg.flat()) return rstar;
  return z_from_tortoise(bg, rstar) + 2.0 * bg.m;
}

ChartPoint convert(const BackgroundParams& bg, const ChartPoint& p, Chart target) {
  if (p.chart == target) return p;
  // Normalize to (t, r*) first.
  double t, rstar;
  switch (p.chart) {
    case Chart::schwarzschild:
      t = p.a;
      rstar = tortoise(bg, p.b);
      break;
    case Chart::tortoise_chart:
      t = p.a;
      rstar = p.b;
      break;
    case Chart::null_ef: {
      auto [tt, rs] = from_null(p.a, p.b);
      t = tt;
      rstar = rs;
      break;
    }
    default:
      throw std::invalid_argument("convert: unknown chart");
  }
  switch (target) {
    case Chart::schwarzschild:
      return ChartPoint::schwarzschild(t, radius_from_tortoise(bg, rstar));
    case Chart::tortoise_chart:
      return ChartPoint::tortoise(t, rstar);
    case Chart::null_ef: {
      const NullPoint n = to_null(t, rstar);
      return ChartPoint::null_ef(n.w, n.v);
    }
  }
  throw std::invalid_argument("convert: unknown target chart");
}

}  // namespace mhs

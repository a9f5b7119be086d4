#include "mhs/multiplier.hpp"

#include <cmath>

namespace mhs {

namespace {
// C^2 smoothstep on [0,1].
double sstep(double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}
double sstep_d(double x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}
}  // namespace

double RadialProfile::value(double rstar) const {
  switch (kind) {
    case RadialProfileKind::indicator:
      return (rstar >= lo && rstar <= hi) ? 1.0 : 0.0;
    case RadialProfileKind::ramp:
      if (rstar <= lo) return 0.0;
      if (rstar >= hi) return 1.0;
      return (rstar - lo) / (hi - lo);
    case RadialProfileKind::smooth_bump:
      if (rstar <= lo - width || rstar >= hi + width) return 0.0;
      if (rstar < lo) return sstep((rstar - (lo - width)) / width);
      if (rstar > hi) return 1.0 - sstep((rstar - hi) / width);
      return 1.0;
  }
  return 0.0;
}

double RadialProfile::derivative(double rstar) const {
  switch (kind) {
    case RadialProfileKind::indicator:
      return 0.0;
    case RadialProfileKind::ramp:
      return (rstar > lo && rstar < hi) ? 1.0 / (hi - lo) : 0.0;
    case RadialProfileKind::smooth_bump:
      if (rstar > lo - width && rstar < lo) return sstep_d((rstar - (lo - width)) / width) / width;
      if (rstar > hi && rstar < hi + width) return -sstep_d((rstar - hi) / width) / width;
      return 0.0;
  }
  return 0.0;
}

double CutoffSpec::value(double x) const {
  if (!smooth) return (x >= lo && x <= hi) ? 1.0 : 0.0;
  if (x <= lo - width || x >= hi + width) return 0.0;
  if (x < lo) return sstep((x - (lo - width)) / width);
  if (x > hi) return 1.0 - sstep((x - hi) / width);
  return 1.0;
}

void HProfile::validate(const BackgroundParams& bg) const {
  const double m = bg.m;
  if (!(m > 0.0)) throw std::invalid_argument("h profile: requires m > 0");
  if (!(2.0 * m < r1) || !(1.2 * r1 < 3.0 * m))
    throw std::invalid_argument(
        "h profile: r1 must satisfy 2m < r1 and 1.2*r1 < 3m (support window of h)");
  if (!(alpha > 0.0) || !(alpha < 3.0))
    throw std::invalid_argument("h profile: alpha must lie in (0, 3)");
  if (!(plateau >= 0.0)) throw std::invalid_argument("h profile: plateau must be >= 0");
}

double HProfile::value_r(double r) const {
  if (r >= 1.2 * r1) return 0.0;
  const double core = plateau * std::pow(r / r1, alpha);
  if (r <= r1) return core;
  return core * (1.0 - sstep((r - r1) / (0.2 * r1)));
}

double HProfile::derivative_r(double r) const {
  if (r >= 1.2 * r1) return 0.0;
  const double core = plateau * std::pow(r / r1, alpha);
  double dh_dr = alpha * core / r;
  if (r > r1) {
    const double x = (r - r1) / (0.2 * r1);
    dh_dr = dh_dr * (1.0 - sstep(x)) - core * sstep_d(x) / (0.2 * r1);
  }
  return dh_dr;
}

MultiplierSpec MultiplierSpec::time() { return {MultiplierKind::time_t, {}, {}}; }
MultiplierSpec MultiplierSpec::morawetz() { return {MultiplierKind::morawetz_k, {}, {}}; }
MultiplierSpec MultiplierSpec::radial(RadialProfile f) {
  return {MultiplierKind::radial_g, f, {}};
}
MultiplierSpec MultiplierSpec::redshift(HProfile h) {
  return {MultiplierKind::redshift_h, {}, h};
}

const char* MultiplierSpec::name() const {
  switch (kind) {
    case MultiplierKind::time_t: return "time_t";
    case MultiplierKind::morawetz_k: return "morawetz_k";
    case MultiplierKind::radial_g: return "radial_g";
    case MultiplierKind::redshift_h: return "redshift_h";
  }
  return "?";
}

MultiplierValues MultiplierSpec::at(const BackgroundParams& bg, double w, double v, double r,
                                    double lp) const {
  const double m = bg.m;
  MultiplierValues out;
  switch (kind) {
    case MultiplierKind::time_t:
      out.Vw = 1.0;
      out.Vv = 1.0;
      out.lapseVw = lp;
      out.lapse_dV = 0.0;
      out.gradWw = -m / (r * r);
      out.gradVv = m / (r * r);
      break;
    case MultiplierKind::morawetz_k:
      out.Vw = -w * w;
      out.Vv = -v * v;
      out.lapseVw = -lp * w * w;
      out.lapse_dV = lp * (w * w - v * v);
      out.gradWw = -2.0 * w + m * w * w / (r * r);
      out.gradVv = -2.0 * v - m * v * v / (r * r);
      break;
    case MultiplierKind::radial_g: {
      const double rstar = 0.5 * (v - w);
      const double fv = f.value(rstar);
      const double fd = f.derivative(rstar);
      out.Vw = -fv;
      out.Vv = fv;
      out.lapseVw = -lp * fv;
      out.lapse_dV = 2.0 * lp * fv;
      out.gradWw = 0.5 * fd + m * fv / (r * r);
      out.gradVv = 0.5 * fd + m * fv / (r * r);
      out.gradWv = -0.5 * fd;
      out.lapse_gradVw = -0.5 * lp * fd;
      break;
    }
    case MultiplierKind::redshift_h: {
      const double hv = h.value_r(r);
      const double dh_dr = h.derivative_r(r);
      const double hd = dh_dr * lp;  // dh/dr*
      out.Vw = -hv / std::max(lp, 5e-324);
      out.Vv = -hv;
      out.lapseVw = -hv;
      out.lapse_dV = hv * (1.0 - lp);  // h mu
      out.gradWw = 0.5 * dh_dr;        // h'/(2 lapse) with the lapse cancelled
      out.gradVv = -0.5 * hd - m * hv / (r * r);
      out.gradWv = 0.5 * hd;
      out.lapse_gradVw = m * hv / (r * r) - 0.5 * hd;
      break;
    }
  }
  return out;
}

}  // namespace mhs

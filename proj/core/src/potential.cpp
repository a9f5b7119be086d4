#include "mhs/potential.hpp"

#include <cmath>
#include <stdexcept>

namespace mhs {

PotentialSpec PotentialSpec::mass(double c1) {
  PotentialSpec s;
  s.kind = PotentialKind::mass;
  s.c1 = c1;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::quartic(double c2) {
  PotentialSpec s;
  s.kind = PotentialKind::quartic;
  s.c2 = c2;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::sine_gordon(double c3, double eta) {
  PotentialSpec s;
  s.kind = PotentialKind::sine_gordon;
  s.c3 = c3;
  s.eta = eta;
  s.validate();
  return s;
}

PotentialSpec PotentialSpec::toda(double c4, double lambda) {
  PotentialSpec s;
  s.kind = PotentialKind::toda;
  s.c4 = c4;
  s.lambda = lambda;
  s.validate();
  return s;
}

void PotentialSpec::validate() const {
  switch (kind) {
    case PotentialKind::none:
      break;
    case PotentialKind::mass:
      if (c1 < 0.0) throw std::invalid_argument("potential: c1 must be >= 0");
      break;
    case PotentialKind::quartic:
      if (c2 < 0.0) throw std::invalid_argument("potential: c2 must be >= 0");
      break;
    case PotentialKind::sine_gordon:
      if (c3 < 0.0) throw std::invalid_argument("potential: c3 must be >= 0");
      break;
    case PotentialKind::toda:
      if (c4 < 0.0) throw std::invalid_argument("potential: c4 must be >= 0");
      if (!(lambda > 0.0)) throw std::invalid_argument("potential: lambda must be > 0");
      break;
  }
}

double PotentialSpec::quadratic_coefficient() const {
  switch (kind) {
    case PotentialKind::mass:
      return c1;
    case PotentialKind::sine_gordon:
      return 0.5 * c3 * eta * eta;
    default:
      return 0.0;
  }
}

const char* to_string(PotentialKind k) {
  switch (k) {
    case PotentialKind::none: return "none";
    case PotentialKind::mass: return "mass";
    case PotentialKind::quartic: return "quartic";
    case PotentialKind::sine_gordon: return "sine_gordon";
    case PotentialKind::toda: return "toda";
  }
  return "?";
}

PotentialKind potential_kind_from_string(const std::string& s) {
  if (s == "none") return PotentialKind::none;
  if (s == "mass") return PotentialKind::mass;
  if (s == "quartic") return PotentialKind::quartic;
  if (s == "sine_gordon") return PotentialKind::sine_gordon;
  if (s == "toda") return PotentialKind::toda;
  throw std::invalid_argument("unknown potential kind: " + s);
}

double potential_value(const PotentialSpec& spec, std::complex<double> phi) {
  const double a = std::abs(phi);
  switch (spec.kind) {
    case PotentialKind::none: return 0.0;
    case PotentialKind::mass: return spec.c1 * a * a;
    case PotentialKind::quartic: return spec.c2 * a * a * a * a;
    case PotentialKind::sine_gordon: return spec.c3 * (1.0 - std::cos(spec.eta * a));
    case PotentialKind::toda: return spec.c4 * std::exp(-spec.lambda * a);
  }
  return 0.0;
}

std::complex<double> potential_derivative(const PotentialSpec& spec, std::complex<double> phi) {
  const double a = std::abs(phi);
  switch (spec.kind) {
    case PotentialKind::none:
      return {0.0, 0.0};
    case PotentialKind::mass:
      return spec.c1 * phi;
    case PotentialKind::quartic:
      return 2.0 * spec.c2 * a * a * phi;
    case PotentialKind::sine_gordon: {
      if (a == 0.0) return {0.0, 0.0};
      // P'(a) phi / (2a), smooth through the origin.
      return spec.c3 * spec.eta * std::sin(spec.eta * a) / (2.0 * a) * phi;
    }
    case PotentialKind::toda: {
      if (a == 0.0) return {0.0, 0.0};  // defined limit at the kink
      return -0.5 * spec.lambda * spec.c4 * std::exp(-spec.lambda * a) / a * phi;
    }
  }
  return {0.0, 0.0};
}

bool toda_origin_evaluation(const PotentialSpec& spec, std::complex<double> phi) {
  return spec.kind == PotentialKind::toda && std::abs(phi) < 1e-12;
}

}  // namespace mhs

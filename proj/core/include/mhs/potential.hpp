// Scalar potentials: mass term, quartic, sine-Gordon and Toda, all functions
// of |phi|, plus the vanishing potential used for massless runs.
#pragma once

#include <complex>
#include <string>

namespace mhs {

enum class PotentialKind { none, mass, quartic, sine_gordon, toda };

struct PotentialSpec {
  PotentialKind kind = PotentialKind::none;
  double c1 = 0.0;      // mass:        c1 |phi|^2
  double c2 = 0.0;      // quartic:     c2 |phi|^4
  double c3 = 0.0;      // sine-Gordon: c3 (1 - cos(eta |phi|))
  double eta = 1.0;
  double c4 = 0.0;      // toda:        c4 exp(-lambda |phi|)
  double lambda = 1.0;

  static PotentialSpec none_potential() { return {}; }
  static PotentialSpec mass(double c1);
  static PotentialSpec quartic(double c2);
  static PotentialSpec sine_gordon(double c3, double eta);
  static PotentialSpec toda(double c4, double lambda);

  // Throws std::invalid_argument unless c_i >= 0 and lambda > 0 (where used).
  void validate() const;

  // Coefficient of |phi|^2 in the small-field expansion; the effective mass
  // of the linearized sector.  Toda returns 0 (the |phi| kink is handled by
  // the defined derivative limit).
  double quadratic_coefficient() const;
};

const char* to_string(PotentialKind k);
PotentialKind potential_kind_from_string(const std::string& s);

// P(|phi|).
double potential_value(const PotentialSpec& spec, std::complex<double> phi);

// Wirtinger derivative d P / d conj(phi).  For the |phi|-potentials this is
// P'(|phi|) phi / (2|phi|); the sine-Gordon and Toda values at phi = 0 are
// the defined limits (0 in both cases).
std::complex<double> potential_derivative(const PotentialSpec& spec, std::complex<double> phi);

// True when a Toda derivative was evaluated inside the nonsmooth
// neighbourhood |phi| < 1e-12 of the origin; evolution counts these.
bool toda_origin_evaluation(const PotentialSpec& spec, std::complex<double> phi);

}  // namespace mhs

// Multiplier-energy diagnostics: slice energies, boundary fluxes, bulk
// integrals, divergence-theorem residuals, admissibility checks and the
// composite energies built from them.
//
// Everything is expressed through the reduced current components
//   Jred^w = vol * sphere * (T_wv V^w + T_vv V^v)
//   Jred^v = vol * sphere * (T_ww V^w + T_wv V^v)
// with vol = r^2 (spherical sector) or 1 (mode sector).  The coordinate
// divergence theorem d_w Jred^w + d_v Jred^v = -(bulk density) is then exact
// in the continuum, which is what the residual checks converge against.
// Slice energies through t = const are int (Jred^w + Jred^v) dr*.
#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "mhs/evolution.hpp"
#include "mhs/multiplier.hpp"
#include "mhs/stress.hpp"

namespace mhs {

enum class Part { all, maxwell, scalar };

// Per-node quadratic densities consumed by the diagnostics core.
struct NodeTerms {
  double absDw2 = 0.0;   // |D_w phi|^2 (coordinate frame)
  double absDv2 = 0.0;   // |D_v phi|^2
  double cross = 0.0;    // Re(D_v phi conj(D_w phi))
  double pot = 0.0;      // P (nonlinear) or V_{s,l} |psi|^2 (mode)
  double F2 = 0.0;       // F_hat^2
  double potgrad_r = 0.0;  // (dV_{s,l}/dr) |psi|^2, mode sector only
};

// Read-only field adapter: nonlinear history, mode history, or a
// time-commuted view of either.
class DiagField {
 public:
  virtual ~DiagField() = default;
  virtual const NullGrid& grid() const = 0;
  virtual const BackgroundParams& background() const = 0;
  virtual NodeTerms terms(int i, int j, Part p) const = 0;
  virtual double volume(double r) const = 0;
  virtual double sphere_weight() const = 0;
  virtual bool spherical_sector() const = 0;
  // Eigenvalue sum of one angular commutation: l(l+1) for modes, 0 for the
  // spherically symmetric sector.
  virtual double angular_factor() const = 0;
};

std::unique_ptr<DiagField> make_field(const FieldHistory& h);
std::unique_ptr<DiagField> make_field(const ModeHistory& h);
// View whose samples are the centered time derivative of the underlying
// history (one-sided second order at the diagonal edges).
std::unique_ptr<DiagField> make_time_commuted(const FieldHistory& h);
std::unique_ptr<DiagField> make_time_commuted(const ModeHistory& h);

struct TimeSlice {
  double t;
};
struct WSegment {
  double w;
  double v_lo, v_hi;
};
struct VSegment {
  double v;
  double w_lo, w_hi;
};
using Slice = std::variant<TimeSlice, WSegment, VSegment>;

struct SliceResult {
  double value = 0.0;       // signed flux (future normal on t slices,
                            // +w / +v coordinate normal on segments)
  double rstar_lo = 0.0, rstar_hi = 0.0;
  bool truncated = false;   // requested domain clipped to the grid
  double snapped = 0.0;     // actual slice coordinate used
};

// Flux of the multiplier current through a slice.  r* window applies to
// t slices; pass the full grid range for untruncated integrals.
SliceResult slice_energy(const DiagField& f, const MultiplierSpec& V, const Slice& s,
                         double rstar_lo, double rstar_hi, Part part = Part::all);

struct NullRect {
  double w_lo, w_hi, v_lo, v_hi;
};
struct TimeSlab {
  double t_lo, t_hi;
  double rstar_lo, rstar_hi;
};
using Region = std::variant<NullRect, TimeSlab>;

// Quadrature of the bulk density -(d_w Jred^w + d_v Jred^v), i.e. the
// deformation contraction T^{ab} pi_ab(V) with the true volume element.
double bulk_integral(const DiagField& f, const MultiplierSpec& V, const Region& region,
                     Part part = Part::all);

struct DivergenceResult {
  double residual = 0.0;  // |bulk + net outward flux|
  double bulk = 0.0;
  double flux = 0.0;
  double scale = 0.0;  // magnitude scale of the flux terms, for context
};
DivergenceResult divergence_residual(const DiagField& f, const MultiplierSpec& V,
                                     const NullRect& rect, Part part = Part::all);

// ---- admissibility of the redshift profile -------------------------------
struct HAdmissibility {
  bool h_nonneg = false;        // h >= 0
  bool hprime_nonneg = false;   // h' >= 0
  bool mu_condition = false;    // mu h / r - h' >= 0
  bool radial_condition = false;  // 3 h / r - h'/(1-mu) >= 0
  bool support_ok = false;      // support within [2m, 1.2 r1]
  double margin[4] = {0, 0, 0, 0};  // worst margins of the four conditions
  bool all() const {
    return h_nonneg && hprime_nonneg && mu_condition && radial_condition && support_ok;
  }
};

// Conditions sampled densely on r <= r1 down to lapse = lapse_floor.
// Throws when r1 violates 2m < r1 and 1.2 r1 < 3m.
HAdmissibility check_h_admissible(const HProfile& h, const BackgroundParams& bg,
                                  double lapse_floor = 1e-6, int samples = 4096);
// Generic profile given as h(r*) and h'(r*).
HAdmissibility check_h_admissible(const std::function<double(double)>& h_rstar,
                                  const std::function<double(double)>& hprime_rstar,
                                  const BackgroundParams& bg, double r1,
                                  double rstar_lo, double rstar_hi, int samples = 4096);

// The Morawetz bulk carries the closed-form radial factor
//   4 + 2 (3 mu - 2) r*/r
// multiplying its middle-component terms; it is positive exactly on a
// bounded interval (r0, R0) with r0 > 2m and R0 > 3m.
double morawetz_sign_factor(const BackgroundParams& bg, double rstar);
// Roots bracketing the positivity interval, found by bisection.
std::pair<double, double> morawetz_positive_interval(const BackgroundParams& bg,
                                                     double rstar_lo = -60.0,
                                                     double rstar_hi = 1e4);

// ---- energy report --------------------------------------------------------
struct EnergyEntry {
  std::string functional;
  std::string domain;
  double t = 0.0;
  int time_comm = 0;
  int ang_comm = 0;
  double rstar_lo = 0.0, rstar_hi = 0.0;
  bool truncated = false;
  double value = 0.0;
};

struct EnergyReport {
  std::vector<EnergyEntry> entries;
  void add(EnergyEntry e) { entries.push_back(std::move(e)); }
  // Throws when the constituent is missing.
  double get(const std::string& functional, int time_comm = 0, int ang_comm = 0) const;
  bool has(const std::string& functional, int time_comm = 0, int ang_comm = 0) const;
};

// ---- composite energies ----------------------------------------------------
// Weighted sums over the commutation ladders; one angular commutation
// multiplies a quadratic energy by angular_factor (the commutation policy).
double composite_E_MH_hat(double Et0, double Et1, double EK0, double EK1, double angfac);
double composite_E_MH(double Et, double EK, double angfac);
double composite_E1(double Et_F, double EK_F, double Esharp_F, double angfac);
double composite_E2(double Et_F, double Esharp_F_t0, double Esharp_F_t1, double angfac);
double composite_E3(double Et, double Esharp, double E_MH, double angfac);
double composite_E4(double E3, double w, double v, PotentialKind kind);

enum class CompositeKind { E_MH, E_MH_hat, E1, E2, E3, E4 };
// Assembles a composite from report entries; throws on missing constituents.
double composite_energy(const EnergyReport& rep, CompositeKind kind, double angfac,
                        PotentialKind pot = PotentialKind::none, double w = 0.0, double v = 0.0);

// Special slice integrands used by the report machinery.
double reduced_energy_slice(const DiagField& f, double t, double rstar_lo, double rstar_hi,
                            SliceResult* meta = nullptr);
double sharp_energy_slice(const DiagField& f, double t, double rstar_lo, double rstar_hi,
                          Part part = Part::all, SliceResult* meta = nullptr);

}  // namespace mhs

// Characteristic evolution of the spherically symmetric Maxwell-Higgs sector
// and of linear fixed-multipole master equations on the double-null grid.
//
// Gauge: A_w == 0 everywhere and A_v free on the outgoing ray w = w0 (zero
// unless a residual gauge twist chi(v) is requested).  The Maxwell sector is
// carried by the charge function Q with F_vw = (1-mu) Q / (2 r^2); Q is
// updated by the ingoing Gauss law
//     d_v Q = -2 r^2 Im(conj(phi) D_v phi)
// and the outgoing component d_w Q = +2 r^2 Im(conj(phi) D_w phi) is the
// monitored constraint residual.  This source orientation is the one for
// which the stress tensor of the system is divergence-free; positive Q gives
// positive F_vw r^2/(1-mu).
#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "mhs/fields.hpp"
#include "mhs/grid.hpp"
#include "mhs/potential.hpp"

namespace mhs {

enum class ProfileKind { zero, gaussian, compact_bump };

// Scalar data on the generating rays: profile(v) on w = w0, constant
// profile(v0) on v = v0.  phase_k twists the profile by e^{i k v}; the
// residual gauge twist chi(v) = twist_amplitude sin(twist_k (v - v0))
// produces a gauge-equivalent data set for invariance checks.
struct InitialData {
  ProfileKind profile = ProfileKind::gaussian;
  double amplitude = 1e-2;
  double center = 12.0;
  double width = 3.0;
  double phase_k = 0.0;
  double Q0 = 0.0;
  double twist_amplitude = 0.0;
  double twist_k = 1.0;

  cplx profile_value(double v) const;
  double chi(double v, double v0) const;
  double dchi(double v, double v0) const;
};

struct ModeSpec {
  int s = 0;        // spin, 0 or 1
  int ell = 0;      // multipole, >= s
  PotentialSpec potential;  // s = 1 carries none

  void validate() const;
  // V_{s,l}(r) = l(l+1)/r^2 + (1-s^2) 2m/r^3 plus the potential's quadratic
  // coefficient; the master equation is  d_w d_v psi = -((1-mu)/4) V psi.
  double master_potential(double r, double m) const;
  double master_potential_dr(double r, double m) const;
};

struct CellSources {
  cplx S_phi{0.0, 0.0};
  double S_A = 0.0;
  double S_Q = 0.0;
};
// Evaluated at the cell center (wc, vc); used by manufactured-solution runs.
using SourceFn = std::function<CellSources(double wc, double vc)>;

struct EvolveOptions {
  int corrector_passes = 3;
  double min_lapse = 1e-6;   // rows with smaller lapse are clipped + reported
  double fault_injection = 0.0;  // test hook: adds O(delta^3) per-cell error
  SourceFn sources;          // empty = homogeneous equations
};

struct EvolveStats {
  double max_gauss_residual = 0.0;      // outgoing Gauss component, cell centers
  double max_covariant_residual = 0.0;  // scalar wave equation
  double max_maxwell_residual = 0.0;    // F = (1-mu)Q/2r^2 vs d_w A_v
  long toda_origin_evals = 0;
  int clipped_rows = 0;
};

// Constraint-consistent data on the two generating rays.
struct Rays {
  std::vector<cplx> phi_out, phi_in;   // w = w0 (size nv), v = v0 (size nw)
  std::vector<double> Av_out, Av_in;
  std::vector<double> Q_out, Q_in;
};

struct CellState {
  cplx phi{0.0, 0.0};
  double A_v = 0.0;
  double Q = 0.0;
};

// Geometry of one null cell.
struct DiamondGeom {
  double wc, vc;        // cell center
  double r_c, lapse_c;  // center (same diagonal as SW and NE)
  double r_north;       // midpoint of NW-NE edge
  double r_east, lapse_east;  // midpoint of SE-NE edge
};

class evolution_error : public std::runtime_error {
 public:
  evolution_error(const std::string& msg, int i, int j)
      : std::runtime_error(msg + " at cell (" + std::to_string(i) + "," + std::to_string(j) + ")"),
        cell_i(i), cell_j(j) {}
  int cell_i, cell_j;
};

// Advance one null cell: given the SW, SE, NW corners, produce NE so that the
// discretized field equations hold with local truncation O(delta^3).
CellState step_diamond(const CellState& SW, const CellState& SE, const CellState& NW,
                       const DiamondGeom& geom, const PotentialSpec& pot, double delta,
                       int corrector_passes = 3, const CellSources* src = nullptr,
                       long* toda_flags = nullptr);

class FieldHistory {
 public:
  FieldHistory(NullGrid grid, PotentialSpec pot);

  const NullGrid& grid() const { return grid_; }
  const PotentialSpec& potential() const { return pot_; }
  const EvolveStats& stats() const { return stats_; }

  cplx phi(int i, int j) const { return phi_[grid_.index(i, j)]; }
  double A_v(int i, int j) const { return Av_[grid_.index(i, j)]; }
  double charge(int i, int j) const { return Q_[grid_.index(i, j)]; }
  double F_hat(int i, int j) const {  // F_vw/(1-mu) = Q/(2 r^2)
    const double r = grid_.r_node(i, j);
    return Q_[grid_.index(i, j)] / (2.0 * r * r);
  }

  // Full sample with hatted covariant derivatives from second-order stencils
  // (centered interior, one-sided at edges).
  FieldSample sample(int i, int j) const;
  cplx Dw(int i, int j) const;  // coordinate-frame covariant derivatives
  cplx Dv(int i, int j) const;

  std::vector<cplx>& raw_phi() { return phi_; }
  std::vector<double>& raw_Av() { return Av_; }
  std::vector<double>& raw_Q() { return Q_; }
  const std::vector<cplx>& raw_phi() const { return phi_; }
  const std::vector<double>& raw_Av() const { return Av_; }
  const std::vector<double>& raw_Q() const { return Q_; }
  EvolveStats& stats() { return stats_; }

 private:
  NullGrid grid_;
  PotentialSpec pot_;
  EvolveStats stats_;
  std::vector<cplx> phi_;
  std::vector<double> Av_, Q_;
};

// Build constraint-consistent rays; Gauss residual O(delta^2) at start.
// Throws std::invalid_argument when the profile support leaks outside the
// rays or the Gauss integration produces non-finite values.
Rays initialize(const NullGrid& grid, const InitialData& data, const PotentialSpec& pot);

// Sweep step_diamond over the rectangle.  Residual maxima are recorded in
// the history stats.
FieldHistory evolve(const BackgroundParams& bg, const GridSpec& grid, const InitialData& data,
                    const PotentialSpec& pot, const EvolveOptions& opt = {});
FieldHistory evolve(const BackgroundParams& bg, const GridSpec& grid, const Rays& rays,
                    const PotentialSpec& pot, const EvolveOptions& opt = {});

class ModeHistory {
 public:
  ModeHistory(NullGrid grid, ModeSpec mode);
  const NullGrid& grid() const { return grid_; }
  const ModeSpec& mode() const { return mode_; }
  cplx psi(int i, int j) const { return psi_[grid_.index(i, j)]; }
  std::vector<cplx>& raw_psi() { return psi_; }
  const std::vector<cplx>& raw_psi() const { return psi_; }
  double max_residual = 0.0;  // master-equation residual at cell centers

 private:
  NullGrid grid_;
  ModeSpec mode_;
  std::vector<cplx> psi_;
};

ModeHistory evolve_mode(const BackgroundParams& bg, const GridSpec& grid, const ModeSpec& mode,
                        const InitialData& data, const EvolveOptions& opt = {});
ModeHistory evolve_mode(const BackgroundParams& bg, const GridSpec& grid, const ModeSpec& mode,
                        const std::vector<cplx>& psi_out, const std::vector<cplx>& psi_in,
                        const EvolveOptions& opt = {});

// Streaming evolution keeping two rows; returns the trace along the diagonal
// j - i = trace_offset as (w, v, psi) triples.  Memory O(nv).
struct TracePoint {
  double w, v;
  cplx value;
};
std::vector<TracePoint> evolve_mode_trace(const BackgroundParams& bg, const GridSpec& grid,
                                          const ModeSpec& mode, const InitialData& data,
                                          int trace_offset, const EvolveOptions& opt = {});

// Outgoing Gauss-law residual d_w Q - 2 r^2 Im(conj phi D_w phi) at cell
// centers: maximum and per-t-band maxima (band = cell diagonal i + j).
struct ResidualReport {
  double max = 0.0;
  std::vector<double> per_band;
};
ResidualReport gauss_residual(const FieldHistory& h);
ResidualReport covariant_residual(const FieldHistory& h, const SourceFn& sources = {});
ResidualReport maxwell_residual(const FieldHistory& h, const SourceFn& sources = {});
double mode_residual(const ModeHistory& h);

}  // namespace mhs

// Run orchestration: evolve -> diagnose -> fit pipelines, the per-run
// invariant suite, and Richardson convergence studies.
#pragma once

#include <string>
#include <vector>

#include "mhs/config.hpp"
#include "mhs/diagnostics.hpp"
#include "mhs/io.hpp"

namespace mhs {

struct InvariantOutcome {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  std::string detail;
};

struct RunResult {
  std::string history_path;
  std::string diagnostics_path;
  std::string fits_path;
  std::string summary_path;
  std::vector<InvariantOutcome> invariants;
  EnergyReport report;
  bool passed() const {
    for (const auto& i : invariants)
      if (!i.pass) return false;
    return true;
  }
};

// Standard diagnostics for a history: slice energies on the t_i = 1.1^i t0
// ladder (time commutations 0 and 1, Maxwell-restricted variants), the
// composite energies at t0, and the slab/rectangle bulk integrals.
EnergyReport diagnose(const DiagField& field, const RunConfig& cfg);

// Divergence residuals for the multiplier family over a centered rectangle
// occupying the middle `fraction` of each grid direction, snapped to the
// coarsest level so refinement studies compare identical regions.
struct MultiplierResiduals {
  double time_t = 0.0, morawetz = 0.0, radial = 0.0, redshift = 0.0;
  double killing_bulk = 0.0;
  NullRect rect{};
};
MultiplierResiduals multiplier_residuals(const DiagField& field, const RunConfig& cfg,
                                         double fraction = 0.6, double snap_delta = 0.0);

// Full pipeline; artifacts land in out_dir (created if missing).
RunResult run(const RunConfig& cfg, const ConfigText& text, const std::string& out_dir);

struct ConvergenceEntry {
  std::string name;
  std::vector<double> values;  // per level, coarsest first
  double order = 0.0;          // least-squares slope of log value vs log delta
  bool applicable = true;      // false when the diagnostic is numerically zero
};

struct ConvergenceReport {
  std::vector<double> deltas;
  std::vector<ConvergenceEntry> entries;
  const ConvergenceEntry& get(const std::string& name) const;
};

ConvergenceReport convergence(const RunConfig& cfg, int levels = 3);

double fitted_order(const std::vector<double>& deltas, const std::vector<double>& values);

}  // namespace mhs

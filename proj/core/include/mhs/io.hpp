// Serialization: histories as an NDJSON header plus CSV body, diagnostics
// and fit reports as NDJSON, series as two-column CSV.  All numbers use the
// shortest round-trip decimal representation so identical runs are
// byte-identical.
#pragma once

#include <iosfwd>
#include <string>
#include <variant>

#include "mhs/config.hpp"
#include "mhs/decay.hpp"
#include "mhs/diagnostics.hpp"
#include "mhs/evolution.hpp"

namespace mhs {

std::string format_double(double x);  // shortest round-trip

// History container: two NDJSON lines (format tag, then grid/params/stats
// with the config hash), a CSV header, then one row per node:
//   w,v,r,Re(phi),Im(phi),Q,Re(Dw_phi),Im(Dw_phi),Re(Dv_phi),Im(Dv_phi),F_vw
// Mode histories use the same columns with psi in the phi slots and zero
// gauge/charge columns; the header line carries the sector tag.
void write_history(std::ostream& os, const FieldHistory& h, const std::string& config_hash);
void write_history(std::ostream& os, const ModeHistory& h, const std::string& config_hash);
void write_history_file(const std::string& path, const FieldHistory& h,
                        const std::string& config_hash);
void write_history_file(const std::string& path, const ModeHistory& h,
                        const std::string& config_hash);

struct LoadedHistory {
  Sector sector = Sector::nonlinear;
  BackgroundParams background;
  GridSpec grid;
  ModeSpec mode;
  PotentialSpec potential;
  double min_lapse = 0.0;
  std::string config_hash;
  // Reconstructed histories (one of the two is populated).
  std::optional<FieldHistory> field;
  std::optional<ModeHistory> mode_history;
};

LoadedHistory read_history_file(const std::string& path);

void write_energy_report(std::ostream& os, const EnergyReport& rep);
void append_fit_report(std::ostream& os, const std::string& curve, const std::string& quantity,
                       const DecayFit& fit, const EnvelopeResult* env = nullptr,
                       const char* env_kind = nullptr);
void write_series_csv(std::ostream& os, const TimeSeries& s);

}  // namespace mhs

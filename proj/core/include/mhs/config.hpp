// Flat ordered key-value run configuration with dotted keys, and its
// validated RunConfig form.  Identical configs hash identically and produce
// byte-identical outputs.
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mhs/decay.hpp"
#include "mhs/evolution.hpp"
#include "mhs/multiplier.hpp"

namespace mhs {

class config_error : public std::runtime_error {
 public:
  config_error(const std::string& msg, int line = 0)
      : std::runtime_error(line > 0 ? "config line " + std::to_string(line) + ": " + msg : msg),
        line_number(line) {}
  int line_number;
};

enum class Sector { nonlinear, mode };

struct CurveRequest {
  CurveSpec curve;
  TraceQuantity quantity = TraceQuantity::abs_phi;
};

struct RunConfig {
  BackgroundParams background;
  GridSpec grid;
  Sector sector = Sector::nonlinear;
  ModeSpec mode;
  PotentialSpec potential;
  InitialData init;
  EvolveOptions evolution;
  RadialProfile f_profile{RadialProfileKind::smooth_bump, 0.0, 10.0, 2.0};
  HProfile h_profile;
  bool h_diagnostics = false;  // evaluate the H family (validates r1 window)
  double t0 = 16.0;            // base of the t_i = 1.1^i t0 ladder
  int ladder_steps = 4;
  double rstar_lo = -1e300, rstar_hi = 1e300;  // slice-energy domain
  double e4_w = 0.0, e4_v = 0.0;               // evaluation point of E4 (0,0 = grid corner)
  std::vector<CurveRequest> curves;
  double fit_window_fraction = 0.5;
  int fit_exclude_tail = 5;
  std::string maxima_envelope_mode = "auto";  // auto | on | off
  std::string output_dir = "out";
  std::string run_id;  // defaults to the config hash

  // Validates cross-field constraints (h window, mode sanity, ...).
  void validate() const;
};

// Raw ordered key-value view (kept for hashing and diffing).
struct ConfigText {
  std::vector<std::pair<std::string, std::string>> items;
  std::string canonical() const;
  uint64_t hash() const;  // FNV-1a over the canonical form
  std::string hash_hex() const;
};

// Parse "key = value" lines ('#' comments); duplicate keys, malformed lines
// and unknown keys are errors carrying the line number.
ConfigText parse_config_text(const std::string& text);
RunConfig config_from_text(const ConfigText& text);
RunConfig load_config(const std::string& text);
RunConfig load_config_file(const std::string& path);

// The full default configuration as ordered key-value pairs (documentation
// and determinism aid).
ConfigText default_config_text();

}  // namespace mhs

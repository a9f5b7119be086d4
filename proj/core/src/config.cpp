#include "mhs/config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mhs {

void RunConfig::validate() const {
  grid.validate();
  potential.validate();
  if (sector == Sector::mode) mode.validate();
  if (h_diagnostics) h_profile.validate(background);
  if (background.m < 0.0) throw config_error("background.m must be >= 0");
  if (!(t0 > 0.0)) throw config_error("diagnostics.t0 must be positive");
  if (ladder_steps < 1) throw config_error("diagnostics.ladder_steps must be >= 1");
  if (evolution.corrector_passes < 1) throw config_error("evolution.corrector_passes must be >= 1");
  if (!(fit_window_fraction > 0.0) || fit_window_fraction > 1.0)
    throw config_error("fit.window_fraction must lie in (0, 1]");
  if (fit_exclude_tail < 0) throw config_error("fit.exclude_tail must be >= 0");
  if (maxima_envelope_mode != "auto" && maxima_envelope_mode != "on" &&
      maxima_envelope_mode != "off")
    throw config_error("fit.maxima_envelope must be auto, on or off");
}

std::string ConfigText::canonical() const {
  std::string out;
  for (const auto& [k, v] : items) {
    out += k;
    out += " = ";
    out += v;
    out += '\n';
  }
  return out;
}

uint64_t ConfigText::hash() const {
  const std::string c = canonical();
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : c) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

std::string ConfigText::hash_hex() const {
  char buf[17];
  snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash()));
  return buf;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  size_t b = s.find_last_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, b - a + 1);
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "' expects a number, got '" + v + "'", line);
  }
}

int parse_int(const std::string& v, const std::string& key, int line) {
  try {
    size_t pos = 0;
    const int d = std::stoi(v, &pos);
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return d;
  } catch (const std::exception&) {
    throw config_error("key '" + key + "' expects an integer, got '" + v + "'", line);
  }
}

CurveRequest parse_curve(const std::string& v, int line) {
  // "<kind>:<param>:<quantity>" with param/quantity optional, e.g.
  // "r_const:4.0:abs_phi" or "horizon_proxy".
  CurveRequest req;
  std::vector<std::string> parts;
  std::stringstream ss(v);
  std::string tok;
  while (std::getline(ss, tok, ':')) parts.push_back(trim(tok));
  if (parts.empty()) throw config_error("empty curve spec", line);
  if (parts[0] == "r_const") req.curve.kind = CurveKind::r_const;
  else if (parts[0] == "w_const") req.curve.kind = CurveKind::w_const;
  else if (parts[0] == "v_const") req.curve.kind = CurveKind::v_const;
  else if (parts[0] == "horizon_proxy") req.curve.kind = CurveKind::horizon_proxy;
  else throw config_error("unknown curve kind '" + parts[0] + "'", line);
  size_t next = 1;
  if (req.curve.kind != CurveKind::horizon_proxy) {
    if (parts.size() < 2) throw config_error("curve '" + parts[0] + "' needs a parameter", line);
    req.curve.parameter = parse_double(parts[1], "curve", line);
    next = 2;
  }
  if (parts.size() > next) req.quantity = trace_quantity_from_string(parts[next]);
  return req;
}

}  // namespace

ConfigText parse_config_text(const std::string& text) {
  ConfigText out;
  std::set<std::string> seen;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const size_t hash_pos = raw.find('#');
    if (hash_pos != std::string::npos) raw = raw.substr(0, hash_pos);
    const std::string s = trim(raw);
    if (s.empty()) continue;
    const size_t eq = s.find('=');
    if (eq == std::string::npos) throw config_error("expected 'key = value': '" + s + "'", line);
    const std::string key = trim(s.substr(0, eq));
    const std::string val = trim(s.substr(eq + 1));
    if (key.empty()) throw config_error("empty key", line);
    if (!seen.insert(key).second) throw config_error("duplicate key '" + key + "'", line);
    out.items.emplace_back(key, val);
  }
  return out;
}

RunConfig config_from_text(const ConfigText& text) {
  RunConfig cfg;
  int line = 0;
  std::vector<std::pair<int, CurveRequest>> curves;
  for (const auto& [key, val] : text.items) {
    ++line;
    if (key == "background.m") cfg.background.m = parse_double(val, key, line);
    else if (key == "grid.w0") cfg.grid.w0 = parse_double(val, key, line);
    else if (key == "grid.w1") cfg.grid.w1 = parse_double(val, key, line);
    else if (key == "grid.v0") cfg.grid.v0 = parse_double(val, key, line);
    else if (key == "grid.v1") cfg.grid.v1 = parse_double(val, key, line);
    else if (key == "grid.delta") cfg.grid.delta = parse_double(val, key, line);
    else if (key == "sector") {
      if (val == "nonlinear") cfg.sector = Sector::nonlinear;
      else if (val == "mode") cfg.sector = Sector::mode;
      else throw config_error("sector must be nonlinear or mode", line);
    } else if (key == "mode.s") cfg.mode.s = parse_int(val, key, line);
    else if (key == "mode.ell") cfg.mode.ell = parse_int(val, key, line);
    else if (key == "potential.kind") cfg.potential.kind = potential_kind_from_string(val);
    else if (key == "potential.c1") cfg.potential.c1 = parse_double(val, key, line);
    else if (key == "potential.c2") cfg.potential.c2 = parse_double(val, key, line);
    else if (key == "potential.c3") cfg.potential.c3 = parse_double(val, key, line);
    else if (key == "potential.eta") cfg.potential.eta = parse_double(val, key, line);
    else if (key == "potential.c4") cfg.potential.c4 = parse_double(val, key, line);
    else if (key == "potential.lambda") cfg.potential.lambda = parse_double(val, key, line);
    else if (key == "init.profile") {
      if (val == "zero") cfg.init.profile = ProfileKind::zero;
      else if (val == "gaussian") cfg.init.profile = ProfileKind::gaussian;
      else if (val == "compact_bump") cfg.init.profile = ProfileKind::compact_bump;
      else throw config_error("init.profile must be zero, gaussian or compact_bump", line);
    } else if (key == "init.amplitude") cfg.init.amplitude = parse_double(val, key, line);
    else if (key == "init.center") cfg.init.center = parse_double(val, key, line);
    else if (key == "init.width") cfg.init.width = parse_double(val, key, line);
    else if (key == "init.phase_k") cfg.init.phase_k = parse_double(val, key, line);
    else if (key == "init.q0") cfg.init.Q0 = parse_double(val, key, line);
    else if (key == "init.gauge_twist.amplitude")
      cfg.init.twist_amplitude = parse_double(val, key, line);
    else if (key == "init.gauge_twist.k") cfg.init.twist_k = parse_double(val, key, line);
    else if (key == "evolution.corrector_passes")
      cfg.evolution.corrector_passes = parse_int(val, key, line);
    else if (key == "evolution.min_lapse") cfg.evolution.min_lapse = parse_double(val, key, line);
    else if (key == "evolution.fault_injection")
      cfg.evolution.fault_injection = parse_double(val, key, line);
    else if (key == "multiplier.f.kind") {
      if (val == "indicator") cfg.f_profile.kind = RadialProfileKind::indicator;
      else if (val == "ramp") cfg.f_profile.kind = RadialProfileKind::ramp;
      else if (val == "smooth_bump") cfg.f_profile.kind = RadialProfileKind::smooth_bump;
      else throw config_error("multiplier.f.kind must be indicator, ramp or smooth_bump", line);
    } else if (key == "multiplier.f.lo") cfg.f_profile.lo = parse_double(val, key, line);
    else if (key == "multiplier.f.hi") cfg.f_profile.hi = parse_double(val, key, line);
    else if (key == "multiplier.f.width") cfg.f_profile.width = parse_double(val, key, line);
    else if (key == "multiplier.h.plateau") cfg.h_profile.plateau = parse_double(val, key, line);
    else if (key == "multiplier.h.alpha") cfg.h_profile.alpha = parse_double(val, key, line);
    else if (key == "multiplier.h.r1") cfg.h_profile.r1 = parse_double(val, key, line);
    else if (key == "diagnostics.h_family") {
      if (val == "true" || val == "1") cfg.h_diagnostics = true;
      else if (val == "false" || val == "0") cfg.h_diagnostics = false;
      else throw config_error("diagnostics.h_family must be boolean", line);
    } else if (key == "diagnostics.t0") cfg.t0 = parse_double(val, key, line);
    else if (key == "diagnostics.ladder_steps") cfg.ladder_steps = parse_int(val, key, line);
    else if (key == "diagnostics.rstar_lo") cfg.rstar_lo = parse_double(val, key, line);
    else if (key == "diagnostics.rstar_hi") cfg.rstar_hi = parse_double(val, key, line);
    else if (key == "diagnostics.e4.w") cfg.e4_w = parse_double(val, key, line);
    else if (key == "diagnostics.e4.v") cfg.e4_v = parse_double(val, key, line);
    else if (key == "fit.window_fraction") cfg.fit_window_fraction = parse_double(val, key, line);
    else if (key == "fit.exclude_tail") cfg.fit_exclude_tail = parse_int(val, key, line);
    else if (key == "fit.maxima_envelope") cfg.maxima_envelope_mode = val;
    else if (key == "output.dir") cfg.output_dir = val;
    else if (key == "run.id") cfg.run_id = val;
    else if (key.rfind("curve.", 0) == 0) curves.emplace_back(line, parse_curve(val, line));
    else throw config_error("unknown key '" + key + "'", line);
  }
  for (auto& [ln, c] : curves) cfg.curves.push_back(c);
  if (cfg.run_id.empty()) cfg.run_id = text.hash_hex();
  // Named constraint checks with the reason spelled out.
  if (cfg.h_diagnostics) {
    const double m = cfg.background.m;
    if (!(2.0 * m < cfg.h_profile.r1) || !(1.2 * cfg.h_profile.r1 < 3.0 * m))
      throw config_error("multiplier.h.r1 violates the h support window: need 2m < r1 and "
                         "1.2*r1 < 3m");
  }
  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::string& text) { return config_from_text(parse_config_text(text)); }

RunConfig load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw config_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_config(ss.str());
}

ConfigText default_config_text() {
  ConfigText t;
  auto add = [&](const char* k, const char* v) { t.items.emplace_back(k, v); };
  add("background.m", "1.0");
  add("grid.w0", "0");
  add("grid.w1", "32");
  add("grid.v0", "0");
  add("grid.v1", "32");
  add("grid.delta", "0.0625");
  add("sector", "nonlinear");
  add("mode.s", "0");
  add("mode.ell", "0");
  add("potential.kind", "none");
  add("init.profile", "gaussian");
  add("init.amplitude", "0.01");
  add("init.center", "12");
  add("init.width", "3");
  add("init.phase_k", "0");
  add("init.q0", "0");
  add("evolution.corrector_passes", "3");
  add("evolution.min_lapse", "1e-6");
  add("multiplier.f.kind", "smooth_bump");
  add("multiplier.f.lo", "0");
  add("multiplier.f.hi", "10");
  add("multiplier.f.width", "2");
  add("multiplier.h.plateau", "1");
  add("multiplier.h.alpha", "2");
  add("multiplier.h.r1", "2.3");
  add("diagnostics.h_family", "false");
  add("diagnostics.t0", "16");
  add("diagnostics.ladder_steps", "4");
  add("fit.window_fraction", "0.5");
  add("fit.exclude_tail", "5");
  add("fit.maxima_envelope", "auto");
  add("output.dir", "out");
  return t;
}

}  // namespace mhs

#include "mhs/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace mhs {

using ojson = nlohmann::ordered_json;

std::string format_double(double x) {
  if (x == 0.0) return "0";  // normalize -0
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

namespace {

void write_header(std::ostream& os, const NullGrid& g, Sector sector, const ModeSpec* mode,
                  const PotentialSpec* pot, const EvolveStats* stats,
                  const std::string& config_hash, const std::vector<double>* gauge_ray) {
  os << "{\"format\":\"mhs-history\",\"version\":1}\n";
  ojson meta;
  meta["sector"] = sector == Sector::nonlinear ? "nonlinear" : "mode";
  meta["background"] = {{"m", g.background().m}};
  meta["grid"] = {{"w0", g.spec().w0}, {"w1", g.spec().w1}, {"v0", g.spec().v0},
                  {"v1", g.spec().v1}, {"delta", g.spec().delta}};
  meta["min_lapse"] = g.min_lapse();
  meta["clipped_rows"] = g.clipped_rows();
  if (gauge_ray) meta["gauge_ray_Av"] = *gauge_ray;  // A_v on the w = w0 ray
  if (mode) meta["mode"] = {{"s", mode->s}, {"ell", mode->ell}};
  if (pot) {
    ojson pj;
    pj["kind"] = to_string(pot->kind);
    switch (pot->kind) {
      case PotentialKind::mass: pj["c1"] = pot->c1; break;
      case PotentialKind::quartic: pj["c2"] = pot->c2; break;
      case PotentialKind::sine_gordon:
        pj["c3"] = pot->c3;
        pj["eta"] = pot->eta;
        break;
      case PotentialKind::toda:
        pj["c4"] = pot->c4;
        pj["lambda"] = pot->lambda;
        break;
      case PotentialKind::none: break;
    }
    meta["potential"] = pj;
  }
  if (stats) {
    meta["stats"] = {{"max_gauss_residual", stats->max_gauss_residual},
                     {"max_covariant_residual", stats->max_covariant_residual},
                     {"max_maxwell_residual", stats->max_maxwell_residual},
                     {"toda_origin_evals", stats->toda_origin_evals}};
  }
  meta["config_hash"] = config_hash;
  os << meta.dump() << "\n";
  os << "w,v,r,Re(phi),Im(phi),Q,Re(Dw_phi),Im(Dw_phi),Re(Dv_phi),Im(Dv_phi),F_vw\n";
}

void write_row(std::ostream& os, double w, double v, double r, cplx phi, double Q, cplx Dw,
               cplx Dv, double F_vw) {
  os << format_double(w) << ',' << format_double(v) << ',' << format_double(r) << ','
     << format_double(phi.real()) << ',' << format_double(phi.imag()) << ','
     << format_double(Q) << ',' << format_double(Dw.real()) << ',' << format_double(Dw.imag())
     << ',' << format_double(Dv.real()) << ',' << format_double(Dv.imag()) << ','
     << format_double(F_vw) << '\n';
}

}  // namespace

void write_history(std::ostream& os, const FieldHistory& h, const std::string& config_hash) {
  const NullGrid& g = h.grid();
  std::vector<double> gauge_ray(g.nv());
  for (int j = 0; j < g.nv(); ++j) gauge_ray[j] = h.A_v(0, j);
  write_header(os, g, Sector::nonlinear, nullptr, &h.potential(), &h.stats(), config_hash,
               &gauge_ray);
  for (int i = 0; i < g.nw(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      const double lp = g.lapse_node(i, j);
      write_row(os, g.w(i), g.v(j), g.r_node(i, j), h.phi(i, j), h.charge(i, j), h.Dw(i, j),
                h.Dv(i, j), h.F_hat(i, j) * lp);
    }
}

void write_history(std::ostream& os, const ModeHistory& h, const std::string& config_hash) {
  const NullGrid& g = h.grid();
  const ModeSpec& m = h.mode();
  write_header(os, g, Sector::mode, &m, &m.potential, nullptr, config_hash, nullptr);
  const double d = g.delta();
  auto dpsi = [&](int i, int j, bool along_w) {
    const int n = along_w ? g.nw() : g.nv();
    const int k = along_w ? i : j;
    auto at = [&](int q) { return along_w ? h.psi(q, j) : h.psi(i, q); };
    if (k == 0) return (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * d);
    if (k == n - 1) return (3.0 * at(n - 1) - 4.0 * at(n - 2) + at(n - 3)) / (2.0 * d);
    return (at(k + 1) - at(k - 1)) / (2.0 * d);
  };
  for (int i = 0; i < g.nw(); ++i)
    for (int j = 0; j < g.nv(); ++j)
      write_row(os, g.w(i), g.v(j), g.r_node(i, j), h.psi(i, j), 0.0, dpsi(i, j, true),
                dpsi(i, j, false), 0.0);
}

void write_history_file(const std::string& path, const FieldHistory& h,
                        const std::string& config_hash) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_history(os, h, config_hash);
}

void write_history_file(const std::string& path, const ModeHistory& h,
                        const std::string& config_hash) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  write_history(os, h, config_hash);
}

LoadedHistory read_history_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open history file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty history file: " + path);
  const auto tag = nlohmann::json::parse(line);
  if (tag.value("format", "") != "mhs-history")
    throw std::runtime_error("not an mhs history file: " + path);
  if (!std::getline(in, line)) throw std::runtime_error("missing history metadata: " + path);
  const auto meta = nlohmann::json::parse(line);

  LoadedHistory out;
  out.sector = meta.at("sector") == "mode" ? Sector::mode : Sector::nonlinear;
  out.background.m = meta.at("background").at("m").get<double>();
  out.grid.w0 = meta.at("grid").at("w0").get<double>();
  out.grid.w1 = meta.at("grid").at("w1").get<double>();
  out.grid.v0 = meta.at("grid").at("v0").get<double>();
  out.grid.v1 = meta.at("grid").at("v1").get<double>();
  out.grid.delta = meta.at("grid").at("delta").get<double>();
  out.min_lapse = meta.value("min_lapse", 0.0);
  out.config_hash = meta.value("config_hash", "");
  if (meta.contains("mode")) {
    out.mode.s = meta.at("mode").at("s").get<int>();
    out.mode.ell = meta.at("mode").at("ell").get<int>();
  }
  if (meta.contains("potential")) {
    const auto& pj = meta.at("potential");
    out.potential.kind = potential_kind_from_string(pj.at("kind").get<std::string>());
    out.potential.c1 = pj.value("c1", 0.0);
    out.potential.c2 = pj.value("c2", 0.0);
    out.potential.c3 = pj.value("c3", 0.0);
    out.potential.eta = pj.value("eta", 1.0);
    out.potential.c4 = pj.value("c4", 0.0);
    out.potential.lambda = pj.value("lambda", 1.0);
  }
  if (!std::getline(in, line)) throw std::runtime_error("missing CSV header: " + path);

  NullGrid grid(out.background, out.grid, out.min_lapse);
  const int nw = grid.nw(), nv = grid.nv();
  if (out.sector == Sector::nonlinear) {
    FieldHistory h(grid, out.potential);
    auto& phi = h.raw_phi();
    auto& Av = h.raw_Av();
    auto& Q = h.raw_Q();
    for (int i = 0; i < nw; ++i)
      for (int j = 0; j < nv; ++j) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated history: " + path);
        double cols[11];
        int c = 0;
        size_t pos = 0;
        while (c < 11) {
          size_t comma = line.find(',', pos);
          const std::string tok =
              comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
          cols[c++] = std::stod(tok);
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
        if (c != 11) throw std::runtime_error("bad CSV row in " + path);
        phi[grid.index(i, j)] = cplx(cols[3], cols[4]);
        Q[grid.index(i, j)] = cols[5];
      }
    // A_v is gauge data: the outgoing-ray values live in the header and the
    // interior is replayed from the stored Q with the evolution's exact
    // update rule, so a reloaded history is bitwise identical.
    if (meta.contains("gauge_ray_Av")) {
      const auto ray = meta.at("gauge_ray_Av").get<std::vector<double>>();
      for (int j = 0; j < nv && j < static_cast<int>(ray.size()); ++j)
        Av[grid.index(0, j)] = ray[j];
    }
    for (int i = 0; i + 1 < nw; ++i) {
      {  // ingoing ray: trapezoid in the node values, as in initialize()
        const double r1 = grid.r_node(i, 0), r2 = grid.r_node(i + 1, 0);
        const double l1 = grid.lapse_node(i, 0), l2 = grid.lapse_node(i + 1, 0);
        const double g1 = -l1 * Q[grid.index(i, 0)] / (2.0 * r1 * r1);
        const double g2 = -l2 * Q[grid.index(i + 1, 0)] / (2.0 * r2 * r2);
        Av[grid.index(i + 1, 0)] = Av[grid.index(i, 0)] + 0.5 * grid.delta() * (g1 + g2);
      }
      for (int j = 0; j + 1 < nv; ++j) {
        const double rE = grid.r_wedge(i, j + 1);
        const double lE = grid.lapse_wedge(i, j + 1);
        const double Qe = 0.5 * (Q[grid.index(i, j + 1)] + Q[grid.index(i + 1, j + 1)]);
        Av[grid.index(i + 1, j + 1)] =
            Av[grid.index(i, j + 1)] + grid.delta() * (-lE * Qe / (2.0 * rE * rE));
      }
    }
    out.field.emplace(std::move(h));
  } else {
    ModeHistory h(grid, out.mode);
    auto& psi = h.raw_psi();
    for (int i = 0; i < nw; ++i)
      for (int j = 0; j < nv; ++j) {
        if (!std::getline(in, line)) throw std::runtime_error("truncated history: " + path);
        double cols[5];
        int c = 0;
        size_t pos = 0;
        while (c < 5) {
          size_t comma = line.find(',', pos);
          const std::string tok =
              comma == std::string::npos ? line.substr(pos) : line.substr(pos, comma - pos);
          cols[c++] = std::stod(tok);
          if (comma == std::string::npos) break;
          pos = comma + 1;
        }
        psi[grid.index(i, j)] = cplx(cols[3], cols[4]);
      }
    out.mode_history.emplace(std::move(h));
  }
  return out;
}

void write_energy_report(std::ostream& os, const EnergyReport& rep) {
  for (const auto& e : rep.entries) {
    ojson j;
    j["functional"] = e.functional;
    j["domain"] = e.domain;
    j["t"] = e.t;
    j["time_comm"] = e.time_comm;
    j["ang_comm"] = e.ang_comm;
    j["rstar_lo"] = e.rstar_lo;
    j["rstar_hi"] = e.rstar_hi;
    j["truncated"] = e.truncated;
    j["value"] = e.value;
    os << j.dump() << "\n";
  }
}

void append_fit_report(std::ostream& os, const std::string& curve, const std::string& quantity,
                       const DecayFit& fit, const EnvelopeResult* env, const char* env_kind) {
  ojson j;
  j["curve"] = curve;
  j["quantity"] = quantity;
  j["p"] = fit.p;
  j["C"] = fit.C;
  j["x_lo"] = fit.window.x_lo;
  j["x_hi"] = fit.window.x_hi;
  j["residual_rms"] = fit.residual_rms;
  j["samples"] = fit.samples;
  if (env && env_kind) {
    j["envelope"] = {{"kind", env_kind}, {"C_min", env->C_min}, {"stabilized", env->stabilized}};
  }
  os << j.dump() << "\n";
}

void write_series_csv(std::ostream& os, const TimeSeries& s) {
  os << s.abscissa << ",f\n";
  for (size_t k = 0; k < s.size(); ++k)
    os << format_double(s.x[k]) << ',' << format_double(s.f[k]) << '\n';
}

}  // namespace mhs

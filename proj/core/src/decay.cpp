#include "mhs/decay.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhs {

std::string CurveSpec::label() const {
  switch (kind) {
    case CurveKind::r_const: return "r_const:" + std::to_string(parameter);
    case CurveKind::w_const: return "w_const:" + std::to_string(parameter);
    case CurveKind::v_const: return "v_const:" + std::to_string(parameter);
    case CurveKind::horizon_proxy: return "horizon_proxy";
  }
  return "?";
}

const char* to_string(TraceQuantity q) {
  switch (q) {
    case TraceQuantity::abs_phi: return "abs_phi";
    case TraceQuantity::abs_Dphi: return "abs_Dphi";
    case TraceQuantity::abs_F_vw: return "abs_F_vw";
    case TraceQuantity::abs_A: return "abs_A";
    case TraceQuantity::mode_amplitude: return "mode_amplitude";
  }
  return "?";
}

TraceQuantity trace_quantity_from_string(const std::string& s) {
  if (s == "abs_phi") return TraceQuantity::abs_phi;
  if (s == "abs_Dphi") return TraceQuantity::abs_Dphi;
  if (s == "abs_F_vw") return TraceQuantity::abs_F_vw;
  if (s == "abs_A") return TraceQuantity::abs_A;
  if (s == "mode_amplitude") return TraceQuantity::mode_amplitude;
  throw std::invalid_argument("unknown trace quantity: " + s);
}

namespace {

// Node walk for a curve on the grid; emits (i, j) pairs with monotone
// abscissa.
template <typename Emit>
void walk_curve(const NullGrid& g, const CurveSpec& c, Emit&& emit) {
  const double d = g.delta();
  switch (c.kind) {
    case CurveKind::r_const: {
      const double rstar = g.background().flat() ? c.parameter
                                                 : tortoise(g.background(), c.parameter);
      const int dj = static_cast<int>(std::llround(
          (2.0 * rstar - (g.spec().v0 - g.spec().w0)) / d));
      for (int i = 0; i < g.nw(); ++i) {
        const int j = i + dj;
        if (j >= 0 && j < g.nv()) emit(i, j);
      }
      break;
    }
    case CurveKind::horizon_proxy: {
      const int i = g.nw() - 1;
      for (int j = 0; j < g.nv(); ++j) emit(i, j);
      break;
    }
    case CurveKind::w_const: {
      const int i = static_cast<int>(std::llround((c.parameter - g.spec().w0) / d));
      if (i < 0 || i >= g.nw()) break;
      for (int j = 0; j < g.nv(); ++j) emit(i, j);
      break;
    }
    case CurveKind::v_const: {
      const int j = static_cast<int>(std::llround((c.parameter - g.spec().v0) / d));
      if (j < 0 || j >= g.nv()) break;
      for (int i = 0; i < g.nw(); ++i) emit(i, j);
      break;
    }
  }
}

void finalize(TimeSeries& s, const CurveSpec& c) {
  s.abscissa = (c.kind == CurveKind::v_const) ? "w" : "v";
  if (s.size() < 16) throw std::invalid_argument("extract_series: fewer than 16 samples on curve");
}

}  // namespace

TimeSeries extract_series(const FieldHistory& h, const CurveSpec& curve, TraceQuantity q) {
  TimeSeries s;
  const NullGrid& g = h.grid();
  walk_curve(g, curve, [&](int i, int j) {
    double val = 0.0;
    switch (q) {
      case TraceQuantity::abs_phi:
        val = std::abs(h.phi(i, j));
        break;
      case TraceQuantity::abs_Dphi: {
        const FieldSample fs = h.sample(i, j);
        val = std::sqrt(std::norm(fs.Dv_hat) + std::norm(fs.Dw_hat));
        break;
      }
      case TraceQuantity::abs_F_vw:
        val = std::abs(h.F_hat(i, j)) * g.lapse_node(i, j);
        break;
      case TraceQuantity::abs_A:
        val = std::abs(h.A_v(i, j));
        break;
      case TraceQuantity::mode_amplitude:
        throw std::invalid_argument("extract_series: mode_amplitude needs a mode history");
    }
    s.w.push_back(g.w(i));
    s.v.push_back(g.v(j));
    s.x.push_back(curve.kind == CurveKind::v_const ? g.w(i) : g.v(j));
    s.f.push_back(val);
  });
  finalize(s, curve);
  return s;
}

TimeSeries extract_series(const ModeHistory& h, const CurveSpec& curve, TraceQuantity q) {
  if (q != TraceQuantity::mode_amplitude && q != TraceQuantity::abs_phi)
    throw std::invalid_argument("extract_series: mode histories carry the mode amplitude");
  TimeSeries s;
  const NullGrid& g = h.grid();
  walk_curve(g, curve, [&](int i, int j) {
    s.w.push_back(g.w(i));
    s.v.push_back(g.v(j));
    s.x.push_back(curve.kind == CurveKind::v_const ? g.w(i) : g.v(j));
    s.f.push_back(std::abs(h.psi(i, j)));
  });
  finalize(s, curve);
  return s;
}

TimeSeries series_from_trace(const std::vector<TracePoint>& trace) {
  TimeSeries s;
  s.abscissa = "v";
  for (const auto& p : trace) {
    s.w.push_back(p.w);
    s.v.push_back(p.v);
    s.x.push_back(p.v);
    s.f.push_back(std::abs(p.value));
  }
  if (s.size() < 16) throw std::invalid_argument("series_from_trace: fewer than 16 samples");
  return s;
}

Window default_fit_window(const TimeSeries& s, double fraction, int exclude_tail) {
  if (s.size() < static_cast<size_t>(exclude_tail + 8))
    throw std::invalid_argument("default_fit_window: series too short");
  double x_min = 0.0;
  bool found = false;
  for (double x : s.x)
    if (x > 0.0) {
      x_min = found ? std::min(x_min, x) : x;
      found = true;
    }
  const double x_end = s.x[s.size() - 1 - exclude_tail];
  if (!found || !(x_end > x_min))
    throw std::invalid_argument("default_fit_window: no positive abscissa span");
  Window w;
  // Last `fraction` of the log span.
  w.x_lo = std::exp(std::log(x_min) + (1.0 - fraction) * (std::log(x_end) - std::log(x_min)));
  w.x_hi = x_end;
  return w;
}

DecayFit fit_exponent(const TimeSeries& s, const Window& win) {
  std::vector<double> lx, lf;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s.x[k] < win.x_lo || s.x[k] > win.x_hi) continue;
    if (!(s.x[k] > 0.0) || !(s.f[k] > 0.0))
      throw std::invalid_argument("fit_exponent: nonpositive values in window");
    lx.push_back(std::log(s.x[k]));
    lf.push_back(std::log(s.f[k]));
  }
  const size_t n = lx.size();
  if (n < 4) throw std::invalid_argument("fit_exponent: fewer than 4 samples in window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t k = 0; k < n; ++k) {
    sx += lx[k];
    sy += lf[k];
    sxx += lx[k] * lx[k];
    sxy += lx[k] * lf[k];
  }
  const double det = n * sxx - sx * sx;
  const double slope = (n * sxy - sx * sy) / det;
  const double intercept = (sy * sxx - sx * sxy) / det;
  DecayFit fit;
  fit.p = -slope;
  fit.window = win;
  fit.samples = static_cast<int>(n);
  double ss = 0.0;
  for (size_t k = 0; k < n; ++k) {
    const double r = lf[k] - (intercept + slope * lx[k]);
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / n);
  // Envelope constant: smallest C with f <= C x^{-p} on the window.
  double cmax = 0.0;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s.x[k] < win.x_lo || s.x[k] > win.x_hi) continue;
    cmax = std::max(cmax, s.f[k] * std::pow(s.x[k], fit.p));
  }
  fit.C = cmax;
  return fit;
}

TimeSeries maxima_envelope(const TimeSeries& s) {
  TimeSeries out;
  out.abscissa = s.abscissa;
  for (size_t k = 1; k + 1 < s.size(); ++k) {
    if (s.f[k] > s.f[k - 1] && s.f[k] >= s.f[k + 1]) {
      out.x.push_back(s.x[k]);
      out.w.push_back(s.w[k]);
      out.v.push_back(s.v[k]);
      out.f.push_back(s.f[k]);
    }
  }
  return out;
}

const char* to_string(BoundKind b) {
  switch (b) {
    case BoundKind::one_over_v: return "one_over_v";
    case BoundKind::one_over_w: return "one_over_w";
    case BoundKind::near_horizon_w_over_vplus_sq: return "near_horizon_w_over_vplus_sq";
    case BoundKind::near_horizon_offset: return "near_horizon_offset";
  }
  return "?";
}

namespace {
double bound_weighted(const TimeSeries& s, BoundKind b, size_t k) {
  const double f = std::abs(s.f[k]);
  switch (b) {
    case BoundKind::one_over_v:
      return f * (1.0 + std::abs(s.v[k]));
    case BoundKind::one_over_w:
      return f * (1.0 + std::abs(s.w[k]));
    case BoundKind::near_horizon_w_over_vplus_sq: {
      const double vplus = std::max(1.0, s.v[k]);
      const double w = s.w[k];
      if (w == 0.0) return 0.0;
      return f * f * (vplus / w) * (vplus / w);
    }
    case BoundKind::near_horizon_offset: {
      const double vplus = std::max(1.0, s.v[k]);
      const double q = s.w[k] / vplus;
      return f * f / (1.0 + q * q);
    }
  }
  return 0.0;
}
}  // namespace

EnvelopeResult check_envelope(const TimeSeries& s, BoundKind bound, const Window& win) {
  EnvelopeResult res;
  std::vector<double> g;
  for (size_t k = 0; k < s.size(); ++k) {
    if (s.x[k] < win.x_lo || s.x[k] > win.x_hi) continue;
    g.push_back(bound_weighted(s, bound, k));
  }
  if (g.empty()) return res;
  double full = 0.0;
  for (double x : g) full = std::max(full, x);
  const size_t cut = (2 * g.size()) / 3;
  double through23 = 0.0;
  for (size_t k = 0; k < std::max<size_t>(cut, 1); ++k) through23 = std::max(through23, g[k]);
  res.C_min = full;
  if (full == 0.0)
    res.stabilized = true;
  else
    res.stabilized = full <= 1.1 * through23;
  return res;
}

EnvelopeResult check_envelope(const TimeSeries& s, BoundKind bound) {
  Window w;
  w.x_lo = -1e300;
  w.x_hi = 1e300;
  return check_envelope(s, bound, w);
}

}  // namespace mhs

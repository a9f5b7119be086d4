// Field traces along physically meaningful curves and decay quantification:
// log-log exponent fits and envelope-constant checks against the late-time
// bound shapes.
#pragma once

#include <string>
#include <vector>

#include "mhs/evolution.hpp"

namespace mhs {

enum class CurveKind { r_const, w_const, v_const, horizon_proxy };

struct CurveSpec {
  CurveKind kind = CurveKind::r_const;
  double parameter = 4.0;  // r, w or v; unused for horizon_proxy

  std::string label() const;
};

enum class TraceQuantity { abs_phi, abs_Dphi, abs_F_vw, abs_A, mode_amplitude };

const char* to_string(TraceQuantity q);
TraceQuantity trace_quantity_from_string(const std::string& s);

// A sampled trace: monotone abscissa x (v along r = const and the horizon
// proxy, w along v = const), plus both null coordinates per sample for the
// mixed (w, v) envelope weights.
struct TimeSeries {
  std::string abscissa;  // "v" or "w"
  std::vector<double> x;
  std::vector<double> w, v;
  std::vector<double> f;  // values, >= 0

  size_t size() const { return x.size(); }
};

TimeSeries extract_series(const FieldHistory& h, const CurveSpec& curve, TraceQuantity q);
TimeSeries extract_series(const ModeHistory& h, const CurveSpec& curve, TraceQuantity q);
// From a streaming mode trace (r = const curve).
TimeSeries series_from_trace(const std::vector<TracePoint>& trace);

struct Window {
  double x_lo = 0.0, x_hi = 0.0;
};

// Default fit window: the last half of the series by log-abscissa span,
// excluding the final `exclude_tail` samples.
Window default_fit_window(const TimeSeries& s, double fraction = 0.5, int exclude_tail = 5);

struct DecayFit {
  double p = 0.0;         // exponent: f ~ C x^{-p}
  double C = 0.0;         // sup of f x^p over the window (envelope constant)
  Window window;
  double residual_rms = 0.0;  // about the least-squares line in log-log
  int samples = 0;
};

// Least squares of log f against log x over the window.  Throws when any
// window value (abscissa or f) is nonpositive or fewer than 4 samples remain.
DecayFit fit_exponent(const TimeSeries& s, const Window& win);

// Replace the series by the envelope of its strict local maxima (used for
// oscillatory tails of massive fields).
TimeSeries maxima_envelope(const TimeSeries& s);

enum class BoundKind {
  one_over_v,                  // C = sup |f| (1 + |v|)
  one_over_w,                  // C = sup |f| (1 + |w|)
  near_horizon_w_over_vplus_sq,  // C = sup |f|^2 (v+ / w)^2
  near_horizon_offset          // C = sup |f|^2 / (1 + (w / v+)^2)
};

struct EnvelopeResult {
  double C_min = 0.0;
  bool stabilized = false;
};

// C_min is the supremum of the weighted series over the window; it is
// monotone nondecreasing as the window grows.  Stabilized means the
// supremum through the first two thirds of the window already captures the
// full-window supremum to within 10%.
EnvelopeResult check_envelope(const TimeSeries& s, BoundKind bound, const Window& win);
EnvelopeResult check_envelope(const TimeSeries& s, BoundKind bound);

const char* to_string(BoundKind b);

}  // namespace mhs

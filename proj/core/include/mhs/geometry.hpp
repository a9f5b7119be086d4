// Schwarzschild exterior geometry: lapse, tortoise coordinate and its
// inverse, and the (t, r*) <-> (w, v) null coordinate maps.
#pragma once

#include <stdexcept>
#include <utility>

namespace mhs {

// Fixed background. m = 0 is the flat verification mode (lapse == 1, r* == r).
struct BackgroundParams {
  double m = 1.0;

  double horizon_radius() const { return 2.0 * m; }
  double photon_sphere_radius() const { return 3.0 * m; }
  bool flat() const { return m == 0.0; }
};

// 1 - 2m/r.  Domain: r > 2m when m > 0.
double lapse(const BackgroundParams& bg, double r);

// r* = r + 2m log(r - 2m).  Domain: r > 2m, m > 0 (m = 0: r* = r).
double tortoise(const BackgroundParams& bg, double r);

// Inverse of tortoise. Safeguarded Newton, monotone in r; the returned r
// satisfies |tortoise(r) - rstar| <= 1e-12 max(1, |rstar|).
double radius_from_tortoise(const BackgroundParams& bg, double rstar);

// Same inverse but solving for z = r - 2m.  Stable arbitrarily close to the
// horizon: for deeply negative r* the result underflows smoothly toward 0
// instead of losing all digits in r itself.
double z_from_tortoise(const BackgroundParams& bg, double rstar);

struct NullPoint {
  double w, v;
};

inline NullPoint to_null(double t, double rstar) { return {t - rstar, t + rstar}; }

// Returns (t, r*).
inline std::pair<double, double> from_null(double w, double v) {
  return {0.5 * (v + w), 0.5 * (v - w)};
}

enum class Chart { schwarzschild, tortoise_chart, null_ef };

// A point in one of the three charts: (t, r), (t, r*) or (w, v).
struct ChartPoint {
  Chart chart = Chart::schwarzschild;
  double a = 0.0;  // t (schwarzschild, tortoise) or w (null)
  double b = 0.0;  // r, r* or v

  static ChartPoint schwarzschild(double t, double r) { return {Chart::schwarzschild, t, r}; }
  static ChartPoint tortoise(double t, double rstar) { return {Chart::tortoise_chart, t, rstar}; }
  static ChartPoint null_ef(double w, double v) { return {Chart::null_ef, w, v}; }
};

// Re-express a point in another chart on the given background.
ChartPoint convert(const BackgroundParams& bg, const ChartPoint& p, Chart target);

}  // namespace mhs

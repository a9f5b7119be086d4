#include "mhs/grid.hpp"

#include <cmath>

namespace mhs {

NullGrid::NullGrid(const BackgroundParams& bg, GridSpec spec, double min_lapse)
    : bg_(bg), spec_(spec), min_lapse_(min_lapse) {
  spec_.validate();
  const double d = spec_.delta;
  nw_ = static_cast<int>(std::llround((spec_.w1 - spec_.w0) / d)) + 1;
  nv_ = static_cast<int>(std::llround((spec_.v1 - spec_.v0) / d)) + 1;
  if (nw_ < 2 || nv_ < 2) throw std::invalid_argument("grid: fewer than two nodes per direction");

  // The deepest diagonal is at (i = nw-1, j = 0).  Clip rows until its lapse
  // clears min_lapse; callers read clipped_rows() to report the exclusion.
  if (min_lapse_ > 0.0 && !bg_.flat()) {
    while (nw_ > 2) {
      const double rs_min = 0.5 * (spec_.v0 - (spec_.w0 + (nw_ - 1) * d));
      const double z = z_from_tortoise(bg_, rs_min);
      if (z / (z + 2.0 * bg_.m) >= min_lapse_) break;
      --nw_;
      ++clipped_rows_;
    }
    spec_.w1 = spec_.w0 + (nw_ - 1) * d;
  }
  if (bg_.flat()) {
    const double rs_min = 0.5 * (spec_.v0 - spec_.w1);
    if (rs_min <= 0.0)
      throw std::invalid_argument("grid: flat background requires r* = (v-w)/2 > 0 on every node");
  }

  // Half-step diagonal tables covering k = 2(j-i) in [-2(nw-1)-1, 2(nv-1)+1].
  off_ = 2 * (nw_ - 1) + 1;
  const int n = 2 * (nw_ - 1) + 2 * (nv_ - 1) + 3;
  r_.resize(n);
  z_.resize(n);
  lapse_.resize(n);
  for (int k = 0; k < n; ++k) {
    const double rs = 0.5 * (spec_.v0 - spec_.w0) + (k - off_) * d / 4.0;
    if (bg_.flat()) {
      r_[k] = rs;
      z_[k] = rs;
      lapse_[k] = 1.0;
    } else {
      const double z = std::max(z_from_tortoise(bg_, rs), 5e-324);
      z_[k] = z;
      r_[k] = z + 2.0 * bg_.m;
      lapse_[k] = z / r_[k];
    }
  }
}

int NullGrid::slice_diagonal(double t) const {
  const int k = static_cast<int>(std::llround((2.0 * t - spec_.w0 - spec_.v0) / spec_.delta));
  if (k < 1 || k > nw_ - 1 + nv_ - 1 - 1) return -1;
  return k;
}

}  // namespace mhs

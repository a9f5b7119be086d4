// Uniform double-null grid on the Schwarzschild exterior with per-diagonal
// radius caches.  r* = (v - w)/2 depends only on j - i, so r, z = r - 2m and
// the lapse are tabulated once per diagonal at half-step resolution (nodes
// and cell-edge midpoints share the table).
#pragma once

#include <stdexcept>
#include <vector>

#include "mhs/geometry.hpp"

namespace mhs {

struct GridSpec {
  double w0 = 0.0, w1 = 32.0;
  double v0 = 0.0, v1 = 32.0;
  double delta = 1.0 / 16.0;

  void validate() const {
    if (!(w1 > w0) || !(v1 > v0)) throw std::invalid_argument("grid: need w1 > w0 and v1 > v0");
    if (!(delta > 0.0)) throw std::invalid_argument("grid: delta must be positive");
  }
};

class NullGrid {
 public:
  // min_lapse > 0 clips rows from the w1 side until every node satisfies
  // lapse >= min_lapse; the number of clipped rows is recorded.
  NullGrid(const BackgroundParams& bg, GridSpec spec, double min_lapse = 1e-6);

  const GridSpec& spec() const { return spec_; }
  const BackgroundParams& background() const { return bg_; }
  int nw() const { return nw_; }
  int nv() const { return nv_; }
  double delta() const { return spec_.delta; }
  int clipped_rows() const { return clipped_rows_; }
  double min_lapse() const { return min_lapse_; }

  double w(int i) const { return spec_.w0 + i * spec_.delta; }
  double v(int j) const { return spec_.v0 + j * spec_.delta; }
  double t(int i, int j) const { return 0.5 * (w(i) + v(j)); }
  double rstar(int i, int j) const { return 0.5 * (v(j) - w(i)); }

  // Half-step diagonal index: k = 2(j - i) + offset; nodes use integer
  // (i, j), cell centers share the node diagonal, edge midpoints sit at
  // half-integer j - i.
  double r_node(int i, int j) const { return r_[2 * (j - i) + off_]; }
  double z_node(int i, int j) const { return z_[2 * (j - i) + off_]; }
  double lapse_node(int i, int j) const { return lapse_[2 * (j - i) + off_]; }
  // Midpoint of the v-edge (i, j)-(i, j+1): diag j - i + 1/2.
  double r_vedge(int i, int j) const { return r_[2 * (j - i) + 1 + off_]; }
  double lapse_vedge(int i, int j) const { return lapse_[2 * (j - i) + 1 + off_]; }
  // Midpoint of the w-edge (i, j)-(i+1, j): diag j - i - 1/2.
  double r_wedge(int i, int j) const { return r_[2 * (j - i) - 1 + off_]; }
  double lapse_wedge(int i, int j) const { return lapse_[2 * (j - i) - 1 + off_]; }

  size_t index(int i, int j) const { return static_cast<size_t>(i) * nv_ + j; }
  size_t node_count() const { return static_cast<size_t>(nw_) * nv_; }

  // Diagonal index sum for the t = const slice nearest to t; slices live on
  // i + j = k.  Returns -1 when the slice misses the grid interior.
  int slice_diagonal(double t) const;

 private:
  BackgroundParams bg_;
  GridSpec spec_;
  double min_lapse_;
  int nw_ = 0, nv_ = 0, off_ = 0, clipped_rows_ = 0;
  std::vector<double> r_, z_, lapse_;
};

}  // namespace mhs

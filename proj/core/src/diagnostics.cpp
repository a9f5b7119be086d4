#include "mhs/diagnostics.hpp"

#include <algorithm>
#include <cmath>

namespace mhs {

namespace {

// Diagonal finite difference along t at fixed r*: centered interior,
// one-sided second order at the edges, first order at pinched corners.
template <typename Get>
cplx diag_dt(const NullGrid& g, int i, int j, double d, Get&& val) {
  const int nw = g.nw(), nv = g.nv();
  const bool back = (i >= 1 && j >= 1);
  const bool fwd = (i + 1 < nw && j + 1 < nv);
  if (back && fwd) return (val(i + 1, j + 1) - val(i - 1, j - 1)) / (2.0 * d);
  if (fwd && i + 2 < nw && j + 2 < nv)
    return (-3.0 * val(i, j) + 4.0 * val(i + 1, j + 1) - val(i + 2, j + 2)) / (2.0 * d);
  if (back && i >= 2 && j >= 2)
    return (3.0 * val(i, j) - 4.0 * val(i - 1, j - 1) + val(i - 2, j - 2)) / (2.0 * d);
  if (fwd) return (val(i + 1, j + 1) - val(i, j)) / d;
  if (back) return (val(i, j) - val(i - 1, j - 1)) / d;
  return {0.0, 0.0};
}

class NonlinearField : public DiagField {
 public:
  explicit NonlinearField(const FieldHistory& h) : h_(&h) {}
  const NullGrid& grid() const override { return h_->grid(); }
  const BackgroundParams& background() const override { return h_->grid().background(); }
  NodeTerms terms(int i, int j, Part p) const override {
    NodeTerms t;
    if (p != Part::maxwell) {
      const cplx Dw = h_->Dw(i, j);
      const cplx Dv = h_->Dv(i, j);
      t.absDw2 = std::norm(Dw);
      t.absDv2 = std::norm(Dv);
      t.cross = std::real(Dv * std::conj(Dw));
      t.pot = potential_value(h_->potential(), h_->phi(i, j));
    }
    if (p != Part::scalar) {
      const double F = h_->F_hat(i, j);
      t.F2 = F * F;
    }
    return t;
  }
  double volume(double r) const override { return r * r; }
  double sphere_weight() const override { return 4.0 * M_PI; }
  bool spherical_sector() const override { return true; }
  double angular_factor() const override { return 0.0; }

 private:
  const FieldHistory* h_;
};

class ModeField : public DiagField {
 public:
  explicit ModeField(const ModeHistory& h) : h_(&h) {}
  const NullGrid& grid() const override { return h_->grid(); }
  const BackgroundParams& background() const override { return h_->grid().background(); }
  NodeTerms terms(int i, int j, Part p) const override {
    const Part own = h_->mode().s == 1 ? Part::maxwell : Part::scalar;
    NodeTerms t;
    if (p != Part::all && p != own) return t;
    const NullGrid& g = h_->grid();
    const double d = g.delta();
    const int nw = g.nw(), nv = g.nv();
    cplx dw, dv;
    if (i == 0)
      dw = (-3.0 * h_->psi(0, j) + 4.0 * h_->psi(1, j) - h_->psi(2, j)) / (2.0 * d);
    else if (i == nw - 1)
      dw = (3.0 * h_->psi(i, j) - 4.0 * h_->psi(i - 1, j) + h_->psi(i - 2, j)) / (2.0 * d);
    else
      dw = (h_->psi(i + 1, j) - h_->psi(i - 1, j)) / (2.0 * d);
    if (j == 0)
      dv = (-3.0 * h_->psi(i, 0) + 4.0 * h_->psi(i, 1) - h_->psi(i, 2)) / (2.0 * d);
    else if (j == nv - 1)
      dv = (3.0 * h_->psi(i, j) - 4.0 * h_->psi(i, j - 1) + h_->psi(i, j - 2)) / (2.0 * d);
    else
      dv = (h_->psi(i, j + 1) - h_->psi(i, j - 1)) / (2.0 * d);
    const double r = g.r_node(i, j);
    const double m = background().m;
    const double n2 = std::norm(h_->psi(i, j));
    t.absDw2 = std::norm(dw);
    t.absDv2 = std::norm(dv);
    t.cross = std::real(dv * std::conj(dw));
    t.pot = h_->mode().master_potential(r, m) * n2;
    t.potgrad_r = h_->mode().master_potential_dr(r, m) * n2;
    return t;
  }
  double volume(double) const override { return 1.0; }
  double sphere_weight() const override { return 1.0; }
  bool spherical_sector() const override { return false; }
  double angular_factor() const override {
    return h_->mode().ell * (h_->mode().ell + 1.0);
  }

 private:
  const ModeHistory* h_;
};

// Time-commuted view of the nonlinear history: the commuted scalar is the
// covariant time derivative D_t phi (gauge covariant, same connection); the
// commuted Maxwell field is d_t of the gauge-invariant F_hat and Q.
class CommutedNonlinearField : public DiagField {
 public:
  explicit CommutedNonlinearField(const FieldHistory& h) : h_(&h), grid_(&h.grid()) {
    const NullGrid& g = *grid_;
    const int nw = g.nw(), nv = g.nv();
    const double d = g.delta();
    phit_.resize(g.node_count());
    Fhatt_.resize(g.node_count());
    for (int i = 0; i < nw; ++i)
      for (int j = 0; j < nv; ++j)
        phit_[g.index(i, j)] = h.Dv(i, j) + h.Dw(i, j);  // D_t phi
    for (int i = 0; i < nw; ++i)
      for (int j = 0; j < nv; ++j)
        Fhatt_[g.index(i, j)] =
            diag_dt(g, i, j, d, [&](int a, int b) { return cplx(h.F_hat(a, b), 0.0); }).real();
  }
  const NullGrid& grid() const override { return *grid_; }
  const BackgroundParams& background() const override { return grid_->background(); }
  NodeTerms terms(int i, int j, Part p) const override {
    NodeTerms t;
    const NullGrid& g = *grid_;
    const double d = g.delta();
    if (p != Part::maxwell) {
      const int nw = g.nw(), nv = g.nv();
      auto pt = [&](int a, int b) { return phit_[g.index(a, b)]; };
      cplx dw, dv;
      if (i == 0)
        dw = (-3.0 * pt(0, j) + 4.0 * pt(1, j) - pt(2, j)) / (2.0 * d);
      else if (i == nw - 1)
        dw = (3.0 * pt(i, j) - 4.0 * pt(i - 1, j) + pt(i - 2, j)) / (2.0 * d);
      else
        dw = (pt(i + 1, j) - pt(i - 1, j)) / (2.0 * d);
      if (j == 0)
        dv = (-3.0 * pt(i, 0) + 4.0 * pt(i, 1) - pt(i, 2)) / (2.0 * d);
      else if (j == nv - 1)
        dv = (3.0 * pt(i, j) - 4.0 * pt(i, j - 1) + pt(i, j - 2)) / (2.0 * d);
      else
        dv = (pt(i, j + 1) - pt(i, j - 1)) / (2.0 * d);
      const cplx Dw = dw;  // A_w == 0
      const cplx Dv = covariant_derivative(dv, h_->A_v(i, j), pt(i, j));
      t.absDw2 = std::norm(Dw);
      t.absDv2 = std::norm(Dv);
      t.cross = std::real(Dv * std::conj(Dw));
      t.pot = potential_value(h_->potential(), pt(i, j));
    }
    if (p != Part::scalar) {
      const double F = Fhatt_[grid_->index(i, j)];
      t.F2 = F * F;
    }
    return t;
  }
  double volume(double r) const override { return r * r; }
  double sphere_weight() const override { return 4.0 * M_PI; }
  bool spherical_sector() const override { return true; }
  double angular_factor() const override { return 0.0; }

 private:
  const FieldHistory* h_;
  const NullGrid* grid_;
  std::vector<cplx> phit_;
  std::vector<double> Fhatt_;
};

class CommutedModeField : public DiagField {
 public:
  explicit CommutedModeField(const ModeHistory& h) : h_(&h), grid_(&h.grid()) {
    const NullGrid& g = *grid_;
    psit_.resize(g.node_count());
    for (int i = 0; i < g.nw(); ++i)
      for (int j = 0; j < g.nv(); ++j)
        psit_[g.index(i, j)] =
            diag_dt(g, i, j, g.delta(), [&](int a, int b) { return h.psi(a, b); });
  }
  const NullGrid& grid() const override { return *grid_; }
  const BackgroundParams& background() const override { return grid_->background(); }
  NodeTerms terms(int i, int j, Part p) const override {
    const Part own = h_->mode().s == 1 ? Part::maxwell : Part::scalar;
    NodeTerms t;
    if (p != Part::all && p != own) return t;
    const NullGrid& g = *grid_;
    const double d = g.delta();
    const int nw = g.nw(), nv = g.nv();
    auto ps = [&](int a, int b) { return psit_[g.index(a, b)]; };
    cplx dw, dv;
    if (i == 0)
      dw = (-3.0 * ps(0, j) + 4.0 * ps(1, j) - ps(2, j)) / (2.0 * d);
    else if (i == nw - 1)
      dw = (3.0 * ps(i, j) - 4.0 * ps(i - 1, j) + ps(i - 2, j)) / (2.0 * d);
    else
      dw = (ps(i + 1, j) - ps(i - 1, j)) / (2.0 * d);
    if (j == 0)
      dv = (-3.0 * ps(i, 0) + 4.0 * ps(i, 1) - ps(i, 2)) / (2.0 * d);
    else if (j == nv - 1)
      dv = (3.0 * ps(i, j) - 4.0 * ps(i, j - 1) + ps(i, j - 2)) / (2.0 * d);
    else
      dv = (ps(i, j + 1) - ps(i, j - 1)) / (2.0 * d);
    const double r = g.r_node(i, j);
    const double m = background().m;
    const double n2 = std::norm(ps(i, j));
    t.absDw2 = std::norm(dw);
    t.absDv2 = std::norm(dv);
    t.cross = std::real(dv * std::conj(dw));
    t.pot = h_->mode().master_potential(r, m) * n2;
    t.potgrad_r = h_->mode().master_potential_dr(r, m) * n2;
    return t;
  }
  double volume(double) const override { return 1.0; }
  double sphere_weight() const override { return 1.0; }
  bool spherical_sector() const override { return false; }
  double angular_factor() const override {
    return h_->mode().ell * (h_->mode().ell + 1.0);
  }

 private:
  const ModeHistory* h_;
  const NullGrid* grid_;
  std::vector<cplx> psit_;
};

// Reduced current components at a node.
struct FluxPair {
  double Jw, Jv;
};
FluxPair reduced_current(const DiagField& f, const MultiplierSpec& V, int i, int j, Part p) {
  const NullGrid& g = f.grid();
  const double r = g.r_node(i, j);
  const double lp = g.lapse_node(i, j);
  const NodeTerms t = f.terms(i, j, p);
  const MultiplierValues mv = V.at(f.background(), g.w(i), g.v(j), r, lp);
  const double vs = f.volume(r) * f.sphere_weight();
  const double twv0 = t.F2 + 0.5 * t.pot;  // T_wv / lapse
  const double Tww = 2.0 * t.absDw2;
  const double Tvv = 2.0 * t.absDv2;
  FluxPair out;
  out.Jw = vs * (twv0 * mv.lapseVw + Tvv * mv.Vv);
  out.Jv = vs * (Tww * mv.Vw + twv0 * lp * mv.Vv);
  return out;
}

// Bulk density: -(d_w Jred^w + d_v Jred^v) evaluated analytically, i.e. the
// deformation contraction with the true volume element (including the mode
// sector's explicit potential-gradient term).
double bulk_density(const DiagField& f, const MultiplierSpec& V, int i, int j, Part p) {
  const NullGrid& g = f.grid();
  const double r = g.r_node(i, j);
  const double lp = g.lapse_node(i, j);
  const NodeTerms t = f.terms(i, j, p);
  const MultiplierValues mv = V.at(f.background(), g.w(i), g.v(j), r, lp);
  const double vs = f.volume(r) * f.sphere_weight();
  const double twv0 = t.F2 + 0.5 * t.pot;
  double val = -lp * twv0 * (mv.gradWw + mv.gradVv) - 2.0 * t.absDv2 * mv.gradWv -
               2.0 * t.absDw2 * mv.lapse_gradVw / std::max(lp, 5e-324);
  if (f.spherical_sector()) {
    val += (lp * mv.lapse_dV / (2.0 * r)) * (2.0 * t.F2 - t.pot) +
           (2.0 * t.cross / r) * mv.lapse_dV;
  } else {
    val -= 0.25 * lp * t.potgrad_r * mv.lapse_dV;
  }
  return vs * val;
}

struct DiagonalRange {
  int k = -1;          // i + j
  int i_lo = 0, i_hi = -1;
  double t = 0.0;
};

DiagonalRange slice_nodes(const NullGrid& g, double t) {
  DiagonalRange d;
  d.k = g.slice_diagonal(t);
  if (d.k < 0) return d;
  d.t = 0.5 * (g.spec().w0 + g.spec().v0 + d.k * g.delta());
  d.i_lo = std::max(0, d.k - (g.nv() - 1));
  d.i_hi = std::min(g.nw() - 1, d.k);
  return d;
}

}  // namespace

std::unique_ptr<DiagField> make_field(const FieldHistory& h) {
  return std::make_unique<NonlinearField>(h);
}
std::unique_ptr<DiagField> make_field(const ModeHistory& h) {
  return std::make_unique<ModeField>(h);
}
std::unique_ptr<DiagField> make_time_commuted(const FieldHistory& h) {
  return std::make_unique<CommutedNonlinearField>(h);
}
std::unique_ptr<DiagField> make_time_commuted(const ModeHistory& h) {
  return std::make_unique<CommutedModeField>(h);
}

SliceResult slice_energy(const DiagField& f, const MultiplierSpec& V, const Slice& s,
                         double rstar_lo, double rstar_hi, Part part) {
  const NullGrid& g = f.grid();
  const double d = g.delta();
  SliceResult out;
  if (std::holds_alternative<TimeSlice>(s)) {
    const double t = std::get<TimeSlice>(s).t;
    const DiagonalRange dr = slice_nodes(g, t);
    if (dr.k < 0 || dr.i_hi - dr.i_lo < 1)
      throw std::invalid_argument("slice_energy: t slice does not intersect the grid");
    out.snapped = dr.t;
    // r* decreases with i along the diagonal.
    double sum = 0.0;
    double lo_seen = 1e300, hi_seen = -1e300;
    std::vector<double> vals;
    vals.reserve(dr.i_hi - dr.i_lo + 1);
    for (int i = dr.i_lo; i <= dr.i_hi; ++i) {
      const int j = dr.k - i;
      const double rs = g.rstar(i, j);
      if (rs < rstar_lo || rs > rstar_hi) continue;
      const FluxPair jp = reduced_current(f, V, i, j, part);
      vals.push_back(jp.Jw + jp.Jv);
      lo_seen = std::min(lo_seen, rs);
      hi_seen = std::max(hi_seen, rs);
    }
    if (vals.size() < 2)
      throw std::invalid_argument("slice_energy: slice/domain intersection is empty");
    for (size_t k = 0; k < vals.size(); ++k) {
      const double wgt = (k == 0 || k + 1 == vals.size()) ? 0.5 : 1.0;
      sum += wgt * vals[k];
    }
    out.value = sum * d;
    out.rstar_lo = lo_seen;
    out.rstar_hi = hi_seen;
    // The untruncated integrals run over all of r*; finite grids always clip.
    out.truncated = (rstar_lo < lo_seen - 0.51 * d) || (rstar_hi > hi_seen + 0.51 * d);
    return out;
  }
  if (std::holds_alternative<WSegment>(s)) {
    const WSegment seg = std::get<WSegment>(s);
    const int i = static_cast<int>(std::llround((seg.w - g.spec().w0) / d));
    if (i < 0 || i >= g.nw())
      throw std::invalid_argument("slice_energy: w segment outside the grid");
    out.snapped = g.w(i);
    int j_lo = std::max(0, static_cast<int>(std::ceil((seg.v_lo - g.spec().v0) / d - 1e-9)));
    int j_hi = std::min(g.nv() - 1,
                        static_cast<int>(std::floor((seg.v_hi - g.spec().v0) / d + 1e-9)));
    if (j_hi - j_lo < 1)
      throw std::invalid_argument("slice_energy: w segment intersection is empty");
    double sum = 0.0;
    for (int j = j_lo; j <= j_hi; ++j) {
      const double wgt = (j == j_lo || j == j_hi) ? 0.5 : 1.0;
      sum += wgt * reduced_current(f, V, i, j, part).Jw;
    }
    out.value = sum * d;
    out.rstar_lo = g.rstar(i, j_lo);
    out.rstar_hi = g.rstar(i, j_hi);
    out.truncated = seg.v_lo < g.v(j_lo) - 0.51 * d || seg.v_hi > g.v(j_hi) + 0.51 * d;
    return out;
  }
  const VSegment seg = std::get<VSegment>(s);
  const int j = static_cast<int>(std::llround((seg.v - g.spec().v0) / d));
  if (j < 0 || j >= g.nv()) throw std::invalid_argument("slice_energy: v segment outside the grid");
  out.snapped = g.v(j);
  int i_lo = std::max(0, static_cast<int>(std::ceil((seg.w_lo - g.spec().w0) / d - 1e-9)));
  int i_hi =
      std::min(g.nw() - 1, static_cast<int>(std::floor((seg.w_hi - g.spec().w0) / d + 1e-9)));
  if (i_hi - i_lo < 1)
    throw std::invalid_argument("slice_energy: v segment intersection is empty");
  double sum = 0.0;
  for (int i = i_lo; i <= i_hi; ++i) {
    const double wgt = (i == i_lo || i == i_hi) ? 0.5 : 1.0;
    sum += wgt * reduced_current(f, V, i, j, part).Jv;
  }
  out.value = sum * d;
  out.rstar_lo = g.rstar(i_hi, j);
  out.rstar_hi = g.rstar(i_lo, j);
  out.truncated = seg.w_lo < g.w(i_lo) - 0.51 * d || seg.w_hi > g.w(i_hi) + 0.51 * d;
  return out;
}

double bulk_integral(const DiagField& f, const MultiplierSpec& V, const Region& region,
                     Part part) {
  const NullGrid& g = f.grid();
  const double d = g.delta();
  if (std::holds_alternative<NullRect>(region)) {
    const NullRect r = std::get<NullRect>(region);
    const int i_lo = static_cast<int>(std::llround((r.w_lo - g.spec().w0) / d));
    const int i_hi = static_cast<int>(std::llround((r.w_hi - g.spec().w0) / d));
    const int j_lo = static_cast<int>(std::llround((r.v_lo - g.spec().v0) / d));
    const int j_hi = static_cast<int>(std::llround((r.v_hi - g.spec().v0) / d));
    if (i_lo < 0 || i_hi >= g.nw() || j_lo < 0 || j_hi >= g.nv() || i_hi <= i_lo || j_hi <= j_lo)
      throw std::invalid_argument("bulk_integral: region outside the grid");
    double sum = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) {
      const double wi = (i == i_lo || i == i_hi) ? 0.5 : 1.0;
      for (int j = j_lo; j <= j_hi; ++j) {
        const double wj = (j == j_lo || j == j_hi) ? 0.5 : 1.0;
        sum += wi * wj * bulk_density(f, V, i, j, part);
      }
    }
    return sum * d * d;
  }
  const TimeSlab slab = std::get<TimeSlab>(region);
  // Iterate diagonals; consecutive diagonals are dt = delta/2 apart and the
  // (w,v) -> (t,r*) Jacobian is 2.
  const int k_lo = g.slice_diagonal(slab.t_lo);
  const int k_hi = g.slice_diagonal(slab.t_hi);
  if (k_lo < 0 || k_hi < 0 || k_hi <= k_lo)
    throw std::invalid_argument("bulk_integral: time slab outside the grid");
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double wt = (k == k_lo || k == k_hi) ? 0.5 : 1.0;
    const int i_lo = std::max(0, k - (g.nv() - 1));
    const int i_hi = std::min(g.nw() - 1, k);
    double line = 0.0;
    std::vector<double> vals;
    for (int i = i_lo; i <= i_hi; ++i) {
      const int j = k - i;
      const double rs = g.rstar(i, j);
      if (rs < slab.rstar_lo || rs > slab.rstar_hi) continue;
      vals.push_back(bulk_density(f, V, i, j, part));
    }
    if (vals.size() < 2) continue;
    for (size_t q = 0; q < vals.size(); ++q)
      line += ((q == 0 || q + 1 == vals.size()) ? 0.5 : 1.0) * vals[q];
    sum += wt * line * d;  // r* spacing along a diagonal is delta
  }
  return sum * (0.5 * d) * 2.0;  // dt spacing delta/2 times the Jacobian
}

DivergenceResult divergence_residual(const DiagField& f, const MultiplierSpec& V,
                                     const NullRect& rect, Part part) {
  DivergenceResult out;
  out.bulk = bulk_integral(f, V, rect, part);
  const double fw_hi = slice_energy(f, V, WSegment{rect.w_hi, rect.v_lo, rect.v_hi},
                                    -1e300, 1e300, part)
                           .value;
  const double fw_lo = slice_energy(f, V, WSegment{rect.w_lo, rect.v_lo, rect.v_hi},
                                    -1e300, 1e300, part)
                           .value;
  const double fv_hi = slice_energy(f, V, VSegment{rect.v_hi, rect.w_lo, rect.w_hi},
                                    -1e300, 1e300, part)
                           .value;
  const double fv_lo = slice_energy(f, V, VSegment{rect.v_lo, rect.w_lo, rect.w_hi},
                                    -1e300, 1e300, part)
                           .value;
  out.flux = (fw_hi - fw_lo) + (fv_hi - fv_lo);
  out.scale = std::abs(fw_hi) + std::abs(fw_lo) + std::abs(fv_hi) + std::abs(fv_lo);
  out.residual = std::abs(out.flux + out.bulk);
  return out;
}

HAdmissibility check_h_admissible(const HProfile& h, const BackgroundParams& bg,
                                  double lapse_floor, int samples) {
  h.validate(bg);
  const double m = bg.m;
  // Sample r in (r_floor, r1], log-spaced in z = r - 2m.
  const double z_floor = 2.0 * m * lapse_floor / (1.0 - lapse_floor);
  const double z_top = h.r1 - 2.0 * m;
  HAdmissibility res;
  double mg[4] = {1e300, 1e300, 1e300, 1e300};
  for (int k = 0; k < samples; ++k) {
    const double frac = static_cast<double>(k) / (samples - 1);
    const double z = z_floor * std::pow(z_top / z_floor, frac);
    const double r = z + 2.0 * m;
    const double lp = z / r;
    const double mu = 1.0 - lp;
    const double hv = h.value_r(r);
    const double dh_dr = h.derivative_r(r);
    const double hp = dh_dr * lp;  // dh/dr*
    mg[0] = std::min(mg[0], hv);
    mg[1] = std::min(mg[1], hp);
    mg[2] = std::min(mg[2], mu * hv / r - hp);
    mg[3] = std::min(mg[3], 3.0 * hv / r - dh_dr);  // h'/(1-mu) = dh/dr
  }
  for (int c = 0; c < 4; ++c) res.margin[c] = mg[c];
  res.h_nonneg = mg[0] >= 0.0;
  res.hprime_nonneg = mg[1] >= 0.0;
  res.mu_condition = mg[2] >= 0.0;
  res.radial_condition = mg[3] >= 0.0;
  // Support: zero outside [2m, 1.2 r1].
  res.support_ok = h.value_r(1.2 * h.r1) == 0.0 && h.value_r(1.2 * h.r1 + 0.1) == 0.0 &&
                   h.value_r(3.0 * m) == 0.0;
  return res;
}

HAdmissibility check_h_admissible(const std::function<double(double)>& h_rstar,
                                  const std::function<double(double)>& hprime_rstar,
                                  const BackgroundParams& bg, double r1, double rstar_lo,
                                  double rstar_hi, int samples) {
  const double m = bg.m;
  if (!(2.0 * m < r1) || !(1.2 * r1 < 3.0 * m))
    throw std::invalid_argument(
        "check_h_admissible: r1 must satisfy 2m < r1 and 1.2*r1 < 3m (support window of h)");
  const double r1star = tortoise(bg, r1);
  const double hi = std::min(rstar_hi, r1star);
  HAdmissibility res;
  double mg[4] = {1e300, 1e300, 1e300, 1e300};
  for (int k = 0; k < samples; ++k) {
    const double rs = rstar_lo + (hi - rstar_lo) * static_cast<double>(k) / (samples - 1);
    const double z = z_from_tortoise(bg, rs);
    const double r = z + 2.0 * m;
    const double lp = z / r;
    const double mu = 1.0 - lp;
    const double hv = h_rstar(rs);
    const double hp = hprime_rstar(rs);
    mg[0] = std::min(mg[0], hv);
    mg[1] = std::min(mg[1], hp);
    mg[2] = std::min(mg[2], mu * hv / r - hp);
    mg[3] = std::min(mg[3], 3.0 * hv / r - hp / std::max(lp, 1e-300));
  }
  for (int c = 0; c < 4; ++c) res.margin[c] = mg[c];
  res.h_nonneg = mg[0] >= 0.0;
  res.hprime_nonneg = mg[1] >= 0.0;
  res.mu_condition = mg[2] >= 0.0;
  res.radial_condition = mg[3] >= 0.0;
  // Support containment from samples beyond r1* up to 1.2 r1 and outside.
  const double r12star = tortoise(bg, 1.2 * r1);
  res.support_ok = std::abs(h_rstar(r12star + 1.0)) == 0.0 &&
                   std::abs(h_rstar(r12star + 5.0)) == 0.0;
  return res;
}

double morawetz_sign_factor(const BackgroundParams& bg, double rstar) {
  const double r = radius_from_tortoise(bg, rstar);
  const double mu = bg.flat() ? 0.0 : 2.0 * bg.m / r;
  return 4.0 + 2.0 * (3.0 * mu - 2.0) * rstar / r;
}

std::pair<double, double> morawetz_positive_interval(const BackgroundParams& bg, double rstar_lo,
                                                     double rstar_hi) {
  auto gfun = [&](double rs) { return morawetz_sign_factor(bg, rs); };
  const double mid = tortoise(bg, 3.0 * bg.m);  // factor is 4 there
  auto bisect = [&](double a, double b) {
    double fa = gfun(a);
    for (int it = 0; it < 200; ++it) {
      const double c = 0.5 * (a + b);
      const double fc = gfun(c);
      if ((fa < 0.0) == (fc < 0.0)) {
        a = c;
        fa = fc;
      } else {
        b = c;
      }
      if (std::abs(b - a) < 1e-12 * std::max(1.0, std::abs(a))) break;
    }
    return 0.5 * (a + b);
  };
  if (!(gfun(rstar_lo) < 0.0) || !(gfun(rstar_hi) < 0.0) || !(gfun(mid) > 0.0))
    throw std::runtime_error("morawetz_positive_interval: sign pattern not bracketed");
  return {bisect(rstar_lo, mid), bisect(mid, rstar_hi)};
}

double EnergyReport::get(const std::string& functional, int time_comm, int ang_comm) const {
  for (const auto& e : entries)
    if (e.functional == functional && e.time_comm == time_comm && e.ang_comm == ang_comm)
      return e.value;
  throw std::invalid_argument("EnergyReport: missing constituent " + functional + "[" +
                              std::to_string(time_comm) + "," + std::to_string(ang_comm) + "]");
}

bool EnergyReport::has(const std::string& functional, int time_comm, int ang_comm) const {
  for (const auto& e : entries)
    if (e.functional == functional && e.time_comm == time_comm && e.ang_comm == ang_comm)
      return true;
  return false;
}

namespace {
double geom_sum(double x, int j_lo, int j_hi) {
  double s = 0.0, p = 1.0;
  for (int j = 0; j <= j_hi; ++j) {
    if (j >= j_lo) s += p;
    p *= x;
  }
  return s;
}
}  // namespace

double composite_E_MH_hat(double Et0, double Et1, double EK0, double EK1, double angfac) {
  const double st = geom_sum(angfac, 0, 5);
  const double sk = geom_sum(angfac, 0, 4);
  return st * (Et0 + Et1) + sk * (EK0 + EK1) + std::pow(angfac, 6) * Et0 +
         std::pow(angfac, 5) * EK0;
}

double composite_E_MH(double Et, double EK, double angfac) {
  return (27.0 + 9.0 * angfac + 3.0 * angfac * angfac + angfac * angfac * angfac) * Et +
         (9.0 + 3.0 * angfac + angfac * angfac) * EK;
}

double composite_E1(double Et_F, double EK_F, double Esharp_F, double angfac) {
  return std::sqrt(std::max(0.0, geom_sum(angfac, 0, 6) * Et_F + geom_sum(angfac, 0, 5) * EK_F +
                                     geom_sum(angfac, 1, 3) * Esharp_F));
}

double composite_E2(double Et_F, double Esharp_F_t0, double Esharp_F_t1, double angfac) {
  const double inner = Et_F * Et_F + geom_sum(angfac, 1, 2) * (Esharp_F_t0 + Esharp_F_t1) +
                       std::pow(angfac, 3) * Esharp_F_t0;
  return std::sqrt(std::max(0.0, inner));
}

double composite_E3(double Et, double Esharp, double E_MH, double angfac) {
  const double s = geom_sum(angfac, 0, 2);
  return std::sqrt(std::max(0.0, s * std::abs(Et) + s * Esharp + E_MH));
}

double composite_E4(double E3, double w, double v, PotentialKind kind) {
  const double vplus = std::max(1.0, v);
  const double amp = (w / vplus) * (w / vplus);
  if (kind == PotentialKind::quartic)
    return amp * E3 + std::pow(E3, 7) + std::pow(E3, 4) + std::pow(E3, 3) + E3;
  return amp * E3 + E3 + 1.0;
}

double composite_energy(const EnergyReport& rep, CompositeKind kind, double angfac,
                        PotentialKind pot, double w, double v) {
  switch (kind) {
    case CompositeKind::E_MH_hat:
      return composite_E_MH_hat(rep.get("E_t", 0), rep.get("E_t", 1), rep.get("E_K", 0),
                                rep.get("E_K", 1), angfac);
    case CompositeKind::E_MH:
      return composite_E_MH(rep.get("E_t", 0), rep.get("E_K", 0), angfac);
    case CompositeKind::E1:
      return composite_E1(rep.get("E_t_F", 0), rep.get("E_K_F", 0), rep.get("E_sharp_F", 0),
                          angfac);
    case CompositeKind::E2:
      return composite_E2(rep.get("E_t_F", 0), rep.get("E_sharp_F", 0),
                          rep.has("E_sharp_F", 1) ? rep.get("E_sharp_F", 1) : 0.0, angfac);
    case CompositeKind::E3:
      return composite_E3(rep.get("E_t", 0), rep.get("E_sharp", 0),
                          composite_energy(rep, CompositeKind::E_MH, angfac, pot, w, v), angfac);
    case CompositeKind::E4: {
      const double e3 =
          composite_energy(rep, CompositeKind::E3, angfac, pot, w, v);
      return composite_E4(e3, w, v, pot);
    }
  }
  throw std::invalid_argument("composite_energy: unknown kind");
}

namespace {
template <typename Integrand>
double slice_integral(const DiagField& f, double t, double rstar_lo, double rstar_hi,
                      Integrand&& integrand, SliceResult* meta) {
  const NullGrid& g = f.grid();
  const double d = g.delta();
  const DiagonalRange dr = slice_nodes(g, t);
  if (dr.k < 0) throw std::invalid_argument("slice integral: t slice outside the grid");
  std::vector<double> vals;
  double lo_seen = 1e300, hi_seen = -1e300;
  for (int i = dr.i_lo; i <= dr.i_hi; ++i) {
    const int j = dr.k - i;
    const double rs = g.rstar(i, j);
    if (rs < rstar_lo || rs > rstar_hi) continue;
    vals.push_back(integrand(i, j));
    lo_seen = std::min(lo_seen, rs);
    hi_seen = std::max(hi_seen, rs);
  }
  if (vals.size() < 2) throw std::invalid_argument("slice integral: empty intersection");
  double sum = 0.0;
  for (size_t k = 0; k < vals.size(); ++k)
    sum += ((k == 0 || k + 1 == vals.size()) ? 0.5 : 1.0) * vals[k];
  if (meta) {
    meta->snapped = dr.t;
    meta->rstar_lo = lo_seen;
    meta->rstar_hi = hi_seen;
    meta->truncated = (rstar_lo < lo_seen - 0.51 * d) || (rstar_hi > hi_seen + 0.51 * d);
    meta->value = sum * d;
  }
  return sum * d;
}
}  // namespace

double reduced_energy_slice(const DiagField& f, double t, double rstar_lo, double rstar_hi,
                            SliceResult* meta) {
  const NullGrid& g = f.grid();
  return slice_integral(
      f, t, rstar_lo, rstar_hi,
      [&](int i, int j) {
        const NodeTerms nt = f.terms(i, j, Part::all);
        const double r = g.r_node(i, j);
        const double lp = g.lapse_node(i, j);
        // (1-mu) r^2 (|D_that phi|^2 + |P|) with |D_that|^2 = |Dv + Dw|^2 / (1-mu);
        // the middle components are dropped by definition.
        const double dt2 = nt.absDv2 + nt.absDw2 + 2.0 * nt.cross;
        return f.volume(r) * f.sphere_weight() * (dt2 + lp * std::abs(nt.pot));
      },
      meta);
}

double sharp_energy_slice(const DiagField& f, double t, double rstar_lo, double rstar_hi,
                          Part part, SliceResult* meta) {
  const NullGrid& g = f.grid();
  return slice_integral(
      f, t, rstar_lo, rstar_hi,
      [&](int i, int j) {
        const NodeTerms nt = f.terms(i, j, part);
        const double r = g.r_node(i, j);
        const double lp = g.lapse_node(i, j);
        return f.volume(r) * f.sphere_weight() *
               (nt.F2 + nt.absDv2 + nt.absDw2 + 0.5 * lp * nt.pot);
      },
      meta);
}

}  // namespace mhs

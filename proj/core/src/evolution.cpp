#include "mhs/evolution.hpp"

#include <cmath>

namespace mhs {

namespace {
constexpr cplx kI{0.0, 1.0};

// Right-hand side of d_w d_v phi = S in the A_w == 0 gauge:
//   S = (1-mu)/(2r) (D_v phi - d_w phi) + i A_v d_w phi
//       - i (1-mu) Q/(4 r^2) phi - (1-mu)/4 dP/dconj(phi).
cplx scalar_rhs(cplx phi_c, cplx dw, cplx Dv, double Av_c, double Q_c, double r, double lp,
                const PotentialSpec& pot) {
  return lp / (2.0 * r) * (Dv - dw) + kI * Av_c * dw - kI * lp * Q_c / (4.0 * r * r) * phi_c -
         0.25 * lp * potential_derivative(pot, phi_c);
}

double ingoing_current(cplx phi_mid, cplx dphi_dv, double Av_mid, double r_mid) {
  const cplx Dv = covariant_derivative(dphi_dv, Av_mid, phi_mid);
  return 2.0 * r_mid * r_mid * current_density(phi_mid, Dv);
}
}  // namespace

cplx InitialData::profile_value(double v) const {
  double env = 0.0;
  switch (profile) {
    case ProfileKind::zero:
      return {0.0, 0.0};
    case ProfileKind::gaussian: {
      const double x = (v - center) / width;
      env = amplitude * std::exp(-x * x);
      break;
    }
    case ProfileKind::compact_bump: {
      const double x = (v - center) / width;
      if (std::abs(x) >= 1.0) return {0.0, 0.0};
      env = amplitude * std::exp(1.0 - 1.0 / (1.0 - x * x));
      break;
    }
  }
  if (phase_k == 0.0) return {env, 0.0};
  return env * std::exp(kI * (phase_k * v));
}

double InitialData::chi(double v, double v0) const {
  return twist_amplitude == 0.0 ? 0.0 : twist_amplitude * std::sin(twist_k * (v - v0));
}
double InitialData::dchi(double v, double v0) const {
  return twist_amplitude == 0.0 ? 0.0
                                : twist_amplitude * twist_k * std::cos(twist_k * (v - v0));
}

void ModeSpec::validate() const {
  if (s != 0 && s != 1) throw std::invalid_argument("mode: spin must be 0 or 1");
  if (ell < s) throw std::invalid_argument("mode: need ell >= s");
  if (s == 1 && potential.kind != PotentialKind::none)
    throw std::invalid_argument("mode: the s = 1 sector carries no potential");
  potential.validate();
}

double ModeSpec::master_potential(double r, double m) const {
  return ell * (ell + 1.0) / (r * r) + (1.0 - s * s) * 2.0 * m / (r * r * r) +
         potential.quadratic_coefficient();
}

double ModeSpec::master_potential_dr(double r, double m) const {
  return -2.0 * ell * (ell + 1.0) / (r * r * r) - (1.0 - s * s) * 6.0 * m / (r * r * r * r);
}

CellState step_diamond(const CellState& SW, const CellState& SE, const CellState& NW,
                       const DiamondGeom& g, const PotentialSpec& pot, double delta,
                       int corrector_passes, const CellSources* src, long* toda_flags) {
  const cplx Sphi_ext = src ? src->S_phi : cplx{0.0, 0.0};
  const double SA_ext = src ? src->S_A : 0.0;
  const double SQ_ext = src ? src->S_Q : 0.0;

  CellState NE;
  NE.phi = NW.phi + SE.phi - SW.phi;  // free-transport predictor
  NE.Q = NW.Q;
  NE.A_v = SE.A_v;
  for (int pass = 0; pass < corrector_passes; ++pass) {
    const cplx phi_c = 0.25 * (SW.phi + SE.phi + NW.phi + NE.phi);
    const double Av_c = 0.25 * (SW.A_v + SE.A_v + NW.A_v + NE.A_v);
    const double Q_c = 0.25 * (SW.Q + SE.Q + NW.Q + NE.Q);
    const cplx dw = (NE.phi + NW.phi - SE.phi - SW.phi) / (2.0 * delta);
    const cplx dv = (NE.phi + SE.phi - NW.phi - SW.phi) / (2.0 * delta);
    const cplx Dv = covariant_derivative(dv, Av_c, phi_c);
    if (toda_flags && toda_origin_evaluation(pot, phi_c)) ++*toda_flags;
    const cplx S = scalar_rhs(phi_c, dw, Dv, Av_c, Q_c, g.r_c, g.lapse_c, pot) + Sphi_ext;
    NE.phi = NW.phi + SE.phi - SW.phi + delta * delta * S;

    // Ingoing Gauss law along the north edge, midpoint rule.
    const cplx phi_n = 0.5 * (NW.phi + NE.phi);
    const cplx dphi_n = (NE.phi - NW.phi) / delta;
    const double Av_n = 0.5 * (NW.A_v + NE.A_v);
    NE.Q = NW.Q + delta * (-ingoing_current(phi_n, dphi_n, Av_n, g.r_north) + SQ_ext);

    // d_w A_v = -(1-mu) Q / (2 r^2) along the east edge, trapezoid.
    const double Q_e = 0.5 * (SE.Q + NE.Q);
    NE.A_v = SE.A_v + delta * (-g.lapse_east * Q_e / (2.0 * g.r_east * g.r_east) + SA_ext);
  }
  if (!std::isfinite(NE.phi.real()) || !std::isfinite(NE.phi.imag()) || !std::isfinite(NE.Q) ||
      !std::isfinite(NE.A_v))
    throw std::runtime_error("step_diamond: non-finite field value");
  return NE;
}

FieldHistory::FieldHistory(NullGrid grid, PotentialSpec pot)
    : grid_(std::move(grid)), pot_(pot) {
  phi_.assign(grid_.node_count(), cplx{0.0, 0.0});
  Av_.assign(grid_.node_count(), 0.0);
  Q_.assign(grid_.node_count(), 0.0);
}

cplx FieldHistory::Dw(int i, int j) const {
  const int nw = grid_.nw();
  const double d = grid_.delta();
  cplx dphi;
  if (i == 0)
    dphi = (-3.0 * phi(0, j) + 4.0 * phi(1, j) - phi(2, j)) / (2.0 * d);
  else if (i == nw - 1)
    dphi = (3.0 * phi(nw - 1, j) - 4.0 * phi(nw - 2, j) + phi(nw - 3, j)) / (2.0 * d);
  else
    dphi = (phi(i + 1, j) - phi(i - 1, j)) / (2.0 * d);
  return dphi;  // A_w == 0
}

cplx FieldHistory::Dv(int i, int j) const {
  const int nv = grid_.nv();
  const double d = grid_.delta();
  cplx dphi;
  if (j == 0)
    dphi = (-3.0 * phi(i, 0) + 4.0 * phi(i, 1) - phi(i, 2)) / (2.0 * d);
  else if (j == nv - 1)
    dphi = (3.0 * phi(i, nv - 1) - 4.0 * phi(i, nv - 2) + phi(i, nv - 3)) / (2.0 * d);
  else
    dphi = (phi(i, j + 1) - phi(i, j - 1)) / (2.0 * d);
  return covariant_derivative(dphi, A_v(i, j), phi(i, j));
}

FieldSample FieldHistory::sample(int i, int j) const {
  FieldSample s;
  s.phi = phi(i, j);
  s.A_w = 0.0;
  s.A_v = A_v(i, j);
  s.lapse = grid_.lapse_node(i, j);
  const double sq = std::sqrt(s.lapse);
  s.Dw_hat = Dw(i, j) / sq;
  s.Dv_hat = Dv(i, j) / sq;
  s.F_hat = F_hat(i, j);
  return s;
}

Rays initialize(const NullGrid& grid, const InitialData& data, const PotentialSpec& pot) {
  (void)pot;
  const int nw = grid.nw(), nv = grid.nv();
  const double d = grid.delta();
  const double v0 = grid.spec().v0;
  Rays rays;
  rays.phi_out.resize(nv);
  rays.Av_out.resize(nv);
  rays.Q_out.resize(nv);
  rays.phi_in.resize(nw);
  rays.Av_in.resize(nw);
  rays.Q_in.resize(nw);

  // Support must sit inside the outgoing ray.
  if (data.amplitude != 0.0) {
    const double edge = std::max(std::abs(data.profile_value(v0)),
                                 std::abs(data.profile_value(grid.spec().v1)));
    if (edge > 1e-12 * std::abs(data.amplitude))
      throw std::invalid_argument("initialize: profile support leaks outside the initial rays");
  }

  for (int j = 0; j < nv; ++j) {
    const double v = grid.v(j);
    rays.phi_out[j] = data.profile_value(v) * std::exp(kI * data.chi(v, v0));
    rays.Av_out[j] = data.dchi(v, v0);
  }
  // Gauss law along w = w0: d_v Q = -2 r^2 Im(conj phi D_v phi), midpoint.
  rays.Q_out[0] = data.Q0;
  for (int j = 0; j + 1 < nv; ++j) {
    const cplx pm = 0.5 * (rays.phi_out[j] + rays.phi_out[j + 1]);
    const cplx dp = (rays.phi_out[j + 1] - rays.phi_out[j]) / d;
    const double am = 0.5 * (rays.Av_out[j] + rays.Av_out[j + 1]);
    rays.Q_out[j + 1] = rays.Q_out[j] - d * ingoing_current(pm, dp, am, grid.r_vedge(0, j));
    if (!std::isfinite(rays.Q_out[j + 1]))
      throw std::invalid_argument("initialize: Gauss integration failed on the outgoing ray");
  }

  // Ingoing ray: constant scalar, so the outgoing current vanishes and Q is
  // constant; A_v solves its ODE from the corner value.
  for (int i = 0; i < nw; ++i) {
    rays.phi_in[i] = rays.phi_out[0];
    rays.Q_in[i] = data.Q0;
  }
  rays.Av_in[0] = rays.Av_out[0];
  for (int i = 0; i + 1 < nw; ++i) {
    const double r1 = grid.r_node(i, 0), r2 = grid.r_node(i + 1, 0);
    const double l1 = grid.lapse_node(i, 0), l2 = grid.lapse_node(i + 1, 0);
    const double g1 = -l1 * rays.Q_in[i] / (2.0 * r1 * r1);
    const double g2 = -l2 * rays.Q_in[i + 1] / (2.0 * r2 * r2);
    rays.Av_in[i + 1] = rays.Av_in[i] + 0.5 * d * (g1 + g2);
  }
  return rays;
}

FieldHistory evolve(const BackgroundParams& bg, const GridSpec& spec, const InitialData& data,
                    const PotentialSpec& pot, const EvolveOptions& opt) {
  NullGrid grid(bg, spec, opt.min_lapse);
  const Rays rays = initialize(grid, data, pot);
  return evolve(bg, grid.spec(), rays, pot, opt);
}

FieldHistory evolve(const BackgroundParams& bg, const GridSpec& spec, const Rays& rays,
                    const PotentialSpec& pot, const EvolveOptions& opt) {
  pot.validate();
  NullGrid grid(bg, spec, opt.min_lapse);
  FieldHistory h(grid, pot);
  const NullGrid& g = h.grid();
  const int nw = g.nw(), nv = g.nv();
  const double d = g.delta();
  if (static_cast<int>(rays.phi_out.size()) != nv || static_cast<int>(rays.phi_in.size()) < nw)
    throw std::invalid_argument("evolve: ray lengths do not match the grid");
  h.stats().clipped_rows = g.clipped_rows();

  auto& phi = h.raw_phi();
  auto& Av = h.raw_Av();
  auto& Q = h.raw_Q();
  for (int j = 0; j < nv; ++j) {
    phi[g.index(0, j)] = rays.phi_out[j];
    Av[g.index(0, j)] = rays.Av_out[j];
    Q[g.index(0, j)] = rays.Q_out[j];
  }
  for (int i = 0; i < nw; ++i) {
    phi[g.index(i, 0)] = rays.phi_in[i];
    Av[g.index(i, 0)] = rays.Av_in[i];
    Q[g.index(i, 0)] = rays.Q_in[i];
  }

  long toda_flags = 0;
  for (int i = 0; i + 1 < nw; ++i) {
    const double w = g.w(i);
    for (int j = 0; j + 1 < nv; ++j) {
      const double v = g.v(j);
      DiamondGeom geom;
      geom.wc = w + 0.5 * d;
      geom.vc = v + 0.5 * d;
      geom.r_c = g.r_node(i, j);  // SW and NE share the center diagonal
      geom.lapse_c = g.lapse_node(i, j);
      geom.r_north = g.r_vedge(i + 1, j);
      geom.r_east = g.r_wedge(i, j + 1);
      geom.lapse_east = g.lapse_wedge(i, j + 1);
      const CellState SW{phi[g.index(i, j)], Av[g.index(i, j)], Q[g.index(i, j)]};
      const CellState SE{phi[g.index(i, j + 1)], Av[g.index(i, j + 1)], Q[g.index(i, j + 1)]};
      const CellState NW{phi[g.index(i + 1, j)], Av[g.index(i + 1, j)], Q[g.index(i + 1, j)]};
      CellSources src;
      const CellSources* srcp = nullptr;
      if (opt.sources) {
        src = opt.sources(geom.wc, geom.vc);
        srcp = &src;
      }
      CellState NE;
      try {
        NE = step_diamond(SW, SE, NW, geom, pot, d, opt.corrector_passes, srcp, &toda_flags);
      } catch (const std::runtime_error& e) {
        throw evolution_error(e.what(), i + 1, j + 1);
      }
      if (opt.fault_injection != 0.0)
        NE.phi += opt.fault_injection * d * d * d * std::cos(geom.wc + geom.vc);
      phi[g.index(i + 1, j + 1)] = NE.phi;
      Av[g.index(i + 1, j + 1)] = NE.A_v;
      Q[g.index(i + 1, j + 1)] = NE.Q;
    }
  }
  h.stats().toda_origin_evals = toda_flags;
  h.stats().max_gauss_residual = gauss_residual(h).max;
  h.stats().max_covariant_residual = covariant_residual(h, opt.sources).max;
  h.stats().max_maxwell_residual = maxwell_residual(h, opt.sources).max;
  return h;
}

ModeHistory::ModeHistory(NullGrid grid, ModeSpec mode) : grid_(std::move(grid)), mode_(mode) {
  psi_.assign(grid_.node_count(), cplx{0.0, 0.0});
}

ModeHistory evolve_mode(const BackgroundParams& bg, const GridSpec& spec, const ModeSpec& mode,
                        const InitialData& data, const EvolveOptions& opt) {
  NullGrid grid(bg, spec, opt.min_lapse);
  std::vector<cplx> out(grid.nv()), in(grid.nw());
  for (int j = 0; j < grid.nv(); ++j) out[j] = data.profile_value(grid.v(j));
  for (int i = 0; i < grid.nw(); ++i) in[i] = out[0];
  return evolve_mode(bg, grid.spec(), mode, out, in, opt);
}

ModeHistory evolve_mode(const BackgroundParams& bg, const GridSpec& spec, const ModeSpec& mode,
                        const std::vector<cplx>& psi_out, const std::vector<cplx>& psi_in,
                        const EvolveOptions& opt) {
  mode.validate();
  NullGrid grid(bg, spec, opt.min_lapse);
  ModeHistory h(grid, mode);
  const NullGrid& g = h.grid();
  const int nw = g.nw(), nv = g.nv();
  const double d = g.delta();
  if (static_cast<int>(psi_out.size()) != nv || static_cast<int>(psi_in.size()) < nw)
    throw std::invalid_argument("evolve_mode: ray lengths do not match the grid");
  auto& psi = h.raw_psi();
  for (int j = 0; j < nv; ++j) psi[g.index(0, j)] = psi_out[j];
  for (int i = 0; i < nw; ++i) psi[g.index(i, 0)] = psi_in[i];
  for (int i = 0; i + 1 < nw; ++i) {
    for (int j = 0; j + 1 < nv; ++j) {
      const double rc = g.r_node(i, j);
      const double coef =
          d * d * g.lapse_node(i, j) * mode.master_potential(rc, bg.m) / 8.0;
      cplx ne = psi[g.index(i + 1, j)] + psi[g.index(i, j + 1)] - psi[g.index(i, j)] -
                coef * (psi[g.index(i + 1, j)] + psi[g.index(i, j + 1)]);
      if (opt.fault_injection != 0.0)
        ne += opt.fault_injection * d * d * d * std::cos(g.w(i) + g.v(j));
      if (!std::isfinite(ne.real()) || !std::isfinite(ne.imag()))
        throw evolution_error("evolve_mode: non-finite value", i + 1, j + 1);
      psi[g.index(i + 1, j + 1)] = ne;
    }
  }
  h.max_residual = mode_residual(h);
  return h;
}

std::vector<TracePoint> evolve_mode_trace(const BackgroundParams& bg, const GridSpec& spec,
                                          const ModeSpec& mode, const InitialData& data,
                                          int trace_offset, const EvolveOptions& opt) {
  mode.validate();
  NullGrid grid(bg, spec, opt.min_lapse);
  const int nw = grid.nw(), nv = grid.nv();
  const double d = grid.delta();
  std::vector<cplx> rowA(nv), rowB(nv);
  for (int j = 0; j < nv; ++j) rowA[j] = data.profile_value(grid.v(j));
  const cplx corner = rowA[0];
  std::vector<TracePoint> trace;
  if (trace_offset >= 0 && trace_offset < nv)
    trace.push_back({grid.w(0), grid.v(trace_offset), rowA[trace_offset]});
  for (int i = 0; i + 1 < nw; ++i) {
    rowB[0] = corner;
    for (int j = 0; j + 1 < nv; ++j) {
      const double rc = grid.r_node(i, j);
      const double coef = d * d * grid.lapse_node(i, j) * mode.master_potential(rc, bg.m) / 8.0;
      rowB[j + 1] = rowB[j] + rowA[j + 1] - rowA[j] - coef * (rowB[j] + rowA[j + 1]);
    }
    const int jt = (i + 1) + trace_offset;
    if (jt >= 0 && jt < nv) trace.push_back({grid.w(i + 1), grid.v(jt), rowB[jt]});
    std::swap(rowA, rowB);
  }
  for (const auto& p : trace)
    if (!std::isfinite(p.value.real()))
      throw std::runtime_error("evolve_mode_trace: non-finite trace value");
  return trace;
}

namespace {
template <typename F>
ResidualReport cell_residual_scan(const NullGrid& g, F&& cell_value) {
  ResidualReport rep;
  const int nw = g.nw(), nv = g.nv();
  rep.per_band.assign(nw - 1 + nv - 1 - 1, 0.0);
  for (int i = 0; i + 1 < nw; ++i)
    for (int j = 0; j + 1 < nv; ++j) {
      const double r = std::abs(cell_value(i, j));
      rep.max = std::max(rep.max, r);
      auto& band = rep.per_band[i + j];
      band = std::max(band, r);
    }
  return rep;
}
}  // namespace

ResidualReport gauss_residual(const FieldHistory& h) {
  const NullGrid& g = h.grid();
  const double d = g.delta();
  return cell_residual_scan(g, [&](int i, int j) {
    const double dwQ = (h.charge(i + 1, j) + h.charge(i + 1, j + 1) - h.charge(i, j) -
                        h.charge(i, j + 1)) /
                       (2.0 * d);
    const cplx pc = 0.25 * (h.phi(i, j) + h.phi(i, j + 1) + h.phi(i + 1, j) + h.phi(i + 1, j + 1));
    const cplx dwp =
        (h.phi(i + 1, j) + h.phi(i + 1, j + 1) - h.phi(i, j) - h.phi(i, j + 1)) / (2.0 * d);
    const double rc = g.r_node(i, j);  // center shares the SW diagonal
    // Outgoing Gauss component: d_w Q = +2 r^2 Im(conj phi d_w phi).
    return dwQ - rc * rc * current_density(pc, dwp);
  });
}

ResidualReport covariant_residual(const FieldHistory& h, const SourceFn& sources) {
  const NullGrid& g = h.grid();
  const double d = g.delta();
  return cell_residual_scan(g, [&](int i, int j) {
    const cplx pc = 0.25 * (h.phi(i, j) + h.phi(i, j + 1) + h.phi(i + 1, j) + h.phi(i + 1, j + 1));
    const double ac =
        0.25 * (h.A_v(i, j) + h.A_v(i, j + 1) + h.A_v(i + 1, j) + h.A_v(i + 1, j + 1));
    const double qc = 0.25 * (h.charge(i, j) + h.charge(i, j + 1) + h.charge(i + 1, j) +
                              h.charge(i + 1, j + 1));
    const cplx dw =
        (h.phi(i + 1, j) + h.phi(i + 1, j + 1) - h.phi(i, j) - h.phi(i, j + 1)) / (2.0 * d);
    const cplx dv =
        (h.phi(i, j + 1) + h.phi(i + 1, j + 1) - h.phi(i, j) - h.phi(i + 1, j)) / (2.0 * d);
    const cplx dwdv =
        (h.phi(i + 1, j + 1) - h.phi(i + 1, j) - h.phi(i, j + 1) + h.phi(i, j)) / (d * d);
    const cplx Dv = covariant_derivative(dv, ac, pc);
    cplx res = dwdv - scalar_rhs(pc, dw, Dv, ac, qc, g.r_node(i, j), g.lapse_node(i, j),
                                 h.potential());
    if (sources) res -= sources(g.w(i) + 0.5 * d, g.v(j) + 0.5 * d).S_phi;
    return std::abs(res);
  });
}

ResidualReport maxwell_residual(const FieldHistory& h, const SourceFn& sources) {
  const NullGrid& g = h.grid();
  const double d = g.delta();
  return cell_residual_scan(g, [&](int i, int j) {
    const double dwA =
        (h.A_v(i + 1, j) + h.A_v(i + 1, j + 1) - h.A_v(i, j) - h.A_v(i, j + 1)) / (2.0 * d);
    const double qc = 0.25 * (h.charge(i, j) + h.charge(i, j + 1) + h.charge(i + 1, j) +
                              h.charge(i + 1, j + 1));
    const double rc = g.r_node(i, j), lc = g.lapse_node(i, j);
    double res = dwA + lc * qc / (2.0 * rc * rc);
    if (sources) res -= sources(g.w(i) + 0.5 * d, g.v(j) + 0.5 * d).S_A;
    return res;
  });
}

double mode_residual(const ModeHistory& h) {
  const NullGrid& g = h.grid();
  const double d = g.delta();
  const double m = g.background().m;
  double mx = 0.0;
  for (int i = 0; i + 1 < g.nw(); ++i)
    for (int j = 0; j + 1 < g.nv(); ++j) {
      const cplx dwdv =
          (h.psi(i + 1, j + 1) - h.psi(i + 1, j) - h.psi(i, j + 1) + h.psi(i, j)) / (d * d);
      const cplx pc =
          0.25 * (h.psi(i, j) + h.psi(i, j + 1) + h.psi(i + 1, j) + h.psi(i + 1, j + 1));
      const double rc = g.r_node(i, j), lc = g.lapse_node(i, j);
      const cplx res = dwdv + 0.25 * lc * h.mode().master_potential(rc, m) * pc;
      mx = std::max(mx, std::abs(res));
    }
  return mx;
}

}  // namespace mhs

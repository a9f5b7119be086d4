#include "mhs/manufactured.hpp"

#include <cmath>

namespace mhs {

namespace {
constexpr cplx kI{0.0, 1.0};
double gauss(double x, double c, double s) {
  const double u = (x - c) / s;
  return std::exp(-u * u);
}
double gauss_d(double x, double c, double s) {
  const double u = (x - c) / s;
  return -2.0 * u / s * std::exp(-u * u);
}
}  // namespace

cplx ManufacturedCase::phi(double w, double v) const {
  return a * gauss(w, w_center, w_width) * gauss(v, v_center, v_width) *
         (1.0 + kI * b * std::sin(kv * v + kw * w));
}

cplx ManufacturedCase::phi_w(double w, double v) const {
  const double gw = gauss(w, w_center, w_width), gv = gauss(v, v_center, v_width);
  const double gwd = gauss_d(w, w_center, w_width);
  const cplx osc = 1.0 + kI * b * std::sin(kv * v + kw * w);
  const cplx oscw = kI * b * kw * std::cos(kv * v + kw * w);
  return a * (gwd * gv * osc + gw * gv * oscw);
}

cplx ManufacturedCase::phi_v(double w, double v) const {
  const double gw = gauss(w, w_center, w_width), gv = gauss(v, v_center, v_width);
  const double gvd = gauss_d(v, v_center, v_width);
  const cplx osc = 1.0 + kI * b * std::sin(kv * v + kw * w);
  const cplx oscv = kI * b * kv * std::cos(kv * v + kw * w);
  return a * (gw * gvd * osc + gw * gv * oscv);
}

cplx ManufacturedCase::phi_wv(double w, double v) const {
  const double gw = gauss(w, w_center, w_width), gv = gauss(v, v_center, v_width);
  const double gwd = gauss_d(w, w_center, w_width), gvd = gauss_d(v, v_center, v_width);
  const double ph = kv * v + kw * w;
  const cplx osc = 1.0 + kI * b * std::sin(ph);
  const cplx oscw = kI * b * kw * std::cos(ph);
  const cplx oscv = kI * b * kv * std::cos(ph);
  const cplx oscwv = -kI * b * kw * kv * std::sin(ph);
  return a * (gwd * gvd * osc + gwd * gv * oscv + gw * gvd * oscw + gw * gv * oscwv);
}

double ManufacturedCase::A(double w, double v) const {
  return aA * gauss(w, w_center, A_w_width) * gauss(v, v_center, A_v_width);
}
double ManufacturedCase::A_w_deriv(double w, double v) const {
  return aA * gauss_d(w, w_center, A_w_width) * gauss(v, v_center, A_v_width);
}
double ManufacturedCase::Q(double w, double v) const {
  return q0 + q1 * std::sin(kq * w) * gauss(v, v_center, Q_v_width);
}
double ManufacturedCase::Q_w(double w, double v) const {
  return q1 * kq * std::cos(kq * w) * gauss(v, v_center, Q_v_width);
}
double ManufacturedCase::Q_v(double w, double v) const {
  return q1 * std::sin(kq * w) * gauss_d(v, v_center, Q_v_width);
}

CellSources ManufacturedCase::sources(double w, double v) const {
  const double rstar = 0.5 * (v - w);
  const double r = radius_from_tortoise(bg, rstar);
  const double lp = bg.flat() ? 1.0 : 1.0 - 2.0 * bg.m / r;
  const cplx p = phi(w, v);
  const cplx pw = phi_w(w, v);
  const cplx pv = phi_v(w, v);
  const double Av = A(w, v);
  const double Qv = Q(w, v);
  const cplx Dv = covariant_derivative(pv, Av, p);
  CellSources s;
  const cplx rhs = lp / (2.0 * r) * (Dv - pw) + kI * Av * pw -
                   kI * lp * Qv / (4.0 * r * r) * p - 0.25 * lp * potential_derivative(pot, p);
  s.S_phi = phi_wv(w, v) - rhs;
  s.S_A = A_w_deriv(w, v) + lp * Qv / (2.0 * r * r);
  s.S_Q = Q_v(w, v) + 2.0 * r * r * current_density(p, Dv);
  return s;
}

Rays ManufacturedCase::rays(const NullGrid& grid) const {
  Rays r;
  const int nw = grid.nw(), nv = grid.nv();
  r.phi_out.resize(nv);
  r.Av_out.resize(nv);
  r.Q_out.resize(nv);
  r.phi_in.resize(nw);
  r.Av_in.resize(nw);
  r.Q_in.resize(nw);
  const double w0 = grid.spec().w0, v0 = grid.spec().v0;
  for (int j = 0; j < nv; ++j) {
    const double v = grid.v(j);
    r.phi_out[j] = phi(w0, v);
    r.Av_out[j] = A(w0, v);
    r.Q_out[j] = Q(w0, v);
  }
  for (int i = 0; i < nw; ++i) {
    const double w = grid.w(i);
    r.phi_in[i] = phi(w, v0);
    r.Av_in[i] = A(w, v0);
    r.Q_in[i] = Q(w, v0);
  }
  return r;
}

ManufacturedCase::Errors ManufacturedCase::errors(const FieldHistory& h) const {
  Errors e;
  const NullGrid& g = h.grid();
  for (int i = 0; i < g.nw(); ++i)
    for (int j = 0; j < g.nv(); ++j) {
      const double w = g.w(i), v = g.v(j);
      e.phi = std::max(e.phi, std::abs(h.phi(i, j) - phi(w, v)));
      e.A = std::max(e.A, std::abs(h.A_v(i, j) - A(w, v)));
      e.Q = std::max(e.Q, std::abs(h.charge(i, j) - Q(w, v)));
    }
  return e;
}

}  // namespace mhs

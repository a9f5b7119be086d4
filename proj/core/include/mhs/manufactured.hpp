// Manufactured solution for convergence verification: closed-form smooth
// fields (phi, A_v, Q) with the source terms that make them exact solutions
// of the three update equations.  Independent of the evolution scheme.
#pragma once

#include "mhs/evolution.hpp"

namespace mhs {

struct ManufacturedCase {
  BackgroundParams bg;
  PotentialSpec pot = PotentialSpec::quartic(1.0);
  // phi = a gw(w) gv(v) (1 + i b sin(kv v + kw w)), gaussians gw, gv
  double a = 0.1, b = 0.5;
  double w_center = 8.0, w_width = 3.0;
  double v_center = 10.0, v_width = 3.0;
  double kv = 0.7, kw = 0.3;
  // A_v = aA gA(w) gA(v);  Q = q0 + q1 sin(kq w) gQ(v)
  double aA = 0.05, A_w_width = 4.0, A_v_width = 4.0;
  double q0 = 0.2, q1 = 0.3, kq = 0.3, Q_v_width = 5.0;

  cplx phi(double w, double v) const;
  cplx phi_w(double w, double v) const;
  cplx phi_v(double w, double v) const;
  cplx phi_wv(double w, double v) const;
  double A(double w, double v) const;
  double A_w_deriv(double w, double v) const;
  double Q(double w, double v) const;
  double Q_w(double w, double v) const;
  double Q_v(double w, double v) const;

  // Source terms making the manufactured fields exact solutions.
  CellSources sources(double w, double v) const;
  // Rays sampled from the closed forms.
  Rays rays(const NullGrid& grid) const;
  // Max node errors |phi - phi_m|, |A - A_m|, |Q - Q_m| of a history.
  struct Errors {
    double phi = 0.0, A = 0.0, Q = 0.0;
  };
  Errors errors(const FieldHistory& h) const;
};

}  // namespace mhs

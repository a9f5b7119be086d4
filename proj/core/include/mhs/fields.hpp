// Field content at a point: complex scalar, null gauge components, field
// strength, gauge-covariant derivatives, and the charge current.
#pragma once

#include <complex>
#include <vector>

namespace mhs {

using cplx = std::complex<double>;

// One spacetime sample of the matter fields.  Covariant derivatives and the
// field strength are stored in the orthonormal (hatted) frame:
//   Dw_hat = D_w phi / sqrt(1-mu),  Dv_hat = D_v phi / sqrt(1-mu),
//   F_hat  = F_vw / (1-mu).
// Coordinate-frame values are derived on demand via the stored lapse.
struct FieldSample {
  cplx phi{0.0, 0.0};
  double A_w = 0.0;  // null-frame gauge components (coordinate frame)
  double A_v = 0.0;
  cplx Dw_hat{0.0, 0.0};
  cplx Dv_hat{0.0, 0.0};
  double F_hat = 0.0;
  double lapse = 1.0;

  cplx Dw() const;  // coordinate D_w phi
  cplx Dv() const;
  double F_vw() const;     // coordinate F_vw
  cplx Dt_hat() const;     // D_that phi = Dv_hat + Dw_hat
  cplx Drstar_hat() const; // D_rstar-hat phi = Dv_hat - Dw_hat
};

// d_phi - i A phi.
cplx covariant_derivative(cplx d_phi, double A, cplx phi);

// Real value of -i (D_phi conj(phi) - phi conj(D_phi)) = 2 Im(conj(phi) D_phi).
// Sign convention: the Maxwell equation is taken with source -j so that the
// stress tensor is divergence-free; see evolution.cpp (gauss law) for the one
// place the orientation enters.
double current_density(cplx phi, cplx D_phi);

// Discrete F_vw = d_v A_w - d_w A_v from gauge samples on a uniform null
// grid, second order (centered interior, one-sided edges).  Row index is w,
// column index is v; arrays are row-major nw x nv.
std::vector<double> field_strength(const std::vector<double>& A_w,
                                   const std::vector<double>& A_v,
                                   int nw, int nv, double delta);

// Pointwise gauge transform phi -> e^{i chi} phi, A -> A + d chi with the
// analytic derivatives of chi supplied by the caller.  Hatted derivative
// components transform covariantly.
FieldSample gauge_transform(const FieldSample& s, double chi, double dchi_dw, double dchi_dv);

}  // namespace mhs

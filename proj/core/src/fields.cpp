#include "mhs/fields.hpp"

#include <cmath>
#include <stdexcept>

namespace mhs {

cplx FieldSample::Dw() const { return std::sqrt(lapse) * Dw_hat; }
cplx FieldSample::Dv() const { return std::sqrt(lapse) * Dv_hat; }
double FieldSample::F_vw() const { return lapse * F_hat; }
cplx FieldSample::Dt_hat() const { return Dv_hat + Dw_hat; }
cplx FieldSample::Drstar_hat() const { return Dv_hat - Dw_hat; }

cplx covariant_derivative(cplx d_phi, double A, cplx phi) {
  return d_phi - cplx(0.0, 1.0) * A * phi;
}

double current_density(cplx phi, cplx D_phi) {
  return 2.0 * std::imag(std::conj(phi) * D_phi);
}

std::vector<double> field_strength(const std::vector<double>& A_w,
                                   const std::vector<double>& A_v,
                                   int nw, int nv, double delta) {
  if (nw < 2 || nv < 2) throw std::invalid_argument("field_strength: grid must be at least 2x2");
  if (static_cast<int>(A_w.size()) != nw * nv || static_cast<int>(A_v.size()) != nw * nv)
    throw std::invalid_argument("field_strength: array size mismatch");
  auto at = [nv](const std::vector<double>& a, int i, int j) { return a[i * nv + j]; };
  auto d_along_v = [&](const std::vector<double>& a, int i, int j) {
    if (j == 0) return (-3.0 * at(a, i, 0) + 4.0 * at(a, i, 1) - at(a, i, 2)) / (2.0 * delta);
    if (j == nv - 1)
      return (3.0 * at(a, i, nv - 1) - 4.0 * at(a, i, nv - 2) + at(a, i, nv - 3)) / (2.0 * delta);
    return (at(a, i, j + 1) - at(a, i, j - 1)) / (2.0 * delta);
  };
  auto d_along_w = [&](const std::vector<double>& a, int i, int j) {
    if (i == 0) return (-3.0 * at(a, 0, j) + 4.0 * at(a, 1, j) - at(a, 2, j)) / (2.0 * delta);
    if (i == nw - 1)
      return (3.0 * at(a, nw - 1, j) - 4.0 * at(a, nw - 2, j) + at(a, nw - 3, j)) / (2.0 * delta);
    return (at(a, i + 1, j) - at(a, i - 1, j)) / (2.0 * delta);
  };
  // 2x2 grids fall back to first-order one-sided stencils.
  if (nw == 2 || nv == 2) {
    std::vector<double> F(static_cast<size_t>(nw) * nv);
    for (int i = 0; i < nw; ++i)
      for (int j = 0; j < nv; ++j) {
        const int i0 = std::min(i, nw - 2), j0 = std::min(j, nv - 2);
        const double dvAw = (at(A_w, i, j0 + 1) - at(A_w, i, j0)) / delta;
        const double dwAv = (at(A_v, i0 + 1, j) - at(A_v, i0, j)) / delta;
        F[i * nv + j] = dvAw - dwAv;
      }
    return F;
  }
  std::vector<double> F(static_cast<size_t>(nw) * nv);
  for (int i = 0; i < nw; ++i)
    for (int j = 0; j < nv; ++j)
      F[i * nv + j] = d_along_v(A_w, i, j) - d_along_w(A_v, i, j);
  return F;
}

FieldSample gauge_transform(const FieldSample& s, double chi, double dchi_dw, double dchi_dv) {
  FieldSample t = s;
  const cplx phase = std::exp(cplx(0.0, chi));
  t.phi = phase * s.phi;
  t.A_w = s.A_w + dchi_dw;
  t.A_v = s.A_v + dchi_dv;
  t.Dw_hat = phase * s.Dw_hat;
  t.Dv_hat = phase * s.Dv_hat;
  t.F_hat = s.F_hat;  // gauge invariant
  return t;
}

}  // namespace mhs

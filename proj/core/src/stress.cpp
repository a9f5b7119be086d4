#include "mhs/stress.hpp"

namespace mhs {

StressEnergy stress_energy(const FieldSample& s, double P) {
  StressEnergy T;
  const double lp = s.lapse;
  const double F2 = s.F_hat * s.F_hat;
  const cplx Dw = s.Dw();
  const cplx Dv = s.Dv();
  T.T_ww = 2.0 * std::norm(Dw);
  T.T_vv = 2.0 * std::norm(Dv);
  T.T_wv = lp * (F2 + 0.5 * P);
  T.T_ang = 2.0 * F2 + 4.0 * std::real(s.Dv_hat * std::conj(s.Dw_hat)) - P;
  T.potential = P;
  return T;
}

NullCovector current(const StressEnergy& T, double Vw, double Vv) {
  return {Vw * T.T_ww + Vv * T.T_wv, Vw * T.T_wv + Vv * T.T_vv};
}

}  // namespace mhs

// Null-frame stress-energy components of the Maxwell-Higgs system and the
// multiplier current J_mu = V^nu T_{mu nu}.
//
// The divergence-free normalization is used throughout:
//   T_mn = F_mg F_n^g - 1/4 g_mn F^2 + 2 Re(D_m phi conj(D_n phi))
//          - g_mn (|D phi|^2 + P),
// which is conserved by the field equations with Maxwell source -j,
// j_g = 2 Im(conj(phi) D_g phi).  In the spherically symmetric sector:
//   T_ww = 2 |D_w phi|^2
//   T_vv = 2 |D_v phi|^2
//   T_wv = (1-mu) (F_hat^2 + P/2)
//   T_angular / r^2 = 2 F_hat^2 + 4 Re(Dv_hat conj(Dw_hat)) - P.
#pragma once

#include "mhs/fields.hpp"
#include "mhs/multiplier.hpp"

namespace mhs {

struct StressEnergy {
  double T_ww = 0.0;
  double T_vv = 0.0;
  double T_wv = 0.0;
  double T_ang = 0.0;  // T_thetatheta / r^2 (= T_phiphi / (r^2 sin^2))
  double potential = 0.0;
};

// Components from a hatted sample; the sample's stored lapse supplies the
// conversions.
StressEnergy stress_energy(const FieldSample& s, double P);

// J_mu = V^nu T_{mu nu}, null components.
struct NullCovector {
  double J_w = 0.0, J_v = 0.0;
};
NullCovector current(const StressEnergy& T, double Vw, double Vv);

}  // namespace mhs

#pragma once
#include "mkdv/types.hpp"

namespace mkdv {

// F(x) = \int_0^x e^{i t^2} dt, real argument. F(+inf) = sqrt(pi)/2 e^{i pi/4}.
Complex fresnel_F(Real x);

inline Complex fresnel_F_inf() {
  const Real c = 0.5 * std::sqrt(kPi) * std::sqrt(0.5);
  return {c, c};
}

// \int_a^b e^{i sign zeta^2} dzeta and \int_a^b zeta e^{i sign zeta^2} dzeta.
Complex quad_phase_moment0(Real a, Real b, int sign);
Complex quad_phase_moment1(Real a, Real b, int sign);

// \int_a^b e^{i sign zeta^2} H(zeta) dzeta with H linear through the
// endpoint values; exact in the phase, first-order in H.
Complex quad_phase_linear(Real a, Real b, Complex Ha, Complex Hb, int sign);

// \int_{s0}^{s1} e^{i s theta} G(s) ds with G linear through the endpoint
// values; stable for theta -> 0.
Complex linear_phase_linear(Real s0, Real s1, Complex G0, Complex G1,
                            Real theta);

}  // namespace mkdv

#pragma once
#include <cmath>

#include "mkdv/types.hpp"

namespace mkdv {

// Quintic smoothstep: 0 for x<=0, 1 for x>=1, C^2 across the joints.
inline Real smoothstep5(Real x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  return x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

inline Real smoothstep5_deriv(Real x) {
  if (x <= 0.0 || x >= 1.0) return 0.0;
  return 30.0 * x * x * (1.0 - x) * (1.0 - x);
}

// Profile window: identically 0 for |xi| < inner, 1 for |xi| > outer.
// This is the chi of the self-similar Fourier profile, not the
// frequency cutoff of the approximate problem.
struct ProfileWindow {
  Real inner = 1.0;
  Real outer = 2.0;

  Real operator()(Real xi) const {
    return smoothstep5((std::abs(xi) - inner) / (outer - inner));
  }
  Real deriv(Real xi) const {
    const Real s = xi >= 0 ? 1.0 : -1.0;
    return s * smoothstep5_deriv((std::abs(xi) - inner) / (outer - inner)) /
           (outer - inner);
  }
};

// Frequency cutoff chi of the approximate problem: radially decreasing,
// chi = 1 on [-1,1], 0 < chi <= 1, |chi'| <= 3 chi.  Realized as
// exp(1 - q(|xi|)) with q' (r) = 3(1 - e^{-(r-1)^2}), which keeps the
// log-derivative below 3 and makes the joint at r=1 C^2.
struct FreqCutoff {
  Real n = 1.0;  // chi_n(xi) = chi(xi/n)

  static Real q(Real r) {
    // q(r) = 1 + 3(r-1) - (3 sqrt(pi)/2) erf(r-1)
    const Real u = r - 1.0;
    return 1.0 + 3.0 * u - 1.5 * std::sqrt(kPi) * std::erf(u);
  }
  static Real chi_base(Real xi) {
    const Real r = std::abs(xi);
    if (r <= 1.0) return 1.0;
    return std::exp(1.0 - q(r));
  }
  static Real chi_base_deriv(Real xi) {
    const Real r = std::abs(xi);
    if (r <= 1.0) return 0.0;
    const Real qp = 3.0 * (1.0 - std::exp(-(r - 1.0) * (r - 1.0)));
    const Real s = xi >= 0 ? 1.0 : -1.0;
    return -s * qp * std::exp(1.0 - q(r));
  }

  Real operator()(Real xi) const { return chi_base(xi / n); }
  Real deriv(Real xi) const { return chi_base_deriv(xi / n) / n; }
  // |chi_n'| <= (C/n) chi_n with C = 3
  static constexpr Real log_deriv_bound = 3.0;
};

// Time bump of the restriction-norm section: supp in [-2,2], =1 on [-1,1].
struct TimeBump {
  Real operator()(Real t) const {
    return 1.0 - smoothstep5(std::abs(t) - 1.0);
  }
};

}  // namespace mkdv

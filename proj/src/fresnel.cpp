#include "mkdv/fresnel.hpp"

#include <cmath>

namespace mkdv {
namespace {

// erfc(z) for Re z > 0 via the classical J-fraction (modified Lentz).
Complex erfc_cf(Complex z) {
  const Real tiny = 1e-300;
  Complex c{1.0 / tiny, 0.0};
  Complex d = 1.0 / z;
  Complex h = d;
  for (int m = 1; m <= 300; ++m) {
    const Real a = 0.5 * m;
    d = z + a * d;
    if (std::abs(d) < tiny) d = tiny;
    c = z + a / c;
    if (std::abs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const Complex delta = c * d;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return std::exp(-z * z) / std::sqrt(kPi) * h;
}

}  // namespace

Complex fresnel_F(Real x) {
  if (x == 0.0) return {0.0, 0.0};
  if (x < 0.0) return -fresnel_F(-x);  // odd
  if (x <= 2.2) {
    // F(x) = sum_k (i x^2)^k x / (k! (2k+1))
    const Complex ix2{0.0, x * x};
    Complex pow{1.0, 0.0};
    Real fact = 1.0;
    Complex result{x, 0.0};
    for (int k = 1; k <= 60; ++k) {
      pow *= ix2;
      fact *= k;
      const Complex t = pow * x / (fact * (2.0 * k + 1.0));
      result += t;
      if (std::abs(t) < 1e-18) break;
    }
    return result;
  }
  // F(x) = e^{i pi/4} sqrt(pi)/2 (1 - erfc(x e^{-i pi/4}))
  const Complex rot{std::sqrt(0.5), -std::sqrt(0.5)};  // e^{-i pi/4}
  const Complex e = erfc_cf(rot * x);
  return std::conj(rot) * (0.5 * std::sqrt(kPi)) * (Complex{1.0, 0.0} - e);
}

Complex quad_phase_moment0(Real a, Real b, int sign) {
  const Complex v = fresnel_F(b) - fresnel_F(a);
  return sign > 0 ? v : std::conj(v);
}

Complex quad_phase_moment1(Real a, Real b, int sign) {
  const Complex is{0.0, sign > 0 ? 1.0 : -1.0};
  const Complex ea = std::exp(is * (a * a));
  const Complex eb = std::exp(is * (b * b));
  return (eb - ea) / (2.0 * is);
}

Complex quad_phase_linear(Real a, Real b, Complex Ha, Complex Hb, int sign) {
  if (a == b) return {0.0, 0.0};
  const Complex m0 = quad_phase_moment0(a, b, sign);
  const Complex m1 = quad_phase_moment1(a, b, sign);
  const Complex slope = (Hb - Ha) / (b - a);
  return Ha * m0 + slope * (m1 - a * m0);
}

Complex linear_phase_linear(Real s0, Real s1, Complex G0, Complex G1,
                            Real theta) {
  const Real h = s1 - s0;
  if (h == 0.0) return {0.0, 0.0};
  const Real phi = theta * h;
  // E0 = int_0^1 e^{i phi u} du, E1 = int_0^1 u e^{i phi u} du
  Complex E0, E1;
  if (std::abs(phi) < 1e-4) {
    const Complex ip{0.0, phi};
    E0 = 1.0 + ip / 2.0 + ip * ip / 6.0 + ip * ip * ip / 24.0;
    E1 = 0.5 + ip / 3.0 + ip * ip / 8.0 + ip * ip * ip / 30.0;
  } else {
    const Complex ip{0.0, phi};
    const Complex e = std::exp(ip);
    E0 = (e - 1.0) / ip;
    E1 = (e - E0) / ip;
  }
  const Complex front = std::exp(Complex{0.0, theta * s0}) * h;
  // G(u) = G0 + (G1-G0) u on u in [0,1]
  return front * (G0 * E0 + (G1 - G0) * E1);
}

}  // namespace mkdv

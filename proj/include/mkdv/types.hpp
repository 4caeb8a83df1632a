#pragma once
#include <Eigen/Core>
#include <complex>
#include <cmath>

namespace mkdv {

using Real = double;
using Complex = std::complex<Real>;

template <class Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <class Scalar>
using Arr = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

using ArrayXr = Arr<Real>;
using ArrayXc = Arr<Complex>;

inline constexpr Real kPi = 3.14159265358979323846;
inline constexpr Complex kI{0.0, 1.0};

// Coupling constant of the profile equation: with the convention
// F(u)(xi) = \int u(x) e^{-i xi x} dx the cubic term enters as
// d/dt u~ = (i/4pi^2) * xi * \iint e^{-it Phi} u~ u~ u~.
inline constexpr Real kCouplingScale = 1.0 / (4.0 * kPi * kPi);

// Japanese bracket <x> = sqrt(1+x^2).
template <class Scalar>
Scalar jbracket(Scalar x) {
  return std::sqrt(Scalar(1) + x * x);
}

inline Real sqr(Real x) { return x * x; }
inline Real cube(Real x) { return x * x * x; }

}  // namespace mkdv

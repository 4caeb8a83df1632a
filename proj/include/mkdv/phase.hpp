#pragma once
#include <array>
#include <cmath>

#include "mkdv/types.hpp"

// Cubic resonance phases on the convolution hyperplane and their
// normalized one- and two-variable forms.

namespace mkdv {

// Point on H_xi parametrized by the two represented frequencies;
// xi3 = xi - xi1 - xi2 is always derived, never stored.
template <class Scalar = Real>
struct PhasePointTernary {
  Scalar xi, xi1, xi2;
  Scalar xi3() const { return xi - xi1 - xi2; }
};

template <class Scalar = Real>
struct PhasePointBinary {
  Scalar xi, eta;
};

// Phi(xi, xi1, xi2, xi3) = xi^3 - xi1^3 - xi2^3 - xi3^3 on xi = xi1+xi2+xi3.
template <class Scalar>
Scalar phi(const PhasePointTernary<Scalar>& p) {
  const Scalar x3 = p.xi3();
  return p.xi * p.xi * p.xi - p.xi1 * p.xi1 * p.xi1 - p.xi2 * p.xi2 * p.xi2 -
         x3 * x3 * x3;
}

template <class Scalar>
Scalar phi(Scalar xi, Scalar xi1, Scalar xi2) {
  return phi(PhasePointTernary<Scalar>{xi, xi1, xi2});
}

// Psi(xi, eta) = -3 eta xi^2 + 3 xi eta^2 - 3 eta^3/4 = -(3/4) eta (eta-2xi)^2.
template <class Scalar>
Scalar psi(const PhasePointBinary<Scalar>& p) {
  const Scalar d = p.eta - Scalar(2) * p.xi;
  return Scalar(-0.75) * p.eta * d * d;
}

template <class Scalar>
Scalar psi(Scalar xi, Scalar eta) {
  return psi(PhasePointBinary<Scalar>{xi, eta});
}

template <class Scalar>
Scalar psi_expanded(Scalar xi, Scalar eta) {
  return Scalar(-3) * eta * xi * xi + Scalar(3) * xi * eta * eta -
         Scalar(0.75) * eta * eta * eta;
}

// Gradient of Phi in the (xi1, xi2) parametrization:
// dPhi/dxi1 = -3(xi1^2 - xi3^2), dPhi/dxi2 = -3(xi2^2 - xi3^2).
template <class Scalar>
std::array<Scalar, 2> grad_phi(const PhasePointTernary<Scalar>& p) {
  const Scalar x3 = p.xi3();
  return {Scalar(-3) * (p.xi1 * p.xi1 - x3 * x3),
          Scalar(-3) * (p.xi2 * p.xi2 - x3 * x3)};
}

// Phi restricted to the line xi1 fixed is a quadratic in xi2:
//   Phi = A - 3 s xi2^2 + 3 s^2 xi2,  s = xi - xi1,  A = xi^3 - xi1^3 - s^3.
// Exposed for closed-form sublevel-set slicing.
template <class Scalar>
struct PhiSliceQuadratic {
  Scalar a2, a1, a0;  // Phi(xi2) = a2 xi2^2 + a1 xi2 + a0
};

template <class Scalar>
PhiSliceQuadratic<Scalar> phi_slice(Scalar xi, Scalar xi1) {
  const Scalar s = xi - xi1;
  return {Scalar(-3) * s, Scalar(3) * s * s,
          xi * xi * xi - xi1 * xi1 * xi1 - s * s * s};
}

// Normalized phases: Phi(xi, xi p1, xi p2) = xi^3 phi(p1,p2) and
// Psi(xi, xi p) = xi^3 psi(p).
template <class Scalar>
Scalar normalized_phi(Scalar p1, Scalar p2) {
  const Scalar p3 = Scalar(1) - p1 - p2;
  return Scalar(1) - p1 * p1 * p1 - p2 * p2 * p2 - p3 * p3 * p3;
}

template <class Scalar>
Scalar normalized_psi(Scalar p) {
  const Scalar d = p - Scalar(2);
  return Scalar(-0.75) * p * d * d;
}

template <class Scalar>
Scalar normalized_psi_deriv(Scalar p) {
  return Scalar(-0.75) * (p - Scalar(2)) * (Scalar(3) * p - Scalar(2));
}

// Stationary points of the normalized phases; scaled versions are
// s_j = xi * (the listed pair), p in {2, 2/3} for psi.
struct StationaryPointSet {
  static constexpr std::array<std::array<Real, 2>, 4> ternary{
      {{1.0 / 3.0, 1.0 / 3.0}, {1.0, 1.0}, {1.0, -1.0}, {-1.0, 1.0}}};
  static constexpr std::array<Real, 2> binary{2.0, 2.0 / 3.0};
};

// Reparametrization helpers: H_xi can be charted by any pair of the three
// frequencies (the surface measure is the same for all SL choices).
enum class Chart { k12, k13, k23 };

template <class Scalar>
PhasePointTernary<Scalar> make_ternary(Chart chart, Scalar xi, Scalar a,
                                       Scalar b) {
  switch (chart) {
    case Chart::k12: return {xi, a, b};
    case Chart::k13: return {xi, a, xi - a - b};
    default:         return {xi, xi - a - b, a};
  }
}

}  // namespace mkdv

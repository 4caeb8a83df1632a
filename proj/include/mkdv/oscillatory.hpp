#pragma once
#include <functional>
#include <stdexcept>

#include "mkdv/profile.hpp"
#include "mkdv/types.hpp"

namespace mkdv {

struct QuadratureNotConverged : std::runtime_error {
  Complex last, prev;
  QuadratureNotConverged(const std::string& what, Complex l, Complex p)
      : std::runtime_error(what), last(l), prev(p) {}
};

struct OscQuadConfig {
  Real tol = 1e-6;
  Real z0 = 64.0;      // initial half-width in the Fresnel variable
  int max_refine = 6;  // width doublings before giving up
  int panels0 = 64;
  int max_depth = 12;
};

using CEvaluator = std::function<Complex(Real)>;

// K[f,g](eta) = \int e^{3 i eta lambda^2 / 4} f((eta+lambda)/2)
//               g((eta-lambda)/2) dlambda
// via the Fresnel substitution zeta = sqrt(3|eta|/4) lambda and
// phase-exact piecewise-linear (Filon) panels; the two tails are frozen at
// the endpoint value against the closed-form Fresnel remainder.
Complex kernel_K(const CEvaluator& f, const CEvaluator& g, Real eta,
                 const OscQuadConfig& quad = {});

Complex kernel_K(const SelfSimilarProfile& prof, Real eta,
                 const OscQuadConfig& quad = {});  // K(S0,S0)

// K0(t, xi) = t^{-1/3} K(S0,S0)(t^{1/3} xi)
Complex K0(const SelfSimilarProfile& prof, Real t, Real xi,
           const OscQuadConfig& quad = {});

// finite-difference d/dxi K(S0,S0)(xi)
Complex dK_dxi(const SelfSimilarProfile& prof, Real xi,
               const OscQuadConfig& quad = {}, Real rel_step = 1e-4);

// d/dt K0(t,xi) via the scaling identity and dK_dxi
Complex dt_K0(const SelfSimilarProfile& prof, Real t, Real xi,
              const OscQuadConfig& quad = {});

}  // namespace mkdv

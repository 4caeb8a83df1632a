#pragma once
#include <cmath>

#include "mkdv/types.hpp"

namespace mkdv {

// Low-frequency extraction regions of the source decomposition. All
// predicates take the represented frequencies; xi3 = xi - xi1 - xi2.
//   D(tau) = {(zeta, eta): |zeta| + |eta| >= tau^{-1/3}/10}
//   D1 = {(xi1,xi2,xi3) in H_xi : (xi, xi1+xi2) in D(tau)},  D2 = H \ D1
//   D3 = {|xi1| + |xi2| + |xi3| >= tau^{-1/3}},              D4 = H \ D3
struct DomainDecomposition {
  Real tau;

  Real radius() const { return std::pow(tau, -1.0 / 3.0); }

  bool in_Dtau(Real zeta, Real eta) const {
    return std::abs(zeta) + std::abs(eta) >= radius() / 10.0;
  }
  bool in_D1(Real xi, Real xi1, Real xi2) const {
    return in_Dtau(xi, xi1 + xi2);
  }
  bool in_D2(Real xi, Real xi1, Real xi2) const {
    return !in_D1(xi, xi1, xi2);
  }
  bool in_D3(Real xi, Real xi1, Real xi2) const {
    const Real xi3 = xi - xi1 - xi2;
    return std::abs(xi1) + std::abs(xi2) + std::abs(xi3) >= radius();
  }
  bool in_D4(Real xi, Real xi1, Real xi2) const {
    return !in_D3(xi, xi1, xi2);
  }
};

}  // namespace mkdv

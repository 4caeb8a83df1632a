#pragma once
#include "mkdv/domains.hpp"
#include "mkdv/grid.hpp"
#include "mkdv/oscillatory.hpp"
#include "mkdv/profile.hpp"

namespace mkdv {

// Builds profile-variable grids of S-data at a given time.
ProfileGrid sample_s0(const SelfSimilarProfile& S, int N, Real Xi, Real t);
ProfileGrid sample_sreg(const SelfSimilarProfile& S, int N, Real Xi, Real t);
ProfileGrid sample_s(const SelfSimilarProfile& S, int N, Real Xi, Real t);

// Decomposition of the evolution right-hand side
//   (i/4pi^2)(N[S+z+w] - N[S]) =
//     F11 + F12 + F2 + L_{K,D(tau)}[z] + L_K[w] + L2[w] + Q[w]
// with the source terms restricted to the regions D1..D4, D(tau). All
// pieces are evaluated by the same restricted midpoint quadrature, so the
// sum telescopes to the unrestricted right-hand side exactly; L_K and
// L_{K,D(tau)} also have a bilinear kernel_K route for cross-checks.
class NonlinearityPieces {
 public:
  NonlinearityPieces(const SelfSimilarProfile& S, const ProfileGrid& z,
                     Real t, Real tau);

  const ProfileGrid& f11() const { return f11_; }
  const ProfileGrid& f12() const { return f12_; }
  const ProfileGrid& f2() const { return f2_; }
  const ProfileGrid& l_K_Dtau() const { return lkd_; }

  ProfileGrid l_K(const ProfileGrid& w) const;   // 3 N[S0,S0,w], ternary
  ProfileGrid l2(const ProfileGrid& w) const;
  ProfileGrid q(const ProfileGrid& w) const;

  // all seven pieces summed
  ProfileGrid sum(const ProfileGrid& w) const;

  // (i/4pi^2)(N[S+z+w]-N[S]) by direct unrestricted quadrature
  ProfileGrid rhs_reference(const ProfileGrid& w) const;

  // kernel_K realizations of the bilinear forms (truncate_S0 restricts the
  // kernel inputs to the grid box so the comparison is apples-to-apples)
  ProfileGrid l_K_binary(const ProfileGrid& w, const OscQuadConfig& quad = {},
                         bool truncate_S0 = true) const;
  ProfileGrid l_K_Dtau_binary(const OscQuadConfig& quad = {},
                              bool truncate_S0 = true) const;

  const DomainDecomposition& domains() const { return dom_; }

 private:
  ProfileGrid scaled_N(const ProfileGrid& a, const ProfileGrid& b,
                       const ProfileGrid& c, Real coeff,
                       const std::function<bool(Real, Real, Real)>& pred) const;
  ProfileGrid binary_form(const ProfileGrid& target,
                          const OscQuadConfig& quad, bool truncate,
                          bool restrict_dtau) const;

  const SelfSimilarProfile& S_;
  Real t_, tau_;
  DomainDecomposition dom_;
  ProfileGrid zg_, s0g_, srg_, sg_, s0s0sr_;  // s0s0sr = 2 S0 + Sreg
  ProfileGrid f11_, f12_, f2_, lkd_;
};

}  // namespace mkdv

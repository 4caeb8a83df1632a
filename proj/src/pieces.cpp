#include "mkdv/pieces.hpp"

#include "mkdv/phase.hpp"

namespace mkdv {

ProfileGrid sample_s0(const SelfSimilarProfile& S, int N, Real Xi, Real t) {
  return ProfileGrid::from_function(
      N, Xi, t, [&](Real xi) { return S.s0_at(t, xi); });
}

ProfileGrid sample_sreg(const SelfSimilarProfile& S, int N, Real Xi, Real t) {
  return ProfileGrid::from_function(
      N, Xi, t, [&](Real xi) { return S.sreg_at(t, xi); });
}

ProfileGrid sample_s(const SelfSimilarProfile& S, int N, Real Xi, Real t) {
  return ProfileGrid::from_function(N, Xi, t,
                                    [&](Real xi) { return S.s_at(t, xi); });
}

namespace {

ProfileGrid lincomb(const ProfileGrid& a, Complex ca, const ProfileGrid& b,
                    Complex cb) {
  ProfileGrid out = a;
  out.values = ca * a.values + cb * b.values;
  return out;
}

}  // namespace

NonlinearityPieces::NonlinearityPieces(const SelfSimilarProfile& S,
                                       const ProfileGrid& z, Real t, Real tau)
    : S_(S), t_(t), tau_(tau), dom_{tau}, zg_(z) {
  const int N = z.N;
  const Real Xi = z.Xi;
  s0g_ = sample_s0(S, N, Xi, t);
  srg_ = sample_sreg(S, N, Xi, t);
  sg_ = lincomb(s0g_, 1.0, srg_, 1.0);
  s0s0sr_ = lincomb(s0g_, 2.0, srg_, 1.0);

  const ProfileGrid z_plus_3s = lincomb(zg_, 1.0, sg_, 3.0);
  const auto d1 = [this](Real xi, Real x1, Real x2) {
    return dom_.in_D1(xi, x1, x2);
  };
  const auto d2 = [this](Real xi, Real x1, Real x2) {
    return dom_.in_D2(xi, x1, x2);
  };
  const auto d3 = [this](Real xi, Real x1, Real x2) {
    return dom_.in_D3(xi, x1, x2);
  };
  const auto d4 = [this](Real xi, Real x1, Real x2) {
    return dom_.in_D4(xi, x1, x2);
  };

  f11_ = scaled_N(z_plus_3s, zg_, zg_, 1.0, d3);
  f12_ = scaled_N(s0s0sr_, srg_, zg_, 3.0, d1);
  f2_ = scaled_N(z_plus_3s, zg_, zg_, 1.0, d4);
  {
    const ProfileGrid ssz = scaled_N(sg_, sg_, zg_, 3.0, d2);
    f2_.values += ssz.values;
  }
  lkd_ = scaled_N(s0g_, s0g_, zg_, 3.0, d1);
}

ProfileGrid NonlinearityPieces::scaled_N(
    const ProfileGrid& a, const ProfileGrid& b, const ProfileGrid& c,
    Real coeff, const std::function<bool(Real, Real, Real)>& pred) const {
  ProfileGrid out = apply_N_direct(a, b, c, t_, PhaseSign::minus, pred);
  out.values *= coeff * kCouplingScale * kI;
  return out;
}

ProfileGrid NonlinearityPieces::l_K(const ProfileGrid& w) const {
  return scaled_N(s0g_, s0g_, w, 3.0, nullptr);
}

ProfileGrid NonlinearityPieces::l2(const ProfileGrid& w) const {
  ProfileGrid out = scaled_N(s0s0sr_, srg_, w, 3.0, nullptr);
  out.values += scaled_N(sg_, zg_, w, 6.0, nullptr).values;
  out.values += scaled_N(zg_, zg_, w, 3.0, nullptr).values;
  return out;
}

ProfileGrid NonlinearityPieces::q(const ProfileGrid& w) const {
  ProfileGrid out = scaled_N(sg_, w, w, 3.0, nullptr);
  out.values += scaled_N(zg_, w, w, 3.0, nullptr).values;
  out.values += scaled_N(w, w, w, 1.0, nullptr).values;
  return out;
}

ProfileGrid NonlinearityPieces::sum(const ProfileGrid& w) const {
  ProfileGrid out = f11_;
  out.values = f11_.values + f12_.values + f2_.values + lkd_.values;
  out.values += l_K(w).values;
  out.values += l2(w).values;
  out.values += q(w).values;
  return out;
}

ProfileGrid NonlinearityPieces::rhs_reference(const ProfileGrid& w) const {
  ProfileGrid v = sg_;
  v.values = sg_.values + zg_.values + w.values;
  ProfileGrid nv = apply_N_direct(v, v, v, t_, PhaseSign::minus);
  const ProfileGrid ns = apply_N_direct(sg_, sg_, sg_, t_, PhaseSign::minus);
  nv.values = (nv.values - ns.values) * (kCouplingScale * kI);
  return nv;
}

ProfileGrid NonlinearityPieces::binary_form(const ProfileGrid& target,
                                            const OscQuadConfig& quad,
                                            bool truncate,
                                            bool restrict_dtau) const {
  // 3 (i/4pi^2) xi \int_{[D(tau)]} e^{i t Psi(xi,eta)} target(xi-eta)
  //                                K0(t,eta) deta
  // eta runs over integer multiples of dxi so xi - eta stays on the grid.
  const int N = target.N;
  const Real dxi = target.dxi();
  const Real Xi = target.Xi;
  const Real c3 = std::cbrt(t_);
  // plain (t-independent) S0; the grid's box |xi| <= Xi in the scaled
  // variable corresponds to |x| <= c3 Xi here
  const CEvaluator s0 = [&](Real x) {
    if (truncate && std::abs(x) > c3 * Xi) return Complex{0.0, 0.0};
    return S_.s0(x);
  };
  std::vector<Complex> k0(2 * N - 1);  // K0(t, k dxi), k = -(N-1)..(N-1)
  for (int k = -(N - 1); k <= N - 1; ++k) {
    if (k == 0) continue;
    const Real eta = k * dxi;
    k0[k + N - 1] = kernel_K(s0, s0, c3 * eta, quad) / c3;
  }
  // local |eta|^{-1/2} fit for the central cell
  const Complex cp = kernel_K(s0, s0, c3 * dxi / 4.0, quad) / c3 *
                     std::sqrt(dxi / 4.0);
  const Complex cm = kernel_K(s0, s0, -c3 * dxi / 4.0, quad) / c3 *
                     std::sqrt(dxi / 4.0);
  const Real half_cell_mass = 2.0 * std::sqrt(dxi / 2.0);

  ProfileGrid out(N, Xi, t_);
  for (int m = 0; m < N; ++m) {
    const Real xi = out.node(m);
    Complex acc{0.0, 0.0};
    for (int k = -(N - 1); k <= N - 1; ++k) {
      const int j = m - k;
      if (j < 0 || j >= N) continue;
      const Real eta = k * dxi;
      if (restrict_dtau && !dom_.in_Dtau(xi, eta)) continue;
      if (k == 0) {
        acc += target.values[j] * (cp + cm) * half_cell_mass / dxi;
        continue;
      }
      acc += std::exp(Complex{0.0, t_ * psi(xi, eta)}) * target.values[j] *
             k0[k + N - 1];
    }
    out.values[m] = 3.0 * kCouplingScale * kI * xi * acc * dxi;
  }
  return out;
}

ProfileGrid NonlinearityPieces::l_K_binary(const ProfileGrid& w,
                                           const OscQuadConfig& quad,
                                           bool truncate_S0) const {
  return binary_form(w, quad, truncate_S0, false);
}

ProfileGrid NonlinearityPieces::l_K_Dtau_binary(const OscQuadConfig& quad,
                                                bool truncate_S0) const {
  return binary_form(zg_, quad, truncate_S0, true);
}

}  // namespace mkdv

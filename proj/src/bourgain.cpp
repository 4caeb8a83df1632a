#include "mkdv/bourgain.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

#include "mkdv/io.hpp"

namespace mkdv {

namespace {
constexpr Complex kIC{0.0, kCouplingScale};
}

TimeProfile TimeProfile::from_function(
    Real T, Real Xi, int Nt, int Nx,
    const std::function<Complex(Real, Real)>& f) {
  TimeProfile u;
  u.T = T;
  u.Xi = Xi;
  u.Nt = Nt;
  u.Nx = Nx;
  u.slices.reserve(Nt);
  for (int p = 0; p < Nt; ++p) {
    const Real t = u.t_node(p);
    u.slices.push_back(
        ProfileGrid::from_function(Nx, Xi, t, [&](Real xi) { return f(t, xi); }));
  }
  return u;
}

SpaceTimeGrid time_to_tau(const TimeProfile& u) {
  SpaceTimeGrid g;
  g.T = u.T;
  g.Xi = u.Xi;
  g.Nt = u.Nt;
  g.Nx = u.Nx;
  g.values.assign(u.Nt, ArrayXc::Zero(u.Nx));
  static thread_local Eigen::FFT<Real> fft;
  std::vector<Complex> in(u.Nt), out(u.Nt);
  const Real dt = g.dt();
  for (int j = 0; j < u.Nx; ++j) {
    for (int p = 0; p < u.Nt; ++p) in[p] = u.slices[p].values[j];
    fft.fwd(out, in);
    // F_t f(tau_k) = dt e^{+i tau_k T} sum_p f(t_p) e^{-2pi i k p / Nt}
    for (int k = 0; k < u.Nt; ++k) {
      const Real tau = g.tau_node(k);
      g.values[k][j] = dt * std::exp(Complex{0.0, tau * u.T}) * out[k];
    }
  }
  return g;
}

Real xmub_norm(const SpaceTimeGrid& u, const BourgainParams& p) {
  Real acc = 0.0;
  for (int k = 0; k < u.Nt; ++k) {
    Real m = 0.0;
    for (int j = 0; j < u.Nx; ++j)
      m = std::max(m, std::pow(jbracket(u.xi_node(j)), p.mu) *
                          std::abs(u.values[k][j]));
    const Real g = std::pow(jbracket(u.tau_node(k)), p.b) * m;
    acc += g * g;
  }
  const Real dtau = kPi / u.T;
  return std::sqrt(acc * dtau);
}

Real ymub_norm(const SpaceTimeGrid& u, const BourgainParams& p) {
  const Real dtau = kPi / u.T;
  Real best = 0.0;
  for (int j = 0; j < u.Nx; ++j) {
    Real acc = 0.0;
    for (int k = 0; k < u.Nt; ++k) {
      const Real g = std::pow(jbracket(u.tau_node(k)), p.b_prime) *
                     std::pow(jbracket(u.xi_node(j)), p.mu) *
                     std::abs(u.values[k][j]);
      acc += g * g;
    }
    best = std::max(best, std::sqrt(acc * dtau));
  }
  return best;
}

Real xmub_norm(const TimeProfile& u, const BourgainParams& p) {
  return xmub_norm(time_to_tau(u), p);
}

Real ymub_norm(const TimeProfile& u, const BourgainParams& p) {
  return ymub_norm(time_to_tau(u), p);
}

Real linear_estimate_check(const ProfileGrid& u0, const BourgainParams& p,
                           Real T, int Nt) {
  const Real n0 = weighted_sup(u0, p.mu);
  if (n0 == 0.0) return 0.0;
  const TimeBump psi;
  TimeProfile u = TimeProfile::from_function(
      T, u0.Xi, Nt, u0.N, [&](Real t, Real xi) {
        // profile of psi(t) e^{-t d_x^3} u0 is psi(t) u0(xi)
        (void)xi;
        return Complex{psi(t), 0.0};
      });
  for (int pdx = 0; pdx < Nt; ++pdx)
    u.slices[pdx].values *= u0.values;
  return xmub_norm(u, p) / n0;
}

namespace {

// U(t,xi) = psi_delta(t) int_0^t F(s,xi) ds on the slice grid
TimeProfile duhamel_apply(const TimeProfile& F, Real delta) {
  const TimeBump psi;
  TimeProfile out = F;
  const Real dt = 2.0 * F.T / F.Nt;
  const int mid_lo = F.Nt / 2;  // t_node(Nt/2) = 0 when Nt even
  // cumulative trapezoid from t=0 in both directions
  std::vector<ArrayXc> cum(F.Nt, ArrayXc::Zero(F.Nx));
  for (int pdx = mid_lo + 1; pdx < F.Nt; ++pdx)
    cum[pdx] = cum[pdx - 1] +
               0.5 * dt * (F.slices[pdx - 1].values + F.slices[pdx].values);
  for (int pdx = mid_lo - 1; pdx >= 0; --pdx)
    cum[pdx] = cum[pdx + 1] -
               0.5 * dt * (F.slices[pdx].values + F.slices[pdx + 1].values);
  for (int pdx = 0; pdx < F.Nt; ++pdx) {
    const Real t = F.t_node(pdx);
    out.slices[pdx].values = psi(t / delta) * cum[pdx];
  }
  return out;
}

}  // namespace

DuhamelReport duhamel_scaling_check(
    const std::function<Complex(Real, Real)>& f_profile,
    const BourgainParams& p, const std::vector<Real>& deltas, Real T, Real Xi,
    int Nt, int Nx) {
  DuhamelReport rep;
  rep.target = 1.0 + p.b_prime - p.b;
  const TimeProfile F = TimeProfile::from_function(T, Xi, Nt, Nx, f_profile);
  const Real yn = ymub_norm(F, p);
  for (const Real d : deltas) {
    const TimeProfile U = duhamel_apply(F, d);
    rep.ladder.push_back({d, xmub_norm(U, p) / std::max(yn, 1e-300)});
  }
  std::vector<Real> xs, ys;
  for (const auto& [d, r] : rep.ladder)
    if (r > 0) {
      xs.push_back(d);
      ys.push_back(r);
    }
  rep.fitted_exponent = xs.size() >= 2 ? loglog_slope(xs, ys) : 0.0;
  return rep;
}

Real trilinear_check(const TimeProfile& u1, const TimeProfile& u2,
                     const TimeProfile& u3, const BourgainParams& p) {
  TimeProfile w = u1;
  for (int pdx = 0; pdx < u1.Nt; ++pdx) {
    const Real t = u1.t_node(pdx);
    w.slices[pdx] = apply_N_fft(u1.slices[pdx], u2.slices[pdx],
                                u3.slices[pdx], t, PhaseSign::minus);
    w.slices[pdx].values *= kIC;
  }
  const Real lhs = ymub_norm(w, p);
  const Real rhs = xmub_norm(u1, p) * xmub_norm(u2, p) * xmub_norm(u3, p);
  return rhs > 0 ? lhs / rhs : 0.0;
}

FixedPointReport lwp_fixed_point(const ProfileGrid& u0,
                                 const BourgainParams& p, int max_iter,
                                 Real tol, Real T, int Nt) {
  FixedPointReport rep;
  const TimeBump psi;
  const auto linear_term = [&]() {
    TimeProfile u = TimeProfile::from_function(
        T, u0.Xi, Nt, u0.N,
        [&](Real t, Real xi) { (void)xi; return Complex{psi(t), 0.0}; });
    for (int pdx = 0; pdx < Nt; ++pdx) u.slices[pdx].values *= u0.values;
    return u;
  };
  const TimeProfile lin = linear_term();
  TimeProfile u = lin;
  const Real scale = std::max(xmub_norm(lin, p), 1e-300);
  const auto rhs_of = [&](const TimeProfile& v) {
    TimeProfile G = v;
    for (int pdx = 0; pdx < v.Nt; ++pdx) {
      const Real t = v.t_node(pdx);
      G.slices[pdx] = apply_N_fft(v.slices[pdx], v.slices[pdx],
                                  v.slices[pdx], t, PhaseSign::minus);
      G.slices[pdx].values *= kIC;
    }
    TimeProfile out = duhamel_apply(G, p.delta);
    for (int pdx = 0; pdx < v.Nt; ++pdx)
      out.slices[pdx].values += lin.slices[pdx].values;
    return out;
  };
  Real prev_diff = -1.0;
  int bad = 0;
  for (int it = 0; it < max_iter; ++it) {
    TimeProfile next = rhs_of(u);
    TimeProfile diff = next;
    for (int pdx = 0; pdx < Nt; ++pdx)
      diff.slices[pdx].values -= u.slices[pdx].values;
    const Real d = xmub_norm(diff, p);
    if (prev_diff > 0) {
      const Real factor = d / prev_diff;
      rep.contraction_factors.push_back(factor);
      if (factor >= 1.0) {
        if (++bad >= 3)
          throw NoContraction("lwp_fixed_point: no contraction for 3 steps");
      } else {
        bad = 0;
      }
    }
    prev_diff = d;
    u = std::move(next);
    rep.iterations = it + 1;
    if (d <= tol * scale || d == 0.0) {
      rep.converged = true;
      break;
    }
  }
  TimeProfile resid = rhs_of(u);
  for (int pdx = 0; pdx < Nt; ++pdx)
    resid.slices[pdx].values -= u.slices[pdx].values;
  rep.duhamel_residual = xmub_norm(resid, p) / scale;
  rep.solution = std::move(u);
  return rep;
}

std::vector<std::pair<Real, Real>> selfsimilar_tau_profile(
    const std::function<Complex(Real)>& S_profile, Real T, Real Xi, int Nt,
    int Nx) {
  // F_t[ S(t^{1/3} xi) ](tau): sampled for t > 0 only (blow-up side)
  TimeProfile u = TimeProfile::from_function(
      T, Xi, Nt, Nx, [&](Real t, Real xi) -> Complex {
        if (t <= 1e-6) return {0.0, 0.0};
        return S_profile(std::cbrt(t) * xi);
      });
  const SpaceTimeGrid g = time_to_tau(u);
  std::vector<std::pair<Real, Real>> out;
  for (int k = 1; k < g.Nt / 2; ++k) {
    Real m = 0.0;
    for (int j = 0; j < g.Nx; ++j) m = std::max(m, std::abs(g.values[k][j]));
    out.push_back({g.tau_node(k), m});
  }
  return out;
}

}  // namespace mkdv

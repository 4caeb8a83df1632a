#include "mkdv/evolve.hpp"

#include <algorithm>
#include <cmath>

#include "mkdv/io.hpp"
#include "mkdv/pieces.hpp"
#include "mkdv/rng.hpp"

namespace mkdv {

namespace {

constexpr Complex kIC = Complex{0.0, kCouplingScale};  // i / (4 pi^2)

void check_finite(const ProfileGrid& g, const char* who) {
  for (int j = 0; j < g.N; ++j)
    if (!std::isfinite(g.values[j].real()) ||
        !std::isfinite(g.values[j].imag()))
      throw StepRejected(std::string(who) + ": non-finite state");
}

}  // namespace

ProfileGrid rhs_uncut(const ProfileGrid& u, Real t) {
  ProfileGrid out = apply_N_fft(u, u, u, t, PhaseSign::minus);
  out.values *= kIC;
  return out;
}

ProfileGrid rk4_step_uncut(const ProfileGrid& u, Real t, Real dt) {
  ProfileGrid k1 = rhs_uncut(u, t);
  ProfileGrid s = u;
  s.values = u.values + 0.5 * dt * k1.values;
  ProfileGrid k2 = rhs_uncut(s, t + 0.5 * dt);
  s.values = u.values + 0.5 * dt * k2.values;
  ProfileGrid k3 = rhs_uncut(s, t + 0.5 * dt);
  s.values = u.values + dt * k3.values;
  ProfileGrid k4 = rhs_uncut(s, t + dt);
  ProfileGrid out = u;
  out.time = t + dt;
  out.values = u.values + (dt / 6.0) * (k1.values + 2.0 * k2.values +
                                        2.0 * k3.values + k4.values);
  check_finite(out, "rk4_step_uncut");
  return out;
}

Complex interp_grid(const ProfileGrid& g, Real xi) {
  // Catmull-Rom on the uniform staggered nodes
  const Real pos = (xi + g.Xi) / g.dxi() - 0.5;
  int i1 = static_cast<int>(std::floor(pos));
  Real u = pos - i1;
  if (i1 < 0) { i1 = 0; u = 0.0; }
  if (i1 > g.N - 2) { i1 = g.N - 2; u = 1.0; }
  const int i0 = std::max(0, i1 - 1);
  const int i2 = i1 + 1;
  const int i3 = std::min(g.N - 1, i1 + 2);
  const Complex p0 = g.values[i0], p1 = g.values[i1], p2 = g.values[i2],
                p3 = g.values[i3];
  const Complex m1 = 0.5 * (p2 - p0), m2 = 0.5 * (p3 - p1);
  const Real u2 = u * u, u3 = u2 * u;
  return (2 * u3 - 3 * u2 + 1) * p1 + (u3 - 2 * u2 + u) * m1 +
         (-2 * u3 + 3 * u2) * p2 + (u3 - u2) * m2;
}

EvolutionSystem::EvolutionSystem(const SelfSimilarProfile* S, ProfileGrid z,
                                 Real n_cutoff)
    : S_(S), z_(std::move(z)), cutoff_{n_cutoff} {
  zn_ = z_;
  dz_ = deriv_xi(z_);
  chi2_.resize(z_.N);
  chichip_.resize(z_.N);
  for (int j = 0; j < z_.N; ++j) {
    const Real x = z_.node(j);
    const Real c = cutoff_(x);
    zn_.values[j] *= c;
    chi2_[j] = c * c;
    chichip_[j] = c * cutoff_.deriv(x);
  }
}

ProfileGrid EvolutionSystem::sample_S_at(Real t) const {
  if (!S_) return ProfileGrid(z_.N, z_.Xi, t);
  return sample_s(*S_, z_.N, z_.Xi, t);
}

ProfileGrid EvolutionSystem::rhs_w(const ProfileGrid& w, Real t) const {
  ProfileGrid v = w;
  v.values = w.values + zn_.values;
  ProfileGrid out;
  if (S_) {
    const ProfileGrid Sg = sample_S_at(t);
    v.values += Sg.values;
    out = apply_N_fft(v, v, v, t, PhaseSign::minus);
    out.values -= apply_N_fft(Sg, Sg, Sg, t, PhaseSign::minus).values;
  } else {
    out = apply_N_fft(v, v, v, t, PhaseSign::minus);
  }
  out.values *= kIC;
  for (int j = 0; j < out.N; ++j) out.values[j] *= chi2_[j];
  return out;
}

void EvolutionSystem::rhs_pair(const ProfileGrid& w, const ProfileGrid& lw,
                               Real t, ProfileGrid& dw,
                               ProfileGrid& dlw) const {
  ProfileGrid v = w;
  v.values = w.values + zn_.values;
  ProfileGrid Sg = sample_S_at(t);
  if (S_) v.values += Sg.values;
  ProfileGrid nv = apply_N_fft(v, v, v, t, PhaseSign::minus);
  if (S_)
    nv.values -= apply_N_fft(Sg, Sg, Sg, t, PhaseSign::minus).values;
  nv.values *= kIC;  // (i/4pi^2)(N[v]-N[S])

  dw = nv;
  for (int j = 0; j < dw.N; ++j) dw.values[j] *= chi2_[j];

  // xi * Lambda(w + z); Lambda z = d_xi z for the uncut perturbation
  ProfileGrid g1 = w;
  for (int j = 0; j < g1.N; ++j)
    g1.values[j] = g1.node(j) * (lw.values[j] + dz_.values[j]);
  ProfileGrid nl = apply_N_fft(g1, v, v, t, PhaseSign::minus);
  nl.values *= kIC;
  dlw = lw;
  for (int j = 0; j < dlw.N; ++j) {
    const Real xi = dlw.node(j);
    dlw.values[j] =
        3.0 * chi2_[j] / xi * nl.values[j] + 2.0 * chichip_[j] * nv.values[j];
  }
}

ProfileGrid EvolutionSystem::step_wn(const ProfileGrid& w, Real t,
                                     Real dt) const {
  ProfileGrid k1 = rhs_w(w, t);
  ProfileGrid s = w;
  s.values = w.values + 0.5 * dt * k1.values;
  ProfileGrid k2 = rhs_w(s, t + 0.5 * dt);
  s.values = w.values + 0.5 * dt * k2.values;
  ProfileGrid k3 = rhs_w(s, t + 0.5 * dt);
  s.values = w.values + dt * k3.values;
  ProfileGrid k4 = rhs_w(s, t + dt);
  ProfileGrid out = w;
  out.time = t + dt;
  out.values = w.values + (dt / 6.0) * (k1.values + 2.0 * k2.values +
                                        2.0 * k3.values + k4.values);
  check_finite(out, "step_wn");
  return out;
}

void EvolutionSystem::step_pair(ProfileGrid& w, ProfileGrid& lw, Real t,
                                Real dt) const {
  ProfileGrid dw1, dl1, dw2, dl2, dw3, dl3, dw4, dl4;
  rhs_pair(w, lw, t, dw1, dl1);
  ProfileGrid ws = w, ls = lw;
  ws.values = w.values + 0.5 * dt * dw1.values;
  ls.values = lw.values + 0.5 * dt * dl1.values;
  rhs_pair(ws, ls, t + 0.5 * dt, dw2, dl2);
  ws.values = w.values + 0.5 * dt * dw2.values;
  ls.values = lw.values + 0.5 * dt * dl2.values;
  rhs_pair(ws, ls, t + 0.5 * dt, dw3, dl3);
  ws.values = w.values + dt * dw3.values;
  ls.values = lw.values + dt * dl3.values;
  rhs_pair(ws, ls, t + dt, dw4, dl4);
  w.values += (dt / 6.0) * (dw1.values + 2.0 * dw2.values +
                            2.0 * dw3.values + dw4.values);
  lw.values += (dt / 6.0) * (dl1.values + 2.0 * dl2.values +
                             2.0 * dl3.values + dl4.values);
  w.time = lw.time = t + dt;
  check_finite(w, "step_pair");
}

ProfileGrid lambda_apply(const ProfileGrid& w, const ProfileGrid& dtw,
                         Real t) {
  ProfileGrid out = deriv_xi(w);
  for (int j = 0; j < out.N; ++j)
    out.values[j] -= 3.0 * t / out.node(j) * dtw.values[j];
  return out;
}

NormRow weighted_norms(const ProfileGrid& w, const ProfileGrid& dtw,
                       const ProfileGrid& dxw, Real mu, Real t) {
  NormRow row{};
  row.t = t;
  row.w_mu = weighted_sup(w, mu);
  row.dxw_mu = weighted_sup(dxw, mu);
  Real m = 0.0;
  for (int j = 0; j < w.N; ++j) {
    const Real xi = w.node(j);
    m = std::max(m, std::pow(jbracket(xi), mu) *
                        std::abs(t / xi * dtw.values[j]));
  }
  row.tdtw_mu = m;
  return row;
}

ProfileGrid make_perturbation(const ZSpec& spec, int N, Real Xi) {
  SplitMix64 rng(spec.seed);
  std::vector<Real> amp(spec.modes), freq(spec.modes), ph(spec.modes);
  for (int k = 0; k < spec.modes; ++k) {
    amp[k] = 0.5 + rng.uniform();
    freq[k] = 0.3 + 2.0 * rng.uniform();
    ph[k] = 2.0 * kPi * rng.uniform();
  }
  return ProfileGrid::from_function(N, Xi, 0.0, [&](Real xi) -> Complex {
    const Real decay = std::pow(jbracket(xi), -spec.nu);
    if (spec.kind == "gauss_bumps") {
      Complex acc{0.0, 0.0};
      for (int k = 0; k < spec.modes; ++k) {
        // Hermitian pair of Gaussian bumps
        const Real c = freq[k] * 2.0;
        const Real g1 = std::exp(-sqr((xi - c) / (1.0 + amp[k])));
        const Real g2 = std::exp(-sqr((xi + c) / (1.0 + amp[k])));
        acc += g1 * std::exp(Complex{0.0, ph[k]}) +
               g2 * std::exp(Complex{0.0, -ph[k]});
      }
      return spec.amplitude * acc / Real(spec.modes);
    }
    // smooth decaying profile with odd phase (Hermitian by construction)
    Real theta = 0.0;
    for (int k = 0; k < spec.modes; ++k)
      theta += amp[k] * std::sin(freq[k] * xi / jbracket(xi) + 0.0) /
               spec.modes;
    return spec.amplitude * decay * std::exp(Complex{0.0, theta});
  });
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult res;
  const SelfSimilarProfile S(cfg.S);
  const ProfileGrid z = make_perturbation(cfg.z, cfg.N, cfg.Xi);
  EvolutionSystem sys(&S, z, cfg.n_cutoff);

  ProfileGrid w(cfg.N, cfg.Xi, cfg.t_start);
  ProfileGrid lw(cfg.N, cfg.Xi, cfg.t_start);
  Real t = cfg.t_start;
  int step = 0;
  const Real mu = cfg.params.mu;
  while (t < cfg.T - 1e-15) {
    Real dt = cfg.dt > 0 ? cfg.dt
                         : std::clamp(cfg.dt_rel * t, 1e-7, cfg.dt_max);
    dt = std::min(dt, cfg.T - t);
    if (cfg.track_lambda) {
      sys.step_pair(w, lw, t, dt);
    } else {
      w = sys.step_wn(w, t, dt);
    }
    t += dt;
    ++step;
    const ProfileGrid dtw = sys.rhs_w(w, t);
    NormRow row = weighted_norms(w, dtw, deriv_xi(w), mu, t);
    row.lw_mu = cfg.track_lambda ? weighted_sup(lw, mu) : 0.0;
    res.rows.push_back(row);
    if (cfg.store_every > 0 && step % cfg.store_every == 0) {
      res.snapshot_t.push_back(t);
      res.snapshots.push_back(w);
    }
  }
  res.w_final = w;
  res.lw_final = lw;

  std::vector<Real> ts, ns;
  Real rmax = 0.0, rmin = 1e300;
  for (const auto& r : res.rows) {
    if (r.w_mu > 0.0 && r.t > 2.0 * cfg.t_start) {
      ts.push_back(r.t);
      ns.push_back(r.w_mu);
      const Real ratio = std::pow(r.t, -cfg.params.gamma) * r.w_mu;
      rmax = std::max(rmax, ratio);
      rmin = std::min(rmin, ratio);
    }
  }
  res.fitted_exponent = ts.size() >= 2 ? loglog_slope(ts, ns) : 0.0;
  res.tgamma_ratio = (rmin < 1e300 && rmin > 0) ? rmax / rmin : 0.0;
  return res;
}

SelfSimilarFixedPointResult discrete_selfsimilar_profile(
    const SelfSimilarProfile& seed, int N, Real Xi, Real dt, Real tol,
    int max_iter) {
  SelfSimilarFixedPointResult out;
  ProfileGrid v = sample_s(seed, N, Xi, 1.0);
  const Real lam = std::cbrt(2.0);
  for (int it = 0; it < max_iter; ++it) {
    // evolve t: 1 -> 2
    ProfileGrid u = v;
    u.time = 1.0;
    Real t = 1.0;
    while (t < 2.0 - 1e-12) {
      const Real h = std::min(dt, 2.0 - t);
      u = rk4_step_uncut(u, t, h);
      t += h;
    }
    // rescale: T(v)(xi) = u(2^{-1/3} xi)
    ProfileGrid next(N, Xi, 1.0);
    for (int j = 0; j < N; ++j)
      next.values[j] = interp_grid(u, next.node(j) / lam);
    Real delta = 0.0;
    for (int j = 0; j < N; ++j)
      delta = std::max(delta, std::abs(next.values[j] - v.values[j]));
    v = next;
    out.iterations = it + 1;
    out.final_delta = delta;
    if (delta < tol) break;
  }
  out.profile = v;
  return out;
}

}  // namespace mkdv

#pragma once
#include <functional>
#include <optional>
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/params.hpp"
#include "mkdv/profile.hpp"
#include "mkdv/windows.hpp"

namespace mkdv {

struct StepRejected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Full (uncut) profile equation d/dt u~ = (i/4pi^2) N[u~], FFT route.
ProfileGrid rhs_uncut(const ProfileGrid& u, Real t);
ProfileGrid rk4_step_uncut(const ProfileGrid& u, Real t, Real dt);

// complex cubic interpolation on a grid's staggered nodes (clamped at the
// box edge)
Complex interp_grid(const ProfileGrid& g, Real xi);

// Approximate problem for the interaction remainder:
//   d/dt w_n = chi_n^2 [ (i/4pi^2)(N[S + z_n + w_n] - N[S]) ]
// and the coupled scaling-derivative equation
//   d/dt Lw_n = (3 chi_n^2 / xi) (i/4pi^2) N[xi L(w_n + z), v_n, v_n]
//               + 2 chi_n chi_n' (i/4pi^2)(N[v_n] - N[S]).
class EvolutionSystem {
 public:
  EvolutionSystem(const SelfSimilarProfile* S, ProfileGrid z, Real n_cutoff);

  const ProfileGrid& z() const { return z_; }
  const ProfileGrid& zn() const { return zn_; }
  const ProfileGrid& dz() const { return dz_; }
  Real chi(Real xi) const { return cutoff_(xi); }

  ProfileGrid rhs_w(const ProfileGrid& w, Real t) const;
  void rhs_pair(const ProfileGrid& w, const ProfileGrid& lw, Real t,
                ProfileGrid& dw, ProfileGrid& dlw) const;

  ProfileGrid step_wn(const ProfileGrid& w, Real t, Real dt) const;
  void step_pair(ProfileGrid& w, ProfileGrid& lw, Real t, Real dt) const;

  ProfileGrid sample_S_at(Real t) const;

 private:
  const SelfSimilarProfile* S_;
  ProfileGrid z_, zn_, dz_;
  FreqCutoff cutoff_;
  ArrayXr chi2_, chichip_;
};

// Lambda w = d/dxi w - (3t/xi) dtw; dtw is the equation right-hand side.
ProfileGrid lambda_apply(const ProfileGrid& w, const ProfileGrid& dtw,
                         Real t);

struct NormRow {
  Real t;
  Real w_mu;        // ||<xi>^mu w||_inf
  Real dxw_mu;      // ||<xi>^mu d_xi w||_inf
  Real tdtw_mu;     // ||<xi>^mu (t/xi) d_t w||_inf
  Real lw_mu;       // ||<xi>^mu Lambda w||_inf
};

NormRow weighted_norms(const ProfileGrid& w, const ProfileGrid& dtw,
                       const ProfileGrid& dxw, Real mu, Real t);

struct ZSpec {
  std::string kind = "decay_phase";  // or "gauss_bumps"
  Real amplitude = 0.05;
  Real nu = 0.45;
  uint64_t seed = 1;
  int modes = 3;
};

ProfileGrid make_perturbation(const ZSpec& spec, int N, Real Xi);

struct ExperimentConfig {
  int N = 256;
  Real Xi = 12.0;
  Real n_cutoff = 8.0;
  Real t_start = 1e-3;
  Real T = 0.1;
  Real dt = 0.0;       // 0: automatic dt = clamp(dt_rel * t, ..., dt_max)
  Real dt_rel = 0.02;
  Real dt_max = 5e-3;
  AnalysisParams params;
  SelfSimilarConfig S;
  ZSpec z;
  bool track_lambda = true;
  int store_every = 0;  // >0: keep w snapshots for post-processing
};

struct ExperimentResult {
  std::vector<NormRow> rows;
  ProfileGrid w_final, lw_final;
  Real fitted_exponent = 0.0;   // slope of log||w|| vs log t
  Real tgamma_ratio = 0.0;      // max/min of t^-gamma ||w|| over the run
  std::vector<Real> snapshot_t;
  std::vector<ProfileGrid> snapshots;
};

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Numerically exact self-similar profile of the discrete dynamics: fixed
// point of (evolve t=1 -> t=2, then rescale xi -> 2^{-1/3} xi), seeded by
// the Fourier-side model. Returns the profile at t = 1.
struct SelfSimilarFixedPointResult {
  ProfileGrid profile;
  int iterations = 0;
  Real final_delta = 0.0;
};

SelfSimilarFixedPointResult discrete_selfsimilar_profile(
    const SelfSimilarProfile& seed, int N, Real Xi, Real dt = 0.01,
    Real tol = 1e-9, int max_iter = 80);

}  // namespace mkdv

#pragma once
#include <functional>
#include <vector>

#include "mkdv/grid.hpp"
#include "mkdv/params.hpp"
#include "mkdv/windows.hpp"

namespace mkdv {

struct NoContraction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Space-time data in the (tau, xi) variables of the adapted Bourgain
// norms: values[k][j] = F_t(e^{t d_x^3} u)(tau_k, xi_j).
struct SpaceTimeGrid {
  Real T = 4.0;   // underlying time box [-T, T]
  Real Xi = 8.0;
  int Nt = 256;
  int Nx = 64;
  std::vector<ArrayXc> values;  // Nt rows of length Nx

  Real dt() const { return 2.0 * T / Nt; }
  Real tau_node(int k) const {  // FFT ordering, signed
    const int s = k < Nt / 2 ? k : k - Nt;
    return kPi * s / T;
  }
  Real xi_node(int j) const { return -Xi + (j + 0.5) * 2.0 * Xi / Nx; }
};

// Profile samples on the same box in the time domain: slices[p] is the
// profile at t_p = -T + p dt.
struct TimeProfile {
  Real T = 4.0;
  Real Xi = 8.0;
  int Nt = 256;
  int Nx = 64;
  std::vector<ProfileGrid> slices;

  Real t_node(int p) const { return -T + p * 2.0 * T / Nt; }

  static TimeProfile from_function(
      Real T, Real Xi, int Nt, int Nx,
      const std::function<Complex(Real, Real)>& f);
};

SpaceTimeGrid time_to_tau(const TimeProfile& u);

// ||<tau>^b <xi>^mu v||_{L^2_tau L^inf_xi} and the swapped order
Real xmub_norm(const SpaceTimeGrid& u, const BourgainParams& p);
Real ymub_norm(const SpaceTimeGrid& u, const BourgainParams& p);

// space-slice of X through the time domain, used by the checks
Real xmub_norm(const TimeProfile& u, const BourgainParams& p);
Real ymub_norm(const TimeProfile& u, const BourgainParams& p);

// ratio ||psi e^{-t d_x^3} u0||_X / ||<xi>^mu u0||_inf (0 for u0 = 0)
Real linear_estimate_check(const ProfileGrid& u0, const BourgainParams& p,
                           Real T = 4.0, int Nt = 256);

struct DuhamelReport {
  std::vector<std::pair<Real, Real>> ladder;  // (delta, ratio)
  Real fitted_exponent = 0.0;
  Real target = 0.0;  // 1 + b' - b
};

DuhamelReport duhamel_scaling_check(
    const std::function<Complex(Real, Real)>& f_profile,
    const BourgainParams& p, const std::vector<Real>& deltas, Real T = 4.0,
    Real Xi = 8.0, int Nt = 256, int Nx = 64);

// ||d_x(u1 u2 u3)||_{Y^{mu,b'}} / prod ||u_i||_{X^{mu,b}}
Real trilinear_check(const TimeProfile& u1, const TimeProfile& u2,
                     const TimeProfile& u3, const BourgainParams& p);

struct FixedPointReport {
  TimeProfile solution;
  std::vector<Real> contraction_factors;
  Real duhamel_residual = 0.0;  // X-norm of u - RHS(u), relative
  int iterations = 0;
  bool converged = false;
};

FixedPointReport lwp_fixed_point(const ProfileGrid& u0,
                                 const BourgainParams& p, int max_iter = 20,
                                 Real tol = 1e-10, Real T = 4.0,
                                 int Nt = 256);

// demonstration: sup_xi of the space-time transform of the self-similar
// background behaves like 1/tau (the critical-regularity obstruction)
std::vector<std::pair<Real, Real>> selfsimilar_tau_profile(
    const std::function<Complex(Real)>& S_profile, Real T = 4.0,
    Real Xi = 8.0, int Nt = 512, int Nx = 128);

}  // namespace mkdv

#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "mkdv/types.hpp"
#include "mkdv/windows.hpp"

namespace mkdv {

struct NonConvergence : std::runtime_error {
  Real last_residual;
  NonConvergence(const std::string& what, Real r)
      : std::runtime_error(what), last_residual(r) {}
};

struct WindowTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameters of the Fourier-side profile model S = S0 + Sreg with
//   S0(xi) = chi(xi) e^{ia ln|xi|} (A + B e^{2ia ln|xi|} e^{-i(8/9)xi^3}/xi^3)
// for xi > 0 and Hermitian reflection for xi < 0 (the underlying physical
// solution is real). Sreg is a model representative of the regularity class
// W^{1,inf}_{(4/7)-,(11/7)-} with an optional jump at 0.
struct SelfSimilarConfig {
  Complex A{0.05, 0.0};
  Complex B{0.0, 0.0};
  Real a = 0.0;       // logarithmic phase exponent
  Real alpha = 0.0;   // ODE constant
  Real cutoff_inner = 1.0;
  Real cutoff_outer = 2.0;
  Complex sreg_c{0.0, 0.0};  // Sreg amplitude (jump at 0 if Im != 0)
  Real sreg_delta = 0.01;    // decay is <xi>^{-4/7+delta}
  Real sreg_bend = 0.7;      // smooth phase parameter of the Sreg model
};

class SelfSimilarProfile {
 public:
  explicit SelfSimilarProfile(SelfSimilarConfig cfg);

  const SelfSimilarConfig& config() const { return cfg_; }

  Complex s0(Real xi) const;
  Complex sreg(Real xi) const;
  Complex s(Real xi) const { return s0(xi) + sreg(xi); }

  // analytic xi-derivatives
  Complex ds0(Real xi) const;
  Complex dsreg(Real xi) const;
  Complex ds(Real xi) const { return ds0(xi) + dsreg(xi); }

  // time-scaled evaluations S(t, xi) = S(t^{1/3} xi) and d/dt of them
  Complex s0_at(Real t, Real xi) const { return s0(std::cbrt(t) * xi); }
  Complex sreg_at(Real t, Real xi) const { return sreg(std::cbrt(t) * xi); }
  Complex s_at(Real t, Real xi) const { return s(std::cbrt(t) * xi); }
  Complex dt_s0_at(Real t, Real xi) const;
  Complex dt_sreg_at(Real t, Real xi) const;
  Complex dt_s_at(Real t, Real xi) const {
    return dt_s0_at(t, xi) + dt_sreg_at(t, xi);
  }

  // sup <xi>^mu |f| + sup <xi>^mu' |f'| over a log-uniform grid
  Real w1inf_norm(Real mu, Real mu_prime, Real xi_max = 1e4,
                  int n = 4000) const;

 private:
  SelfSimilarConfig cfg_;
  ProfileWindow window_;
};

struct PhysicalProfile {
  std::vector<Real> y;  // uniform grid, increasing
  std::vector<Real> S;
  Real alpha = 0.0;
  Real dy() const { return y.size() > 1 ? y[1] - y[0] : 0.0; }
};

// Integrates S'' - (y/3) S = S^3 + alpha backwards from y = +L with
// Airy-decay asymptotic data of size `amplitude`. Throws NonConvergence on
// blow-up or when the final finite-difference residual exceeds tol.
PhysicalProfile solve_profile_ode(Real alpha, Real amplitude, Real L,
                                  Real tol = 1e-6, Real dy_out = 0.01);

// max-norm residual of the ODE on interior nodes (5-point stencil)
Real profile_ode_residual(const PhysicalProfile& p);

// log-log slope of the oscillation envelope of S on y in [-L, -L/4]
Real envelope_decay_exponent(const PhysicalProfile& p);

// u~(xi) = e^{-i xi^3} \int S(y) e^{-i xi y} dy with a smooth taper on the
// oscillatory tail; valid for |xi| safely below sqrt(L_kept/3).
std::vector<Complex> profile_fourier(const PhysicalProfile& p,
                                     const std::vector<Real>& xi,
                                     Real taper_start_frac = 0.6,
                                     Real taper_end_frac = 0.9);

struct FitWindow {
  Real xi_lo, xi_hi;
  Complex A, B;
  Real a;
  Real residual;  // rms misfit relative to rms data
};

struct FitReport {
  std::vector<FitWindow> windows;
  Real xi_valid_max;  // stationary-phase validity edge of the transform
};

// Fits (A, a, B) of the S0 form against the Fourier transform of the
// physical profile on nested windows. Throws WindowTooSmall if no window
// fits below the validity edge.
FitReport cross_validate_profile(const PhysicalProfile& phys,
                                 const SelfSimilarProfile& model,
                                 int n_windows = 3);

// scaled Airy function Ai, Ai' for x >= 4 (asymptotic expansion)
void airy_asymptotic(Real x, Real& ai, Real& aip);

// CSV exports: (xi, re_S0, im_S0, re_Sreg, im_Sreg) and (y, S)
std::string profile_csv(const SelfSimilarProfile& prof,
                        const std::vector<Real>& xi);
std::string physical_csv(const PhysicalProfile& p);

}  // namespace mkdv

#pragma once
#include <functional>
#include <stdexcept>
#include <vector>

#include "mkdv/types.hpp"

namespace mkdv {

struct AliasingDetected : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Uniform frequency grid, staggered by half a spacing so no node sits on
// xi = 0 (the profile may jump there and 1/xi multipliers stay finite).
struct ProfileGrid {
  Real Xi = 0.0;
  int N = 0;
  Real time = 0.0;
  ArrayXc values;

  ProfileGrid() = default;
  ProfileGrid(int n, Real xi_max, Real t = 0.0)
      : Xi(xi_max), N(n), time(t), values(ArrayXc::Zero(n)) {}

  Real dxi() const { return 2.0 * Xi / N; }
  Real node(int j) const { return -Xi + (j + 0.5) * dxi(); }
  ArrayXr nodes() const {
    ArrayXr x(N);
    for (int j = 0; j < N; ++j) x[j] = node(j);
    return x;
  }

  static ProfileGrid from_function(int n, Real xi_max, Real t,
                                   const std::function<Complex(Real)>& f);
};

enum class PhaseSign : int { plus = 1, minus = -1 };

// Hermitian symmetry values(-xi) = conj(values(xi)); max deviation.
Real hermitian_defect(const ProfileGrid& g);

// fraction of l2 mass carried by nodes with |xi| > (2/3) Xi
Real aliasing_fraction(const ProfileGrid& g);

// N[f,g,h](t,xi) = xi \iint_{H_xi} e^{sign * i t Phi} f(xi1) g(xi2) h(xi3),
// discretized by the midpoint rule on the shared grid (integrand truncated
// to the box). FFT route: conjugate inputs by the cubic phase, zero-padded
// triple convolution, reweight. Throws AliasingDetected when input mass
// beyond the 2/3 band exceeds alias_tol (set alias_tol <= 0 to skip).
ProfileGrid apply_N_fft(const ProfileGrid& f, const ProfileGrid& g,
                        const ProfileGrid& h, Real t,
                        PhaseSign sign = PhaseSign::plus,
                        Real alias_tol = -1.0);

// Same object by direct summation; optional restriction of H_xi via
// pred(xi, xi1, xi2) and optional output node subset.
ProfileGrid apply_N_direct(
    const ProfileGrid& f, const ProfileGrid& g, const ProfileGrid& h, Real t,
    PhaseSign sign = PhaseSign::plus,
    const std::function<bool(Real, Real, Real)>& pred = nullptr,
    const std::vector<int>* out_subset = nullptr);

// sup_j <xi_j>^mu |v_j|
Real weighted_sup(const ProfileGrid& g, Real mu);

// fourth-order centered finite difference in xi (one-sided at the edges)
ProfileGrid deriv_xi(const ProfileGrid& g);

// trapezoid-free l2 mass: dxi * sum |v|^2
Real l2_mass(const ProfileGrid& g);

// cubic-phase conjugation helper: out_j = e^{i s t xi_j^3} v_j
ProfileGrid phase_conjugate(const ProfileGrid& g, Real t, int s);

}  // namespace mkdv

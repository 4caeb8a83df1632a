#pragma once
#include <stdexcept>
#include <string>
#include <vector>

#include "mkdv/domains.hpp"
#include "mkdv/grid.hpp"
#include "mkdv/io.hpp"
#include "mkdv/params.hpp"
#include "mkdv/rng.hpp"

namespace mkdv {

struct TruncationDominates : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InsufficientLadder : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class EstimateId {
  FRE_PHI,          // <xi>^mu max|xi_j| / (<xi1>^mu <xi2>^mu), phase Phi
  FRE_PHI_XI,       // <xi>^mu |xi|     / (<xi1>^mu <xi2>^mu), phase Phi
  FRE_PSI,          // max(|xi|,|eta|) <xi>^mu / (sqrt|eta| <xi-eta>^mu)
  SOURCE_PHI_D3,    // nu-weights, restricted to D3(tau)
  SOURCE_SREG_D1,   // <t^{1/3} xi2>^{-(4/7)-} <xi3>^{-nu}, D1(tau)
  SOURCE_PSI_DTAU,  // psi weights with <xi-eta>^{-nu}, D(tau)
  QUAD_POSDEF,      // |q1^2+q2^2-alpha|<M on B_1
  QUAD_INDEF,       // |q1 q2 - alpha|<M on B_1
  QUAD_SINGULAR,    // int 1_{|q-alpha|<M} |q|^{-delta} dq
  QUAD_SQUARE       // int_{-1}^{1} 1_{|q^2-alpha|<M} dq
};

std::string estimate_name(EstimateId id);

struct EstimateSpec {
  EstimateId id = EstimateId::FRE_PHI;
  AnalysisParams params;
  Real tau = 1e-2;           // domain restriction scale of SOURCE_*
  Real t = 1e-2;             // time entering SOURCE_SREG_D1 weights
  Real delta_singular = 0.5; // exponent of QUAD_SINGULAR
};

struct SamplerConfig {
  long samples = 200000;
  uint64_t seed = 20240901;
  int strata = 128;
  Real radius_scale = 1.0;  // multiplies the automatic truncation radius
};

struct SublevelValue {
  Real value = 0.0;
  Real stderr_ = 0.0;
  Real radius = 0.0;      // outer truncation used (0: none needed)
  Real tail_bound = 0.0;  // analytic bound on what truncation dropped
};

// One (xi, alpha) cell of the restricted integral at threshold M. The
// indicator is resolved in closed form along the phase direction (the
// slice where Phi is quadratic / Psi is cubic); Monte-Carlo only runs
// across slices. One-dimensional ids use deterministic quadrature.
SublevelValue sublevel_integral(const EstimateSpec& spec, Real xi, Real alpha,
                                Real M, const SamplerConfig& sampler);

struct GridSearchConfig {
  int n_xi = 20;
  Real xi_min = 5e-2;
  int refine_rounds = 2;
  SamplerConfig sampler;
};

struct SupResult {
  Real value = 0.0;
  Real stderr_ = 0.0;
  Real xi = 0.0, alpha = 0.0;  // argmax witness
};

SupResult estimate_sup(const EstimateSpec& spec, Real M,
                       const GridSearchConfig& search);

// log-log least squares slope of sup vs M; needs >= 4 points over >= 2
// decades, else InsufficientLadder.
Real fit_exponent(const std::vector<std::pair<Real, Real>>& ladder);

struct LadderPoint {
  Real M, sup, stderr_, xi, alpha;
};

struct EstimateReport {
  EstimateId id;
  AnalysisParams params;
  Real tau = 0.0, t = 0.0;
  std::vector<LadderPoint> ladder;
  Real fitted_exponent = 0.0;
  Real target_exponent = 0.0;
  Real tolerance = 0.05;
  bool pass = false;
};

Real target_exponent(const EstimateSpec& spec);
EstimateReport run_estimate(const EstimateSpec& spec,
                            const std::vector<Real>& Ms,
                            const GridSearchConfig& search,
                            Real tolerance = 0.05);
Json report_json(const EstimateReport& rep);
std::string ladder_csv(const EstimateReport& rep);

// sup of int m / |Theta-alpha|^rho 1_{M < |Theta-alpha| < M 2^{12}}; the
// measured decay in M should be about M^{theta-rho}.
struct DyadicReport {
  Real rho = 0.0;
  std::vector<std::pair<Real, Real>> ladder;  // (M, sup)
  Real fitted_decay = 0.0;    // slope, expected ~ theta - rho
  Real cap_tail_bound = 0.0;  // dyadic bound on the part beyond the cap
};

DyadicReport dyadic_conversion_check(const EstimateSpec& spec, Real rho,
                                     const std::vector<Real>& Ms,
                                     const GridSearchConfig& search);

// || (t/xi) N[f,g,h](t) ||_{L^inf_{a'}} across a t-ladder, normalized by
// the W^{1,inf} norms of the inputs; growth exponent fitted against
// theta = (1/3) min(a, b' - a').
struct PointwiseBoundReport {
  std::vector<std::pair<Real, Real>> ladder;  // (t, norm)
  Real fitted_exponent = 0.0;
  Real theta_target = 0.0;
};

PointwiseBoundReport pointwise_nonlinearity_bound_check(
    const ProfileGrid& f, const ProfileGrid& g, const ProfileGrid& h,
    const std::vector<Real>& t_ladder, Real a, Real a_prime, Real b_prime);

// closed forms used as oracles for the elementary QUAD_* integrals
Real quad_posdef_closed_form(Real alpha, Real M);
Real quad_square_closed_form(Real alpha, Real M);
Real quad_singular_closed_form(Real alpha, Real M, Real delta);

}  // namespace mkdv

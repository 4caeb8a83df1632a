#include "mkdv/oscillatory.hpp"

#include <cmath>

#include "mkdv/fresnel.hpp"

namespace mkdv {
namespace {

struct FilonAccum {
  Complex value{0.0, 0.0};
  Real err = 0.0;
  long evals = 0;
};

void filon_panel(const CEvaluator& H, Real a, Real b, Complex Ha, Complex Hb,
                 int sign, Real tol, int depth, int max_depth,
                 FilonAccum& acc) {
  const Real m = 0.5 * (a + b);
  const Complex Hm = H(m);
  ++acc.evals;
  const Complex whole = quad_phase_linear(a, b, Ha, Hb, sign);
  const Complex split = quad_phase_linear(a, m, Ha, Hm, sign) +
                        quad_phase_linear(m, b, Hm, Hb, sign);
  const Real diff = std::abs(whole - split);
  if (depth >= max_depth || diff <= tol) {
    acc.value += split;
    acc.err += diff;
    return;
  }
  filon_panel(H, a, m, Ha, Hm, sign, 0.5 * tol, depth + 1, max_depth, acc);
  filon_panel(H, m, b, Hm, Hb, sign, 0.5 * tol, depth + 1, max_depth, acc);
}

// \int_{-Z}^{Z} e^{i s zeta^2} H dzeta plus frozen tails, with an error
// estimate (panel mismatches + tail-variation bound).
FilonAccum fresnel_filon(const CEvaluator& H, Real Z, int sign, Real tol,
                         const OscQuadConfig& cfg) {
  FilonAccum acc;
  const int n0 = cfg.panels0;
  Real prev_node = -Z;
  Complex prev_val = H(prev_node);
  ++acc.evals;
  for (int p = 0; p < n0; ++p) {
    const Real node = -Z + 2.0 * Z * (p + 1) / n0;
    const Complex val = H(node);
    ++acc.evals;
    filon_panel(H, prev_node, node, prev_val, val, sign, tol / n0, 0,
                cfg.max_depth, acc);
    prev_node = node;
    prev_val = val;
  }
  // tails: freeze H at the endpoint against the exact Fresnel remainder
  const Complex tail_hi = H(Z) * (sign > 0
                                      ? fresnel_F_inf() - fresnel_F(Z)
                                      : std::conj(fresnel_F_inf() - fresnel_F(Z)));
  const Complex tail_lo = H(-Z) * (sign > 0
                                       ? fresnel_F(-Z) + fresnel_F_inf()
                                       : std::conj(fresnel_F(-Z) + fresnel_F_inf()));
  acc.value += tail_hi + tail_lo;
  acc.evals += 2;
  // variation bound: sup |zeta H'| / (2 Z), H' sampled by differences
  Real cd = 0.0;
  for (const Real zz : {Z, 1.5 * Z, 2.0 * Z, 3.0 * Z, -Z, -2.0 * Z}) {
    const Real h = 1e-3 * std::abs(zz);
    const Complex d = (H(zz + h) - H(zz - h)) / (2.0 * h);
    acc.evals += 2;
    cd = std::max(cd, std::abs(zz * d));
  }
  acc.err += cd / (2.0 * Z);
  return acc;
}

}  // namespace

Complex kernel_K(const CEvaluator& f, const CEvaluator& g, Real eta,
                 const OscQuadConfig& quad) {
  if (eta == 0.0)
    throw std::invalid_argument("kernel_K: eta must be nonzero");
  const Real a = 0.75 * eta;
  const int sign = a > 0 ? 1 : -1;
  const Real sa = std::sqrt(std::abs(a));
  const CEvaluator H = [&](Real zeta) {
    const Real lam = zeta / sa;
    return f(0.5 * (eta + lam)) * g(0.5 * (eta - lam));
  };
  Complex prev{0.0, 0.0};
  bool have_prev = false;
  Real Z = quad.z0;
  for (int r = 0; r <= quad.max_refine; ++r, Z *= 2.0) {
    const FilonAccum acc = fresnel_filon(H, Z, sign, quad.tol, quad);
    const Complex val = acc.value / sa;
    const Real scale = std::max(std::abs(val), 1e-12);
    if (have_prev && std::abs(val - prev) <= quad.tol * scale &&
        acc.err / sa <= 10.0 * quad.tol * scale)
      return val;
    prev = val;
    have_prev = true;
  }
  // one more evaluation to report the last two refinements
  const FilonAccum acc = fresnel_filon(H, Z, sign, quad.tol, quad);
  throw QuadratureNotConverged("kernel_K did not converge under refinement",
                               acc.value / sa, prev);
}

Complex kernel_K(const SelfSimilarProfile& prof, Real eta,
                 const OscQuadConfig& quad) {
  const CEvaluator s0 = [&](Real x) { return prof.s0(x); };
  return kernel_K(s0, s0, eta, quad);
}

Complex K0(const SelfSimilarProfile& prof, Real t, Real xi,
           const OscQuadConfig& quad) {
  if (!(t > 0.0)) throw std::invalid_argument("K0: t must be positive");
  if (xi == 0.0) throw std::invalid_argument("K0: xi must be nonzero");
  const Real c = std::cbrt(t);
  return kernel_K(prof, c * xi, quad) / c;
}

Complex dK_dxi(const SelfSimilarProfile& prof, Real xi,
               const OscQuadConfig& quad, Real rel_step) {
  const Real h = rel_step * jbracket(xi);
  return (kernel_K(prof, xi + h, quad) - kernel_K(prof, xi - h, quad)) /
         (2.0 * h);
}

Complex dt_K0(const SelfSimilarProfile& prof, Real t, Real xi,
              const OscQuadConfig& quad) {
  // d/dt [t^{-1/3} K(t^{1/3} xi)] =
  //   (1/3) t^{-4/3} [ t^{1/3} xi K'(t^{1/3} xi) - K(t^{1/3} xi) ]
  const Real c = std::cbrt(t);
  const Real z = c * xi;
  return (z * dK_dxi(prof, z, quad) - kernel_K(prof, z, quad)) /
         (3.0 * t * c);
}

}  // namespace mkdv

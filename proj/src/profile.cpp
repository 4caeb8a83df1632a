#include "mkdv/profile.hpp"

#include <algorithm>
#include <cmath>

#include "mkdv/io.hpp"

namespace mkdv {

SelfSimilarProfile::SelfSimilarProfile(SelfSimilarConfig cfg)
    : cfg_(cfg), window_{cfg.cutoff_inner, cfg.cutoff_outer} {}

namespace {

// oscillating factor of the B-term, xi > 0
Complex b_factor(Real a, Real xi) {
  const Real x3 = xi * xi * xi;
  return std::exp(Complex{0.0, 2.0 * a * std::log(xi) - (8.0 / 9.0) * x3}) /
         x3;
}

}  // namespace

Complex SelfSimilarProfile::s0(Real xi) const {
  if (xi == 0.0) return {0.0, 0.0};
  if (xi < 0.0) return std::conj(s0(-xi));
  const Real chi = window_(xi);
  if (chi == 0.0) return {0.0, 0.0};
  const Complex logph = std::exp(Complex{0.0, cfg_.a * std::log(xi)});
  return chi * logph * (cfg_.A + cfg_.B * b_factor(cfg_.a, xi));
}

Complex SelfSimilarProfile::ds0(Real xi) const {
  if (xi == 0.0) return {0.0, 0.0};
  if (xi < 0.0) return -std::conj(ds0(-xi));
  const Real chi = window_(xi);
  const Real dchi = window_.deriv(xi);
  if (chi == 0.0 && dchi == 0.0) return {0.0, 0.0};
  const Complex logph = std::exp(Complex{0.0, cfg_.a * std::log(xi)});
  const Complex eps = b_factor(cfg_.a, xi);
  const Complex inner = cfg_.A + cfg_.B * eps;
  const Complex deps =
      eps * Complex{-3.0 / xi, 2.0 * cfg_.a / xi - (8.0 / 3.0) * xi * xi};
  return dchi * logph * inner +
         chi * logph *
             (Complex{0.0, cfg_.a / xi} * inner + cfg_.B * deps);
}

Complex SelfSimilarProfile::sreg(Real xi) const {
  if (cfg_.sreg_c == Complex{0.0, 0.0}) return {0.0, 0.0};
  if (xi < 0.0) return std::conj(sreg(-xi));
  const Real p = -4.0 / 7.0 + cfg_.sreg_delta;
  const Real decay = std::pow(jbracket(xi), p);
  const Complex ph =
      std::exp(Complex{0.0, cfg_.sreg_bend * xi / jbracket(xi)});
  return cfg_.sreg_c * decay * ph;
}

Complex SelfSimilarProfile::dsreg(Real xi) const {
  if (cfg_.sreg_c == Complex{0.0, 0.0}) return {0.0, 0.0};
  if (xi < 0.0) return -std::conj(dsreg(-xi));
  const Real p = -4.0 / 7.0 + cfg_.sreg_delta;
  const Real br = jbracket(xi);
  const Real decay = std::pow(br, p);
  const Complex ph = std::exp(Complex{0.0, cfg_.sreg_bend * xi / br});
  const Real ddecay = p * xi * std::pow(br, p - 2.0);
  const Complex dph = ph * Complex{0.0, cfg_.sreg_bend / cube(br)};
  return cfg_.sreg_c * (ddecay * ph + decay * dph);
}

Complex SelfSimilarProfile::dt_s0_at(Real t, Real xi) const {
  const Real c = std::cbrt(t);
  return (xi / (3.0 * c * c)) * ds0(c * xi);
}

Complex SelfSimilarProfile::dt_sreg_at(Real t, Real xi) const {
  const Real c = std::cbrt(t);
  return (xi / (3.0 * c * c)) * dsreg(c * xi);
}

Real SelfSimilarProfile::w1inf_norm(Real mu, Real mu_prime, Real xi_max,
                                    int n) const {
  Real m0 = 0.0, m1 = 0.0;
  for (int i = 0; i < n; ++i) {
    // log-spaced magnitudes, both signs
    const Real r = 1e-3 * std::pow(xi_max / 1e-3, Real(i) / (n - 1));
    for (const Real xi : {r, -r}) {
      m0 = std::max(m0, std::pow(jbracket(xi), mu) * std::abs(s(xi)));
      m1 = std::max(m1, std::pow(jbracket(xi), mu_prime) * std::abs(ds(xi)));
    }
  }
  return m0 + m1;
}

void airy_asymptotic(Real x, Real& ai, Real& aip) {
  // Abramowitz-Stegun 10.4.59/61, valid to ~1e-12 for x >= 4
  const Real zeta = (2.0 / 3.0) * std::pow(x, 1.5);
  Real u = 1.0, usum = 1.0, vsum = 1.0;
  for (int k = 1; k <= 10; ++k) {
    u *= (6.0 * k - 5.0) * (6.0 * k - 3.0) * (6.0 * k - 1.0) /
         (216.0 * k * (2.0 * k - 1.0)) / zeta;
    const Real v = -u * (6.0 * k + 1.0) / (6.0 * k - 1.0);
    usum += (k % 2 ? -u : u);
    vsum += (k % 2 ? -v : v);
    if (std::abs(u) < 1e-17) break;
  }
  const Real pref = std::exp(-zeta) / (2.0 * std::sqrt(kPi));
  ai = pref * usum / std::pow(x, 0.25);
  aip = -pref * std::pow(x, 0.25) * vsum;
}

namespace {

struct OdeState {
  Real s, sp;
};

OdeState ode_rhs(Real y, const OdeState& u, Real alpha) {
  return {u.sp, (y / 3.0) * u.s + u.s * u.s * u.s + alpha};
}

}  // namespace

PhysicalProfile solve_profile_ode(Real alpha, Real amplitude, Real L,
                                  Real tol, Real dy_out) {
  if (L < 20.0) L = 20.0;
  PhysicalProfile out;
  out.alpha = alpha;
  const int n_out = static_cast<int>(std::round(2.0 * L / dy_out)) + 1;
  out.y.resize(n_out);
  out.S.resize(n_out);

  Real ai, aip;
  const Real scale = std::cbrt(3.0);  // S'' = (y/3) S has solutions Ai(y/3^{1/3})
  airy_asymptotic(L / scale, ai, aip);
  OdeState u{amplitude * ai, amplitude * aip / scale};
  if (alpha != 0.0) {
    u.s += -3.0 * alpha / L;          // particular branch ~ -3 alpha / y
    u.sp += 3.0 * alpha / (L * L);
  }

  const int sub = 10;  // RK4 substeps per output interval
  const Real h = -dy_out / sub;
  Real y = L;
  out.y[n_out - 1] = y;
  out.S[n_out - 1] = u.s;
  for (int i = n_out - 2; i >= 0; --i) {
    for (int k = 0; k < sub; ++k) {
      const OdeState k1 = ode_rhs(y, u, alpha);
      const OdeState k2 = ode_rhs(
          y + h / 2, {u.s + h / 2 * k1.s, u.sp + h / 2 * k1.sp}, alpha);
      const OdeState k3 = ode_rhs(
          y + h / 2, {u.s + h / 2 * k2.s, u.sp + h / 2 * k2.sp}, alpha);
      const OdeState k4 =
          ode_rhs(y + h, {u.s + h * k3.s, u.sp + h * k3.sp}, alpha);
      u.s += h / 6 * (k1.s + 2 * k2.s + 2 * k3.s + k4.s);
      u.sp += h / 6 * (k1.sp + 2 * k2.sp + 2 * k3.sp + k4.sp);
      y += h;
      if (std::abs(u.s) > 20.0)
        throw NonConvergence("profile ODE blow-up during backward shooting",
                             std::abs(u.s));
    }
    out.y[i] = -L + i * dy_out;
    out.S[i] = u.s;
  }
  const Real res = profile_ode_residual(out);
  if (!(res <= tol))
    throw NonConvergence("profile ODE residual above tolerance", res);
  return out;
}

Real profile_ode_residual(const PhysicalProfile& p) {
  const Real h = p.dy();
  const std::size_t n = p.y.size();
  Real worst = 0.0;
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Real d2 = (-p.S[i - 2] + 16.0 * p.S[i - 1] - 30.0 * p.S[i] +
                     16.0 * p.S[i + 1] - p.S[i + 2]) /
                    (12.0 * h * h);
    const Real rhs =
        (p.y[i] / 3.0) * p.S[i] + cube(p.S[i]) + p.alpha;
    worst = std::max(worst, std::abs(d2 - rhs));
  }
  return worst;
}

Real envelope_decay_exponent(const PhysicalProfile& p) {
  const Real L = -p.y.front();
  std::vector<Real> ylog, alog;
  for (std::size_t i = 1; i + 1 < p.y.size(); ++i) {
    if (p.y[i] > -L / 4 || p.y[i] < -0.95 * L) continue;
    const Real a0 = std::abs(p.S[i]);
    if (a0 > std::abs(p.S[i - 1]) && a0 >= std::abs(p.S[i + 1]) && a0 > 0) {
      ylog.push_back(-p.y[i]);
      alog.push_back(a0);
    }
  }
  if (ylog.size() < 4)
    throw NonConvergence("too few envelope maxima for a fit",
                         static_cast<Real>(ylog.size()));
  return loglog_slope(ylog, alog);
}

std::vector<Complex> profile_fourier(const PhysicalProfile& p,
                                     const std::vector<Real>& xi,
                                     Real taper_start_frac,
                                     Real taper_end_frac) {
  const Real L = -p.y.front();
  const Real t0 = -taper_start_frac * L, t1 = -taper_end_frac * L;
  const Real h = p.dy();
  std::vector<Complex> out(xi.size());
  std::vector<Real> w(p.y.size());
  for (std::size_t i = 0; i < p.y.size(); ++i) {
    Real m = 1.0;
    if (p.y[i] < t0) m = 1.0 - smoothstep5((t0 - p.y[i]) / (t0 - t1));
    // trapezoid end weights
    const Real tw = (i == 0 || i + 1 == p.y.size()) ? 0.5 : 1.0;
    w[i] = m * tw * h;
  }
  for (std::size_t k = 0; k < xi.size(); ++k) {
    Complex acc{0.0, 0.0};
    for (std::size_t i = 0; i < p.y.size(); ++i)
      acc += w[i] * p.S[i] * std::exp(Complex{0.0, -xi[k] * p.y[i]});
    out[k] = std::exp(Complex{0.0, -cube(xi[k])}) * acc;
  }
  return out;
}

namespace {

// least squares in (A, B) for fixed a on samples (xi_i, d_i); returns rms
Real fit_AB(const std::vector<Real>& xi, const std::vector<Complex>& d,
            Real a, Complex& A, Complex& B) {
  // basis: f1 = e^{ia ln xi}, f2 = e^{3ia ln xi} e^{-i(8/9)xi^3}/xi^3
  Complex g11{0, 0}, g12{0, 0}, g22{0, 0}, r1{0, 0}, r2{0, 0};
  std::vector<Complex> f1(xi.size()), f2(xi.size());
  for (std::size_t i = 0; i < xi.size(); ++i) {
    const Real x = xi[i];
    f1[i] = std::exp(Complex{0.0, a * std::log(x)});
    f2[i] = std::exp(Complex{0.0, 3.0 * a * std::log(x) -
                                      (8.0 / 9.0) * cube(x)}) /
            cube(x);
    g11 += std::conj(f1[i]) * f1[i];
    g12 += std::conj(f1[i]) * f2[i];
    g22 += std::conj(f2[i]) * f2[i];
    r1 += std::conj(f1[i]) * d[i];
    r2 += std::conj(f2[i]) * d[i];
  }
  const Complex det = g11 * g22 - g12 * std::conj(g12);
  if (std::abs(det) < 1e-30) {
    A = r1 / g11;
    B = {0.0, 0.0};
  } else {
    A = (g22 * r1 - g12 * r2) / det;
    B = (g11 * r2 - std::conj(g12) * r1) / det;
  }
  Real ss = 0.0, dd = 0.0;
  for (std::size_t i = 0; i < xi.size(); ++i) {
    ss += std::norm(d[i] - A * f1[i] - B * f2[i]);
    dd += std::norm(d[i]);
  }
  return dd > 0 ? std::sqrt(ss / dd) : std::sqrt(ss / xi.size());
}

}  // namespace

FitReport cross_validate_profile(const PhysicalProfile& phys,
                                 const SelfSimilarProfile& model,
                                 int n_windows) {
  FitReport rep;
  const Real L = -phys.y.front();
  rep.xi_valid_max = 0.8 * std::sqrt(0.6 * L / 3.0);
  const Real lo0 = std::max(2.05, 0.35 * rep.xi_valid_max);
  if (rep.xi_valid_max < lo0 + 0.3)
    throw WindowTooSmall("transform validity edge below the fit window");
  for (int wdx = 0; wdx < n_windows; ++wdx) {
    // nested windows pushed toward larger |xi|
    const Real f = Real(wdx) / std::max(1, n_windows - 1);
    const Real lo = lo0 + f * 0.5 * (rep.xi_valid_max - lo0 - 0.3);
    const Real hi = rep.xi_valid_max - (1.0 - f) * 0.25 * (rep.xi_valid_max - lo0);
    const int n = 160;
    std::vector<Real> xs(n);
    for (int i = 0; i < n; ++i) xs[i] = lo + (hi - lo) * i / (n - 1.0);
    const std::vector<Complex> d = profile_fourier(phys, xs);
    // coarse a scan + parabolic refinement
    Real best_a = 0.0, best_r = 1e300;
    Complex A, B;
    for (Real a = -3.0; a <= 3.0 + 1e-12; a += 0.05) {
      Complex Ai, Bi;
      const Real r = fit_AB(xs, d, a, Ai, Bi);
      if (r < best_r) { best_r = r; best_a = a; }
    }
    for (Real step = 0.025; step > 1e-5; step *= 0.5) {
      for (const Real cand : {best_a - step, best_a + step}) {
        Complex Ai, Bi;
        const Real r = fit_AB(xs, d, cand, Ai, Bi);
        if (r < best_r) { best_r = r; best_a = cand; }
      }
    }
    best_r = fit_AB(xs, d, best_a, A, B);
    rep.windows.push_back({lo, hi, A, B, best_a, best_r});
  }
  (void)model;
  return rep;
}

std::string profile_csv(const SelfSimilarProfile& prof,
                        const std::vector<Real>& xi) {
  CsvWriter csv({"xi", "re_S0", "im_S0", "re_Sreg", "im_Sreg"});
  for (const Real x : xi) {
    const Complex s0 = prof.s0(x), sr = prof.sreg(x);
    csv.row({x, s0.real(), s0.imag(), sr.real(), sr.imag()});
  }
  return csv.str();
}

std::string physical_csv(const PhysicalProfile& p) {
  CsvWriter csv({"y", "S"});
  for (std::size_t i = 0; i < p.y.size(); ++i) csv.row({p.y[i], p.S[i]});
  return csv.str();
}

}  // namespace mkdv

#include "mkdv/grid.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>

#include "mkdv/phase.hpp"

namespace mkdv {

ProfileGrid ProfileGrid::from_function(
    int n, Real xi_max, Real t, const std::function<Complex(Real)>& f) {
  ProfileGrid g(n, xi_max, t);
  for (int j = 0; j < n; ++j) g.values[j] = f(g.node(j));
  return g;
}

Real hermitian_defect(const ProfileGrid& g) {
  Real worst = 0.0;
  for (int j = 0; j < g.N; ++j)
    worst = std::max(worst, std::abs(g.values[j] -
                                     std::conj(g.values[g.N - 1 - j])));
  return worst;
}

Real aliasing_fraction(const ProfileGrid& g) {
  Real outer = 0.0, total = 0.0;
  for (int j = 0; j < g.N; ++j) {
    const Real m = std::norm(g.values[j]);
    total += m;
    if (std::abs(g.node(j)) > (2.0 / 3.0) * g.Xi) outer += m;
  }
  return total > 0.0 ? outer / total : 0.0;
}

namespace {

int next_pow2(int n) {
  int p = 1;
  while (p < n) p <<= 1;
  return p;
}

void check_compatible(const ProfileGrid& a, const ProfileGrid& b) {
  if (a.N != b.N || a.Xi != b.Xi)
    throw std::invalid_argument("apply_N: grids must share nodes");
}

}  // namespace

ProfileGrid phase_conjugate(const ProfileGrid& g, Real t, int s) {
  ProfileGrid out = g;
  for (int j = 0; j < g.N; ++j) {
    const Real x = g.node(j);
    out.values[j] = g.values[j] * std::exp(Complex{0.0, s * t * cube(x)});
  }
  return out;
}

ProfileGrid apply_N_fft(const ProfileGrid& f, const ProfileGrid& g,
                        const ProfileGrid& h, Real t, PhaseSign sign,
                        Real alias_tol) {
  check_compatible(f, g);
  check_compatible(f, h);
  const int N = f.N;
  const int s = static_cast<int>(sign);
  if (alias_tol > 0.0) {
    const Real frac = std::max(
        {aliasing_fraction(f), aliasing_fraction(g), aliasing_fraction(h)});
    if (frac > alias_tol)
      throw AliasingDetected("apply_N_fft: input mass beyond the 2/3 band");
  }
  const int P = next_pow2(3 * N);
  static thread_local Eigen::FFT<Real> fft;
  std::vector<Complex> buf(P), F(P), G(P), H(P);

  auto load = [&](const ProfileGrid& src, std::vector<Complex>& dst) {
    std::fill(buf.begin(), buf.end(), Complex{0.0, 0.0});
    for (int j = 0; j < N; ++j)
      buf[j] = src.values[j] * std::exp(Complex{0.0, -s * t * cube(src.node(j))});
    fft.fwd(dst, buf);
  };
  load(f, F);
  load(g, G);
  load(h, H);
  for (int k = 0; k < P; ++k) F[k] *= G[k] * H[k];
  fft.inv(buf, F);

  ProfileGrid out(N, f.Xi, t);
  const Real w = sqr(f.dxi());
  for (int m = 0; m < N; ++m) {
    const Real x = out.node(m);
    out.values[m] =
        x * std::exp(Complex{0.0, s * t * cube(x)}) * w * buf[m + N - 1];
  }
  return out;
}

ProfileGrid apply_N_direct(
    const ProfileGrid& f, const ProfileGrid& g, const ProfileGrid& h, Real t,
    PhaseSign sign, const std::function<bool(Real, Real, Real)>& pred,
    const std::vector<int>* out_subset) {
  check_compatible(f, g);
  check_compatible(f, h);
  const int N = f.N;
  const int s = static_cast<int>(sign);
  ProfileGrid out(N, f.Xi, t);
  const Real w = sqr(f.dxi());
  std::vector<int> all;
  if (!out_subset) {
    all.resize(N);
    for (int m = 0; m < N; ++m) all[m] = m;
  }
  const std::vector<int>& outs = out_subset ? *out_subset : all;
  for (const int m : outs) {
    const Real xi = out.node(m);
    Complex acc{0.0, 0.0};
    for (int j = 0; j < N; ++j) {
      const Real x1 = f.node(j);
      for (int k = 0; k < N; ++k) {
        const int l = m + N - 1 - j - k;
        if (l < 0 || l >= N) continue;
        const Real x2 = g.node(k);
        if (pred && !pred(xi, x1, x2)) continue;
        const Real ph = s * t * phi(xi, x1, x2);
        acc += std::exp(Complex{0.0, ph}) * f.values[j] * g.values[k] *
               h.values[l];
      }
    }
    out.values[m] = xi * w * acc;
  }
  return out;
}

Real weighted_sup(const ProfileGrid& g, Real mu) {
  Real worst = 0.0;
  for (int j = 0; j < g.N; ++j)
    worst = std::max(worst,
                     std::pow(jbracket(g.node(j)), mu) * std::abs(g.values[j]));
  return worst;
}

ProfileGrid deriv_xi(const ProfileGrid& g) {
  ProfileGrid out(g.N, g.Xi, g.time);
  const Real h = g.dxi();
  const auto& v = g.values;
  for (int j = 0; j < g.N; ++j) {
    if (j >= 2 && j + 2 < g.N) {
      out.values[j] =
          (v[j - 2] - 8.0 * v[j - 1] + 8.0 * v[j + 1] - v[j + 2]) / (12.0 * h);
    } else if (j >= 1 && j + 1 < g.N) {
      out.values[j] = (v[j + 1] - v[j - 1]) / (2.0 * h);
    } else if (j == 0) {
      out.values[j] = (v[1] - v[0]) / h;
    } else {
      out.values[j] = (v[j] - v[j - 1]) / h;
    }
  }
  return out;
}

Real l2_mass(const ProfileGrid& g) {
  Real acc = 0.0;
  for (int j = 0; j < g.N; ++j) acc += std::norm(g.values[j]);
  return acc * g.dxi();
}

}  // namespace mkdv

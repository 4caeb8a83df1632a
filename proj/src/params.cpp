#include "mkdv/params.hpp"

#include <algorithm>
#include <cstdio>

namespace mkdv {
namespace {

std::string num(Real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

void check(std::vector<Violation>& out, bool ok, const char* rule,
           const char* clause, std::string detail) {
  if (!ok) out.push_back({rule, clause, std::move(detail)});
}

}  // namespace

Real AnalysisParams::beta_lower() const {
  return std::max(1.0 - mu / 3.0, 1.0 - (nu - mu - 3.0 * gamma) / 2.0);
}

Real AnalysisParams::rho_upper() const {
  return std::min({(1.0 - beta) / 3.0, (nu - mu - 3.0 * gamma) / 9.0,
                   (nu - 3.0 * gamma) / 12.0});
}

std::vector<Violation> validate(const AnalysisParams& p) {
  std::vector<Violation> v;
  check(v, p.mu > 0.0, "eta.mu_positive", "0 < mu", "mu=" + num(p.mu));
  check(v, p.mu < p.nu, "eta.mu_lt_nu", "mu < nu",
        "mu=" + num(p.mu) + " nu=" + num(p.nu));
  check(v, p.nu < 0.5, "eta.nu_lt_half", "nu < 1/2", "nu=" + num(p.nu));
  check(v, p.gamma > 0.0, "eta.gamma_positive", "0 < gamma",
        "gamma=" + num(p.gamma));
  const Real gcap = std::min(p.mu, p.nu - p.mu) / 3.0;
  check(v, p.gamma < gcap, "eta.gamma_cap", "gamma < (1/3) min(mu, nu-mu)",
        "gamma=" + num(p.gamma) + " cap=" + num(gcap));
  check(v, p.beta > p.beta_lower(), "beta.lower",
        "beta > max{1-mu/3, 1-(nu-mu-3gamma)/2}",
        "beta=" + num(p.beta) + " lower=" + num(p.beta_lower()));
  check(v, p.beta < 1.0, "beta.upper", "beta < 1", "beta=" + num(p.beta));
  check(v, p.rho > 0.0, "rho.positive", "0 < rho", "rho=" + num(p.rho));
  check(v, p.rho < p.rho_upper(), "rho.upper",
        "rho < min{(1-beta)/3, (nu-mu-3gamma)/9, (nu-3gamma)/12}",
        "rho=" + num(p.rho) + " cap=" + num(p.rho_upper()));
  check(v, p.epsilon > 0.0, "eps.positive", "epsilon > 0",
        "epsilon=" + num(p.epsilon));
  check(v, p.T > 0.0, "T.positive", "T > 0", "T=" + num(p.T));
  return v;
}

std::vector<Violation> validate(const BourgainParams& p) {
  std::vector<Violation> v;
  check(v, p.mu > 0.0, "bourgain.mu_positive", "mu > 0", "mu=" + num(p.mu));
  check(v, p.b > 0.5, "bourgain.b_gt_half", "b > 1/2", "b=" + num(p.b));
  check(v, p.b_prime > p.b - 1.0, "bourgain.bp_lower", "b - 1 < b'",
        "b'=" + num(p.b_prime));
  check(v, p.b_prime < 0.0, "bourgain.bp_upper", "b' < 0",
        "b'=" + num(p.b_prime));
  check(v, 1.0 + p.b_prime - p.b > 0.0, "bourgain.gain_positive",
        "1 + b' - b > 0", "1+b'-b=" + num(1.0 + p.b_prime - p.b));
  check(v, p.b < 0.5 + p.mu / 6.0, "bourgain.b_trilinear",
        "b < 1/2 + mu/6", "b=" + num(p.b) + " cap=" + num(0.5 + p.mu / 6.0));
  check(v, p.delta > 0.0 && p.delta < 1.0, "bourgain.delta_range",
        "0 < delta < 1", "delta=" + num(p.delta));
  return v;
}

std::vector<std::string> validation_rule_manifest() {
  return {"eta.mu_positive",    "eta.mu_lt_nu",      "eta.nu_lt_half",
          "eta.gamma_positive", "eta.gamma_cap",     "beta.lower",
          "beta.upper",         "rho.positive",      "rho.upper",
          "eps.positive",       "T.positive",        "bourgain.mu_positive",
          "bourgain.b_gt_half", "bourgain.bp_lower", "bourgain.bp_upper",
          "bourgain.gain_positive", "bourgain.b_trilinear",
          "bourgain.delta_range"};
}

}  // namespace mkdv

#pragma once
#include <string>
#include <vector>

#include "mkdv/types.hpp"

namespace mkdv {

// Exponent bundle of the analysis. Construction does not throw; call
// validate() to get the violated constraints (empty = admissible).
struct AnalysisParams {
  Real mu = 0.3;
  Real nu = 0.45;
  Real gamma = 0.03;
  Real beta = 0.98;
  Real rho = 0.005;
  Real epsilon = 0.05;
  Real T = 0.1;

  Real beta_lower() const;  // max{1 - mu/3, 1 - (nu-mu-3gamma)/2}
  Real rho_upper() const;   // min{(1-beta)/3, (nu-mu-3gamma)/9, (nu-3gamma)/12}
};

struct BourgainParams {
  Real mu = 0.3;
  Real b = 0.55;
  Real b_prime = -0.05;
  Real delta = 0.5;
};

struct Violation {
  std::string rule;    // stable identifier, e.g. "eta.mu_positive"
  std::string clause;  // human-readable constraint
  std::string detail;
};

std::vector<Violation> validate(const AnalysisParams& p);
std::vector<Violation> validate(const BourgainParams& p);

// Every inequality the validator knows about, by identifier; tests check
// this manifest covers the constraint set.
std::vector<std::string> validation_rule_manifest();

}  // namespace mkdv

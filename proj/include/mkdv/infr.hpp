#pragma once
#include <array>
#include <functional>
#include <string>
#include <vector>

#include "mkdv/evolve.hpp"
#include "mkdv/io.hpp"
#include "mkdv/params.hpp"
#include "mkdv/pieces.hpp"

namespace mkdv {

// node colors of the normal-form trees
enum class Color { w, z, S0, Sreg, K0, dtS0, dtSreg, dtK0, F2, dtw };

std::string color_name(Color c);
Color color_from_name(const std::string& s);
bool is_time_derivative(Color c);
int eps_units(Color c);  // 1 generally, 2 for K0/dtK0, 3 for F2

// One parent with its colored children. Clause 1: three children, a pair
// from {w,z} plus a designated third from {w,z,S0,Sreg}. Clause 2: a
// designated Sreg, a second S-slot from {S0,Sreg}, and a {w,z} child.
// Clause 3: binary (K0, w|z). The designated-slot structure is what makes
// the census come out to the 18 nonlinear terms of the w-equation.
struct ElementaryTree {
  int arity = 3;
  int clause = 1;
  std::array<Color, 3> child_colors{Color::w, Color::w, Color::w};

  int w_count() const;
};

const std::vector<ElementaryTree>& elementary_trees();  // exactly 18

enum class TreeType { resonant, boundary, derivative, f2, remainder };
std::string tree_type_name(TreeType t);

struct TreeNode {
  int id = 0;
  Color color = Color::w;
  int parent = -1;
  int number = 0;  // 1..J for parents, 0 for leaves
  std::vector<int> children;
};

struct AdmissibleTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root
  TreeType type = TreeType::resonant;

  int size() const;  // number of parents J
  std::vector<int> leaf_ids() const;
  int parent_with_number(int j) const;
  bool valid(std::string* why = nullptr) const;

  static AdmissibleTree from_elementary(const ElementaryTree& e);
  Json to_json() const;
  static AdmissibleTree from_json(const Json& j);
};

struct ExpansionStep {
  std::vector<AdmissibleTree> resonant, boundary, derivative, f2;
  std::vector<AdmissibleTree> next;  // badly-behaved trees of size J+1
};

// steps (1)-(5) of the tree-loop applied to every input tree
ExpansionStep expand(const std::vector<AdmissibleTree>& trees);

// Exact census of AT_J via the w-leaf signature recursion (the expansion
// bijection (T, w-leaf, E) -> T' only needs the per-tree w-leaf count);
// cross-checked against brute enumeration for small J in the tests.
double count_admissible(int J);
double card_upper_bound(int J);  // 18^{J+1} (2J+1)!

struct ThresholdSequence {
  Real beta = 0.98;
  Real c(int j) const { return std::pow(Real(j), 3.0 / (1.0 - beta)); }
  Real N(int j, Real t_next) const { return c(j) / t_next; }
  // log of Card(AT_J) c_J^beta prod_{j<J} c_j^{beta-1}
  Real log_summability_factor(int J) const;
};

enum class DomainKind { none, D1, D3, Dtau };

struct SubtreeDescriptor {
  int j = 1;
  bool binary = false;
  std::string parent_word;  // "" is the root frequency xi
  std::vector<std::string> child_words;
  std::vector<Color> child_colors;
  std::string multiplier;  // the parent frequency word (derivative loss)
  DomainKind restriction = DomainKind::none;
};

struct TermDescriptor {
  TreeType type = TreeType::resonant;
  int J = 1;
  Real t_next = 0.0;
  std::vector<Real> thresholds;  // N_j, j = 1..J
  std::vector<SubtreeDescriptor> subtrees;
  Json to_json() const;
};

TermDescriptor term_of_tree(const AdmissibleTree& tree,
                            const ThresholdSequence& thr, Real t_next);
AdmissibleTree tree_of_term(const TermDescriptor& term);

// evaluation ------------------------------------------------------------

struct TermEvalContext {
  // per-color factor (t, xi) -> value
  std::function<Complex(Real, Real)> factor[10];
  Real t_lo = 0.0, t_hi = 0.0;
  bool with_cutoff = false;
  std::function<Real(Real)> chi;  // cutoff, used when with_cutoff
};

// context bound to a background S, perturbation z and a w-history
TermEvalContext make_eval_context(const SelfSimilarProfile& S,
                                  const std::function<Complex(Real)>& z,
                                  const std::function<Complex(Real, Real)>& w,
                                  const std::function<Complex(Real, Real)>& dtw,
                                  Real t_lo, Real t_hi);

struct TermEvalConfig {
  int n_var = 24;       // nodes per represented frequency
  Real box = 8.0;       // truncation box of each variable
  int time_panels = 32;
};

// numerical value of the nested oscillatory integral at output frequency
// xi; J <= 2 enforced (cost grows with dimension 2J+1)
Complex evaluate_term_at(const TermDescriptor& term,
                         const TermEvalContext& ctx, Real xi,
                         const TermEvalConfig& cfg = {});

// certificates -----------------------------------------------------------

struct BoundCertificate {
  TreeType type = TreeType::resonant;
  int J = 1;
  int eps_power = 3;           // 2J+1 with K0 double, F2 triple
  std::vector<Real> subtree_factors;  // (t N_j)^{beta-1}, final per type
  Real predicted_shape = 0.0;  // eps^{2J+1} t_k^gamma
  Real predicted_bound = 0.0;  // shape times the threshold factors
  Real final_exponent = 0.0;   // exponent used at the last subtree
};

BoundCertificate bound_certificate(const AdmissibleTree& tree,
                                   const AnalysisParams& params,
                                   const ThresholdSequence& thr, Real t,
                                   Real t_next);
Json certificate_json(const BoundCertificate& cert);

// the J = 1 normal-form identity on one dyadic interval ------------------

struct InfrIdentityConfig {
  int N = 64;
  Real Xi = 8.0;
  Real n_cutoff = 6.0;
  Real T = 0.05;      // dyadic interval is [T/2, T]
  Real t_start = 2e-3;
  Real dt = 2.5e-4;
  AnalysisParams params;
  SelfSimilarConfig S;
  ZSpec z;
  int n_outputs = 9;  // residual reported on this many xi nodes
};

struct InfrIdentityResult {
  std::vector<Real> xi;
  std::vector<Real> residual;   // |w(t) - w(t1) - sum of terms|
  Real w_scale = 0.0;           // sup |w(t)| over the interval
  Real residual_sup = 0.0;
  Real partition_defect = 0.0;  // resonant + nonresonant vs unsplit
  std::string csv() const;
};

InfrIdentityResult infr_identity_check(const InfrIdentityConfig& cfg);

}  // namespace mkdv

#ifndef BNSL_SEARCH_HPP
#define BNSL_SEARCH_HPP

#include <optional>

#include "bnsl/equivalence.hpp"
#include "bnsl/estimation.hpp"

namespace bnsl {

// Per-family score terms (-H(f) or -Hhat(f)) for all of F_{d,k}.
struct ScoreTable {
  enum class Provenance { kExact, kEmpirical };

  FamilySpace space;
  std::vector<double> terms;
  Provenance provenance = Provenance::kExact;

  double term(int family_id) const { return terms[family_id]; }
  double term(const Family& f) const { return terms[space.index_of(f)]; }
  // Sum of terms in ascending child order (fixed association, so equal
  // family sets produce bitwise-equal scores).
  double score(std::span<const Family> families) const;
  double score(const Dag& g) const { return score(g.families); }
};

ScoreTable exact_score_table(const ExactScorer& scorer, int d, int k,
                             VarMask forbidden_children = 0);
ScoreTable exact_score_table(const DiscreteBayesNet& net, int k);
// Throws NoData when some family has no observed designated subset.
ScoreTable empirical_score_table(const SampleStore& store);

// Accepted families: at most one per child, acyclic as a family set.
struct Constraints {
  std::vector<Family> accepted;

  VarMask accepted_children() const;
  void validate(int d, int k) const;  // throws Infeasible on a cyclic set
};

struct SearchOptions {
  enum class Strategy { kAuto, kExhaustive, kBranchAndBound };
  Strategy strategy = Strategy::kAuto;
  // kAuto switches to branch-and-bound above this stream-size estimate.
  double exhaustive_bound = 2e6;
  // Abort guard for branch-and-bound enumeration within a score cut.
  std::uint64_t visit_limit = 200'000'000;
  VarMask forbidden_children = 0;  // marginal-space search
};

struct BestResult {
  Dag dag;
  double score = 0;
};

// argmax of the table score over the DAGs satisfying c; ties resolved to the
// first maximizer in canonical enumeration order.
BestResult best_structure(const ScoreTable& table, const Constraints& c, SearchOptions opt = {});

// An equivalence class together with its full consistent subset (every
// member containing the accepted families) and the consistent-subset score
// max_{G in members} score(G).
struct ScoredClass {
  EquivalenceClass ec;  // members == the consistent subset
  double score = 0;
};

// All classes whose consistent-subset score is within theta of the best
// one.  The class of best_structure comes first; the rest are ordered by
// descending score, then canonical key order.
std::vector<ScoredClass> near_optimal_ecs(const ScoreTable& table, const Constraints& c,
                                          double theta, SearchOptions opt = {});

// First family (canonical order) of U(best_ec_subset) ∩ active present in
// the family union of every subset in L.
// Pre: best_ec_subset nonempty and equal to L.front()'s members.
std::optional<Family> find_acceptable_family(std::span<const Dag> best_ec_subset,
                                             std::span<const ScoredClass> L,
                                             std::span<const Family> active_sorted);

// Fused acceptance test used by the active algorithm: semantically equal to
// near_optimal_ecs + find_acceptable_family, but it streams the near-optimal
// classes and stops as soon as every candidate has been ruled out.
struct AcceptanceStep {
  Dag best;                      // first maximizer, as in best_structure
  double best_score = 0;
  std::optional<Family> family;  // accepted family, if any
};
AcceptanceStep acceptance_step(const ScoreTable& table, const Constraints& c, double theta,
                               std::span<const Family> active_sorted, SearchOptions opt = {});

// Max true score over classes with a nonempty consistent subset whose
// consistent-subset family union excludes f; -infinity when none exists.
double s_neg_diagnostic(const ScoreTable& table, const Constraints& c, const Family& f,
                        SearchOptions opt = {});

}  // namespace bnsl

#endif

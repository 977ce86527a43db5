#ifndef BNSL_BAYES_NET_HPP
#define BNSL_BAYES_NET_HPP

#include <random>
#include <unordered_map>
#include <vector>

#include "bnsl/dag.hpp"

namespace bnsl {

// Dense joint distribution over an ascending list of variables.  Cells are
// row-major with the lowest-index variable slowest.  This is the exact
// computation backend for every H(.|.) at small d.
struct JointTable {
  std::vector<int> vars;
  std::vector<int> dims;
  std::vector<double> probs;

  std::size_t cell_count() const { return probs.size(); }
  VarMask var_mask() const;
  // Total mass must be 1 within tol and entries nonnegative.
  void validate(double tol = 1e-12) const;

  // Marginal over keep_mask (a subset of vars), preserving variable ids.
  JointTable marginal(VarMask keep_mask) const;
  // H(subset) in nats, with the p ln p -> 0 convention at p = 0.
  double subset_entropy(VarMask subset_mask) const;
  // H(child | parents) = H({child} u parents) - H(parents).
  double conditional_entropy(int child, VarMask parent_mask) const;
};

struct DiscreteBayesNet {
  int d = 0;
  std::vector<int> support;  // per-variable cardinality
  Dag structure;             // exactly one family per variable
  // cpts[i] is row-major over (parent configuration, value); parent
  // configurations index ascending parent order with the lowest-index
  // parent slowest.
  std::vector<std::vector<double>> cpts;

  void validate(double tol = 1e-12) const;
  std::vector<int> topological_order() const;
  int parent_config_count(int var) const;
  // Configuration index of `assignment` restricted to var's parents.
  int parent_config_of(int var, std::span<const int> assignment) const;

  // Forward sample in topological order; reproducible given the generator
  // state (inverse-CDF walk, no distribution objects).
  std::vector<int> sample(std::mt19937_64& rng) const;
  // Hot path: caller hoists the topological order and reuses the buffer.
  void sample_into(std::mt19937_64& rng, std::span<const int> order,
                   std::span<int> assignment) const;

  JointTable full_joint() const;  // throws LimitExceeded past the cell limit
};

// Partial view of one sample: values of the masked variables only.
struct Observation {
  VarMask mask = 0;
  std::vector<int> values;  // ascending variable order
};

// Pre: |mask| == expected_size (the k+1 observation budget).
Observation observe(std::span<const int> assignment, VarMask mask, int expected_size);

// Exact conditional entropies with per-family caching, over an arbitrary
// joint (a net's full joint or a marginal of one).
class ExactScorer {
 public:
  explicit ExactScorer(JointTable joint);
  explicit ExactScorer(const DiscreteBayesNet& net);

  const JointTable& joint() const { return joint_; }
  double family_entropy(const Family& f) const;  // H(child | parents)
  double score(std::span<const Family> families) const;
  double score(const Dag& g) const { return score(g.families); }

 private:
  JointTable joint_;
  mutable std::unordered_map<std::uint64_t, double> cache_;
};

double exact_conditional_entropy(const DiscreteBayesNet& net, const Family& f);
double true_score(const DiscreteBayesNet& net, const Dag& g);

}  // namespace bnsl

#endif

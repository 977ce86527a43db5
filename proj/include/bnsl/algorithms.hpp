#ifndef BNSL_ALGORITHMS_HPP
#define BNSL_ALGORITHMS_HPP

#include "bnsl/search.hpp"

namespace bnsl {

// real: draw and estimate.  oracle: exact entropies plus seeded noise
// bounded by the round's per-family accuracy, with sample accounting.
// count_only: exact entropies, sample accounting only.
enum class SamplerMode { kReal, kOracle, kCountOnly };

const char* to_string(SamplerMode mode);
SamplerMode sampler_mode_from_string(const std::string& s);

struct RunParams {
  int k = 2;
  double epsilon = 0;
  double delta = 0.05;
  double epsilon1 = 0.03125;  // active only
  SamplerMode mode = SamplerMode::kCountOnly;
  std::uint64_t seed = 0;
  SearchOptions search;
};

struct AcceptEvent {
  int round = 0;
  int iter = 0;
  Family family;
  double theta = 0;
};

struct RoundInfo {
  int t = 0;
  double eps_t = 0;            // accuracy level of the round
  std::uint64_t n_t = 0;       // per-subset cumulative target after the round
  int subsets_observed = 0;
  bool final_stage = false;
  std::vector<AcceptEvent> accepted;
};

struct RunReport {
  std::string algo;
  int d = 0;
  int k = 0;
  double epsilon = 0;
  double delta = 0;
  double epsilon1 = 0;
  SamplerMode mode = SamplerMode::kCountOnly;
  std::uint64_t seed = 0;
  Dag output;
  std::uint64_t total_samples = 0;
  double accepted_fraction = 0;
  std::vector<AcceptEvent> accepted_families;
  std::vector<RoundInfo> per_round;
  // Final sample store in real mode, for snapshot/audit output.
  std::shared_ptr<const SampleStore> store;
};

// Uniform-allocation baseline: every size-(k+1) subset observed
// N(eps/(2d), delta/|F_{d,k}|) times, then one unconstrained search over the
// empirical score table.
RunReport run_naive(const DiscreteBayesNet& net, const RunParams& params);

// The active learner: rounds of halving accuracy, per-round acceptance of
// families shared by all near-optimal equivalence classes, and a final
// constrained search at accuracy eps/(d-|V|).
RunReport run_active(const DiscreteBayesNet& net, const RunParams& params);

struct AccountingRow {
  int i = 0;          // acceptance epoch (0 = final stage)
  int t = 0;          // round index
  int v = 0;          // |V| at the end of that round
  std::uint64_t q = 0;    // subsets observed for the last time in that round
  std::uint64_t n = 0;    // per-subset cumulative count at that round
  std::uint64_t samples = 0;  // q * n
};

struct Accounting {
  std::vector<AccountingRow> rows;
  std::uint64_t total = 0;
};

// Reconstructs the per-epoch breakdown sum_i Q_i * N_{t_i} from the report's
// acceptance log; total equals the report's sample count.
Accounting sample_accounting(const RunReport& report);

// Closed forms used for the worst-case comparisons.
std::uint64_t binomial(int n, int r);
int active_round_count(int d, double epsilon, double epsilon1);  // T
SampleBoundParams bound_params_for(const DiscreteBayesNet& net, int k, double epsilon,
                                   double delta);
std::uint64_t naive_total_count(const DiscreteBayesNet& net, int k, double epsilon, double delta);
std::uint64_t active_worstcase_total_count(const DiscreteBayesNet& net, int k, double epsilon,
                                           double delta, double epsilon1);

}  // namespace bnsl

#endif

#ifndef BNSL_ESTIMATION_HPP
#define BNSL_ESTIMATION_HPP

#include <cstdint>
#include <map>
#include <random>

#include "bnsl/bayes_net.hpp"

namespace bnsl {

struct SampleBoundParams {
  double epsilon = 0;  // accuracy, > 0
  double delta = 0;    // confidence, in (0,1)
  int m_a = 2;         // child support size
  int m_b = 1;         // parent-configuration count
};

// Sample-complexity upper bound for the plug-in conditional-entropy
// estimator, natural logs, rounded up to an integer count:
//   max{ (8/eps^2) ln(2/delta) ln^2(8 ln(2/delta)/eps^2), e^2, m_a, (m_a-1) m_b / eps }
std::uint64_t sample_bound(const SampleBoundParams& p);

// Per-subset joint count tables accumulated across rounds.  Counters are
// append-only; the table total always equals the draw counter.
class SampleStore {
 public:
  SampleStore() = default;
  SampleStore(int d, int k, std::vector<int> support);

  int d() const { return d_; }
  int k() const { return k_; }
  const std::vector<int>& support() const { return support_; }

  std::uint64_t draws_of(VarMask subset) const;
  // Count table over the subset grid, row-major with the lowest-index
  // variable slowest; empty when the subset was never observed.
  const std::vector<std::uint64_t>* counts_of(VarMask subset) const;
  std::uint64_t total_draws() const { return total_draws_; }
  // Subsets observed so far, ascending by mask.
  std::vector<VarMask> observed_subsets() const;

  void record(VarMask subset, std::span<const int> values);

  // The fixed size-(k+1) subset a family is estimated from: the family's
  // variables completed with the lowest-index variables outside them.
  VarMask designated_subset(const Family& f) const;

  std::string to_json() const;
  static SampleStore from_json(const std::string& text);

 private:
  struct Entry {
    std::vector<std::uint64_t> counts;
    std::uint64_t n = 0;
  };
  int d_ = 0;
  int k_ = 0;
  std::vector<int> support_;
  std::map<VarMask, Entry> subsets_;
  std::uint64_t total_draws_ = 0;

  friend struct SampleStoreAccess;
};

// Draw n fresh samples from net, project each through observe(subset) and
// accumulate.  The generator is the caller's stream: two calls of n/2 equal
// one call of n under the same stream.
void add_samples(SampleStore& store, VarMask subset, std::uint64_t n,
                 const DiscreteBayesNet& net, std::mt19937_64& rng);

// Plug-in estimate of H(child | parents) in nats from the family's
// designated subset.  Unobserved parent configurations contribute zero.
// Throws NoData when the designated subset has no samples.
double plugin_conditional_entropy(const SampleStore& store, const Family& f);

double empirical_score(const SampleStore& store, const Dag& g);

}  // namespace bnsl

#endif

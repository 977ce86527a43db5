#include "bnsl/estimation.hpp"

#include <algorithm>
#include <cmath>

namespace bnsl {

std::uint64_t sample_bound(const SampleBoundParams& p) {
  if (!(p.epsilon > 0)) throw InvalidArgument("sample_bound: epsilon must be > 0");
  if (!(p.delta > 0) || !(p.delta < 1)) throw InvalidArgument("sample_bound: delta must be in (0,1)");
  if (p.m_a < 1 || p.m_b < 1) throw InvalidArgument("sample_bound: supports must be >= 1");
  double log_term = std::log(2.0 / p.delta);
  double inner = 8.0 * log_term / (p.epsilon * p.epsilon);
  double li = std::log(inner);
  double concentration = inner * li * li;
  double bias = (p.m_a - 1) * static_cast<double>(p.m_b) / p.epsilon;
  double n = std::max({concentration, std::exp(2.0), static_cast<double>(p.m_a), bias});
  if (!(n < 9e18)) throw LimitExceeded("sample_bound: count overflows");
  return static_cast<std::uint64_t>(std::ceil(n));
}

SampleStore::SampleStore(int d, int k, std::vector<int> support)
    : d_(d), k_(k), support_(std::move(support)) {
  if (d < 1 || d > kMaxVars) throw InvalidArgument("SampleStore: d out of range");
  if (k < 0 || k + 1 > d) throw InvalidArgument("SampleStore: require k+1 <= d");
  if (static_cast<int>(support_.size()) != d) throw InvalidArgument("SampleStore: support size");
}

std::uint64_t SampleStore::draws_of(VarMask subset) const {
  auto it = subsets_.find(subset);
  return it == subsets_.end() ? 0 : it->second.n;
}

const std::vector<std::uint64_t>* SampleStore::counts_of(VarMask subset) const {
  auto it = subsets_.find(subset);
  return it == subsets_.end() ? nullptr : &it->second.counts;
}

std::vector<VarMask> SampleStore::observed_subsets() const {
  std::vector<VarMask> out;
  out.reserve(subsets_.size());
  for (const auto& [mask, entry] : subsets_) out.push_back(mask);
  return out;
}

void SampleStore::record(VarMask subset, std::span<const int> values) {
  if (popcount(subset) != k_ + 1) throw InvalidArgument("SampleStore: subset size must be k+1");
  auto& entry = subsets_[subset];
  if (entry.counts.empty()) {
    std::size_t cells = 1;
    for_each_bit(subset, [&](int v) { cells *= support_[v]; });
    entry.counts.assign(cells, 0);
  }
  std::size_t cell = 0;
  std::size_t i = 0;
  for_each_bit(subset, [&](int v) { cell = cell * support_[v] + values[i++]; });
  ++entry.counts[cell];
  ++entry.n;
  ++total_draws_;
}

VarMask SampleStore::designated_subset(const Family& f) const {
  VarMask subset = f.parents | (VarMask(1) << f.child);
  if (popcount(subset) > k_ + 1)
    throw InvalidArgument("designated_subset: family has too many variables");
  for (int v = 0; v < d_ && popcount(subset) < k_ + 1; ++v) subset |= VarMask(1) << v;
  return subset;
}

void add_samples(SampleStore& store, VarMask subset, std::uint64_t n,
                 const DiscreteBayesNet& net, std::mt19937_64& rng) {
  std::vector<int> order = net.topological_order();
  std::vector<int> assignment(net.d, 0);
  for (std::uint64_t i = 0; i < n; ++i) {
    net.sample_into(rng, order, assignment);
    Observation obs = observe(assignment, subset, store.k() + 1);
    store.record(subset, obs.values);
  }
}

double plugin_conditional_entropy(const SampleStore& store, const Family& f) {
  VarMask subset = store.designated_subset(f);
  const auto* counts = store.counts_of(subset);
  std::uint64_t n = store.draws_of(subset);
  if (counts == nullptr || n == 0)
    throw NoData("plugin_conditional_entropy: no samples for the designated subset");

  // Collapse the subset grid onto (parent configuration, child value).
  std::vector<int> vars;
  for_each_bit(subset, [&](int v) { vars.push_back(v); });
  int mc = store.support()[f.child];
  std::size_t parent_cells = 1;
  for_each_bit(f.parents, [&](int v) { parent_cells *= store.support()[v]; });
  std::vector<std::uint64_t> joint(parent_cells * mc, 0);

  std::vector<int> value(vars.size(), 0);
  for (std::size_t cell = 0; cell < counts->size(); ++cell) {
    std::size_t rest = cell;
    for (std::size_t i = vars.size(); i-- > 0;) {
      value[i] = static_cast<int>(rest % store.support()[vars[i]]);
      rest /= store.support()[vars[i]];
    }
    std::size_t pi = 0;
    int cv = 0;
    for (std::size_t i = 0; i < vars.size(); ++i) {
      if (vars[i] == f.child) {
        cv = value[i];
      } else if (f.has_parent(vars[i])) {
        pi = pi * store.support()[vars[i]] + value[i];
      }
    }
    joint[pi * mc + cv] += (*counts)[cell];
  }

  double h = 0;
  double dn = static_cast<double>(n);
  for (std::size_t pi = 0; pi < parent_cells; ++pi) {
    std::uint64_t row = 0;
    for (int x = 0; x < mc; ++x) row += joint[pi * mc + x];
    if (row == 0) continue;  // empirical p_b = 0 contributes nothing
    double drow = static_cast<double>(row);
    for (int x = 0; x < mc; ++x) {
      std::uint64_t c = joint[pi * mc + x];
      if (c == 0) continue;
      h += static_cast<double>(c) / dn * std::log(drow / static_cast<double>(c));
    }
  }
  double cap = std::log(static_cast<double>(mc));
  return std::clamp(h, 0.0, cap);
}

double empirical_score(const SampleStore& store, const Dag& g) {
  double s = 0;
  for (const Family& f : g.families) s -= plugin_conditional_entropy(store, f);
  return s;
}

}  // namespace bnsl

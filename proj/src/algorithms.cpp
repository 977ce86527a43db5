#include "bnsl/algorithms.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>

namespace bnsl {

const char* to_string(SamplerMode mode) {
  switch (mode) {
    case SamplerMode::kReal:
      return "real";
    case SamplerMode::kOracle:
      return "oracle";
    case SamplerMode::kCountOnly:
      return "count-only";
  }
  return "?";
}

SamplerMode sampler_mode_from_string(const std::string& s) {
  if (s == "real") return SamplerMode::kReal;
  if (s == "oracle") return SamplerMode::kOracle;
  if (s == "count-only" || s == "count_only") return SamplerMode::kCountOnly;
  throw InvalidArgument("unknown sampler mode: " + s);
}

std::uint64_t binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  std::uint64_t v = 1;
  for (int i = 0; i < r; ++i) v = v * static_cast<std::uint64_t>(n - i) / (i + 1);
  return v;
}

int active_round_count(int d, double epsilon, double epsilon1) {
  double ratio = 2.0 * d * epsilon1 / epsilon;
  if (!(ratio > 1.0))
    throw InvalidArgument("run_active: require epsilon < 2*d*epsilon1 so that T >= 1");
  return static_cast<int>(std::ceil(std::log2(ratio)));
}

SampleBoundParams bound_params_for(const DiscreteBayesNet& net, int k, double epsilon,
                                   double delta) {
  SampleBoundParams p;
  p.epsilon = epsilon;
  p.delta = delta;
  p.m_a = *std::max_element(net.support.begin(), net.support.end());
  // Largest parent-configuration cardinality over F_{d,k}: for each child,
  // the product of the k largest supports among the other variables.
  int mb = 1;
  for (int child = 0; child < net.d; ++child) {
    std::vector<int> others;
    for (int v = 0; v < net.d; ++v) {
      if (v != child) others.push_back(net.support[v]);
    }
    std::sort(others.rbegin(), others.rend());
    int prod = 1;
    for (int i = 0; i < k && i < static_cast<int>(others.size()); ++i) prod *= others[i];
    mb = std::max(mb, prod);
  }
  p.m_b = mb;
  return p;
}

std::uint64_t naive_total_count(const DiscreteBayesNet& net, int k, double epsilon, double delta) {
  std::uint64_t families = enumerate_families(net.d, k).size();
  SampleBoundParams p = bound_params_for(net, k, epsilon / (2.0 * net.d),
                                         delta / static_cast<double>(families));
  return binomial(net.d, k + 1) * sample_bound(p);
}

std::uint64_t active_worstcase_total_count(const DiscreteBayesNet& net, int k, double epsilon,
                                           double delta, double epsilon1) {
  std::uint64_t families = enumerate_families(net.d, k).size();
  int T = active_round_count(net.d, epsilon, epsilon1);
  SampleBoundParams p = bound_params_for(net, k, epsilon / (2.0 * net.d),
                                         delta / (T * static_cast<double>(families)));
  return binomial(net.d, k + 1) * sample_bound(p);
}

namespace {

std::vector<VarMask> all_subsets(int d, int size) {
  std::vector<VarMask> out;
  for (VarMask m = 0; m < (VarMask(1) << d); ++m) {
    if (popcount(m) == size) out.push_back(m);
  }
  return out;
}

class Sampler {
 public:
  Sampler(const DiscreteBayesNet& net, SamplerMode mode, std::uint64_t seed, int k)
      : net_(&net), mode_(mode), seed_(seed), rng_(seed) {
    if (mode == SamplerMode::kReal) {
      store_ = std::make_shared<SampleStore>(net.d, k, net.support);
      order_ = net.topological_order();
      scratch_.assign(net.d, 0);
    } else {
      exact_ = std::make_unique<ExactScorer>(net);
    }
  }

  // Top every subset up by `add` draws, interleaved round-robin per draw.
  void observe(std::span<const VarMask> subsets, std::uint64_t add, int k) {
    if (add == 0 || subsets.empty()) return;
    accounted_ += add * subsets.size();
    if (mode_ != SamplerMode::kReal) return;
    for (std::uint64_t i = 0; i < add; ++i) {
      for (VarMask subset : subsets) {
        net_->sample_into(rng_, order_, scratch_);
        Observation obs = observe_assignment(scratch_, subset, k + 1);
        store_->record(subset, obs.values);
      }
    }
  }

  double entropy(const Family& f, int round, double bound) {
    switch (mode_) {
      case SamplerMode::kReal:
        return plugin_conditional_entropy(*store_, f);
      case SamplerMode::kCountOnly:
        return exact_->family_entropy(f);
      case SamplerMode::kOracle:
        break;
    }
    std::uint64_t key = (static_cast<std::uint64_t>(round) << 40) |
                        (static_cast<std::uint64_t>(f.child) << 32) | f.parents;
    auto it = noise_.find(key);
    if (it == noise_.end()) {
      std::mt19937_64 g(derive_seed(seed_, key, 0x6f7261636cULL));
      double u = 2.0 * ((g() >> 11) * 0x1.0p-53) - 1.0;
      it = noise_.emplace(key, u * bound).first;
    }
    double h = exact_->family_entropy(f) + it->second;
    return h < 0 ? 0.0 : h;
  }

  std::uint64_t total() const {
    return mode_ == SamplerMode::kReal ? store_->total_draws() : accounted_;
  }
  std::shared_ptr<const SampleStore> store() const { return store_; }

 private:
  static Observation observe_assignment(std::span<const int> a, VarMask mask, int size) {
    return bnsl::observe(a, mask, size);
  }

  const DiscreteBayesNet* net_;
  SamplerMode mode_;
  std::uint64_t seed_;
  std::mt19937_64 rng_;
  std::shared_ptr<SampleStore> store_;
  std::unique_ptr<ExactScorer> exact_;
  std::vector<int> order_;
  std::vector<int> scratch_;
  std::map<std::uint64_t, double> noise_;
  std::uint64_t accounted_ = 0;
};

ScoreTable build_round_table(Sampler& sampler, const FamilySpace& space, int round, double bound) {
  ScoreTable table;
  table.space = space;
  table.provenance = ScoreTable::Provenance::kEmpirical;
  table.terms.resize(space.size());
  for (int id = 0; id < space.size(); ++id) {
    table.terms[id] = -sampler.entropy(space.family(id), round, bound);
  }
  return table;
}

std::vector<Family> active_families(const FamilySpace& space, VarMask accepted_children) {
  std::vector<Family> out;
  for (const Family& f : space.families()) {
    if (!((accepted_children >> f.child) & 1u)) out.push_back(f);
  }
  return out;  // canonical order because the space is child-major
}

void check_common_params(const DiscreteBayesNet& net, const RunParams& p) {
  net.validate(1e-9);
  if (p.k < 0 || p.k >= net.d || p.k + 1 > net.d)
    throw InvalidArgument("run: require 0 <= k < d");
  if (!(p.epsilon > 0)) throw InvalidArgument("run: epsilon must be > 0");
  if (!(p.delta > 0 && p.delta < 1)) throw InvalidArgument("run: delta must be in (0,1)");
}

}  // namespace

RunReport run_naive(const DiscreteBayesNet& net, const RunParams& params) {
  check_common_params(net, params);
  int d = net.d;
  FamilySpace space(d, params.k);
  double accuracy = params.epsilon / (2.0 * d);
  SampleBoundParams bp =
      bound_params_for(net, params.k, accuracy, params.delta / static_cast<double>(space.size()));
  std::uint64_t n = sample_bound(bp);

  Sampler sampler(net, params.mode, params.seed, params.k);
  std::vector<VarMask> subsets = all_subsets(d, params.k + 1);
  sampler.observe(subsets, n, params.k);

  ScoreTable table = build_round_table(sampler, space, 1, accuracy);
  BestResult best = best_structure(table, Constraints{}, params.search);

  RunReport report;
  report.algo = "naive";
  report.d = d;
  report.k = params.k;
  report.epsilon = params.epsilon;
  report.delta = params.delta;
  report.epsilon1 = 0;
  report.mode = params.mode;
  report.seed = params.seed;
  report.output = best.dag;
  report.total_samples = sampler.total();
  report.accepted_fraction = 0;
  report.per_round.push_back(
      {1, accuracy, n, static_cast<int>(subsets.size()), /*final_stage=*/true, {}});
  report.store = sampler.store();
  return report;
}

RunReport run_active(const DiscreteBayesNet& net, const RunParams& params) {
  check_common_params(net, params);
  if (!(params.epsilon1 > 0)) throw InvalidArgument("run_active: epsilon1 must be > 0");
  int d = net.d;
  int T = active_round_count(d, params.epsilon, params.epsilon1);
  FamilySpace space(d, params.k);
  Sampler sampler(net, params.mode, params.seed, params.k);
  std::vector<VarMask> subsets = all_subsets(d, params.k + 1);

  RunReport report;
  report.algo = "active";
  report.d = d;
  report.k = params.k;
  report.epsilon = params.epsilon;
  report.delta = params.delta;
  report.epsilon1 = params.epsilon1;
  report.mode = params.mode;
  report.seed = params.seed;

  Constraints accepted;
  VarMask v_mask = 0;
  std::uint64_t prev_n = 0;
  double eps_t = params.epsilon1;
  int t = 1;
  int j = 1;
  const SampleBoundParams supports = bound_params_for(net, params.k, 1, 0.5);

  auto eligible_subsets = [&] {
    std::vector<VarMask> out;
    for (VarMask s : subsets) {
      if ((s & ~v_mask) != 0) out.push_back(s);
    }
    return out;
  };
  auto finish = [&](Dag output) {
    report.output = std::move(output);
    report.total_samples = sampler.total();
    report.accepted_fraction = static_cast<double>(popcount(v_mask)) / d;
    report.store = sampler.store();
    return report;
  };

  while (eps_t > params.epsilon / (d - popcount(v_mask))) {
    std::vector<Family> active = active_families(space, v_mask);
    std::uint64_t n_t = sample_bound({eps_t / 2.0,
                                      params.delta / (T * static_cast<double>(active.size())),
                                      supports.m_a, supports.m_b});
    std::vector<VarMask> eligible = eligible_subsets();
    sampler.observe(eligible, n_t > prev_n ? n_t - prev_n : 0, params.k);
    RoundInfo round{t, eps_t, n_t, static_cast<int>(eligible.size()), false, {}};

    ScoreTable table = build_round_table(sampler, space, t, eps_t / 2.0);
    while (true) {
      double theta = (d - popcount(v_mask)) * eps_t;
      AcceptanceStep step = acceptance_step(table, accepted, theta, active, params.search);
      if (!step.family.has_value()) {
        ++j;
        break;
      }
      Family f = *step.family;
      accepted.accepted.push_back(f);
      v_mask |= VarMask(1) << f.child;
      AcceptEvent ev{t, j, f, theta};
      round.accepted.push_back(ev);
      report.accepted_families.push_back(ev);
      active = active_families(space, v_mask);
      ++j;
    }
    report.per_round.push_back(round);
    prev_n = n_t;

    if (popcount(v_mask) == d) {
      std::vector<Family> fams = accepted.accepted;
      std::sort(fams.begin(), fams.end());
      return finish(Dag{std::move(fams)});
    }
    ++t;
    eps_t /= 2.0;
  }

  double eps_last = params.epsilon / (d - popcount(v_mask));
  std::vector<Family> active = active_families(space, v_mask);
  std::uint64_t n_final = sample_bound({eps_last / 2.0,
                                        params.delta / (T * static_cast<double>(active.size())),
                                        supports.m_a, supports.m_b});
  std::vector<VarMask> eligible = eligible_subsets();
  sampler.observe(eligible, n_final > prev_n ? n_final - prev_n : 0, params.k);
  report.per_round.push_back(
      {t, eps_last, n_final, static_cast<int>(eligible.size()), /*final_stage=*/true, {}});

  ScoreTable table = build_round_table(sampler, space, t, eps_last / 2.0);
  BestResult best = best_structure(table, accepted, params.search);
  return finish(std::move(best.dag));
}

Accounting sample_accounting(const RunReport& report) {
  Accounting acc;
  int k = report.k;
  int prev_v = 0;
  int epoch = 1;
  std::uint64_t covered = 0;
  for (const RoundInfo& round : report.per_round) {
    if (round.final_stage || round.accepted.empty()) continue;
    int v = prev_v + static_cast<int>(round.accepted.size());
    std::uint64_t q = binomial(v, k + 1) - binomial(prev_v, k + 1);
    if (q > 0) {
      acc.rows.push_back({epoch++, round.t, v, q, round.n_t, q * round.n_t});
      acc.total += q * round.n_t;
      covered += q;
    }
    prev_v = v;
  }
  std::uint64_t all = binomial(report.d, k + 1);
  if (covered < all) {
    const RoundInfo& last = report.per_round.back();
    std::uint64_t q = all - covered;
    acc.rows.push_back({0, last.t, prev_v, q, last.n_t, q * last.n_t});
    acc.total += q * last.n_t;
  }
  return acc;
}

}  // namespace bnsl

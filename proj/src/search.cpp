#include "bnsl/search.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <unordered_map>
#include <unordered_set>

namespace bnsl {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
// Guard against bound-vs-leaf rounding when pruning; comparisons that define
// results stay exact.
constexpr double kPruneSlack = 1e-12;
}  // namespace

double ScoreTable::score(std::span<const Family> families) const {
  double s = 0;
  for (const Family& f : families) s += terms[space.index_of(f)];
  return s;
}

ScoreTable exact_score_table(const ExactScorer& scorer, int d, int k, VarMask forbidden_children) {
  ScoreTable table;
  table.space = FamilySpace(d, k);
  table.provenance = ScoreTable::Provenance::kExact;
  table.terms.assign(table.space.size(), kNegInf);
  for (int id = 0; id < table.space.size(); ++id) {
    const Family& f = table.space.family(id);
    if ((forbidden_children >> f.child) & 1u) continue;
    if (f.parents & forbidden_children) continue;
    table.terms[id] = -scorer.family_entropy(f);
  }
  return table;
}

ScoreTable exact_score_table(const DiscreteBayesNet& net, int k) {
  return exact_score_table(ExactScorer(net), net.d, k);
}

ScoreTable empirical_score_table(const SampleStore& store) {
  ScoreTable table;
  table.space = FamilySpace(store.d(), store.k());
  table.provenance = ScoreTable::Provenance::kEmpirical;
  table.terms.resize(table.space.size());
  for (int id = 0; id < table.space.size(); ++id) {
    table.terms[id] = -plugin_conditional_entropy(store, table.space.family(id));
  }
  return table;
}

VarMask Constraints::accepted_children() const {
  VarMask m = 0;
  for (const Family& f : accepted) m |= VarMask(1) << f.child;
  return m;
}

void Constraints::validate(int d, int k) const {
  VarMask seen = 0;
  for (const Family& f : accepted) {
    if (f.child < 0 || f.child >= d || (f.parents >> d) != 0)
      throw InvalidArgument("Constraints: variable out of range");
    if (f.parent_count() > k) throw InvalidArgument("Constraints: family exceeds k parents");
    if ((seen >> f.child) & 1u) throw InvalidArgument("Constraints: duplicate accepted child");
    seen |= VarMask(1) << f.child;
  }
  if (!is_acyclic(accepted)) throw Infeasible("Constraints: accepted families contain a cycle");
}

namespace {

struct ChildOption {
  VarMask parents;
  double term;
};

// Shared machinery for scored DAG enumeration over the constrained space.
struct ScoredEnumerator {
  int d = 0;
  int k = 0;
  std::vector<int> children;                                 // ascending
  std::array<std::vector<ChildOption>, kMaxVars> options;    // per child
  std::vector<double> suffix_bound;                          // over children[idx..]
  std::uint64_t visit_limit = 0;
  std::uint64_t visits = 0;

  std::array<Family, kMaxVars> chosen{};
  std::array<VarMask, kMaxVars> reach{};

  // Visitor over complete DAGs: families ascending by child, plus the score
  // accumulated child-by-child (fixed association).  Return false to stop.
  std::function<bool(std::span<const Family>, double)> on_leaf;

  double prune_below = kNegInf;  // subtrees strictly unable to reach this are cut
  bool stopped = false;

  void build(const ScoreTable& table, const Constraints& c, const SearchOptions& opt,
             bool descending) {
    d = table.space.d();
    k = table.space.k();
    c.validate(d, k);
    visit_limit = opt.visit_limit;
    std::array<const Family*, kMaxVars> accepted{};
    for (const Family& f : c.accepted) {
      if ((opt.forbidden_children >> f.child) & 1u)
        throw InvalidArgument("search: accepted child is forbidden");
      accepted[f.child] = &f;
    }
    for (int child = 0; child < d; ++child) {
      if ((opt.forbidden_children >> child) & 1u) continue;
      children.push_back(child);
      auto& opts = options[child];
      if (accepted[child] != nullptr) {
        opts.push_back({accepted[child]->parents, table.term(*accepted[child])});
        continue;
      }
      for (int id = table.space.child_begin(child); id < table.space.child_end(child); ++id) {
        const Family& f = table.space.family(id);
        if (f.parents & opt.forbidden_children) continue;
        opts.push_back({f.parents, table.terms[id]});
      }
      if (descending) {
        std::stable_sort(opts.begin(), opts.end(),
                         [](const ChildOption& a, const ChildOption& b) { return a.term > b.term; });
      }
    }
    suffix_bound.assign(children.size() + 1, 0.0);
    for (std::size_t i = children.size(); i-- > 0;) {
      double best = kNegInf;
      for (const ChildOption& o : options[children[i]]) best = std::max(best, o.term);
      suffix_bound[i] = suffix_bound[i + 1] + best;
    }
    for (int v = 0; v < d; ++v) reach[v] = VarMask(1) << v;
  }

  void run() { recurse(0, 0.0); }

  void recurse(std::size_t idx, double score) {
    if (stopped) return;
    if (++visits > visit_limit)
      throw LimitExceeded("search: enumeration exceeded the visit limit");
    if (idx == children.size()) {
      std::array<Family, kMaxVars> sorted{};
      for (std::size_t i = 0; i < children.size(); ++i) sorted[i] = chosen[children[i]];
      if (!on_leaf(std::span<const Family>(sorted.data(), children.size()), score)) stopped = true;
      return;
    }
    int c = children[idx];
    auto saved_reach = reach;
    for (const ChildOption& o : options[c]) {
      double next = score + o.term;
      if (next + suffix_bound[idx + 1] + kPruneSlack < prune_below) continue;
      if (reach[c] & o.parents) continue;  // cycle
      chosen[c] = {c, o.parents};
      if (o.parents != 0) {
        VarMask rc = reach[c];
        for (int v = 0; v < d; ++v) {
          if (reach[v] & o.parents) reach[v] |= rc;
        }
      }
      recurse(idx + 1, next);
      reach = saved_reach;
      if (stopped) return;
    }
  }
};

bool use_exhaustive(const ScoreTable& table, const Constraints& c, const SearchOptions& opt) {
  switch (opt.strategy) {
    case SearchOptions::Strategy::kExhaustive:
      return true;
    case SearchOptions::Strategy::kBranchAndBound:
      return false;
    case SearchOptions::Strategy::kAuto:
      break;
  }
  return dag_stream_size_bound(table.space.d(), table.space.k(), c.accepted,
                               opt.forbidden_children) <= opt.exhaustive_bound;
}

// Ties resolved to the first maximizer in canonical enumeration order: the
// score comparison is strict, so earlier leaves win.
BestResult best_exhaustive(const ScoreTable& table, const Constraints& c,
                           const SearchOptions& opt) {
  BestResult best;
  best.score = kNegInf;
  ScoredEnumerator e;
  e.build(table, c, opt, /*descending=*/false);
  e.on_leaf = [&](std::span<const Family> fams, double score) {
    if (score > best.score) {
      best.score = score;
      best.dag.families.assign(fams.begin(), fams.end());
    }
    return true;
  };
  e.run();
  if (best.score == kNegInf) throw Infeasible("best_structure: no feasible structure");
  return best;
}

BestResult best_branch_and_bound(const ScoreTable& table, const Constraints& c,
                                 const SearchOptions& opt) {
  // Phase 1: find the optimal value with strong pruning.
  double opt_value = kNegInf;
  {
    ScoredEnumerator e;
    e.build(table, c, opt, /*descending=*/true);
    e.on_leaf = [&](std::span<const Family>, double score) {
      if (score > opt_value) {
        opt_value = score;
        e.prune_below = opt_value;
      }
      return true;
    };
    e.run();
  }
  if (opt_value == kNegInf) throw Infeasible("best_structure: no feasible structure");
  // Phase 2: first leaf attaining the value, in canonical order.  Scores
  // accumulate in the same association, so equality is exact.
  BestResult best;
  best.score = opt_value;
  ScoredEnumerator e;
  e.build(table, c, opt, /*descending=*/false);
  e.prune_below = opt_value;
  e.on_leaf = [&](std::span<const Family> fams, double score) {
    if (score == opt_value) {
      best.dag.families.assign(fams.begin(), fams.end());
      return false;
    }
    return true;
  };
  e.run();
  if (best.dag.families.empty() && table.space.d() > 0)
    throw Error("best_structure: optimal leaf not recovered");
  return best;
}

// Stream every consistent DAG with score >= cut into the visitor.
void for_each_scored_at_least(const ScoreTable& table, const Constraints& c,
                              const SearchOptions& opt, bool exhaustive, double cut,
                              const std::function<bool(std::span<const Family>, double)>& visit) {
  ScoredEnumerator e;
  e.build(table, c, opt, /*descending=*/!exhaustive);
  if (!exhaustive) e.prune_below = cut;
  e.on_leaf = [&](std::span<const Family> fams, double score) {
    if (score >= cut) return visit(fams, score);
    return true;
  };
  e.run();
}

}  // namespace

BestResult best_structure(const ScoreTable& table, const Constraints& c, SearchOptions opt) {
  if (use_exhaustive(table, c, opt)) return best_exhaustive(table, c, opt);
  return best_branch_and_bound(table, c, opt);
}

std::vector<ScoredClass> near_optimal_ecs(const ScoreTable& table, const Constraints& c,
                                          double theta, SearchOptions opt) {
  if (theta < 0 || std::isnan(theta)) throw InvalidArgument("near_optimal_ecs: theta must be >= 0");
  bool exhaustive = use_exhaustive(table, c, opt);
  BestResult best = exhaustive ? best_exhaustive(table, c, opt) : best_branch_and_bound(table, c, opt);
  double cut = std::isinf(theta) ? kNegInf : best.score - theta;

  EquivalenceKey best_key = equivalence_key(best.dag);
  std::unordered_map<EquivalenceKey, double, EquivalenceKeyHash> class_scores;
  for_each_scored_at_least(table, c, opt, exhaustive, cut,
                           [&](std::span<const Family> fams, double score) {
                             EquivalenceKey key = equivalence_key(fams);
                             auto [it, inserted] = class_scores.emplace(std::move(key), score);
                             if (!inserted && score > it->second) it->second = score;
                             return true;
                           });

  VarMask vars = ((VarMask(1) << table.space.d()) - 1) & ~opt.forbidden_children;
  std::vector<ScoredClass> out;
  out.reserve(class_scores.size());
  for (auto& [key, score] : class_scores) {
    if (score < cut) continue;
    ScoredClass sc;
    sc.ec.key = key;
    sc.ec.members = enumerate_ec_members(key, vars, table.space.k(), c.accepted);
    sc.score = score;
    out.push_back(std::move(sc));
  }
  std::sort(out.begin(), out.end(), [&](const ScoredClass& a, const ScoredClass& b) {
    bool a_best = a.ec.key == best_key;
    bool b_best = b.ec.key == best_key;
    if (a_best != b_best) return a_best;
    if (a.score != b.score) return a.score > b.score;
    return a.ec.key < b.ec.key;
  });
  return out;
}

std::optional<Family> find_acceptable_family(std::span<const Dag> best_ec_subset,
                                             std::span<const ScoredClass> L,
                                             std::span<const Family> active_sorted) {
  if (best_ec_subset.empty()) throw InvalidArgument("find_acceptable_family: empty best subset");
  std::vector<Family> candidates = union_families(best_ec_subset);
  std::vector<Family> filtered;
  std::set_intersection(candidates.begin(), candidates.end(), active_sorted.begin(),
                        active_sorted.end(), std::back_inserter(filtered));
  if (filtered.empty()) return std::nullopt;
  std::vector<std::vector<Family>> unions;
  unions.reserve(L.size());
  for (const ScoredClass& sc : L) unions.push_back(union_families(sc.ec.members));
  for (const Family& f : filtered) {
    bool in_all = true;
    for (const auto& u : unions) {
      if (!std::binary_search(u.begin(), u.end(), f)) {
        in_all = false;
        break;
      }
    }
    if (in_all) return f;
  }
  return std::nullopt;
}

AcceptanceStep acceptance_step(const ScoreTable& table, const Constraints& c, double theta,
                               std::span<const Family> active_sorted, SearchOptions opt) {
  if (theta < 0 || std::isnan(theta)) throw InvalidArgument("acceptance_step: theta must be >= 0");
  bool exhaustive = use_exhaustive(table, c, opt);
  AcceptanceStep step;
  {
    BestResult best =
        exhaustive ? best_exhaustive(table, c, opt) : best_branch_and_bound(table, c, opt);
    step.best = std::move(best.dag);
    step.best_score = best.score;
  }
  double cut = std::isinf(theta) ? kNegInf : step.best_score - theta;
  VarMask vars = ((VarMask(1) << table.space.d()) - 1) & ~opt.forbidden_children;

  EquivalenceKey best_key = equivalence_key(step.best);
  std::vector<Dag> best_members = enumerate_ec_members(best_key, vars, table.space.k(), c.accepted);
  std::vector<Family> best_union = union_families(best_members);
  std::vector<Family> alive;
  std::set_intersection(best_union.begin(), best_union.end(), active_sorted.begin(),
                        active_sorted.end(), std::back_inserter(alive));
  if (alive.empty()) return step;

  // Stream the classes within theta; each one prunes the candidate set.
  // Once empty, the rest of the cut set is irrelevant and the scan aborts.
  std::unordered_set<EquivalenceKey, EquivalenceKeyHash> seen;
  seen.insert(best_key);
  for_each_scored_at_least(
      table, c, opt, exhaustive, cut, [&](std::span<const Family> fams, double) {
        EquivalenceKey key = equivalence_key(fams);
        if (!seen.insert(key).second) return true;
        std::vector<Dag> members = enumerate_ec_members(key, vars, table.space.k(), c.accepted);
        std::vector<Family> u = union_families(members);
        std::erase_if(alive, [&](const Family& f) { return !std::binary_search(u.begin(), u.end(), f); });
        return !alive.empty();
      });
  if (!alive.empty()) step.family = alive.front();
  return step;
}

double s_neg_diagnostic(const ScoreTable& table, const Constraints& c, const Family& f,
                        SearchOptions opt) {
  std::unordered_map<EquivalenceKey, double, EquivalenceKeyHash> class_scores;
  for_each_scored_at_least(table, c, opt, /*exhaustive=*/true, kNegInf,
                           [&](std::span<const Family> fams, double score) {
                             EquivalenceKey key = equivalence_key(fams);
                             auto [it, inserted] = class_scores.emplace(std::move(key), score);
                             if (!inserted && score > it->second) it->second = score;
                             return true;
                           });
  VarMask vars = ((VarMask(1) << table.space.d()) - 1) & ~opt.forbidden_children;
  double best = kNegInf;
  for (const auto& [key, score] : class_scores) {
    if (score <= best) continue;
    std::vector<Dag> members = enumerate_ec_members(key, vars, table.space.k(), c.accepted);
    std::vector<Family> u = union_families(members);
    if (!std::binary_search(u.begin(), u.end(), f)) best = score;
  }
  return best;
}

}  // namespace bnsl

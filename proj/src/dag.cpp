#include "bnsl/dag.hpp"

#include <algorithm>
#include <array>

namespace bnsl {

VarMask Dag::var_mask() const {
  VarMask m = 0;
  for (const Family& f : families) m |= VarMask(1) << f.child;
  return m;
}

VarMask Dag::parents_of(int v) const {
  for (const Family& f : families) {
    if (f.child == v) return f.parents;
  }
  return 0;
}

bool Dag::contains(const Family& f) const {
  for (const Family& g : families) {
    if (g == f) return true;
  }
  return false;
}

int Dag::edge_count() const {
  int n = 0;
  for (const Family& f : families) n += f.parent_count();
  return n;
}

bool Dag::operator<(const Dag& o) const {
  return std::lexicographical_compare(families.begin(), families.end(), o.families.begin(),
                                      o.families.end());
}

bool is_acyclic(std::span<const Family> families) {
  // Kahn peeling on the induced edge set.
  std::array<VarMask, kMaxVars> parents{};
  VarMask present = 0;
  for (const Family& f : families) {
    parents[f.child] = f.parents;
    present |= VarMask(1) << f.child;
    present |= f.parents;
  }
  VarMask removed = 0;
  bool progress = true;
  while (progress) {
    progress = false;
    VarMask left = present & ~removed;
    for_each_bit(left, [&](int v) {
      if ((parents[v] & ~removed) == 0) {
        removed |= VarMask(1) << v;
        progress = true;
      }
    });
  }
  return removed == present;
}

namespace {

struct DagEnumerator {
  int d = 0;
  int k = 0;
  VarMask allowed;  // variables that participate (not forbidden)
  // Per participating child, candidate parent masks in canonical order.
  std::array<std::vector<VarMask>, kMaxVars> candidates;
  std::vector<int> children;  // ascending child order
  const std::function<bool(std::span<const Family>)>* visit = nullptr;

  std::array<Family, kMaxVars> chosen{};
  // reach[v] = vertices reachable from v (including v) via chosen edges.
  std::array<VarMask, kMaxVars> reach{};
  bool stopped = false;

  void collect_candidates(int child, int next, VarMask prefix) {
    candidates[child].push_back(prefix);
    if (popcount(prefix) == k) return;
    for (int v = next; v < d; ++v) {
      if (v == child || !((allowed >> v) & 1u)) continue;
      collect_candidates(child, v + 1, prefix | (VarMask(1) << v));
    }
  }

  void run(std::span<const Family> required, VarMask forbidden) {
    allowed = (VarMask(1) << d) - 1;
    allowed &= ~forbidden;
    std::array<VarMask, kMaxVars> required_parents{};
    std::array<bool, kMaxVars> has_required{};
    for (const Family& f : required) {
      if (f.child < 0 || f.child >= d) throw InvalidArgument("enumerate_dags: required child out of range");
      if ((forbidden >> f.child) & 1u)
        throw InvalidArgument("enumerate_dags: required child is forbidden");
      if (has_required[f.child]) throw InvalidArgument("enumerate_dags: duplicate required child");
      if (f.parents & ~allowed & ~(VarMask(1) << f.child))
        throw InvalidArgument("enumerate_dags: required parent is forbidden");
      if (f.parents >> d) throw InvalidArgument("enumerate_dags: required parent out of range");
      if ((f.parents >> f.child) & 1u) throw InvalidArgument("enumerate_dags: child in own parent set");
      if (f.parent_count() > k) throw InvalidArgument("enumerate_dags: required family exceeds k parents");
      has_required[f.child] = true;
      required_parents[f.child] = f.parents;
    }
    for_each_bit(allowed, [&](int c) {
      if (has_required[c]) {
        candidates[c].push_back(required_parents[c]);
      } else {
        collect_candidates(c, 0, 0);
      }
      children.push_back(c);
    });
    for (int v = 0; v < d; ++v) reach[v] = VarMask(1) << v;
    recurse(0);
  }

  void recurse(size_t idx) {
    if (stopped) return;
    if (idx == children.size()) {
      std::array<Family, kMaxVars> sorted{};
      for (size_t i = 0; i < children.size(); ++i) sorted[i] = chosen[children[i]];
      if (!(*visit)(std::span<const Family>(sorted.data(), children.size()))) stopped = true;
      return;
    }
    int c = children[idx];
    auto saved_reach = reach;
    for (VarMask pm : candidates[c]) {
      if (reach[c] & pm) continue;  // c already reaches a parent: cycle
      chosen[c] = {c, pm};
      // Everything that reaches a parent of c now also reaches reach[c].
      if (pm != 0) {
        VarMask rc = reach[c];
        for (int v = 0; v < d; ++v) {
          if (reach[v] & pm) reach[v] |= rc;
        }
      }
      recurse(idx + 1);
      reach = saved_reach;
      if (stopped) return;
    }
  }
};

void check_dk(int d, int k) {
  if (d < 1 || d > kMaxVars) throw InvalidArgument("enumerate_dags: d out of range");
  if (k < 0 || k >= d) throw InvalidArgument("enumerate_dags: require 0 <= k < d");
}

}  // namespace

void for_each_dag(int d, int k, std::span<const Family> required, VarMask forbidden_children,
                  const std::function<bool(std::span<const Family>)>& visit) {
  check_dk(d, k);
  DagEnumerator e;
  e.d = d;
  e.k = k;
  e.visit = &visit;
  e.run(required, forbidden_children);
}

std::vector<Dag> enumerate_dags(int d, int k, std::span<const Family> required,
                                VarMask forbidden_children) {
  std::vector<Dag> out;
  for_each_dag(d, k, required, forbidden_children, [&](std::span<const Family> fams) {
    out.push_back(Dag{{fams.begin(), fams.end()}});
    return true;
  });
  return out;
}

std::uint64_t count_dags(int d, int k, std::span<const Family> required,
                         VarMask forbidden_children) {
  std::uint64_t n = 0;
  for_each_dag(d, k, required, forbidden_children, [&](std::span<const Family>) {
    ++n;
    return true;
  });
  return n;
}

double dag_stream_size_bound(int d, int k, std::span<const Family> required,
                             VarMask forbidden_children) {
  check_dk(d, k);
  VarMask allowed = ((VarMask(1) << d) - 1) & ~forbidden_children;
  VarMask required_children = 0;
  for (const Family& f : required) required_children |= VarMask(1) << f.child;
  int free_vars = popcount(allowed & ~required_children);
  int n = popcount(allowed) - 1;  // candidate parents per child
  double per_child = 0;
  double binom = 1;
  for (int i = 0; i <= k; ++i) {
    per_child += binom;
    binom = binom * (n - i) / (i + 1);
  }
  double total = 1;
  for (int i = 0; i < free_vars; ++i) total *= per_child;
  return total;
}

}  // namespace bnsl

#include "bnsl/equivalence.hpp"

#include <algorithm>
#include <unordered_map>

namespace bnsl {

std::size_t EquivalenceKey::hash() const {
  std::size_t h = 0x9e3779b97f4a7c15ULL;
  auto mix = [&h](std::size_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
  };
  for (const auto& [a, b] : skeleton) mix(static_cast<std::size_t>(a) << 8 | b);
  mix(0xabcdULL);
  for (const auto& t : vstructures)
    mix((static_cast<std::size_t>(t[0]) << 16) | (static_cast<std::size_t>(t[1]) << 8) | t[2]);
  return h;
}

EquivalenceKey equivalence_key(std::span<const Family> families) {
  EquivalenceKey key;
  std::array<VarMask, kMaxVars> parents{};
  std::array<VarMask, kMaxVars> adjacent{};
  for (const Family& f : families) {
    parents[f.child] = f.parents;
    for_each_bit(f.parents, [&](int p) {
      adjacent[f.child] |= VarMask(1) << p;
      adjacent[p] |= VarMask(1) << f.child;
      int lo = std::min(p, f.child), hi = std::max(p, f.child);
      key.skeleton.emplace_back(lo, hi);
    });
  }
  std::sort(key.skeleton.begin(), key.skeleton.end());
  for (const Family& f : families) {
    int y = f.child;
    auto ps = f.parent_list();
    for (std::size_t i = 0; i < ps.size(); ++i) {
      for (std::size_t j = i + 1; j < ps.size(); ++j) {
        int x = ps[i], z = ps[j];  // ascending, so x < z
        if (!((adjacent[x] >> z) & 1u)) key.vstructures.push_back({x, y, z});
      }
    }
  }
  std::sort(key.vstructures.begin(), key.vstructures.end());
  return key;
}

std::vector<EquivalenceClass> group_into_ecs(std::span<const Dag> graphs) {
  std::vector<EquivalenceClass> classes;
  std::unordered_map<EquivalenceKey, std::size_t, EquivalenceKeyHash> index;
  for (const Dag& g : graphs) {
    EquivalenceKey key = equivalence_key(g);
    auto [it, inserted] = index.emplace(std::move(key), classes.size());
    if (inserted) classes.push_back({it->first, {}});
    classes[it->second].members.push_back(g);
  }
  return classes;
}

std::vector<Family> union_families(std::span<const Dag> graphs) {
  std::vector<Family> out;
  for (const Dag& g : graphs) out.insert(out.end(), g.families.begin(), g.families.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Dag> consistent_subset(const EquivalenceClass& ec, std::span<const Family> accepted) {
  std::vector<Dag> out;
  for (const Dag& g : ec.members) {
    bool ok = true;
    for (const Family& f : accepted) {
      if (!g.contains(f)) {
        ok = false;
        break;
      }
    }
    if (ok) out.push_back(g);
  }
  return out;
}

namespace {

// Orientation search over the skeleton.  V-structure edges are forced; the
// rest are assigned by DFS with pruning on cycles, in-degree overflow and
// any unshielded collider not present in the key.
struct MemberEnumerator {
  const EquivalenceKey* key = nullptr;
  VarMask var_mask = 0;
  int k = 0;
  std::array<VarMask, kMaxVars> required_parents{};
  VarMask required_children = 0;

  std::array<VarMask, kMaxVars> adjacent{};
  std::array<VarMask, kMaxVars> parents{};
  std::array<VarMask, kMaxVars> reach{};
  std::vector<std::pair<int, int>> free_edges;
  std::vector<Dag> out;

  bool triple_allowed(int x, int y, int z) const {
    std::array<int, 3> t{std::min(x, z), y, std::max(x, z)};
    return std::binary_search(key->vstructures.begin(), key->vstructures.end(), t);
  }

  // Add edge u -> v; returns false when the partial orientation is already
  // inconsistent.  Mutates parents/reach (caller restores).
  bool add_edge(int u, int v) {
    if ((reach[v] >> u) & 1u) return false;  // v already reaches u: cycle
    if (popcount(parents[v]) >= k) return false;
    if (required_children & (VarMask(1) << v)) {
      if (!((required_parents[v] >> u) & 1u)) return false;
    }
    if (required_children & (VarMask(1) << u)) {
      if ((required_parents[u] >> v) & 1u) return false;  // required edge reversed
    }
    // Any co-parent w of v already oriented w -> v must form a key triple
    // with u unless w and u are adjacent.
    bool ok = true;
    for_each_bit(parents[v] & ~(adjacent[u]), [&](int w) {
      if (!triple_allowed(u, v, w)) ok = false;
    });
    if (!ok) return false;
    parents[v] |= VarMask(1) << u;
    VarMask rv = reach[v] | (VarMask(1) << v);
    for_each_bit(var_mask, [&](int w) {
      if (w == u || ((reach[w] >> u) & 1u)) reach[w] |= rv;
    });
    return true;
  }

  void emit() {
    Dag g;
    for_each_bit(var_mask, [&](int v) { g.families.push_back({v, parents[v]}); });
    for (const Family& f : g.families) {
      if ((required_children >> f.child) & 1u && f.parents != required_parents[f.child]) return;
    }
    out.push_back(std::move(g));
  }

  void recurse(std::size_t idx) {
    if (idx == free_edges.size()) {
      emit();
      return;
    }
    auto [a, b] = free_edges[idx];
    for (auto [u, v] : {std::pair{a, b}, std::pair{b, a}}) {
      auto saved_parents = parents;
      auto saved_reach = reach;
      if (add_edge(u, v)) recurse(idx + 1);
      parents = saved_parents;
      reach = saved_reach;
    }
  }

  void run() {
    for (const auto& [a, b] : key->skeleton) {
      adjacent[a] |= VarMask(1) << b;
      adjacent[b] |= VarMask(1) << a;
      if (!((var_mask >> a) & 1u) || !((var_mask >> b) & 1u))
        throw InvalidArgument("enumerate_ec_members: skeleton edge outside var mask");
    }
    std::array<std::array<bool, kMaxVars>, kMaxVars> forced{};
    for (const auto& t : key->vstructures) {
      forced[t[0]][t[1]] = true;
      forced[t[2]][t[1]] = true;
    }
    bool consistent = true;
    for (const auto& t : key->vstructures) {
      if (forced[t[1]][t[0]] || forced[t[1]][t[2]]) consistent = false;  // edge forced both ways
      if ((adjacent[t[0]] >> t[2]) & 1u) consistent = false;            // shielded triple
    }
    if (!consistent) return;
    for_each_bit(var_mask, [&](int v) { reach[v] = 0; });
    for (const auto& [a, b] : key->skeleton) {
      if (forced[a][b] && forced[b][a]) return;
      if (forced[a][b]) {
        if (!add_edge(a, b)) return;
      } else if (forced[b][a]) {
        if (!add_edge(b, a)) return;
      } else {
        free_edges.emplace_back(a, b);
      }
    }
    recurse(0);
  }
};

}  // namespace

std::vector<Dag> enumerate_ec_members(const EquivalenceKey& key, VarMask var_mask, int k,
                                      std::span<const Family> required) {
  MemberEnumerator e;
  e.key = &key;
  e.var_mask = var_mask;
  e.k = k;
  for (const Family& f : required) {
    e.required_parents[f.child] = f.parents;
    e.required_children |= VarMask(1) << f.child;
  }
  e.run();
  // Keep only members whose v-structure set matches exactly.  The DFS
  // prevents extra colliders and forces the listed ones, so this filter is
  // a final guard against edge cases in the pruning.
  std::vector<Dag> members;
  for (Dag& g : e.out) {
    if (equivalence_key(g.families) == key) members.push_back(std::move(g));
  }
  std::sort(members.begin(), members.end());
  return members;
}

}  // namespace bnsl

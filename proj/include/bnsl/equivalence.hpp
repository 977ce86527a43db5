#ifndef BNSL_EQUIVALENCE_HPP
#define BNSL_EQUIVALENCE_HPP

#include <array>
#include <utility>
#include <vector>

#include "bnsl/dag.hpp"

namespace bnsl {

// Canonical identity of a Markov equivalence class: skeleton plus the set of
// unshielded colliders.  V-structure triples (x, y, z) are stored with x < z
// so the unordered parent pair is canonical.
struct EquivalenceKey {
  std::vector<std::pair<int, int>> skeleton;      // sorted undirected edges (i < j)
  std::vector<std::array<int, 3>> vstructures;    // sorted triples

  bool operator==(const EquivalenceKey& o) const {
    return skeleton == o.skeleton && vstructures == o.vstructures;
  }
  bool operator<(const EquivalenceKey& o) const {
    if (skeleton != o.skeleton) return skeleton < o.skeleton;
    return vstructures < o.vstructures;
  }
  std::size_t hash() const;
};

struct EquivalenceKeyHash {
  std::size_t operator()(const EquivalenceKey& k) const { return k.hash(); }
};

EquivalenceKey equivalence_key(std::span<const Family> families);
inline EquivalenceKey equivalence_key(const Dag& g) { return equivalence_key(g.families); }

struct EquivalenceClass {
  EquivalenceKey key;
  std::vector<Dag> members;  // nonempty; all share the key
};

// Partition by key, classes ordered by first appearance in the input.
std::vector<EquivalenceClass> group_into_ecs(std::span<const Dag> graphs);

// Union of the family sets of all graphs, in canonical family order.
std::vector<Family> union_families(std::span<const Dag> graphs);

// Members of ec containing every accepted family.  Pre: at most one accepted
// family per child.
std::vector<Dag> consistent_subset(const EquivalenceClass& ec, std::span<const Family> accepted);

// All DAGs over var_mask with this skeleton, this v-structure set, in-degree
// at most k, and containing every required family.  Used to complete an
// equivalence class from a single representative.
std::vector<Dag> enumerate_ec_members(const EquivalenceKey& key, VarMask var_mask, int k,
                                      std::span<const Family> required = {});

}  // namespace bnsl

#endif

#ifndef BNSL_FAMILY_HPP
#define BNSL_FAMILY_HPP

#include <vector>

#include "bnsl/common.hpp"

namespace bnsl {

// A family is a (child, parent set) pair.  Parent sets are bitmasks over the
// variable indices; the child bit must not be set.
struct Family {
  int child = 0;
  VarMask parents = 0;

  int parent_count() const { return popcount(parents); }
  bool has_parent(int v) const { return (parents >> v) & 1u; }
  std::vector<int> parent_list() const;

  bool operator==(const Family& o) const { return child == o.child && parents == o.parents; }
};

// Lexicographic order on the sorted parent index sequence, with the empty
// set first ({} < {0} < {0,1} < {0,2} < {1} < ...).
bool parents_lex_less(VarMask a, VarMask b);

// Canonical family order: child-major, then parents_lex_less.
inline bool operator<(const Family& a, const Family& b) {
  if (a.child != b.child) return a.child < b.child;
  return parents_lex_less(a.parents, b.parents);
}

// All families over [d] with at most k parents, in canonical order.
std::vector<Family> enumerate_families(int d, int k);

// Indexed view of F_{d,k}: canonical ordering plus O(1)-ish id lookup.
class FamilySpace {
 public:
  FamilySpace() = default;
  FamilySpace(int d, int k);

  int d() const { return d_; }
  int k() const { return k_; }
  int size() const { return static_cast<int>(families_.size()); }
  const std::vector<Family>& families() const { return families_; }
  const Family& family(int id) const { return families_[id]; }
  // Families of one child occupy a contiguous id range.
  int child_begin(int child) const { return child_offsets_[child]; }
  int child_end(int child) const { return child_offsets_[child + 1]; }
  int index_of(const Family& f) const;  // throws InvalidArgument if absent

 private:
  int d_ = 0;
  int k_ = 0;
  std::vector<Family> families_;
  std::vector<int> child_offsets_;
};

}  // namespace bnsl

#endif

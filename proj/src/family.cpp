#include "bnsl/family.hpp"

#include <algorithm>

namespace bnsl {

std::vector<int> Family::parent_list() const {
  std::vector<int> out;
  out.reserve(parent_count());
  for_each_bit(parents, [&](int v) { out.push_back(v); });
  return out;
}

bool parents_lex_less(VarMask a, VarMask b) {
  while (a != 0 && b != 0) {
    int la = lowest_bit(a);
    int lb = lowest_bit(b);
    if (la != lb) return la < lb;
    a &= a - 1;
    b &= b - 1;
  }
  // Shared prefix: the shorter (empty) set sorts first.
  return a == 0 && b != 0;
}

namespace {

void extend_parent_sets(int d, int k, int child, int next, VarMask prefix,
                        std::vector<Family>& out) {
  out.push_back({child, prefix});
  if (popcount(prefix) == k) return;
  for (int v = next; v < d; ++v) {
    if (v == child) continue;
    extend_parent_sets(d, k, child, v + 1, prefix | (VarMask(1) << v), out);
  }
}

}  // namespace

std::vector<Family> enumerate_families(int d, int k) {
  if (d < 1 || d > kMaxVars) throw InvalidArgument("enumerate_families: d out of range");
  if (k < 0 || k >= d) throw InvalidArgument("enumerate_families: require 0 <= k < d");
  std::vector<Family> out;
  for (int child = 0; child < d; ++child) {
    extend_parent_sets(d, k, child, 0, 0, out);
  }
  return out;
}

FamilySpace::FamilySpace(int d, int k) : d_(d), k_(k), families_(enumerate_families(d, k)) {
  child_offsets_.assign(d + 1, 0);
  for (int id = 0; id < size(); ++id) child_offsets_[families_[id].child + 1] = id + 1;
  // Offsets are cumulative because families are child-major.
  for (int c = 0; c < d; ++c) {
    if (child_offsets_[c + 1] == 0) child_offsets_[c + 1] = child_offsets_[c];
  }
}

int FamilySpace::index_of(const Family& f) const {
  if (f.child < 0 || f.child >= d_) throw InvalidArgument("FamilySpace: child out of range");
  auto begin = families_.begin() + child_begin(f.child);
  auto end = families_.begin() + child_end(f.child);
  auto it = std::lower_bound(begin, end, f);
  if (it == end || !(*it == f)) throw InvalidArgument("FamilySpace: family not in F_{d,k}");
  return static_cast<int>(it - families_.begin());
}

}  // namespace bnsl

#ifndef BNSL_DAG_HPP
#define BNSL_DAG_HPP

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "bnsl/family.hpp"

namespace bnsl {

// A DAG is its family set: at most one family per child, sorted by child.
// Enumeration over the full variable set yields exactly one family per
// variable; marginal-space enumeration (forbidden_children nonempty) yields
// families for the remaining variables only.
struct Dag {
  std::vector<Family> families;

  VarMask var_mask() const;
  // Parents of v, or 0 when v has no family in this DAG.
  VarMask parents_of(int v) const;
  bool contains(const Family& f) const;
  int edge_count() const;

  bool operator==(const Dag& o) const { return families == o.families; }
  bool operator<(const Dag& o) const;
};

// True iff the union of induced edges has no directed cycle.
// Pre: at most one family per child.
bool is_acyclic(std::span<const Family> families);

// Streaming enumeration of the DAGs over [d] \ forbidden_children with
// in-degree <= k that contain every required family.  Families are assigned
// child-major in canonical order, so the stream order is deterministic.
// The visitor sees the families sorted by child; return false to stop.
void for_each_dag(int d, int k, std::span<const Family> required, VarMask forbidden_children,
                  const std::function<bool(std::span<const Family>)>& visit);

std::vector<Dag> enumerate_dags(int d, int k, std::span<const Family> required = {},
                                VarMask forbidden_children = 0);

std::uint64_t count_dags(int d, int k, std::span<const Family> required = {},
                         VarMask forbidden_children = 0);

// Product of per-child candidate counts: a cheap upper bound on the stream
// size, used to pick between exhaustive and branch-and-bound search.
double dag_stream_size_bound(int d, int k, std::span<const Family> required,
                             VarMask forbidden_children);

}  // namespace bnsl

#endif

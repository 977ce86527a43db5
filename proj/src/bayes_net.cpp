#include "bnsl/bayes_net.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

namespace bnsl {

std::uint64_t joint_table_cell_limit() {
  static const std::uint64_t limit = [] {
    if (const char* env = std::getenv("BNSL_ENUM_LIMIT")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && v > 0) return static_cast<std::uint64_t>(v);
    }
    return std::uint64_t(1) << 24;
  }();
  return limit;
}

VarMask JointTable::var_mask() const {
  VarMask m = 0;
  for (int v : vars) m |= VarMask(1) << v;
  return m;
}

void JointTable::validate(double tol) const {
  if (vars.size() != dims.size()) throw InvalidArgument("JointTable: vars/dims mismatch");
  std::size_t cells = 1;
  for (int m : dims) {
    if (m < 1) throw InvalidArgument("JointTable: empty support");
    cells *= static_cast<std::size_t>(m);
  }
  if (cells != probs.size()) throw InvalidArgument("JointTable: wrong cell count");
  double mass = 0;
  for (double p : probs) {
    if (p < 0) throw InvalidArgument("JointTable: negative probability");
    mass += p;
  }
  if (std::abs(mass - 1.0) > tol) throw InvalidArgument("JointTable: mass not 1");
}

JointTable JointTable::marginal(VarMask keep_mask) const {
  if (keep_mask & ~var_mask()) throw InvalidArgument("JointTable::marginal: unknown variable");
  JointTable out;
  std::vector<std::size_t> kept_pos;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if ((keep_mask >> vars[i]) & 1u) {
      out.vars.push_back(vars[i]);
      out.dims.push_back(dims[i]);
      kept_pos.push_back(i);
    }
  }
  std::size_t out_cells = 1;
  for (int m : out.dims) out_cells *= static_cast<std::size_t>(m);
  out.probs.assign(out_cells, 0.0);

  // Stride of each source variable in the row-major source layout.
  std::vector<std::size_t> stride(vars.size(), 1);
  for (std::size_t i = vars.size(); i-- > 1;) stride[i - 1] = stride[i] * dims[i];
  std::vector<std::size_t> out_stride(out.vars.size(), 1);
  for (std::size_t i = out.vars.size(); i-- > 1;) out_stride[i - 1] = out_stride[i] * out.dims[i];

  for (std::size_t cell = 0; cell < probs.size(); ++cell) {
    std::size_t out_cell = 0;
    for (std::size_t j = 0; j < kept_pos.size(); ++j) {
      std::size_t value = (cell / stride[kept_pos[j]]) % dims[kept_pos[j]];
      out_cell += value * out_stride[j];
    }
    out.probs[out_cell] += probs[cell];
  }
  return out;
}

double JointTable::subset_entropy(VarMask subset_mask) const {
  if (subset_mask == 0) return 0.0;
  JointTable m = marginal(subset_mask);
  double h = 0;
  for (double p : m.probs) {
    if (p > 0) h -= p * std::log(p);
  }
  return h < 0 ? 0.0 : h;
}

double JointTable::conditional_entropy(int child, VarMask parent_mask) const {
  if ((parent_mask >> child) & 1u)
    throw InvalidArgument("conditional_entropy: child in conditioning set");
  double h = subset_entropy(parent_mask | (VarMask(1) << child)) - subset_entropy(parent_mask);
  return h < 0 ? 0.0 : h;  // clamp fp residue on deterministic links
}

void DiscreteBayesNet::validate(double tol) const {
  if (d < 1 || d > kMaxVars) throw InvalidArgument("net: d out of range");
  if (static_cast<int>(support.size()) != d) throw InvalidArgument("net: support size mismatch");
  for (int m : support) {
    if (m < 1) throw InvalidArgument("net: empty support");
  }
  if (static_cast<int>(structure.families.size()) != d)
    throw InvalidArgument("net: need one family per variable");
  for (int i = 0; i < d; ++i) {
    const Family& f = structure.families[i];
    if (f.child != i) throw InvalidArgument("net: families must be sorted by child");
    if (f.parents >> d) throw InvalidArgument("net: parent out of range");
    if ((f.parents >> i) & 1u) throw InvalidArgument("net: self parent");
  }
  if (!is_acyclic(structure.families)) throw InvalidArgument("net: structure has a cycle");
  if (static_cast<int>(cpts.size()) != d) throw InvalidArgument("net: cpt count mismatch");
  for (int i = 0; i < d; ++i) {
    std::size_t rows = static_cast<std::size_t>(parent_config_count(i));
    std::size_t mi = static_cast<std::size_t>(support[i]);
    if (cpts[i].size() != rows * mi) throw InvalidArgument("net: cpt size mismatch");
    for (std::size_t r = 0; r < rows; ++r) {
      double mass = 0;
      for (std::size_t x = 0; x < mi; ++x) {
        double p = cpts[i][r * mi + x];
        if (p < 0) throw InvalidArgument("net: negative cpt entry");
        mass += p;
      }
      if (std::abs(mass - 1.0) > tol) throw InvalidArgument("net: cpt row mass not 1");
    }
  }
}

std::vector<int> DiscreteBayesNet::topological_order() const {
  std::vector<int> order;
  order.reserve(d);
  VarMask placed = 0;
  while (static_cast<int>(order.size()) < d) {
    bool progress = false;
    for (int v = 0; v < d; ++v) {
      if ((placed >> v) & 1u) continue;
      if ((structure.families[v].parents & ~placed) == 0) {
        order.push_back(v);
        placed |= VarMask(1) << v;
        progress = true;
      }
    }
    if (!progress) throw InvalidArgument("net: structure has a cycle");
  }
  return order;
}

int DiscreteBayesNet::parent_config_count(int var) const {
  int n = 1;
  for_each_bit(structure.families[var].parents, [&](int p) { n *= support[p]; });
  return n;
}

int DiscreteBayesNet::parent_config_of(int var, std::span<const int> assignment) const {
  int idx = 0;
  for_each_bit(structure.families[var].parents, [&](int p) {
    idx = idx * support[p] + assignment[p];
  });
  return idx;
}

void DiscreteBayesNet::sample_into(std::mt19937_64& rng, std::span<const int> order,
                                   std::span<int> assignment) const {
  for (int v : order) {
    int row = parent_config_of(v, assignment);
    const double* p = cpts[v].data() + static_cast<std::size_t>(row) * support[v];
    double u = (rng() >> 11) * 0x1.0p-53;
    double acc = 0;
    int value = support[v] - 1;
    for (int x = 0; x < support[v]; ++x) {
      acc += p[x];
      if (u < acc) {
        value = x;
        break;
      }
    }
    assignment[v] = value;
  }
}

std::vector<int> DiscreteBayesNet::sample(std::mt19937_64& rng) const {
  std::vector<int> assignment(d, 0);
  sample_into(rng, topological_order(), assignment);
  return assignment;
}

JointTable DiscreteBayesNet::full_joint() const {
  std::uint64_t cells = 1;
  for (int m : support) {
    cells *= static_cast<std::uint64_t>(m);
    if (cells > joint_table_cell_limit())
      throw LimitExceeded("full_joint: grid exceeds BNSL_ENUM_LIMIT cells");
  }
  JointTable out;
  out.vars.resize(d);
  for (int i = 0; i < d; ++i) out.vars[i] = i;
  out.dims = support;
  out.probs.assign(static_cast<std::size_t>(cells), 0.0);

  std::vector<int> assignment(d, 0);
  for (std::uint64_t cell = 0; cell < cells; ++cell) {
    std::uint64_t rest = cell;
    for (int i = d - 1; i >= 0; --i) {
      assignment[i] = static_cast<int>(rest % support[i]);
      rest /= support[i];
    }
    double p = 1.0;
    for (int v = 0; v < d && p > 0; ++v) {
      int row = parent_config_of(v, assignment);
      p *= cpts[v][static_cast<std::size_t>(row) * support[v] + assignment[v]];
    }
    out.probs[cell] = p;
  }
  return out;
}

Observation observe(std::span<const int> assignment, VarMask mask, int expected_size) {
  if (popcount(mask) != expected_size)
    throw InvalidArgument("observe: mask size must equal the observation budget");
  if (mask >> assignment.size()) throw InvalidArgument("observe: mask variable out of range");
  Observation obs;
  obs.mask = mask;
  obs.values.reserve(expected_size);
  for_each_bit(mask, [&](int v) { obs.values.push_back(assignment[v]); });
  return obs;
}

ExactScorer::ExactScorer(JointTable joint) : joint_(std::move(joint)) { joint_.validate(1e-9); }

ExactScorer::ExactScorer(const DiscreteBayesNet& net) : joint_(net.full_joint()) {}

double ExactScorer::family_entropy(const Family& f) const {
  std::uint64_t key = (std::uint64_t(f.child) << 32) | f.parents;
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  double h = joint_.conditional_entropy(f.child, f.parents);
  cache_.emplace(key, h);
  return h;
}

double ExactScorer::score(std::span<const Family> families) const {
  double s = 0;
  for (const Family& f : families) s -= family_entropy(f);
  return s;
}

double exact_conditional_entropy(const DiscreteBayesNet& net, const Family& f) {
  if (f.child < 0 || f.child >= net.d || (f.parents >> net.d) != 0)
    throw InvalidArgument("exact_conditional_entropy: variable out of range");
  VarMask need = f.parents | (VarMask(1) << f.child);
  std::uint64_t cells = 1;
  for_each_bit(need, [&](int v) { cells *= net.support[v]; });
  if (cells > joint_table_cell_limit())
    throw LimitExceeded("exact_conditional_entropy: grid exceeds cell limit");
  // The full joint is itself guarded by the cell limit.
  return ExactScorer(net).family_entropy(f);
}

double true_score(const DiscreteBayesNet& net, const Dag& g) {
  return ExactScorer(net).score(g);
}

}  // namespace bnsl

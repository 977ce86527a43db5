#ifndef BNSL_STABLE_GEN_HPP
#define BNSL_STABLE_GEN_HPP

#include "bnsl/search.hpp"

namespace bnsl {

struct StabilityWitness {
  double gamma = 0;
  VarMask v_set = 0;
  bool condition1_ok = false;
  bool condition2_ok = false;
  double best_v_ec_score = 0;
  double second_v_ec_score = 0;
};

struct NoisyTwinParams {
  double lambda = 0;  // pinned value of max(H(X_b|X_a), H(X_a|X_b))
  double coin_p = 0;  // P(C = 1)
  double alpha = 0;   // H(X_a | X_1 \ {X_a}) of the base
  double beta = 0;    // base optimal-EC score gap
};

struct D1Check {
  bool ok = false;
  std::string failed_property;  // "I", "II" or "III" when !ok
  double alpha = 0;
  double beta = 0;
};

// The d-node binary benchmark network: a Bernoulli(0.01) root, xor-coupled
// descendants at flip rate 1-rho with rho = 0.99, and a near-duplicate pair
// at the bottom (X_b equals X_a except with probability 5e-6).  Variables
// 0..d-3 are the chain, d-2 is X_a, d-1 is X_b.
DiscreteBayesNet build_bd_network(int d);

// Base properties for the noisy-twin construction, all established by
// exhaustive enumeration: a unique optimal EC with gap beta, x_a childless
// throughout that EC, and alpha = H(x_a | rest).
D1Check check_d1(const DiscreteBayesNet& net, int x_a, int k = 2);

// Appends a noisy twin of x_a driven by a hidden coin: copy when the coin
// shows 1, an independent uniform value otherwise.  The coin probability is
// solved by bisection so that max(H(X_b|X_a), H(X_a|X_b)) = lambda within
// 1e-9.  Pre: the base passes check_d1 and 0 < lambda < min(alpha, beta/3d).
std::pair<DiscreteBayesNet, NoisyTwinParams> build_d2(const DiscreteBayesNet& base, int x_a,
                                                      double lambda, int k = 2);

// Executable form of the stability definition, checked by exhaustive
// scoring: (1) every structure within gamma of optimal keeps the parents of
// v inside v; (2) the marginal on v has a unique optimal EC with gap > gamma.
StabilityWitness verify_stability(const DiscreteBayesNet& net, VarMask v, double gamma, int k = 2,
                                  SearchOptions opt = {});

// Score-preserving transformation that makes x_b childless and reroutes its
// children to x_a (parent swaps along the way when x_b reaches x_a).
Dag ghost_swap_transform(const Dag& g, int x_a, int x_b);

// True iff some equivalence class scores in [S* - epsilon, S*), i.e. a
// non-optimal class sits within epsilon of optimal.
bool near_optimal_nonoptimal_ec_exists(const DiscreteBayesNet& net, double epsilon, int k = 2,
                                       SearchOptions opt = {});

// Sub-net over variables 0..m-1; the dropped variables must have no
// children among the kept ones.
DiscreteBayesNet restrict_to_prefix(const DiscreteBayesNet& net, int m);

}  // namespace bnsl

#endif

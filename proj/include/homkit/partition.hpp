#pragma once

#include <chrono>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/rational.hpp"

namespace homkit {

struct EvalOptions {
  // Cap on assignment-edge products; exceeding it is a Budget error.
  Int max_ops = Int(100000000);
  // Optional wall-clock deadline (HOMKIT_BUDGET_MS).
  std::optional<std::chrono::steady_clock::time_point> deadline;

  void check_deadline() const;
};

// Z_M(G) over all q^{|V|} assignments, exact. Parallel edges are grouped so a
// multigraph with heavy multiplicities costs one exponentiation per group.
// The OpenMP variant partitions the assignment space; partial sums combine
// associatively, so the result is bit-identical to the serial reference.
Rat eval_bruteforce(const WeightMatrix& m, const MultiGraph& g,
                    const EvalOptions& opt = {});
Rat eval_bruteforce_serial(const WeightMatrix& m, const MultiGraph& g,
                           const EvalOptions& opt = {});

// Z over a possibly-asymmetric weight matrix: each stored edge (u, v)
// contributes w_{sigma(u) sigma(v)} in that orientation. This is what the
// fundamental identity needs when a gadget's signature is not symmetric.
Rat eval_bruteforce_general(const RatMatrix& w, const MultiGraph& g,
                            const EvalOptions& opt = {});

// Product formula for M = x x^T with non-negative factor; loops count 2
// toward degree. Throws when no such factorization exists.
Rat eval_rank1(const WeightMatrix& m, const MultiGraph& g);

// Connected bipartite positivity pattern with a rank-1 cross block and zero
// diagonal; per-component two-orientation product formula.
Rat eval_bipartite_rank2(const WeightMatrix& m, const MultiGraph& g);

// Z over a direct-sum decomposition: per component of g, sum of per-block
// values; blocks dispatch to their own best evaluator.
Rat eval_direct_sum(const Decomposition& dec, const MultiGraph& g,
                    const EvalOptions& opt = {});

enum class EvalStrategy { Rank1, BipartiteRank2, DirectSum, BruteForce };
std::string strategy_name(EvalStrategy s);

struct EvalResult {
  Rat value;
  EvalStrategy strategy;
};

// Dispatches to the fastest applicable evaluator; all strategies agree.
EvalResult eval_auto(const WeightMatrix& m, const MultiGraph& g,
                     const EvalOptions& opt = {});

// Histogram of assignment product values: #_M(G, x).
struct CountProfile {
  std::vector<std::pair<Rat, Int>> entries;  // ascending by value, counts > 0
  Int total;                                 // q^{|V|}

  Rat weighted_sum() const;  // equals Z_M(G)
  Int count_sum() const;
  bool operator==(const CountProfile& o) const {
    return entries == o.entries && total == o.total;
  }
};

CountProfile count_enumerate(const WeightMatrix& m, const MultiGraph& g,
                             const EvalOptions& opt = {});
CountProfile count_enumerate_serial(const WeightMatrix& m, const MultiGraph& g,
                                    const EvalOptions& opt = {});

using ZOracle = std::function<Rat(const MultiGraph&)>;

// Recovers the histogram from oracle queries on thickened graphs T_p G and
// one exact Vandermonde solve; #_M(G, 0) comes from the q^{|V|} identity.
CountProfile count_via_vandermonde(const WeightMatrix& m, const MultiGraph& g,
                                   const ZOracle& oracle);

// Candidate product values of |E|-edge assignments (the set X(G)), distinct,
// ascending. Optionally also reports, per value, its exponent vector over a
// generating set of the entries and its sign parity.
struct ProductValueTable {
  std::vector<Rat> values;                     // distinct, ascending
  std::vector<std::vector<long>> exponents;    // parallel, may be empty
  std::vector<bool> negative;                  // parallel, may be empty
};
ProductValueTable enumerate_product_values(const WeightMatrix& m, int num_edges,
                                           const GeneratingSet* gs = nullptr);

// Same enumeration over an arbitrary slot list: all products of `total`
// factors drawn from slot_values with repetition. gs, when given, must be a
// generating set of slot_values in the same order.
ProductValueTable enumerate_value_products(const std::vector<Rat>& slot_values,
                                           int total,
                                           const GeneratingSet* gs = nullptr);

// T_p G: every edge of g repeated p times, p >= 1.
MultiGraph thicken_graph(const MultiGraph& g, int p);
// L_n G: every edge keeps its endpoints and contributes n loops at each end.
MultiGraph loop_graph(const MultiGraph& g, int n);

}  // namespace homkit

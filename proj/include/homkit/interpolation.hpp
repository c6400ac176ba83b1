#pragma once

#include <string>
#include <utility>
#include <vector>

#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/partition.hpp"
#include "homkit/rational.hpp"

namespace homkit {

// Solves sum_k c_k * node_k^p = value_p for p = 1..n, exactly.
// Nodes must be pairwise distinct and nonzero (the p >= 1 moment system is
// singular otherwise). O(n^2) via Lagrange-basis coefficients.
std::vector<Rat> vandermonde_solve(const std::vector<Rat>& nodes,
                                   const std::vector<Rat>& values);

// Replayable record of one interpolation reduction.
struct ReductionTranscript {
  std::string construction;  // "thicken-star" | "loop-star"
  WeightMatrix base;         // the oracle matrix M
  std::vector<Rat> z;        // interpolation parameters
  std::vector<std::pair<MultiGraph, Rat>> queries;  // canonical order p = 1..
  std::vector<Rat> solve_nodes;
  std::vector<Rat> solve_rhs;
  std::vector<Rat> solve_solution;
  Rat result;
  Rat scale;  // the e*-shift constant c with PlGH(M) = PlGH(cM)
};

struct ReduceOutput {
  Rat value;
  ReductionTranscript transcript;
};

// The target matrices of the two starred constructions, built exactly.
// tstar: entries are signed monomials z^(e_ij - e*) over the generating set
// of M's entries. lstar: D* M D* with D*_ii = z^(e_ii - e*) over the
// generating set of M's diagonal.
WeightMatrix tstar_matrix(const WeightMatrix& m, const std::vector<Rat>& z);
WeightMatrix lstar_matrix(const WeightMatrix& m, const std::vector<Rat>& z);
Rat tstar_scale(const WeightMatrix& m);
Rat lstar_scale(const WeightMatrix& m);
// Number of generators (the required length of z).
int tstar_dim(const WeightMatrix& m);
int lstar_dim(const WeightMatrix& m);

// Z_{T*_M(z)}(G) from Z_M queries on thickened graphs only.
ReduceOutput thicken_reduce(const WeightMatrix& m, const MultiGraph& g,
                            const std::vector<Rat>& z, const ZOracle& oracle);

// Z_{L*_M(z)}(G) = Z_{D* M D*}(G) from Z_M queries on loop-dressed graphs.
ReduceOutput loop_reduce(const WeightMatrix& m, const MultiGraph& g,
                         const std::vector<Rat>& z, const ZOracle& oracle);

// Z_{M^n}(G): evaluated both through the stretched graph S_n G and through
// the signature matrix M^n; the two must agree exactly.
Rat stretch_reduce(const WeightMatrix& m, const MultiGraph& g, int n,
                   const EvalOptions& opt = {});
// Z_{M T_n(M) M}(G), same dual-route check.
Rat bridge_reduce(const WeightMatrix& m, const MultiGraph& g, int n,
                  const EvalOptions& opt = {});

// S_n G and B_n G as graph transforms (every edge replaced).
MultiGraph stretch_graph(const MultiGraph& g, int n);
MultiGraph bridge_graph(const MultiGraph& g, int n);

// Approximate mode for non-integer theta; refuses without the explicit
// opt-in. stretch goes through the eigenvalue-product interpolation of
// S_M(theta) = H D^theta H^T; bridge solves the exact Vandermonde and only
// the final power map x -> x^theta is floating.
double stretch_reduce_float(const WeightMatrix& m, const MultiGraph& g,
                            double theta, bool float_opt_in,
                            const EvalOptions& opt = {});
double bridge_reduce_float(const WeightMatrix& m, const MultiGraph& g,
                           double theta, bool float_opt_in,
                           const EvalOptions& opt = {});

// Numeric S_M(theta) (Jacobi eigendecomposition); used by the float mode and
// its test oracle.
std::vector<std::vector<double>> stretch_matrix_float(const WeightMatrix& m,
                                                      double theta);

struct VerifyReport {
  bool ok = false;
  int first_bad_query = -1;  // index into queries when a replay diverges
  bool empty_warning = false;
  std::string detail;
};

// Replays every query with the serial brute-force evaluator, re-solves, and
// compares bit-exactly.
VerifyReport verify_transcript(const ReductionTranscript& t);

}  // namespace homkit

#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "homkit/gadgets.hpp"
#include "homkit/matrix.hpp"
#include "homkit/partition.hpp"

namespace homkit {

struct OrbitResult {
  std::vector<std::vector<int>> orbits;      // partition of [q], each ascending
  std::vector<std::vector<int>> generators;  // witness automorphisms
};

// Orbits of Aut(M) = { sigma : M_{ij} = M_{sigma(i) sigma(j)} }.
// Backtracking with row-multiset pruning; capped at q <= 12.
OrbitResult aut_orbits(const WeightMatrix& m);

// Full enumeration of |Aut(M)|; test-scale oracle, capped at q <= 8.
long count_automorphisms(const WeightMatrix& m);

enum class Outcome { Tractable, Hard, Unknown };
std::string outcome_name(Outcome o);

struct BlockTag {
  std::vector<int> vertices;
  int rank = 0;
  bool bipartite = false;
  bool zero_diagonal = false;
};

enum class SeparatorStatus { Found, ProvenNone, Unknown };
std::string separator_status_name(SeparatorStatus s);

struct SeparatorBudget {
  int max_depth = 6;
  long max_bits = 4096;   // cap on signature entry size
  long max_states = 2000; // BFS state cap
};

struct SeparatorResult {
  SeparatorStatus status = SeparatorStatus::Unknown;
  std::optional<EdgeGadget> witness;
  std::optional<RatMatrix> witness_signature;
  long states_explored = 0;
  int depth_reached = 0;
};

// Searches the signature monoid generated from the single-edge gadget (M)
// and the trivial binary gadget (I) under series / parallel / loop-dressing.
// PROVEN_NONE only via the Aut-orbit criterion; budget exhaustion is UNKNOWN,
// never PROVEN_NONE (planar separability is undecidable in general).
SeparatorResult find_separator(const WeightMatrix& m, int i, int j,
                               const SeparatorBudget& budget = {});

struct PairStatus {
  int i = 0, j = 0;
  SeparatorStatus status = SeparatorStatus::Unknown;
};

struct Verdict {
  Outcome outcome = Outcome::Unknown;
  std::string criterion;
  std::string detail;
  std::vector<BlockTag> blocks;
  std::optional<EvalStrategy> evaluator;  // present on TRACTABLE
  std::vector<PairStatus> pairs;          // present on separator-based UNKNOWN/HARD
};

// Dichotomy for diagonal-distinct non-negative matrices: strip the at most
// one all-zero row/column, decompose, TRACTABLE iff all blocks have rank <= 1.
Verdict classify_diag_distinct(const WeightMatrix& m);

// General non-negative classifier: span(I,J) fast paths, the unconditional
// tractable block criterion (rank <= 1 or bipartite rank 2), the
// diagonal-distinct dichotomy, and otherwise the separator search, honest
// about undecidability via UNKNOWN.
Verdict classify_general(const WeightMatrix& m, const SeparatorBudget& budget = {});

struct CombineBudget {
  long z_max = 6;          // per-coordinate bound for the combination search
  int repair_span = 0;     // extra stretch factors tried beyond q (0 = q)
  Int verify_ops = Int(100000000);
};

struct CombineResult {
  EdgeGadget gadget;
  RatMatrix signature;
  std::vector<long> z;       // copies per pair, pairs in lexicographic order
  std::vector<int> stretch_k;  // per-pair repair factor (1 = untouched)
};

// Combines per-pair witnesses into parallel copies, searching
// integer multiplicities until the diagonal is pairwise distinct. Witness
// diagonals are repaired by edge-to-path replacement when they vanish.
// Requires a connected underlying graph.
CombineResult combine_separators(
    const WeightMatrix& m,
    const std::map<std::pair<int, int>, EdgeGadget>& witnesses,
    const CombineBudget& budget = {});

}  // namespace homkit

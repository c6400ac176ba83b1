#include "homkit/classify.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "homkit/errors.hpp"

namespace homkit {

std::string outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Tractable: return "TRACTABLE";
    case Outcome::Hard: return "HARD";
    case Outcome::Unknown: return "UNKNOWN";
  }
  return "?";
}

std::string separator_status_name(SeparatorStatus s) {
  switch (s) {
    case SeparatorStatus::Found: return "FOUND";
    case SeparatorStatus::ProvenNone: return "PROVEN_NONE";
    case SeparatorStatus::Unknown: return "UNKNOWN";
  }
  return "?";
}

namespace {

struct AutSearch {
  const WeightMatrix& m;
  int q;
  std::vector<std::vector<Rat>> row_sorted;

  explicit AutSearch(const WeightMatrix& mm) : m(mm), q(mm.q()) {
    row_sorted.resize(q);
    for (int i = 0; i < q; ++i) {
      for (int j = 0; j < q; ++j) row_sorted[i].push_back(m.at(i, j));
      std::sort(row_sorted[i].begin(), row_sorted[i].end(), RatLess{});
    }
  }

  bool compatible(int a, int b) const {
    return m.at(a, a) == m.at(b, b) && row_sorted[a] == row_sorted[b];
  }

  bool backtrack(int pos, std::vector<int>& sigma, std::vector<char>& used,
                 int fix_from, int fix_to, long* counter) const {
    if (pos == q) {
      if (counter) {
        ++*counter;
        return false;  // keep enumerating
      }
      return true;
    }
    for (int c = 0; c < q; ++c) {
      if (used[c]) continue;
      if (fix_from == pos && c != fix_to) continue;
      if (!compatible(pos, c)) continue;
      bool ok = true;
      for (int k = 0; k < pos && ok; ++k)
        if (m.at(pos, k) != m.at(c, sigma[k])) ok = false;
      if (!ok) continue;
      sigma[pos] = c;
      used[c] = 1;
      if (backtrack(pos + 1, sigma, used, fix_from, fix_to, counter)) return true;
      used[c] = 0;
    }
    return false;
  }

  std::optional<std::vector<int>> find_mapping(int from, int to) const {
    std::vector<int> sigma(q, -1);
    std::vector<char> used(q, 0);
    if (backtrack(0, sigma, used, from, to, nullptr)) return sigma;
    return std::nullopt;
  }

  long count_all() const {
    std::vector<int> sigma(q, -1);
    std::vector<char> used(q, 0);
    long counter = 0;
    backtrack(0, sigma, used, -1, -1, &counter);
    return counter;
  }
};

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(int a, int b) { parent[find(a)] = find(b); }
};

}  // namespace

OrbitResult aut_orbits(const WeightMatrix& m) {
  if (m.q() > 12)
    throw_budget("aut_orbits: q = " + std::to_string(m.q()) + " over cap 12");
  AutSearch search(m);
  UnionFind uf(m.q());
  OrbitResult out;
  for (int i = 0; i < m.q(); ++i)
    for (int j = i + 1; j < m.q(); ++j) {
      if (uf.find(i) == uf.find(j)) continue;
      if (auto sigma = search.find_mapping(i, j)) {
        uf.unite(i, j);
        out.generators.push_back(*sigma);
      }
    }
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < m.q(); ++v) classes[uf.find(v)].push_back(v);
  for (auto& [root, members] : classes) {
    (void)root;
    out.orbits.push_back(std::move(members));
  }
  std::sort(out.orbits.begin(), out.orbits.end());
  return out;
}

long count_automorphisms(const WeightMatrix& m) {
  if (m.q() > 8)
    throw_budget("count_automorphisms: q over cap 8");
  return AutSearch(m).count_all();
}

namespace {

std::string signature_key(const RatMatrix& s) {
  std::string key = std::to_string(s.rows) + "x" + std::to_string(s.cols);
  for (const auto& v : s.a) {
    key += '|';
    key += rat_to_string(v);
  }
  return key;
}

size_t max_entry_bits(const RatMatrix& s) {
  size_t b = 0;
  for (const auto& v : s.a) b = std::max(b, rat_bits(v));
  return b;
}

}  // namespace

SeparatorResult find_separator(const WeightMatrix& m, int i, int j,
                               const SeparatorBudget& budget) {
  if (i == j) throw_precondition("find_separator: i and j must differ");
  if (i < 0 || j < 0 || i >= m.q() || j >= m.q())
    throw_precondition("find_separator: index out of range");

  SeparatorResult res;

  // Same classical orbit: no edge gadget, planar or not, can separate.
  bool orbit_known = true;
  try {
    OrbitResult orbits = aut_orbits(m);
    for (const auto& orb : orbits.orbits)
      if (std::find(orb.begin(), orb.end(), i) != orb.end() &&
          std::find(orb.begin(), orb.end(), j) != orb.end()) {
        res.status = SeparatorStatus::ProvenNone;
        return res;
      }
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Budget) throw;
    orbit_known = false;  // q over the orbit cap: cannot prove absence
  }
  (void)orbit_known;

  struct State {
    RatMatrix sig;
    EdgeGadget gadget;
    int depth = 0;
  };
  std::vector<State> states;
  std::set<std::string> seen;

  auto separated = [&](const RatMatrix& s) { return s.at(i, i) != s.at(j, j); };

  auto verified_found = [&](const State& st) -> bool {
    EvalOptions verify_opt;
    verify_opt.max_ops = Int("1000000000");
    RatMatrix actual;
    try {
      actual = signature(st.gadget, m, verify_opt);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::Budget) return false;  // keep searching
      throw;
    }
    if (!(actual == st.sig))
      throw_internal("find_separator: composed signature diverges from gadget");
    res.status = SeparatorStatus::Found;
    res.witness = st.gadget;
    res.witness_signature = st.sig;
    res.depth_reached = st.depth;
    return true;
  };

  auto try_add = [&](RatMatrix sig, EdgeGadget gadget, int depth) -> int {
    // -1 budget-skip, 0 duplicate, 1 added, 2 found
    if (static_cast<long>(states.size()) >= budget.max_states) return -1;
    if (depth > budget.max_depth) return -1;
    if (static_cast<long>(max_entry_bits(sig)) > budget.max_bits) return -1;
    if (gadget.graph.n > 40) return -1;
    std::string key = signature_key(sig);
    if (!seen.insert(key).second) return 0;
    states.push_back({std::move(sig), std::move(gadget), depth});
    res.states_explored = static_cast<long>(states.size());
    res.depth_reached = std::max(res.depth_reached, depth);
    if (separated(states.back().sig) && verified_found(states.back())) return 2;
    return 1;
  };

  if (try_add(m.mat(), single_edge(), 0) == 2) return res;
  if (try_add(RatMatrix::identity(m.q()), trivial_binary(), 0) == 2) return res;

  RatMatrix diag(m.q(), m.q());
  for (int k = 0; k < m.q(); ++k) diag.at(k, k) = m.at(k, k);

  for (size_t si = 0; si < states.size(); ++si) {
    // states[si] combined with every state at index <= si, plus loop dressing
    {
      State s = states[si];  // copy: states may reallocate
      RatMatrix dressed = mat_mul(mat_mul(diag, s.sig), diag);
      if (try_add(std::move(dressed), loop_dress(s.gadget), s.depth + 1) == 2)
        return res;
    }
    for (size_t ti = 0; ti <= si && ti < states.size(); ++ti) {
      State s = states[si];
      State t = states[ti];
      int depth = std::max(s.depth, t.depth) + 1;
      if (try_add(mat_mul(s.sig, t.sig),
                  compose_series(s.gadget, t.gadget), depth) == 2)
        return res;
      if (ti != si &&
          try_add(mat_mul(t.sig, s.sig),
                  compose_series(t.gadget, s.gadget), depth) == 2)
        return res;
      if (try_add(entrywise_mul(s.sig, t.sig),
                  compose_parallel(s.gadget, t.gadget), depth) == 2)
        return res;
    }
  }

  res.status = SeparatorStatus::Unknown;
  return res;
}

namespace {

struct SpanIJ {
  bool in_span = false;
  Rat diag, off;
};

SpanIJ span_ij(const WeightMatrix& m) {
  SpanIJ s;
  int q = m.q();
  s.diag = m.at(0, 0);
  s.off = q > 1 ? m.at(0, 1) : Rat(0);
  for (int i = 0; i < q; ++i) {
    if (m.at(i, i) != s.diag) return s;
    for (int j = 0; j < q; ++j)
      if (i != j && m.at(i, j) != s.off) return s;
  }
  s.in_span = true;
  return s;
}

BlockTag tag_block(const Block& b) {
  BlockTag tag;
  tag.vertices = b.vertices;
  tag.rank = rank_exact(b.matrix);
  tag.bipartite = bipartition(underlying_graph(b.matrix)).has_value();
  tag.zero_diagonal = true;
  for (int i = 0; i < b.matrix.q(); ++i)
    if (b.matrix.at(i, i) != 0) tag.zero_diagonal = false;
  return tag;
}

bool block_tractable(const BlockTag& tag, int block_q) {
  if (tag.rank <= 1) return true;
  // connected bipartite pattern with rank 2 (zero diagonal follows)
  return tag.bipartite && tag.rank == 2 && tag.zero_diagonal && block_q >= 2;
}

}  // namespace

Verdict classify_diag_distinct(const WeightMatrix& m) {
  if (!m.is_nonnegative())
    throw_precondition("classify_diag_distinct: matrix must be non-negative");
  PredicateReport rep;
  {
    Rat phi(1);
    for (int i = 0; i < m.q(); ++i)
      for (int j = i + 1; j < m.q(); ++j) phi *= m.at(i, i) - m.at(j, j);
    if (phi == 0)
      throw_precondition(
          "classify_diag_distinct: phi_diag vanishes; use classify_general");
  }
  (void)rep;

  // At most one all-zero row/column can exist; strip it.
  std::vector<int> keep;
  int zero_row = -1;
  for (int i = 0; i < m.q(); ++i) {
    bool all_zero = true;
    for (int j = 0; j < m.q(); ++j)
      if (m.at(i, j) != 0) all_zero = false;
    if (all_zero) {
      if (zero_row >= 0)
        throw_internal("two all-zero rows with distinct diagonals");
      zero_row = i;
    } else {
      keep.push_back(i);
    }
  }

  Verdict v;
  if (keep.empty()) {
    v.outcome = Outcome::Tractable;
    v.criterion = "nonneg-dichotomy-blocks-rank-le-1";
    v.detail = "zero matrix";
    v.evaluator = EvalStrategy::Rank1;
    return v;
  }

  RatMatrix sub(static_cast<int>(keep.size()), static_cast<int>(keep.size()));
  for (size_t a = 0; a < keep.size(); ++a)
    for (size_t b = 0; b < keep.size(); ++b)
      sub.at(static_cast<int>(a), static_cast<int>(b)) = m.at(keep[a], keep[b]);
  WeightMatrix core = WeightMatrix::from_mat(sub);

  Decomposition dec = direct_sum_decompose(core);
  bool all_rank_le_1 = true;
  std::string offender;
  for (const auto& b : dec.blocks) {
    BlockTag tag = tag_block(b);
    for (auto& vertex : tag.vertices) vertex = keep[vertex];  // original ids
    if (tag.rank > 1 && all_rank_le_1) {
      all_rank_le_1 = false;
      offender = "block {";
      for (size_t t = 0; t < tag.vertices.size(); ++t)
        offender += (t ? "," : "") + std::to_string(tag.vertices[t]);
      offender += "} has rank " + std::to_string(tag.rank);
    }
    v.blocks.push_back(std::move(tag));
  }
  if (all_rank_le_1) {
    v.outcome = Outcome::Tractable;
    v.criterion = "nonneg-dichotomy-blocks-rank-le-1";
    v.evaluator = dec.blocks.size() == 1 ? EvalStrategy::Rank1
                                         : EvalStrategy::DirectSum;
  } else {
    v.outcome = Outcome::Hard;
    v.criterion = "nonneg-dichotomy-rank-ge-2-block";
    v.detail = offender;
  }
  return v;
}

Verdict classify_general(const WeightMatrix& m, const SeparatorBudget& budget) {
  if (!m.is_nonnegative())
    throw_precondition("classify_general: matrix must be non-negative");
  int q = m.q();
  Verdict v;

  SpanIJ span = span_ij(m);
  if (span.in_span) {
    if (span.off == 0) {
      v.outcome = Outcome::Tractable;
      v.criterion = "span-IJ-scalar-I";
      v.evaluator = q == 1 || span.diag == 0 ? EvalStrategy::Rank1
                                             : EvalStrategy::DirectSum;
      return v;
    }
    if (span.diag == span.off) {
      v.outcome = Outcome::Tractable;
      v.criterion = "span-IJ-scalar-J";
      v.evaluator = EvalStrategy::Rank1;
      return v;
    }
    if (q >= 3) {
      v.outcome = Outcome::Hard;
      v.criterion = "potts-span-IJ";
      v.detail = "aI+bJ with a,b nonzero and q >= 3";
      return v;
    }
    // q == 2 in span(I,J) falls through to the general machinery.
  }

  Decomposition dec = direct_sum_decompose(m);
  bool all_blocks_ok = true;
  for (const auto& b : dec.blocks) {
    BlockTag tag = tag_block(b);
    if (!block_tractable(tag, b.matrix.q())) all_blocks_ok = false;
    v.blocks.push_back(std::move(tag));
  }
  if (all_blocks_ok) {
    v.outcome = Outcome::Tractable;
    v.criterion = "blocks-rank-le-1-or-bipartite-rank-2";
    v.evaluator = dec.blocks.size() == 1 && v.blocks.front().rank <= 1
                      ? EvalStrategy::Rank1
                      : (dec.blocks.size() == 1 ? EvalStrategy::BipartiteRank2
                                                : EvalStrategy::DirectSum);
    return v;
  }

  Rat phi(1);
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) phi *= m.at(i, i) - m.at(j, j);
  if (phi != 0) {
    Verdict dd = classify_diag_distinct(m);
    dd.blocks = v.blocks;
    return dd;
  }

  // Separation phase; the tractable side is settled, so full separation
  // certifies hardness and anything less stays UNKNOWN.
  bool all_found = true;
  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) {
      SeparatorResult sep = find_separator(m, i, j, budget);
      v.pairs.push_back({i, j, sep.status});
      if (sep.status != SeparatorStatus::Found) all_found = false;
    }
  if (all_found) {
    v.outcome = Outcome::Hard;
    v.criterion = "full-gadget-separation";
    v.detail = "all diagonal pairs separated by planar gadgets and some block "
               "is neither rank <= 1 nor bipartite rank 2";
  } else {
    v.outcome = Outcome::Unknown;
    v.criterion = "separation-incomplete";
    v.detail = "planar separability of the unresolved pairs is undecidable in "
               "general; not found within budget does not mean none exists";
  }
  return v;
}

CombineResult combine_separators(
    const WeightMatrix& m,
    const std::map<std::pair<int, int>, EdgeGadget>& witnesses,
    const CombineBudget& budget) {
  int q = m.q();
  if (q < 2) throw_precondition("combine_separators: q >= 2 required");
  if (connected_components(underlying_graph(m)).size() != 1)
    throw_precondition("combine_separators: underlying graph must be connected");

  std::vector<std::pair<int, int>> pairs;
  for (int x = 0; x < q; ++x)
    for (int y = x + 1; y < q; ++y) pairs.emplace_back(x, y);
  for (const auto& p : pairs)
    if (!witnesses.count(p))
      throw_precondition("combine_separators: missing witness for pair (" +
                         std::to_string(p.first) + "," +
                         std::to_string(p.second) + ")");

  EvalOptions eval_opt;
  eval_opt.max_ops = budget.verify_ops;

  // Smallest k with diag(M^k) > 0; for a connected pattern with q >= 2 the
  // square already works, so this stays tiny.
  auto diag_positive = [&](const RatMatrix& mk) {
    for (int i = 0; i < q; ++i)
      if (!(mk.at(i, i) > 0)) return false;
    return true;
  };
  int m_min = 1;
  {
    RatMatrix mk = m.mat();
    while (m_min <= q + 2 && !diag_positive(mk)) {
      ++m_min;
      mk = mat_mul(mk, m.mat());
    }
  }

  std::vector<EdgeGadget> gads;
  std::vector<RatMatrix> sigs;
  std::vector<int> stretch_ks;
  int span = q + std::max(0, budget.repair_span);
  for (const auto& [x, y] : pairs) {
    const EdgeGadget& k0 = witnesses.at({x, y});
    if (k0.l1 == k0.l2)
      throw_precondition("combine_separators: witness labels must be distinct");
    RatMatrix sig = signature(k0, m, eval_opt);
    if (sig.at(x, x) == sig.at(y, y))
      throw_precondition("combine_separators: witness for (" +
                         std::to_string(x) + "," + std::to_string(y) +
                         ") does not separate its pair");
    bool diag_ok = true;
    for (int i = 0; i < q; ++i)
      if (sig.at(i, i) == 0) diag_ok = false;
    int used_k = 1;
    if (!diag_ok) {
      bool repaired = false;
      for (int k = m_min; k <= m_min + span && !repaired; ++k) {
        // Replacing every witness edge by a k-path evaluates the witness
        // against M^k.
        WeightMatrix mk = WeightMatrix::from_mat(mat_pow(m.mat(), k));
        RatMatrix sig_k = signature(k0, mk, eval_opt);
        bool pos = true;
        for (int i = 0; i < q; ++i)
          if (sig_k.at(i, i) == 0) pos = false;
        if (pos && sig_k.at(x, x) != sig_k.at(y, y)) {
          EmbeddedGraph blown =
              replace_edges({k0.graph, k0.rotation}, stretch(k));
          EdgeGadget repaired_gadget;
          repaired_gadget.graph = std::move(blown.graph);
          repaired_gadget.rotation = std::move(blown.rotation);
          repaired_gadget.l1 = k0.l1;
          repaired_gadget.l2 = k0.l2;
          certify_planar(repaired_gadget);
          gads.push_back(std::move(repaired_gadget));
          sigs.push_back(std::move(sig_k));
          used_k = k;
          repaired = true;
        }
      }
      if (!repaired)
        throw Error(ErrorKind::Precondition,
                    "combine_separators: witness diagonal for (" +
                        std::to_string(x) + "," + std::to_string(y) +
                        ") cannot be made positive by path replacement; this "
                        "is the bipartite/non-bipartite mix obstruction");
    } else {
      gads.push_back(k0);
      sigs.push_back(std::move(sig));
    }
    stretch_ks.push_back(used_k);
  }

  size_t np = pairs.size();
  if (q == 2) {
    CombineResult out{gads[0], sigs[0], {1}, stretch_ks};
    return out;
  }

  auto diag_distinct = [&](const std::vector<Rat>& d) {
    for (size_t a = 0; a < d.size(); ++a)
      for (size_t b = a + 1; b < d.size(); ++b)
        if (d[a] == d[b]) return false;
    return true;
  };

  for (long bound = 1; bound <= budget.z_max; ++bound) {
    std::vector<long> z(np, 1);
    while (true) {
      bool hits = false;
      for (long zp : z)
        if (zp == bound) hits = true;
      if (hits) {
        std::vector<Rat> diag(q, Rat(1));
        for (size_t p = 0; p < np; ++p)
          for (int i = 0; i < q; ++i)
            diag[i] *= rat_pow(sigs[p].at(i, i), z[p]);
        if (diag_distinct(diag)) {
          // Parallel combination of z_p copies of each witness.
          std::optional<EdgeGadget> combined;
          RatMatrix combined_sig = RatMatrix::identity(q);
          for (int i = 0; i < q; ++i)
            for (int j = 0; j < q; ++j) combined_sig.at(i, j) = 1;
          for (size_t p = 0; p < np; ++p) {
            for (long c = 0; c < z[p]; ++c)
              combined = combined ? compose_parallel(*combined, gads[p])
                                  : gads[p];
            combined_sig = entrywise_mul(combined_sig, entrywise_pow(sigs[p], z[p]));
          }
          // Brute-force confirmation when the enumeration fits the budget.
          Int cost = int_pow(Int(q), combined->graph.n) *
                     Int(std::max(1, combined->graph.edge_count()));
          if (cost <= budget.verify_ops) {
            RatMatrix actual = signature(*combined, m, eval_opt);
            if (!(actual == combined_sig))
              throw_internal("combine_separators: composed signature mismatch");
          }
          return {*combined, combined_sig, z, stretch_ks};
        }
      }
      size_t k = np;
      while (k > 0 && z[k - 1] == bound) z[--k] = 1;
      if (k == 0) break;
      ++z[k - 1];
    }
  }
  throw_budget("combine_separators: no multiplicity vector within bound " +
               std::to_string(budget.z_max) + " gives a distinct diagonal");
}

}  // namespace homkit

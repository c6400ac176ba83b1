#include "homkit/partition.hpp"

#include <algorithm>
#include <map>
#include <utility>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "homkit/errors.hpp"
#include "homkit/interpolation.hpp"

namespace homkit {

void EvalOptions::check_deadline() const {
  if (deadline && std::chrono::steady_clock::now() > *deadline)
    throw_budget("wall-clock budget exhausted");
}

std::string strategy_name(EvalStrategy s) {
  switch (s) {
    case EvalStrategy::Rank1: return "rank1";
    case EvalStrategy::BipartiteRank2: return "bipartite_rank2";
    case EvalStrategy::DirectSum: return "direct_sum";
    case EvalStrategy::BruteForce: return "bruteforce";
  }
  return "?";
}

namespace {

struct EdgeGroup {
  int u, v;
  long mult;
};

std::vector<EdgeGroup> group_edges(const MultiGraph& g) {
  std::map<std::pair<int, int>, long> cnt;
  for (const auto& [a, b] : g.edges) cnt[{std::min(a, b), std::max(a, b)}]++;
  std::vector<EdgeGroup> out;
  out.reserve(cnt.size());
  for (const auto& [uv, c] : cnt) out.push_back({uv.first, uv.second, c});
  return out;
}

// Per-group table of entrywise powers M_ij^mult.
std::vector<RatMatrix> group_tables(const WeightMatrix& m,
                                    const std::vector<EdgeGroup>& groups) {
  std::vector<RatMatrix> tables;
  tables.reserve(groups.size());
  std::map<long, RatMatrix> by_mult;
  for (const auto& gr : groups) {
    auto it = by_mult.find(gr.mult);
    if (it == by_mult.end())
      it = by_mult.emplace(gr.mult, entrywise_pow(m.mat(), gr.mult)).first;
    tables.push_back(it->second);
  }
  return tables;
}

// Checks the enumeration budget and returns q^{|V|} as a machine word.
unsigned long long assignment_count(const WeightMatrix& m, const MultiGraph& g,
                                    size_t group_count, const EvalOptions& opt) {
  Int total = int_pow(Int(m.q()), static_cast<unsigned long>(g.n));
  Int cost = total * Int(static_cast<long>(std::max<size_t>(group_count, 1)));
  if (cost > opt.max_ops)
    throw_budget("enumeration budget exceeded: " + cost.get_str() +
                 " assignment-edge products > cap " + opt.max_ops.get_str());
  if (!total.fits_ulong_p()) throw_budget("assignment space too large");
  return total.get_ui();
}

void decode_assignment(unsigned long long idx, int q, std::vector<int>& sigma) {
  for (auto& s : sigma) {
    s = static_cast<int>(idx % q);
    idx /= q;
  }
}

bool advance_assignment(int q, std::vector<int>& sigma) {
  for (auto& s : sigma) {
    if (++s < q) return true;
    s = 0;
  }
  return false;
}

// Writes the product into the caller's accumulator; hoisting it out of the
// enumeration loop keeps the inner loop free of mpq allocations.
void product_for(const std::vector<EdgeGroup>& groups,
                 const std::vector<RatMatrix>& tables,
                 const std::vector<int>& sigma, Rat& p) {
  p = 1;
  for (size_t gi = 0; gi < groups.size(); ++gi) {
    const Rat& w = tables[gi].at(sigma[groups[gi].u], sigma[groups[gi].v]);
    if (w == 0) {
      p = 0;
      return;
    }
    p *= w;
  }
}

MultiGraph induced_subgraph(const MultiGraph& g, const std::vector<int>& verts) {
  std::vector<int> pos(g.n, -1);
  for (size_t i = 0; i < verts.size(); ++i) pos[verts[i]] = static_cast<int>(i);
  MultiGraph sub;
  sub.n = static_cast<int>(verts.size());
  for (const auto& [a, b] : g.edges)
    if (pos[a] >= 0 && pos[b] >= 0) sub.edges.emplace_back(pos[a], pos[b]);
  return sub;
}

}  // namespace

Rat eval_bruteforce_serial(const WeightMatrix& m, const MultiGraph& g,
                           const EvalOptions& opt) {
  g.validate();
  auto groups = group_edges(g);
  auto tables = group_tables(m, groups);
  unsigned long long total = assignment_count(m, g, groups.size(), opt);
  std::vector<int> sigma(g.n, 0);
  Rat sum(0), p;
  for (unsigned long long i = 0; i < total; ++i) {
    if ((i & 0xFFF) == 0) opt.check_deadline();
    product_for(groups, tables, sigma, p);
    sum += p;
    advance_assignment(m.q(), sigma);
  }
  return sum;
}

Rat eval_bruteforce(const WeightMatrix& m, const MultiGraph& g,
                    const EvalOptions& opt) {
#ifndef _OPENMP
  return eval_bruteforce_serial(m, g, opt);
#else
  g.validate();
  auto groups = group_edges(g);
  auto tables = group_tables(m, groups);
  unsigned long long total = assignment_count(m, g, groups.size(), opt);
  if (total < 4096) return eval_bruteforce_serial(m, g, opt);

  int nthreads = omp_get_max_threads();
  std::vector<Rat> partial(nthreads, Rat(0));
  bool timed_out = false;

#pragma omp parallel num_threads(nthreads)
  {
    int tid = omp_get_thread_num();
    int T = omp_get_num_threads();
    unsigned long long chunk = (total + T - 1) / T;
    unsigned long long lo = chunk * tid;
    unsigned long long hi = std::min(total, lo + chunk);
    if (lo < hi) {
      std::vector<int> sigma(g.n, 0);
      decode_assignment(lo, m.q(), sigma);
      Rat local(0), p;
      for (unsigned long long i = lo; i < hi; ++i) {
        if ((i & 0xFFF) == 0 && opt.deadline &&
            std::chrono::steady_clock::now() > *opt.deadline) {
#pragma omp atomic write
          timed_out = true;
          break;
        }
        product_for(groups, tables, sigma, p);
        local += p;
        advance_assignment(m.q(), sigma);
      }
      partial[tid] = std::move(local);
    }
  }
  if (timed_out) throw_budget("wall-clock budget exhausted");
  // exact rationals: the sum is associative, so any partition is bit-identical
  Rat sum(0);
  for (const auto& p : partial) sum += p;
  return sum;
#endif
}

Rat eval_bruteforce_general(const RatMatrix& w, const MultiGraph& g,
                            const EvalOptions& opt) {
  if (w.rows != w.cols) throw_precondition("eval general: matrix not square");
  g.validate();
  int q = w.rows;
  // group by stored orientation: (u, v) and (v, u) stay distinct
  std::map<std::pair<int, int>, long> cnt;
  for (const auto& [a, b] : g.edges) cnt[{a, b}]++;
  std::vector<EdgeGroup> groups;
  std::vector<RatMatrix> tables;
  for (const auto& [uv, c] : cnt) {
    groups.push_back({uv.first, uv.second, c});
    tables.push_back(entrywise_pow(w, c));
  }
  Int total_big = int_pow(Int(q), static_cast<unsigned long>(g.n));
  Int cost = total_big * Int(static_cast<long>(std::max<size_t>(groups.size(), 1)));
  if (cost > opt.max_ops)
    throw_budget("enumeration budget exceeded: " + cost.get_str());
  if (!total_big.fits_ulong_p()) throw_budget("assignment space too large");
  unsigned long long total = total_big.get_ui();
  std::vector<int> sigma(g.n, 0);
  Rat sum(0), p;
  for (unsigned long long i = 0; i < total; ++i) {
    if ((i & 0xFFF) == 0) opt.check_deadline();
    product_for(groups, tables, sigma, p);
    sum += p;
    advance_assignment(q, sigma);
  }
  return sum;
}

Rat eval_rank1(const WeightMatrix& m, const MultiGraph& g) {
  g.validate();
  int q = m.q();
  bool all_zero = true;
  for (int i = 0; i < q && all_zero; ++i)
    for (int j = 0; j < q; ++j)
      if (m.at(i, j) != 0) {
        all_zero = false;
        break;
      }
  if (all_zero)
    return g.edge_count() > 0 ? Rat(0)
                              : Rat(int_pow(Int(q), static_cast<unsigned long>(g.n)));

  // M = x x^T with x >= 0 means x_i = M_{i i0} / sqrt(M_{i0 i0}); we keep the
  // irrational scale symbolic: Z = prod_v A(deg v) / m0^{|E|} with
  // A(d) = sum_i a_i^d, a_i = M_{i i0}, m0 = M_{i0 i0}.
  int i0 = -1;
  for (int i = 0; i < q; ++i)
    if (m.at(i, i) > 0) {
      i0 = i;
      break;
    }
  if (i0 < 0)
    throw_precondition("eval_rank1: no non-negative rank-1 factorization");
  Rat m0 = m.at(i0, i0);
  std::vector<Rat> a(q);
  for (int i = 0; i < q; ++i) {
    a[i] = m.at(i, i0);
    if (a[i] < 0)
      throw_precondition("eval_rank1: factor has a negative coordinate");
  }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      if (m.at(i, j) * m0 != a[i] * a[j])
        throw_precondition("eval_rank1: rank exceeds 1");

  std::map<int, Rat> power_sum;  // degree -> A(d)
  auto A = [&](int d) -> const Rat& {
    auto it = power_sum.find(d);
    if (it == power_sum.end()) {
      Rat s(0);
      if (d == 0) {
        s = q;
      } else {
        for (int i = 0; i < q; ++i) s += rat_pow(a[i], d);
      }
      it = power_sum.emplace(d, s).first;
    }
    return it->second;
  };

  std::vector<int> deg(g.n, 0);
  for (const auto& [u, v] : g.edges) {
    deg[u]++;
    deg[v]++;
  }
  Rat z(1);
  for (int v = 0; v < g.n; ++v) z *= A(deg[v]);
  return z / rat_pow(m0, g.edge_count());
}

namespace {

struct BipartiteRank2Data {
  std::vector<int> left, right;
  std::vector<Rat> x;  // indexed by position in left
  std::vector<Rat> y;  // indexed by position in right
};

// Returns the factored cross block iff all preconditions hold; otherwise
// reports the first failed check.
std::optional<BipartiteRank2Data> bipartite_rank2_data(const WeightMatrix& m,
                                                       std::string* why) {
  auto fail = [&](const std::string& s) {
    if (why) *why = s;
    return std::nullopt;
  };
  if (!m.is_nonnegative()) return fail("matrix not non-negative");
  MultiGraph gamma = underlying_graph(m);
  if (connected_components(gamma).size() != 1)
    return fail("underlying graph not connected");
  auto bp = bipartition(gamma);
  if (!bp) return fail("underlying graph not bipartite");
  auto [left, right] = *bp;
  if (left.empty() || right.empty()) return fail("bipartition side empty");
  for (int i = 0; i < m.q(); ++i)
    if (m.at(i, i) != 0) return fail("diagonal not zero");

  int nl = static_cast<int>(left.size()), nr = static_cast<int>(right.size());
  int i0 = -1, j0 = -1;
  for (int i = 0; i < nl && i0 < 0; ++i)
    for (int j = 0; j < nr; ++j)
      if (m.at(left[i], right[j]) > 0) {
        i0 = i;
        j0 = j;
        break;
      }
  if (i0 < 0) return fail("cross block has no positive entry");
  BipartiteRank2Data d;
  d.left = left;
  d.right = right;
  d.x.resize(nl);
  d.y.resize(nr);
  Rat pivot = m.at(left[i0], right[j0]);
  for (int i = 0; i < nl; ++i) d.x[i] = m.at(left[i], right[j0]);
  for (int j = 0; j < nr; ++j) d.y[j] = m.at(left[i0], right[j]) / pivot;
  for (int i = 0; i < nl; ++i)
    for (int j = 0; j < nr; ++j)
      if (m.at(left[i], right[j]) != d.x[i] * d.y[j])
        return fail("cross block rank exceeds 1");
  return d;
}

Rat power_sum_over(const std::vector<Rat>& xs, int d) {
  if (d == 0) return Rat(static_cast<long>(xs.size()));
  Rat s(0);
  for (const auto& v : xs) s += rat_pow(v, d);
  return s;
}

}  // namespace

Rat eval_bipartite_rank2(const WeightMatrix& m, const MultiGraph& g) {
  g.validate();
  std::string why;
  auto data = bipartite_rank2_data(m, &why);
  if (!data) throw_precondition("eval_bipartite_rank2: " + why);

  std::vector<int> deg(g.n, 0);
  for (const auto& [u, v] : g.edges) {
    deg[u]++;
    deg[v]++;
  }
  std::map<int, Rat> xl, yr;
  auto XL = [&](int d) {
    auto it = xl.find(d);
    if (it == xl.end()) it = xl.emplace(d, power_sum_over(data->x, d)).first;
    return it->second;
  };
  auto YR = [&](int d) {
    auto it = yr.find(d);
    if (it == yr.end()) it = yr.emplace(d, power_sum_over(data->y, d)).first;
    return it->second;
  };

  Rat total(1);
  for (const auto& comp : connected_components(g)) {
    MultiGraph sub = induced_subgraph(g, comp);
    auto bp = bipartition(sub);
    if (!bp) {
      total = 0;
      break;
    }
    // Component vertices split per the component's own 2-coloring; both
    // orientations across (left, right) are disjoint assignment classes.
    Rat o1(1), o2(1);
    for (int lv : bp->first) {
      int d = deg[comp[lv]];
      o1 *= XL(d);
      o2 *= YR(d);
    }
    for (int rv : bp->second) {
      int d = deg[comp[rv]];
      o1 *= YR(d);
      o2 *= XL(d);
    }
    total *= o1 + o2;
  }
  return total;
}

namespace {

// Best evaluator for one block against one (sub)graph.
Rat dispatch_block(const WeightMatrix& bm, const MultiGraph& gc,
                   const EvalOptions& opt) {
  if (bm.is_nonnegative()) {
    if (rank_exact(bm) <= 1) return eval_rank1(bm, gc);
    if (bipartite_rank2_data(bm, nullptr)) return eval_bipartite_rank2(bm, gc);
  }
  return eval_bruteforce(bm, gc, opt);
}

}  // namespace

Rat eval_direct_sum(const Decomposition& dec, const MultiGraph& g,
                    const EvalOptions& opt) {
  g.validate();
  Rat total(1);
  for (const auto& comp : connected_components(g)) {
    MultiGraph sub = induced_subgraph(g, comp);
    Rat zc(0);
    for (const auto& b : dec.blocks) zc += dispatch_block(b.matrix, sub, opt);
    total *= zc;
  }
  return total;
}

EvalResult eval_auto(const WeightMatrix& m, const MultiGraph& g,
                     const EvalOptions& opt) {
  if (m.is_nonnegative()) {
    if (rank_exact(m) <= 1)
      return {eval_rank1(m, g), EvalStrategy::Rank1};
    Decomposition dec = direct_sum_decompose(m);
    if (dec.blocks.size() > 1)
      return {eval_direct_sum(dec, g, opt), EvalStrategy::DirectSum};
    if (bipartite_rank2_data(m, nullptr))
      return {eval_bipartite_rank2(m, g), EvalStrategy::BipartiteRank2};
  }
  return {eval_bruteforce(m, g, opt), EvalStrategy::BruteForce};
}

Rat CountProfile::weighted_sum() const {
  Rat s(0);
  for (const auto& [x, c] : entries) s += x * Rat(c);
  return s;
}

Int CountProfile::count_sum() const {
  Int s(0);
  for (const auto& [x, c] : entries) s += c;
  return s;
}

CountProfile count_enumerate_serial(const WeightMatrix& m, const MultiGraph& g,
                                    const EvalOptions& opt) {
  g.validate();
  auto groups = group_edges(g);
  auto tables = group_tables(m, groups);
  unsigned long long total = assignment_count(m, g, groups.size(), opt);
  std::vector<int> sigma(g.n, 0);
  std::map<Rat, Int, RatLess> hist;
  Rat p;
  for (unsigned long long i = 0; i < total; ++i) {
    if ((i & 0xFFF) == 0) opt.check_deadline();
    product_for(groups, tables, sigma, p);
    hist[p] += 1;
    advance_assignment(m.q(), sigma);
  }
  CountProfile out;
  out.total = int_pow(Int(m.q()), static_cast<unsigned long>(g.n));
  for (auto& [x, c] : hist) out.entries.emplace_back(x, c);
  return out;
}

CountProfile count_enumerate(const WeightMatrix& m, const MultiGraph& g,
                             const EvalOptions& opt) {
#ifndef _OPENMP
  return count_enumerate_serial(m, g, opt);
#else
  g.validate();
  auto groups = group_edges(g);
  auto tables = group_tables(m, groups);
  unsigned long long total = assignment_count(m, g, groups.size(), opt);
  if (total < 4096) return count_enumerate_serial(m, g, opt);

  int nthreads = omp_get_max_threads();
  std::vector<std::map<Rat, Int, RatLess>> partial(nthreads);
  bool timed_out = false;

#pragma omp parallel num_threads(nthreads)
  {
    int tid = omp_get_thread_num();
    int T = omp_get_num_threads();
    unsigned long long chunk = (total + T - 1) / T;
    unsigned long long lo = chunk * tid;
    unsigned long long hi = std::min(total, lo + chunk);
    if (lo < hi) {
      std::vector<int> sigma(g.n, 0);
      decode_assignment(lo, m.q(), sigma);
      auto& hist = partial[tid];
      Rat p;
      for (unsigned long long i = lo; i < hi; ++i) {
        if ((i & 0xFFF) == 0 && opt.deadline &&
            std::chrono::steady_clock::now() > *opt.deadline) {
#pragma omp atomic write
          timed_out = true;
          break;
        }
        product_for(groups, tables, sigma, p);
        hist[p] += 1;
        advance_assignment(m.q(), sigma);
      }
    }
  }
  if (timed_out) throw_budget("wall-clock budget exhausted");
  std::map<Rat, Int, RatLess> hist;
  for (const auto& part : partial)
    for (const auto& [x, c] : part) hist[x] += c;
  CountProfile out;
  out.total = int_pow(Int(m.q()), static_cast<unsigned long>(g.n));
  for (auto& [x, c] : hist) out.entries.emplace_back(x, c);
  return out;
#endif
}

ProductValueTable enumerate_product_values(const WeightMatrix& m, int num_edges,
                                           const GeneratingSet* gs) {
  int q = m.q();
  std::vector<Rat> slot_values;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j) slot_values.push_back(m.at(i, j));
  return enumerate_value_products(slot_values, num_edges, gs);
}

ProductValueTable enumerate_value_products(const std::vector<Rat>& slot_values,
                                           int num_edges,
                                           const GeneratingSet* gs) {
  struct Slot {
    Rat value;
    std::vector<Rat> powers;  // value^0 .. value^n
  };
  std::vector<Slot> slots;
  for (const Rat& v : slot_values) {
    Slot s;
    s.value = v;
    s.powers.resize(num_edges + 1);
    s.powers[0] = 1;
    for (int k = 1; k <= num_edges; ++k) s.powers[k] = s.powers[k - 1] * s.value;
    slots.push_back(std::move(s));
  }
  if (slots.empty()) throw_precondition("enumerate_value_products: no slots");
  int d = gs ? gs->dim() : 0;
  if (gs && gs->exponents.size() != slots.size())
    throw_internal("enumerate_value_products: generating set misaligned");

  struct Acc {
    std::vector<long> expo;
    bool negative = false;
  };
  std::map<Rat, Acc, RatLess> seen;
  std::vector<long> counts(slots.size(), 0);

  // Compositions of num_edges over the unordered-pair slots.
  auto rec = [&](auto&& self, size_t slot, int remaining) -> void {
    if (slot + 1 == slots.size()) {
      counts[slot] = remaining;
      Rat val(1);
      Acc acc;
      acc.expo.assign(d, 0);
      for (size_t s = 0; s < slots.size(); ++s) {
        if (counts[s] == 0) continue;
        val *= slots[s].powers[counts[s]];
        if (gs) {
          for (int t = 0; t < d; ++t)
            acc.expo[t] += counts[s] * gs->exponents[s].e[t];
          if (gs->exponents[s].negative && (counts[s] & 1))
            acc.negative = !acc.negative;
        }
      }
      auto it = seen.find(val);
      if (it == seen.end()) {
        seen.emplace(val, std::move(acc));
      } else if (gs && val != 0 &&
                 (it->second.expo != acc.expo ||
                  it->second.negative != acc.negative)) {
        throw_internal("generating set representation not unique");
      }
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      counts[slot] = k;
      self(self, slot + 1, remaining - k);
    }
  };
  rec(rec, 0, num_edges);

  ProductValueTable out;
  for (auto& [val, acc] : seen) {
    out.values.push_back(val);
    if (gs) {
      out.exponents.push_back(std::move(acc.expo));
      out.negative.push_back(acc.negative);
    }
  }
  return out;
}

MultiGraph thicken_graph(const MultiGraph& g, int p) {
  if (p < 1) throw_precondition("thicken_graph: p >= 1 required");
  MultiGraph out;
  out.n = g.n;
  out.edges.reserve(g.edges.size() * p);
  for (const auto& [u, v] : g.edges)
    for (int k = 0; k < p; ++k) out.edges.emplace_back(u, v);
  return out;
}

MultiGraph loop_graph(const MultiGraph& g, int n) {
  if (n < 0) throw_precondition("loop_graph: n >= 0 required");
  MultiGraph out;
  out.n = g.n;
  for (const auto& [u, v] : g.edges) {
    out.edges.emplace_back(u, v);
    for (int k = 0; k < n; ++k) {
      out.edges.emplace_back(u, u);
      out.edges.emplace_back(v, v);
    }
  }
  return out;
}

CountProfile count_via_vandermonde(const WeightMatrix& m, const MultiGraph& g,
                                   const ZOracle& oracle) {
  g.validate();
  ProductValueTable X = enumerate_product_values(m, g.edge_count());
  bool has_zero = false;
  std::vector<Rat> nodes;
  for (const auto& x : X.values) {
    if (x == 0)
      has_zero = true;
    else
      nodes.push_back(x);
  }

  CountProfile p;
  p.total = int_pow(Int(m.q()), static_cast<unsigned long>(g.n));

  std::vector<Rat> counts;
  if (!nodes.empty()) {
    std::vector<Rat> rhs;
    rhs.reserve(nodes.size());
    for (size_t pw = 1; pw <= nodes.size(); ++pw)
      rhs.push_back(oracle(thicken_graph(g, static_cast<int>(pw))));
    counts = vandermonde_solve(nodes, rhs);
  }

  Int covered(0);
  for (size_t k = 0; k < nodes.size(); ++k) {
    if (counts[k].get_den() != 1 || counts[k] < 0)
      throw_internal("count_via_vandermonde: non-integer or negative count");
    Int c = counts[k].get_num();
    covered += c;
    if (c > 0) p.entries.emplace_back(nodes[k], c);
  }
  Int zero_count = p.total - covered;
  if (zero_count < 0)
    throw_internal("count_via_vandermonde: counts exceed q^|V|");
  if (zero_count > 0) {
    if (!has_zero)
      throw_internal("count_via_vandermonde: residual count but 0 not in X");
    auto pos = std::lower_bound(
        p.entries.begin(), p.entries.end(), Rat(0),
        [](const std::pair<Rat, Int>& e, const Rat& v) { return e.first < v; });
    p.entries.insert(pos, {Rat(0), zero_count});
  }
  return p;
}

}  // namespace homkit

#pragma once

// Test-only reference implementations, deliberately naive and independent of
// the library's evaluation paths: plain assignment loops over the raw edge
// list, no grouping, no parallelism, no closed forms.

#include <algorithm>
#include <map>
#include <numeric>
#include <vector>

#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/rational.hpp"

namespace oracle {

using homkit::Int;
using homkit::MultiGraph;
using homkit::Rat;
using homkit::RatMatrix;
using homkit::WeightMatrix;

inline bool next_assignment(std::vector<int>& sigma, int q) {
  for (auto& s : sigma) {
    if (++s < q) return true;
    s = 0;
  }
  return false;
}

inline Rat naive_Z(const WeightMatrix& m, const MultiGraph& g) {
  std::vector<int> sigma(g.n, 0);
  Rat total(0);
  do {
    Rat p(1);
    for (const auto& [u, v] : g.edges) p *= m.at(sigma[u], sigma[v]);
    total += p;
  } while (next_assignment(sigma, m.q()));
  return total;
}

inline double naive_Z_double(const std::vector<std::vector<double>>& m,
                             const MultiGraph& g) {
  int q = static_cast<int>(m.size());
  std::vector<int> sigma(g.n, 0);
  double total = 0;
  do {
    double p = 1;
    for (const auto& [u, v] : g.edges) p *= m[sigma[u]][sigma[v]];
    total += p;
  } while (next_assignment(sigma, q));
  return total;
}

inline RatMatrix naive_signature(const MultiGraph& g, int l1, int l2,
                                 const WeightMatrix& m) {
  int q = m.q();
  RatMatrix sig(q, q);
  std::vector<int> sigma(g.n, 0);
  do {
    Rat p(1);
    for (const auto& [u, v] : g.edges) p *= m.at(sigma[u], sigma[v]);
    sig.at(sigma[l1], sigma[l2]) += p;
  } while (next_assignment(sigma, q));
  return sig;
}

inline std::map<Rat, Int, homkit::RatLess> naive_count(const WeightMatrix& m,
                                                       const MultiGraph& g) {
  std::vector<int> sigma(g.n, 0);
  std::map<Rat, Int, homkit::RatLess> hist;
  do {
    Rat p(1);
    for (const auto& [u, v] : g.edges) p *= m.at(sigma[u], sigma[v]);
    hist[p] += 1;
  } while (next_assignment(sigma, m.q()));
  return hist;
}

// Edge multiset comparison under a vertex bijection; desk scale (n <= 8).
inline bool graphs_isomorphic(const MultiGraph& a, const MultiGraph& b) {
  if (a.n != b.n || a.edges.size() != b.edges.size()) return false;
  if (a.n > 8) return false;
  auto canon = [](std::vector<std::pair<int, int>> edges) {
    for (auto& [u, v] : edges)
      if (u > v) std::swap(u, v);
    std::sort(edges.begin(), edges.end());
    return edges;
  };
  auto eb = canon(b.edges);
  std::vector<int> perm(a.n);
  std::iota(perm.begin(), perm.end(), 0);
  do {
    std::vector<std::pair<int, int>> mapped;
    mapped.reserve(a.edges.size());
    for (const auto& [u, v] : a.edges) mapped.emplace_back(perm[u], perm[v]);
    if (canon(mapped) == eb) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

// Rank as the largest order of a nonzero minor; exponential, test scale only.
inline int naive_rank(const RatMatrix& m) {
  int n = m.rows;
  std::function<Rat(std::vector<int>, std::vector<int>)> det =
      [&](std::vector<int> rows, std::vector<int> cols) -> Rat {
    if (rows.size() == 1) return m.at(rows[0], cols[0]);
    Rat acc(0);
    int sign = 1;
    for (size_t k = 0; k < cols.size(); ++k) {
      std::vector<int> subrows(rows.begin() + 1, rows.end());
      std::vector<int> subcols;
      for (size_t t = 0; t < cols.size(); ++t)
        if (t != k) subcols.push_back(cols[t]);
      acc += Rat(sign) * m.at(rows[0], cols[k]) * det(subrows, subcols);
      sign = -sign;
    }
    return acc;
  };
  for (int order = std::min(n, m.cols); order >= 1; --order) {
    // all row/col subsets of the given order
    std::vector<int> ridx(order), cidx(order);
    std::function<bool(std::vector<int>&, int, int)> first = [&](std::vector<int>& v,
                                                                 int k, int limit) {
      if (k > limit) return false;
      v.resize(k);
      std::iota(v.begin(), v.end(), 0);
      return true;
    };
    auto next_subset = [&](std::vector<int>& v, int limit) {
      int k = static_cast<int>(v.size());
      for (int i = k - 1; i >= 0; --i) {
        if (v[i] < limit - (k - i)) {
          ++v[i];
          for (int j = i + 1; j < k; ++j) v[j] = v[j - 1] + 1;
          return true;
        }
      }
      return false;
    };
    if (!first(ridx, order, n)) continue;
    do {
      if (!first(cidx, order, m.cols)) break;
      do {
        if (det(ridx, cidx) != 0) return order;
      } while (next_subset(cidx, m.cols));
    } while (next_subset(ridx, n));
  }
  return 0;
}

}  // namespace oracle

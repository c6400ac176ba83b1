#include "homkit/interpolation.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "homkit/errors.hpp"

namespace homkit {

std::vector<Rat> vandermonde_solve(const std::vector<Rat>& nodes,
                                   const std::vector<Rat>& values) {
  size_t n = nodes.size();
  if (values.size() != n)
    throw_precondition("vandermonde_solve: node/value count mismatch");
  if (n == 0) return {};
  for (size_t i = 0; i < n; ++i) {
    if (nodes[i] == 0)
      throw_precondition("vandermonde_solve: zero node makes the system singular");
    for (size_t j = i + 1; j < n; ++j)
      if (nodes[i] == nodes[j])
        throw_precondition("vandermonde_solve: duplicate node " +
                           rat_to_string(nodes[i]));
  }

  // With b_k = c_k x_k the system becomes the moment problem
  // sum_k b_k x_k^m = values[m] for m = 0..n-1, solved by b_j = l_j(moments)
  // where l_j is the Lagrange basis polynomial at x_j.
  std::vector<Rat> p(n + 1, Rat(0));  // P(t) = prod (t - x_k)
  p[0] = 1;
  size_t deg = 0;
  for (size_t k = 0; k < n; ++k) {
    p[deg + 1] = 0;
    for (size_t i = deg + 1; i > 0; --i) p[i] = p[i - 1] - nodes[k] * p[i];
    p[0] = -nodes[k] * p[0];
    ++deg;
  }

  std::vector<Rat> out(n);
  std::vector<Rat> quot(n);  // Q_j = P / (t - x_j), degree n-1
  for (size_t j = 0; j < n; ++j) {
    quot[n - 1] = p[n];
    for (size_t i = n - 1; i > 0; --i) quot[i - 1] = p[i] + nodes[j] * quot[i];
    // P'(x_j) = Q_j(x_j) by Horner
    Rat denom(0);
    for (size_t i = n; i > 0; --i) denom = denom * nodes[j] + quot[i - 1];
    Rat acc(0);
    for (size_t m = 0; m < n; ++m) acc += quot[m] * values[m];
    out[j] = acc / (denom * nodes[j]);
  }
  return out;
}

namespace {

std::vector<Rat> entry_slots(const WeightMatrix& m) {
  std::vector<Rat> v;
  for (int i = 0; i < m.q(); ++i)
    for (int j = i; j < m.q(); ++j) v.push_back(m.at(i, j));
  return v;
}

std::vector<Rat> diag_slots(const WeightMatrix& m) {
  std::vector<Rat> v;
  for (int i = 0; i < m.q(); ++i) v.push_back(m.at(i, i));
  return v;
}

std::vector<long> shift_minima(const GeneratingSet& gs) {
  std::vector<long> estar(gs.dim(), 0);
  for (int t = 0; t < gs.dim(); ++t) {
    long mn = gs.exponents[0].e[t];
    for (const auto& ex : gs.exponents) mn = std::min(mn, ex.e[t]);
    estar[t] = mn;
  }
  return estar;
}

Rat scale_from(const GeneratingSet& gs) {
  auto estar = shift_minima(gs);
  Rat c(1);
  for (int t = 0; t < gs.dim(); ++t) c *= rat_pow(Rat(gs.generators[t]), -estar[t]);
  return c;
}

Rat monomial(const std::vector<Rat>& z, const std::vector<long>& expo) {
  Rat out(1);
  for (size_t t = 0; t < z.size(); ++t) out *= rat_pow(z[t], expo[t]);
  return out;
}

void require_nonzero_entries(const WeightMatrix& m, const char* who) {
  for (int i = 0; i < m.q(); ++i)
    for (int j = 0; j < m.q(); ++j)
      if (m.at(i, j) == 0)
        throw_precondition(std::string(who) + ": zero entry at (" +
                           std::to_string(i) + "," + std::to_string(j) + ")");
}

void require_positive_diag(const WeightMatrix& m, const char* who) {
  for (int i = 0; i < m.q(); ++i)
    if (m.at(i, i) <= 0)
      throw_precondition(std::string(who) + ": diagonal entry " +
                         std::to_string(i) + " not positive");
}

}  // namespace

int tstar_dim(const WeightMatrix& m) {
  require_nonzero_entries(m, "tstar");
  return generating_set(entry_slots(m)).dim();
}

int lstar_dim(const WeightMatrix& m) {
  require_positive_diag(m, "lstar");
  return generating_set(diag_slots(m)).dim();
}

Rat tstar_scale(const WeightMatrix& m) {
  require_nonzero_entries(m, "tstar");
  return scale_from(generating_set(entry_slots(m)));
}

Rat lstar_scale(const WeightMatrix& m) {
  require_positive_diag(m, "lstar");
  return scale_from(generating_set(diag_slots(m)));
}

WeightMatrix tstar_matrix(const WeightMatrix& m, const std::vector<Rat>& z) {
  require_nonzero_entries(m, "tstar");
  GeneratingSet gs = generating_set(entry_slots(m));
  if (static_cast<int>(z.size()) != gs.dim())
    throw_precondition("tstar: z has length " + std::to_string(z.size()) +
                       ", generating set has " + std::to_string(gs.dim()));
  auto estar = shift_minima(gs);
  int q = m.q();
  RatMatrix out(q, q);
  int slot = 0;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j, ++slot) {
      std::vector<long> expo(gs.dim());
      for (int t = 0; t < gs.dim(); ++t) expo[t] = gs.exponents[slot].e[t] - estar[t];
      Rat v = monomial(z, expo);
      if (gs.exponents[slot].negative) v = -v;
      out.at(i, j) = out.at(j, i) = v;
    }
  return WeightMatrix::from_mat(out);
}

WeightMatrix lstar_matrix(const WeightMatrix& m, const std::vector<Rat>& z) {
  require_positive_diag(m, "lstar");
  GeneratingSet gs = generating_set(diag_slots(m));
  if (static_cast<int>(z.size()) != gs.dim())
    throw_precondition("lstar: z has length " + std::to_string(z.size()) +
                       ", generating set has " + std::to_string(gs.dim()));
  auto estar = shift_minima(gs);
  int q = m.q();
  std::vector<Rat> dstar(q);
  for (int i = 0; i < q; ++i) {
    std::vector<long> expo(gs.dim());
    for (int t = 0; t < gs.dim(); ++t) expo[t] = gs.exponents[i].e[t] - estar[t];
    dstar[i] = monomial(z, expo);
  }
  RatMatrix out(q, q);
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) out.at(i, j) = dstar[i] * m.at(i, j) * dstar[j];
  return WeightMatrix::from_mat(out);
}

namespace {

// result = sum_k yhat(x_k) * counts_k, shared by the forward op and replay.
Rat thicken_finish(const WeightMatrix& base, const std::vector<Rat>& z,
                   int num_edges, const ProductValueTable& table,
                   const std::vector<Rat>& counts) {
  GeneratingSet gs = generating_set(entry_slots(base));
  auto estar = shift_minima(gs);
  Rat result(0);
  for (size_t k = 0; k < table.values.size(); ++k) {
    std::vector<long> expo(gs.dim());
    for (int t = 0; t < gs.dim(); ++t)
      expo[t] = table.exponents[k][t] - static_cast<long>(num_edges) * estar[t];
    Rat y = monomial(z, expo);
    if (table.negative[k]) y = -y;
    result += y * counts[k];
  }
  return result;
}

Rat loop_finish(const WeightMatrix& base, const std::vector<Rat>& z,
                int num_edges, const ProductValueTable& table,
                const std::vector<Rat>& counts) {
  GeneratingSet gs = generating_set(diag_slots(base));
  auto estar = shift_minima(gs);
  Rat result(0);
  for (size_t k = 0; k < table.values.size(); ++k) {
    std::vector<long> expo(gs.dim());
    for (int t = 0; t < gs.dim(); ++t)
      expo[t] = table.exponents[k][t] - 2L * num_edges * estar[t];
    result += monomial(z, expo) * counts[k];
  }
  return result;
}

ProductValueTable loop_value_table(const WeightMatrix& m, int num_edges) {
  GeneratingSet gs = generating_set(diag_slots(m));
  return enumerate_value_products(diag_slots(m), 2 * num_edges, &gs);
}

}  // namespace

ReduceOutput thicken_reduce(const WeightMatrix& m, const MultiGraph& g,
                            const std::vector<Rat>& z, const ZOracle& oracle) {
  g.validate();
  require_nonzero_entries(m, "thicken_reduce");
  GeneratingSet gs = generating_set(entry_slots(m));
  if (static_cast<int>(z.size()) != gs.dim())
    throw_precondition("thicken_reduce: z has length " + std::to_string(z.size()) +
                       ", generating set has " + std::to_string(gs.dim()));
  int n = g.edge_count();
  ProductValueTable table = enumerate_product_values(m, n, &gs);

  ReductionTranscript t;
  t.construction = "thicken-star";
  t.base = m;
  t.z = z;
  t.scale = scale_from(gs);
  t.solve_nodes = table.values;
  for (size_t p = 1; p <= table.values.size(); ++p) {
    MultiGraph tp = thicken_graph(g, static_cast<int>(p));
    Rat v = oracle(tp);
    t.queries.emplace_back(std::move(tp), v);
    t.solve_rhs.push_back(std::move(v));
  }
  t.solve_solution = vandermonde_solve(t.solve_nodes, t.solve_rhs);
  for (const auto& c : t.solve_solution)
    if (c.get_den() != 1 || c < 0)
      throw_internal("thicken_reduce: oracle produced a non-count solution");
  t.result = thicken_finish(m, z, n, table, t.solve_solution);
  return {t.result, std::move(t)};
}

ReduceOutput loop_reduce(const WeightMatrix& m, const MultiGraph& g,
                         const std::vector<Rat>& z, const ZOracle& oracle) {
  g.validate();
  require_positive_diag(m, "loop_reduce");
  GeneratingSet gs = generating_set(diag_slots(m));
  if (static_cast<int>(z.size()) != gs.dim())
    throw_precondition("loop_reduce: z has length " + std::to_string(z.size()) +
                       ", generating set has " + std::to_string(gs.dim()));
  int n = g.edge_count();
  ProductValueTable table = loop_value_table(m, n);

  ReductionTranscript t;
  t.construction = "loop-star";
  t.base = m;
  t.z = z;
  t.scale = scale_from(gs);
  t.solve_nodes = table.values;
  for (size_t p = 1; p <= table.values.size(); ++p) {
    MultiGraph lp = loop_graph(g, static_cast<int>(p));
    Rat v = oracle(lp);
    t.queries.emplace_back(std::move(lp), v);
    t.solve_rhs.push_back(std::move(v));
  }
  t.solve_solution = vandermonde_solve(t.solve_nodes, t.solve_rhs);
  t.result = loop_finish(m, z, n, table, t.solve_solution);
  return {t.result, std::move(t)};
}

MultiGraph stretch_graph(const MultiGraph& g, int n) {
  if (n < 1) throw_precondition("stretch_graph: n >= 1 required");
  MultiGraph out;
  out.n = g.n;
  for (const auto& [u, v] : g.edges) {
    int prev = u;
    for (int k = 1; k < n; ++k) {
      int mid = out.n++;
      out.edges.emplace_back(prev, mid);
      prev = mid;
    }
    out.edges.emplace_back(prev, v);
  }
  return out;
}

MultiGraph bridge_graph(const MultiGraph& g, int n) {
  if (n < 1) throw_precondition("bridge_graph: n >= 1 required");
  MultiGraph out;
  out.n = g.n;
  for (const auto& [u, v] : g.edges) {
    int a = out.n++;
    int b = out.n++;
    out.edges.emplace_back(u, a);
    for (int k = 0; k < n; ++k) out.edges.emplace_back(a, b);
    out.edges.emplace_back(b, v);
  }
  return out;
}

Rat stretch_reduce(const WeightMatrix& m, const MultiGraph& g, int n,
                   const EvalOptions& opt) {
  if (n < 1) throw_precondition("stretch_reduce: n >= 1 required");
  if (!is_positive_definite(m))
    throw_precondition("stretch_reduce: matrix not positive definite");
  Rat via_graph = eval_bruteforce(m, stretch_graph(g, n), opt);
  Rat via_matrix =
      eval_bruteforce(WeightMatrix::from_mat(mat_pow(m.mat(), n)), g, opt);
  if (via_graph != via_matrix)
    throw_internal("stretch_reduce: transform and signature routes disagree");
  return via_graph;
}

Rat bridge_reduce(const WeightMatrix& m, const MultiGraph& g, int n,
                  const EvalOptions& opt) {
  if (n < 1) throw_precondition("bridge_reduce: n >= 1 required");
  require_nonzero_entries(m, "bridge_reduce");
  Rat via_graph = eval_bruteforce(m, bridge_graph(g, n), opt);
  RatMatrix bn = mat_mul(mat_mul(m.mat(), entrywise_pow(m.mat(), n)), m.mat());
  Rat via_matrix = eval_bruteforce(WeightMatrix::from_mat(bn), g, opt);
  if (via_graph != via_matrix)
    throw_internal("bridge_reduce: transform and signature routes disagree");
  return via_graph;
}

namespace {

// Cyclic Jacobi eigendecomposition for small symmetric matrices.
void jacobi_eigen(std::vector<std::vector<double>> a, std::vector<double>& eval,
                  std::vector<std::vector<double>>& evec) {
  int n = static_cast<int>(a.size());
  evec.assign(n, std::vector<double>(n, 0.0));
  for (int i = 0; i < n; ++i) evec[i][i] = 1.0;
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += a[i][j] * a[i][j];
    if (off < 1e-28) break;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        double theta = (a[q][q] - a[p][p]) / (2 * a[p][q]);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1));
        double c = 1 / std::sqrt(t * t + 1), s = t * c;
        for (int k = 0; k < n; ++k) {
          double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
        for (int k = 0; k < n; ++k) {
          double vkp = evec[k][p], vkq = evec[k][q];
          evec[k][p] = c * vkp - s * vkq;
          evec[k][q] = s * vkp + c * vkq;
        }
      }
  }
  eval.resize(n);
  for (int i = 0; i < n; ++i) eval[i] = a[i][i];
}

}  // namespace

std::vector<std::vector<double>> stretch_matrix_float(const WeightMatrix& m,
                                                      double theta) {
  if (!is_positive_definite(m))
    throw_precondition("stretch float mode: matrix not positive definite");
  int q = m.q();
  std::vector<std::vector<double>> a(q, std::vector<double>(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) a[i][j] = rat_to_double(m.at(i, j));
  std::vector<double> lam;
  std::vector<std::vector<double>> h;
  jacobi_eigen(a, lam, h);
  std::vector<std::vector<double>> out(q, std::vector<double>(q, 0.0));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k)
        out[i][j] += h[i][k] * std::pow(lam[k], theta) * h[j][k];
  return out;
}

double stretch_reduce_float(const WeightMatrix& m, const MultiGraph& g,
                            double theta, bool float_opt_in,
                            const EvalOptions& opt) {
  if (!float_opt_in)
    throw_precondition("floating mode requires the explicit opt-in flag");
  if (!is_positive_definite(m))
    throw_precondition("stretch float mode: matrix not positive definite");
  g.validate();
  int q = m.q(), n = g.edge_count();

  std::vector<std::vector<double>> a(q, std::vector<double>(q));
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) a[i][j] = rat_to_double(m.at(i, j));
  std::vector<double> lam;
  std::vector<std::vector<double>> h;
  jacobi_eigen(a, lam, h);

  // Candidate eigenvalue products over compositions of |E|, deduplicated.
  std::vector<double> nodes;
  std::vector<int> comp(q, 0);
  auto rec = [&](auto&& self, int slot, int remaining) -> void {
    if (slot + 1 == q) {
      comp[slot] = remaining;
      double prod = 1;
      for (int i = 0; i < q; ++i) prod *= std::pow(lam[i], comp[i]);
      for (double x : nodes)
        if (std::abs(x - prod) <= 1e-9 * std::max(std::abs(x), std::abs(prod)))
          return;
      nodes.push_back(prod);
      return;
    }
    for (int k = remaining; k >= 0; --k) {
      comp[slot] = k;
      self(self, slot + 1, remaining - k);
    }
  };
  rec(rec, 0, n);
  std::sort(nodes.begin(), nodes.end());

  size_t s = nodes.size();
  std::vector<double> rhs(s);
  for (size_t p = 1; p <= s; ++p)
    rhs[p - 1] = rat_to_double(
        eval_bruteforce(m, stretch_graph(g, static_cast<int>(p)), opt));

  // Dense solve of sum_k c_k node_k^p = rhs_p in long double.
  std::vector<std::vector<long double>> A(s, std::vector<long double>(s + 1));
  for (size_t p = 0; p < s; ++p) {
    for (size_t k = 0; k < s; ++k)
      A[p][k] = std::pow(static_cast<long double>(nodes[k]),
                         static_cast<long double>(p + 1));
    A[p][s] = rhs[p];
  }
  for (size_t col = 0; col < s; ++col) {
    size_t piv = col;
    for (size_t r = col + 1; r < s; ++r)
      if (std::abs(A[r][col]) > std::abs(A[piv][col])) piv = r;
    std::swap(A[col], A[piv]);
    for (size_t r = 0; r < s; ++r) {
      if (r == col || A[r][col] == 0) continue;
      long double f = A[r][col] / A[col][col];
      for (size_t cc = col; cc <= s; ++cc) A[r][cc] -= f * A[col][cc];
    }
  }
  long double result = 0;
  for (size_t k = 0; k < s; ++k) {
    long double ck = A[k][s] / A[k][k];
    result += ck * std::pow(static_cast<long double>(nodes[k]),
                            static_cast<long double>(theta));
  }
  return static_cast<double>(result);
}

double bridge_reduce_float(const WeightMatrix& m, const MultiGraph& g,
                           double theta, bool float_opt_in,
                           const EvalOptions& opt) {
  if (!float_opt_in)
    throw_precondition("floating mode requires the explicit opt-in flag");
  g.validate();
  for (int i = 0; i < m.q(); ++i)
    for (int j = 0; j < m.q(); ++j)
      if (m.at(i, j) <= 0)
        throw_precondition("bridge float mode: entries must be positive");
  // The per-value coefficients are exact; only the final x^theta map floats.
  ProductValueTable table = enumerate_product_values(m, g.edge_count());
  std::vector<Rat> rhs;
  for (size_t p = 1; p <= table.values.size(); ++p)
    rhs.push_back(eval_bruteforce(m, bridge_graph(g, static_cast<int>(p)), opt));
  std::vector<Rat> coeff = vandermonde_solve(table.values, rhs);
  double result = 0;
  for (size_t k = 0; k < coeff.size(); ++k)
    result += rat_to_double(coeff[k]) *
              std::pow(rat_to_double(table.values[k]), theta);
  return result;
}

VerifyReport verify_transcript(const ReductionTranscript& t) {
  VerifyReport rep;
  if (t.queries.empty()) {
    rep.ok = true;
    rep.empty_warning = true;
    rep.detail = "empty transcript verifies vacuously";
    return rep;
  }
  for (size_t i = 0; i < t.queries.size(); ++i) {
    Rat replayed = eval_bruteforce_serial(t.base, t.queries[i].first);
    if (replayed != t.queries[i].second) {
      rep.ok = false;
      rep.first_bad_query = static_cast<int>(i);
      rep.detail = "query " + std::to_string(i) + " replays to " +
                   rat_to_string(replayed) + ", transcript records " +
                   rat_to_string(t.queries[i].second);
      return rep;
    }
  }
  std::vector<Rat> rhs;
  for (const auto& [graph, v] : t.queries) {
    (void)graph;
    rhs.push_back(v);
  }
  if (rhs != t.solve_rhs) {
    rep.detail = "solve right-hand side does not match query values";
    return rep;
  }

  int n;
  ProductValueTable table;
  if (t.construction == "thicken-star") {
    // T_1 G = G, so the first query carries |E(G)|.
    n = t.queries.front().first.edge_count();
    GeneratingSet gs = generating_set(entry_slots(t.base));
    table = enumerate_product_values(t.base, n, &gs);
  } else if (t.construction == "loop-star") {
    // L_1 G has 3|E(G)| edges.
    n = t.queries.front().first.edge_count() / 3;
    table = loop_value_table(t.base, n);
  } else {
    rep.detail = "unknown construction '" + t.construction + "'";
    return rep;
  }
  if (table.values != t.solve_nodes) {
    rep.detail = "recorded nodes do not match the recomputed value set";
    return rep;
  }
  std::vector<Rat> solution = vandermonde_solve(t.solve_nodes, t.solve_rhs);
  if (solution != t.solve_solution) {
    rep.detail = "re-solved coefficients differ";
    return rep;
  }
  Rat result = t.construction == "thicken-star"
                   ? thicken_finish(t.base, t.z, n, table, solution)
                   : loop_finish(t.base, t.z, n, table, solution);
  if (result != t.result) {
    rep.detail = "replayed result " + rat_to_string(result) +
                 " differs from recorded " + rat_to_string(t.result);
    return rep;
  }
  rep.ok = true;
  return rep;
}

}  // namespace homkit

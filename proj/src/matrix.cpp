#include "homkit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "homkit/errors.hpp"

namespace homkit {

RatMatrix RatMatrix::identity(int n) {
  RatMatrix m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

bool RatMatrix::is_symmetric() const {
  if (rows != cols) return false;
  for (int i = 0; i < rows; ++i)
    for (int j = i + 1; j < cols; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

bool RatMatrix::operator==(const RatMatrix& o) const {
  return rows == o.rows && cols == o.cols && a == o.a;
}

RatMatrix mat_mul(const RatMatrix& x, const RatMatrix& y) {
  if (x.cols != y.rows) throw_precondition("mat_mul: shape mismatch");
  RatMatrix out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      if (x.at(i, k) == 0) continue;
      for (int j = 0; j < y.cols; ++j)
        out.at(i, j) += x.at(i, k) * y.at(k, j);
    }
  return out;
}

RatMatrix entrywise_mul(const RatMatrix& x, const RatMatrix& y) {
  if (x.rows != y.rows || x.cols != y.cols)
    throw_precondition("entrywise_mul: shape mismatch");
  RatMatrix out(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) out.a[i] = x.a[i] * y.a[i];
  return out;
}

RatMatrix entrywise_pow(const RatMatrix& x, long n) {
  RatMatrix out(x.rows, x.cols);
  for (size_t i = 0; i < x.a.size(); ++i) out.a[i] = rat_pow(x.a[i], n);
  return out;
}

RatMatrix mat_pow(const RatMatrix& x, long n) {
  if (x.rows != x.cols) throw_precondition("mat_pow: matrix not square");
  if (n < 0) throw_precondition("mat_pow: negative exponent");
  RatMatrix result = RatMatrix::identity(x.rows);
  RatMatrix base = x;
  while (n > 0) {
    if (n & 1) result = mat_mul(result, base);
    n >>= 1;
    if (n > 0) base = mat_mul(base, base);
  }
  return result;
}

WeightMatrix WeightMatrix::from_entries(int q, std::vector<Rat> entries,
                                        bool require_nonneg) {
  if (q <= 0) throw_precondition("WeightMatrix: q must be positive");
  if (entries.size() != static_cast<size_t>(q) * q)
    throw_precondition("WeightMatrix: entry count does not match q*q");
  WeightMatrix w;
  w.q_ = q;
  w.m_.rows = w.m_.cols = q;
  w.m_.a = std::move(entries);
  if (!w.m_.is_symmetric()) throw_precondition("WeightMatrix: not symmetric");
  if (require_nonneg && !w.is_nonnegative())
    throw_precondition("WeightMatrix: negative entry present");
  return w;
}

WeightMatrix WeightMatrix::from_rows(const std::vector<std::vector<Rat>>& rows,
                                     bool require_nonneg) {
  int q = static_cast<int>(rows.size());
  std::vector<Rat> flat;
  flat.reserve(static_cast<size_t>(q) * q);
  for (const auto& r : rows) {
    if (static_cast<int>(r.size()) != q)
      throw_precondition("WeightMatrix: ragged rows");
    for (const auto& x : r) flat.push_back(x);
  }
  return from_entries(q, std::move(flat), require_nonneg);
}

WeightMatrix WeightMatrix::from_mat(const RatMatrix& m, bool require_nonneg) {
  if (m.rows != m.cols) throw_precondition("WeightMatrix: not square");
  return from_entries(m.rows, m.a, require_nonneg);
}

bool WeightMatrix::is_nonnegative() const {
  for (const auto& x : m_.a)
    if (x < 0) return false;
  return true;
}

int rank_exact(const RatMatrix& m) {
  // Clear denominators row by row (row scaling preserves rank), then run
  // Bareiss fraction-free elimination with full pivoting.
  int r = m.rows, c = m.cols;
  std::vector<std::vector<Int>> a(r, std::vector<Int>(c));
  for (int i = 0; i < r; ++i) {
    Int l(1);
    for (int j = 0; j < c; ++j)
      mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), m.at(i, j).get_den().get_mpz_t());
    for (int j = 0; j < c; ++j) {
      Rat scaled = m.at(i, j) * Rat(l);
      a[i][j] = scaled.get_num();  // exact: denominator is 1
    }
  }
  Int prev(1);
  int rank = 0;
  int nmin = std::min(r, c);
  for (int k = 0; k < nmin; ++k) {
    int pi = -1, pj = -1;
    for (int i = k; i < r && pi < 0; ++i)
      for (int j = k; j < c; ++j)
        if (a[i][j] != 0) {
          pi = i;
          pj = j;
          break;
        }
    if (pi < 0) break;
    std::swap(a[k], a[pi]);
    if (pj != k)
      for (int i = 0; i < r; ++i) std::swap(a[i][k], a[i][pj]);
    for (int i = k + 1; i < r; ++i) {
      for (int j = k + 1; j < c; ++j) {
        Int t = a[k][k] * a[i][j] - a[i][k] * a[k][j];
        mpz_divexact(a[i][j].get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      a[i][k] = 0;
    }
    prev = a[k][k];
    ++rank;
  }
  return rank;
}

int rank_exact(const WeightMatrix& m) { return rank_exact(m.mat()); }

bool is_positive_definite(const WeightMatrix& m) {
  // Pivoted-free elimination: M is PD iff every pivot (ratio of consecutive
  // leading principal minors) is positive; a nonpositive pivot ends it.
  int q = m.q();
  RatMatrix a = m.mat();
  for (int k = 0; k < q; ++k) {
    if (a.at(k, k) <= 0) return false;
    for (int i = k + 1; i < q; ++i) {
      if (a.at(i, k) == 0) continue;
      Rat f = a.at(i, k) / a.at(k, k);
      for (int j = k; j < q; ++j) a.at(i, j) -= f * a.at(k, j);
    }
  }
  return true;
}

namespace {

Rat abs_rat(const Rat& x) { return x < 0 ? Rat(-x) : x; }

// Trial-division factorization; budgeted so pathological inputs fail loudly
// instead of hanging.
void factor_into(const Int& value, std::map<Int, long>& out, long sign_count,
                 long& budget) {
  Int n = abs(value);
  if (n == 0) throw_precondition("factorization of zero");
  Int d(2);
  while (n > 1) {
    if (--budget < 0) throw_budget("factorization budget exhausted");
    Int q, r;
    mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), n.get_mpz_t(), d.get_mpz_t());
    if (r == 0) {
      out[d] += sign_count;
      n = q;
      continue;
    }
    if (d * d > n) {
      out[n] += sign_count;  // n itself is prime
      break;
    }
    d += (d == 2) ? 1 : 2;
  }
}

}  // namespace

GeneratingSet generating_set(const std::vector<Rat>& values) {
  for (const auto& v : values)
    if (v == 0) throw_precondition("generating_set: zero value");
  long budget = 4'000'000;
  std::vector<std::map<Int, long>> facs(values.size());
  std::map<Int, long> all;
  for (size_t i = 0; i < values.size(); ++i) {
    if (values[i].get_num() != 1 && values[i].get_num() != -1)
      factor_into(values[i].get_num(), facs[i], 1, budget);
    if (values[i].get_den() != 1)
      factor_into(values[i].get_den(), facs[i], -1, budget);
    for (const auto& [p, e] : facs[i]) all[p] += 1;
  }
  GeneratingSet gs;
  std::map<Int, int> index;
  for (const auto& [p, cnt] : all) {
    (void)cnt;
    index[p] = static_cast<int>(gs.generators.size());
    gs.generators.push_back(p);
  }
  gs.exponents.resize(values.size());
  for (size_t i = 0; i < values.size(); ++i) {
    gs.exponents[i].negative = values[i] < 0;
    gs.exponents[i].e.assign(gs.generators.size(), 0);
    for (const auto& [p, e] : facs[i]) gs.exponents[i].e[index.at(p)] = e;
  }
  return gs;
}

Rat GeneratingSet::reconstruct(size_t idx) const {
  const Expo& ex = exponents.at(idx);
  Rat out(1);
  for (size_t t = 0; t < generators.size(); ++t)
    out *= rat_pow(Rat(generators[t]), ex.e[t]);
  if (ex.negative) out = -out;
  return out;
}

PredicateReport predicates(const WeightMatrix& m) {
  int q = m.q();
  PredicateReport rep;
  rep.phi_mag = 1;
  rep.phi_diag = 1;
  rep.psi_diag = 1;
  rep.phi_row = 1;

  // phi_mag: over ordered pairs of distinct index pairs (i<=j), (i'<=j').
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j) pairs.emplace_back(i, j);
  for (const auto& [i, j] : pairs)
    for (const auto& [i2, j2] : pairs) {
      if (i == i2 && j == j2) continue;
      rep.phi_mag *= m.at(i, j) * m.at(i, j) - m.at(i2, j2) * m.at(i2, j2);
    }

  for (int i = 0; i < q; ++i)
    for (int j = i + 1; j < q; ++j) rep.phi_diag *= m.at(i, i) - m.at(j, j);

  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int k = 0; k < q; ++k) {
        if (j == i && k == i) continue;
        rep.psi_diag *= m.at(i, i) - m.at(j, k);
      }

  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j)
      for (int j2 = j + 1; j2 < q; ++j2) rep.phi_row *= m.at(i, j) - m.at(i, j2);

  rep.diagonal_dominant = true;
  for (int i = 0; i < q && rep.diagonal_dominant; ++i)
    for (int j = 0; j < q && rep.diagonal_dominant; ++j)
      for (int k = 0; k < q; ++k) {
        if (j == k) continue;
        if (!(m.at(i, i) > abs_rat(m.at(j, k)))) {
          rep.diagonal_dominant = false;
          break;
        }
      }

  Rat third(1, 3);
  rep.i_close = true;
  for (int i = 0; i < q && rep.i_close; ++i)
    for (int j = 0; j < q; ++j) {
      Rat target = (i == j) ? Rat(1) : Rat(0);
      if (!(abs_rat(m.at(i, j) - target) < third)) {
        rep.i_close = false;
        break;
      }
    }

  rep.rank = rank_exact(m);
  rep.full_rank = rep.rank == q;
  rep.positive_definite = is_positive_definite(m);

  if (q < 3) {
    rep.aleph_skip_reason = "aleph requires q >= 3";
  } else {
    bool ok = m.at(0, q - 1) > 0 && m.at(q - 1, q - 1) > 0 &&
              m.at(q - 2, q - 2) > 0 && m.at(0, 0) > 0 && m.at(q - 2, q - 1) > 0;
    if (!ok) {
      rep.aleph_skip_reason = "aleph requires the referenced entries positive";
    } else {
      rep.aleph = aleph(m);
    }
  }
  return rep;
}

AlephResult aleph(const WeightMatrix& m) {
  int q = m.q();
  if (q < 3) throw_precondition("aleph: q >= 3 required");
  // The four log ratios, all against the (q,q) entry.
  const Rat& base = m.at(q - 1, q - 1);
  std::vector<Rat> entries = {m.at(0, q - 1), m.at(q - 2, q - 2), m.at(0, 0),
                              m.at(q - 2, q - 1), base};
  for (const auto& x : entries)
    if (x <= 0) throw_precondition("aleph: referenced entry not positive");

  // aleph = (u.L)(v.L) - (w.L)(x.L) with L the log vector of the generating
  // set; exact zero iff the symmetrized exponent tensors agree.
  GeneratingSet gs = generating_set(entries);
  int d = gs.dim();
  auto ratio_expo = [&](int k) {
    std::vector<long> r(d);
    for (int t = 0; t < d; ++t) r[t] = gs.exponents[k].e[t] - gs.exponents[4].e[t];
    return r;
  };
  std::vector<long> u = ratio_expo(0), v = ratio_expo(1), w = ratio_expo(2),
                    x = ratio_expo(3);
  bool symbolic_zero = true;
  for (int s = 0; s < d && symbolic_zero; ++s)
    for (int t = 0; t < d; ++t) {
      long lhs = u[s] * v[t] + v[s] * u[t];
      long rhs = w[s] * x[t] + x[s] * w[t];
      if (lhs != rhs) {
        symbolic_zero = false;
        break;
      }
    }

  AlephResult res;
  if (symbolic_zero) {
    res.value = 0.0;
    res.exact_zero = true;
    return res;
  }
  auto lg = [&](const Rat& r) { return std::log(rat_to_double(r)); };
  double lq = lg(base);
  res.value = (lg(m.at(0, q - 1)) - lq) * (lg(m.at(q - 2, q - 2)) - lq) -
              (lg(m.at(0, 0)) - lq) * (lg(m.at(q - 2, q - 1)) - lq);
  res.numeric_zero_warning = std::abs(res.value) < 1e-9;
  return res;
}

MultiGraph underlying_graph(const WeightMatrix& m) {
  if (!m.is_nonnegative())
    throw_precondition("underlying_graph: negative entry present");
  MultiGraph g;
  g.n = m.q();
  for (int i = 0; i < m.q(); ++i)
    for (int j = i; j < m.q(); ++j)
      if (m.at(i, j) > 0) g.edges.emplace_back(i, j);
  return g;
}

Decomposition direct_sum_decompose(const WeightMatrix& m) {
  MultiGraph gamma = underlying_graph(m);
  Decomposition dec;
  for (const auto& comp : connected_components(gamma)) {
    Block b;
    b.vertices = comp;
    int k = static_cast<int>(comp.size());
    RatMatrix sub(k, k);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) sub.at(i, j) = m.at(comp[i], comp[j]);
    b.matrix = WeightMatrix::from_mat(sub);
    for (int v : comp) dec.permutation.push_back(v);
    dec.blocks.push_back(std::move(b));
  }
  return dec;
}

std::vector<std::vector<long>> order_profile(const WeightMatrix& m,
                                             const OrderProfileOptions& opt) {
  int q = m.q();
  std::vector<Rat> entries;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j) {
      if (m.at(i, j) <= 0)
        throw_precondition("order_profile: entries must be strictly positive");
      entries.push_back(m.at(i, j));
    }
  GeneratingSet gs = generating_set(entries);
  int d = gs.dim();
  int npairs = static_cast<int>(entries.size());

  // Shift exponents so each coordinate has min 0.
  std::vector<std::vector<long>> f(npairs, std::vector<long>(d, 0));
  for (int t = 0; t < d; ++t) {
    long mn = gs.exponents[0].e[t];
    for (int p = 1; p < npairs; ++p) mn = std::min(mn, gs.exponents[p].e[t]);
    for (int p = 0; p < npairs; ++p) f[p][t] = gs.exponents[p].e[t] - mn;
  }

  // Distinct entry values sorted; a weight vector works iff the induced x
  // values are strictly increasing along this order.
  std::map<Rat, long, RatLess> value_order;
  for (int p = 0; p < npairs; ++p) value_order[entries[p]] = 0;

  auto try_weights = [&](const std::vector<long>& w) -> bool {
    std::map<Rat, long, RatLess> xs;
    for (int p = 0; p < npairs; ++p) {
      long x = 0;
      for (int t = 0; t < d; ++t) x += w[t] * f[p][t];
      auto it = xs.find(entries[p]);
      if (it == xs.end())
        xs[entries[p]] = x;
      // equal entries always map to equal x: same exponent vector
    }
    long prev = -1;
    bool first = true;
    for (const auto& [val, x] : xs) {
      (void)val;
      if (!first && x <= prev) return false;
      prev = x;
      first = false;
    }
    return true;
  };

  std::vector<long> chosen;
  if (d == 0) {
    chosen = {};
  } else {
    bool found = false;
    for (long bound = 1; bound <= opt.max_weight && !found; ++bound) {
      // all w in [1, bound]^d whose max equals bound, lexicographic
      std::vector<long> w(d, 1);
      while (true) {
        bool hits = false;
        for (long x : w)
          if (x == bound) hits = true;
        if (hits && try_weights(w)) {
          chosen = w;
          found = true;
          break;
        }
        int k = d - 1;
        while (k >= 0 && w[k] == bound) {
          w[k] = 1;
          --k;
        }
        if (k < 0) break;
        ++w[k];
      }
    }
    if (!found)
      throw_budget("order_profile: no weight vector within max-norm " +
                   std::to_string(opt.max_weight) + " realizes the order");
  }

  // Build the full q x q profile and normalize min to 0.
  std::vector<std::vector<long>> x(q, std::vector<long>(q, 0));
  long mn = 0;
  bool first = true;
  int p = 0;
  for (int i = 0; i < q; ++i)
    for (int j = i; j < q; ++j, ++p) {
      long val = 0;
      for (int t = 0; t < d; ++t) val += chosen[t] * f[p][t];
      x[i][j] = x[j][i] = val;
      if (first || val < mn) mn = val;
      first = false;
    }
  for (int i = 0; i < q; ++i)
    for (int j = 0; j < q; ++j) x[i][j] -= mn;
  return x;
}

}  // namespace homkit

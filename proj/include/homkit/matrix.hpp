#pragma once

#include <optional>
#include <string>
#include <vector>

#include "homkit/multigraph.hpp"
#include "homkit/rational.hpp"

namespace homkit {

// Dense rational matrix. Gadget signatures land here because a binary
// gadget's signature may be asymmetric or diagonal.
struct RatMatrix {
  int rows = 0, cols = 0;
  std::vector<Rat> a;  // row-major

  RatMatrix() = default;
  RatMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, Rat(0)) {}

  Rat& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  const Rat& at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static RatMatrix identity(int n);
  bool is_symmetric() const;
  bool operator==(const RatMatrix& o) const;
};

RatMatrix mat_mul(const RatMatrix& x, const RatMatrix& y);
RatMatrix entrywise_mul(const RatMatrix& x, const RatMatrix& y);
RatMatrix entrywise_pow(const RatMatrix& x, long n);
RatMatrix mat_pow(const RatMatrix& x, long n);  // n >= 0, square x

// Symmetric q x q matrix of exact rationals.
class WeightMatrix {
 public:
  WeightMatrix() = default;
  // Throws if entries are not symmetric, or if require_nonneg is set and a
  // negative entry is present.
  static WeightMatrix from_entries(int q, std::vector<Rat> entries,
                                   bool require_nonneg = false);
  static WeightMatrix from_rows(const std::vector<std::vector<Rat>>& rows,
                                bool require_nonneg = false);
  static WeightMatrix from_mat(const RatMatrix& m, bool require_nonneg = false);

  int q() const { return q_; }
  const Rat& at(int i, int j) const { return m_.at(i, j); }
  const RatMatrix& mat() const { return m_; }
  bool is_nonnegative() const;
  bool operator==(const WeightMatrix& o) const { return m_ == o.m_; }

 private:
  int q_ = 0;
  RatMatrix m_;
};

// Rank over the rationals, via fraction-free (Bareiss) elimination on a
// denominator-cleared integer copy.
int rank_exact(const RatMatrix& m);
int rank_exact(const WeightMatrix& m);

// All leading principal minors > 0, checked exactly.
bool is_positive_definite(const WeightMatrix& m);

struct AlephResult {
  double value = 0.0;
  bool exact_zero = false;
  // |value| < 1e-9 without the symbolic certificate
  bool numeric_zero_warning = false;
};

struct PredicateReport {
  Rat phi_mag, phi_diag, psi_diag, phi_row;
  bool diagonal_dominant = false;
  bool i_close = false;
  std::optional<AlephResult> aleph;  // absent when preconditions fail
  std::string aleph_skip_reason;
  int rank = 0;
  bool positive_definite = false;
  bool full_rank = false;
};

PredicateReport predicates(const WeightMatrix& m);

// Requires q >= 3 and the five referenced entries strictly positive;
// throws a Precondition error otherwise.
AlephResult aleph(const WeightMatrix& m);

// Multiplicative basis for a finite set of nonzero rationals: the primes
// dividing any numerator or denominator, with signed exponent vectors.
struct GeneratingSet {
  std::vector<Int> generators;  // ascending primes
  struct Expo {
    bool negative = false;
    std::vector<long> e;  // parallel to generators
  };
  std::vector<Expo> exponents;  // parallel to the input values

  Rat reconstruct(size_t idx) const;
  int dim() const { return static_cast<int>(generators.size()); }
};

GeneratingSet generating_set(const std::vector<Rat>& values);

// Positivity-pattern graph of a non-negative matrix: loop at i iff M_ii > 0,
// edge (i, j) iff M_ij > 0.
MultiGraph underlying_graph(const WeightMatrix& m);

struct Block {
  std::vector<int> vertices;  // original indices, ascending
  WeightMatrix matrix;        // principal submatrix
};
struct Decomposition {
  std::vector<Block> blocks;
  // permutation[k] = original index in slot k; P M P^T is block diagonal.
  std::vector<int> permutation;
};

Decomposition direct_sum_decompose(const WeightMatrix& m);

struct OrderProfileOptions {
  long max_weight = 32;  // max-norm bound on the weight vector search
};

// Integer matrix x with x_ij >= 0, min = 0, order-isomorphic to the entries
// of a strictly positive M. Throws a Budget error when no weight vector
// within the bound realizes the order.
std::vector<std::vector<long>> order_profile(const WeightMatrix& m,
                                             const OrderProfileOptions& opt = {});

}  // namespace homkit

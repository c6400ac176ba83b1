#pragma once

#include <optional>
#include <vector>

#include "homkit/matrix.hpp"
#include "homkit/multigraph.hpp"
#include "homkit/partition.hpp"

namespace homkit {

// A graph with two distinguished label vertices; l1 == l2 makes it a binary
// (diagonal-signature) gadget. Rotations are stored globally consistent
// (counterclockwise); each label's cycle is linearized so the outer-face gap
// sits between its last and first dart, which is what composition splices on.
struct EdgeGadget {
  MultiGraph graph;
  int l1 = 0, l2 = 0;
  std::optional<RotationSystem> rotation;
  bool planar_certified = false;
};

struct EmbeddedGraph {
  MultiGraph graph;
  std::optional<RotationSystem> rotation;
};

// The four parameterized families; closed-form signatures are
// T_n = M^{entrywise n}, S_n = M^n, B_n = M T_n(M) M, L_n = D^n M D^n.
EdgeGadget thicken(int n);
EdgeGadget stretch(int n);
EdgeGadget bridge(int n);
EdgeGadget loop_gadget(int n);

EdgeGadget single_edge();    // thicken(1)
// One vertex, no edges, both labels on it: signature is the identity.
EdgeGadget trivial_binary();

// K(M)_ij: partial partition functions with the labels pinned to (i, j).
// OpenMP over the q^2 cells; the serial reference enumerates plainly.
RatMatrix signature(const EdgeGadget& k, const WeightMatrix& m,
                    const EvalOptions& opt = {});
RatMatrix signature_serial(const EdgeGadget& k, const WeightMatrix& m,
                           const EvalOptions& opt = {});

// KG: every edge (u, v) of g replaced by a fresh copy of k with l1 -> u,
// l2 -> v; a loop merges both labels into its vertex. Rotations compose when
// both sides carry one.
EmbeddedGraph replace_edges(const EmbeddedGraph& g, const EdgeGadget& k);

// Compositions. series glues k1.l2 to k2.l1 (signature: matrix product);
// parallel identifies the l1s and the l2s (signature: entrywise product).
// The public ops require distinct labels per side; the compose_* forms accept
// binary gadgets too and are what the separator search uses.
EdgeGadget series(const EdgeGadget& k1, const EdgeGadget& k2);
EdgeGadget parallel(const EdgeGadget& k1, const EdgeGadget& k2);
EdgeGadget compose_series(const EdgeGadget& k1, const EdgeGadget& k2);
EdgeGadget compose_parallel(const EdgeGadget& k1, const EdgeGadget& k2);

// Squares each diagonal entry: symmetrize multiplies K_ij by K_ji via two
// merged copies; diag_square turns a diagonal gadget into the outer product
// of its diagonal via two disjoint copies.
EdgeGadget symmetrize(const EdgeGadget& k);
EdgeGadget diag_square(const EdgeGadget& k);

// One extra self loop at each label: signature becomes diag(M) K(M) diag(M).
EdgeGadget loop_dress(const EdgeGadget& k);

// R_{m,n}: each vertex becomes a ring of deg(v) vertices in rotation order;
// ring edges are m-subdivided and n-thickened. Degree 1 rings degenerate to a
// loop, degree 2 to parallel edges; isolated vertices are kept.
EmbeddedGraph ring_transform(const EmbeddedGraph& g, int m, int n);

// Genus 0 on every component and, when both labels sit in one component with
// darts, some face touching both. Sets and returns planar_certified.
bool certify_planar(EdgeGadget& k);

}  // namespace homkit

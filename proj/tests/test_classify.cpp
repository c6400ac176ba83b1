#include <doctest.h>

#include <random>

#include "homkit/classify.hpp"
#include "homkit/errors.hpp"
#include "oracle.hpp"
#include "test_util.hpp"

using namespace homkit;

namespace {

WeightMatrix wm(const std::vector<std::vector<long>>& rows) {
  std::vector<Rat> entries;
  for (const auto& r : rows)
    for (long v : r) entries.push_back(Rat(v));
  return WeightMatrix::from_entries(static_cast<int>(rows.size()),
                                    std::move(entries));
}

// Independent orbit oracle: enumerate all q! permutations.
std::vector<std::vector<int>> orbit_oracle(const WeightMatrix& m) {
  int q = m.q();
  std::vector<int> perm(q);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<int> parent(q);
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  do {
    bool is_auto = true;
    for (int i = 0; i < q && is_auto; ++i)
      for (int j = 0; j < q; ++j)
        if (m.at(i, j) != m.at(perm[i], perm[j])) {
          is_auto = false;
          break;
        }
    if (is_auto)
      for (int i = 0; i < q; ++i) parent[find(i)] = find(perm[i]);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::map<int, std::vector<int>> classes;
  for (int v = 0; v < q; ++v) classes[find(v)].push_back(v);
  std::vector<std::vector<int>> orbits;
  for (auto& [r, members] : classes) {
    (void)r;
    orbits.push_back(members);
  }
  std::sort(orbits.begin(), orbits.end());
  return orbits;
}

}  // namespace

TEST_CASE("automorphism orbits on pinned examples") {
  OrbitResult j3 = aut_orbits(wm({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}}));
  CHECK(j3.orbits == std::vector<std::vector<int>>{{0, 1, 2}});
  CHECK(count_automorphisms(wm({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}})) == 6);

  OrbitResult pinned = aut_orbits(wm({{1, 2}, {2, 3}}));
  CHECK(pinned.orbits == std::vector<std::vector<int>>{{0}, {1}});

  WeightMatrix path = wm({{0, 1, 0}, {1, 0, 1}, {0, 1, 0}});
  OrbitResult p3 = aut_orbits(path);
  CHECK(p3.orbits == std::vector<std::vector<int>>{{0, 2}, {1}});
  CHECK(count_automorphisms(path) == 2);

  testutil::Rng rng(1);
  CHECK_THROWS_AS(aut_orbits(testutil::random_nonneg_matrix(rng, 13)), Error);
}

TEST_CASE("orbits agree with the permutation-enumeration oracle") {
  testutil::Rng rng(61);
  for (int t = 0; t < 50; ++t) {
    int q = 2 + t % 5;
    WeightMatrix m = testutil::random_nonneg_matrix(rng, q, 2, 1);
    CHECK(aut_orbits(m).orbits == orbit_oracle(m));
  }
}

TEST_CASE("orbit generators are genuine automorphisms") {
  testutil::Rng rng(62);
  for (int t = 0; t < 30; ++t) {
    int q = 2 + t % 4;
    WeightMatrix m = testutil::random_nonneg_matrix(rng, q, 2, 1);
    OrbitResult r = aut_orbits(m);
    for (const auto& sigma : r.generators)
      for (int i = 0; i < q; ++i)
        for (int j = 0; j < q; ++j)
          CHECK(m.at(i, j) == m.at(sigma[i], sigma[j]));
  }
}

TEST_CASE("find_separator on pinned examples") {
  // M itself separates at depth 0
  SeparatorResult r1 = find_separator(wm({{1, 2}, {2, 3}}), 0, 1);
  CHECK(r1.status == SeparatorStatus::Found);
  CHECK(r1.depth_reached == 0);
  REQUIRE(r1.witness_signature.has_value());
  CHECK(r1.witness_signature->at(0, 0) != r1.witness_signature->at(1, 1));

  // full symmetry: provably nothing separates
  WeightMatrix j3 = wm({{1, 1, 1}, {1, 1, 1}, {1, 1, 1}});
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(find_separator(j3, i, j).status == SeparatorStatus::ProvenNone);

  // equal diagonals but different rows: the stretch-2 composite separates
  WeightMatrix deep = wm({{2, 1, 1}, {1, 2, 2}, {1, 2, 3}});
  SeparatorResult r2 = find_separator(deep, 0, 1);
  CHECK(r2.status == SeparatorStatus::Found);
  CHECK(r2.depth_reached >= 1);
  REQUIRE(r2.witness.has_value());
  RatMatrix confirmed =
      oracle::naive_signature(r2.witness->graph, r2.witness->l1,
                              r2.witness->l2, deep);
  CHECK(confirmed.at(0, 0) != confirmed.at(1, 1));

  CHECK_THROWS_AS(find_separator(j3, 1, 1), Error);

  // C4 adjacency with distinct positive loop weights, pattern chosen so the
  // pair (0, 1) has equal diagonals and equal row multisets yet no
  // automorphism: a shallow composite separates it
  WeightMatrix c4l = wm({{2, 1, 0, 1}, {1, 2, 1, 0}, {0, 1, 3, 1}, {1, 0, 1, 4}});
  SeparatorResult rc = find_separator(c4l, 0, 1);
  REQUIRE(rc.status == SeparatorStatus::Found);
  CHECK(rc.depth_reached >= 1);
  RatMatrix rc_sig = oracle::naive_signature(rc.witness->graph, rc.witness->l1,
                                             rc.witness->l2, c4l);
  CHECK(rc_sig.at(0, 0) != rc_sig.at(1, 1));
}

TEST_CASE("budget exhaustion reports UNKNOWN, never PROVEN_NONE") {
  // this pair is separable (see above), but a starved budget must answer
  // UNKNOWN rather than claim impossibility
  WeightMatrix deep = wm({{2, 1, 1}, {1, 2, 2}, {1, 2, 3}});
  SeparatorBudget starved;
  starved.max_states = 2;
  starved.max_depth = 0;
  SeparatorResult r = find_separator(deep, 0, 1, starved);
  CHECK(r.status == SeparatorStatus::Unknown);
  CHECK_FALSE(r.witness.has_value());
}

TEST_CASE("found witnesses are always brute-force confirmed") {
  testutil::Rng rng(63);
  SeparatorBudget tight;
  tight.max_states = 300;
  for (int t = 0; t < 25; ++t) {
    int q = 2 + t % 2;
    WeightMatrix m = testutil::random_nonneg_matrix(rng, q, 3, 1);
    SeparatorResult r = find_separator(m, 0, q - 1, tight);
    if (r.status == SeparatorStatus::Found) {
      REQUIRE(r.witness.has_value());
      RatMatrix sig = oracle::naive_signature(r.witness->graph, r.witness->l1,
                                              r.witness->l2, m);
      CHECK(sig.at(0, 0) != sig.at(q - 1, q - 1));
      CHECK(r.witness->planar_certified);
    }
  }
}

TEST_CASE("PROVEN_NONE pairs withstand random gadget separation attempts") {
  testutil::Rng rng(64);
  int checked_pairs = 0;
  for (int t = 0; t < 12 && checked_pairs < 4; ++t) {
    int q = 2 + t % 3;
    WeightMatrix m = testutil::random_nonneg_matrix(rng, q, 2, 1);
    OrbitResult orbits = aut_orbits(m);
    for (const auto& orb : orbits.orbits) {
      if (orb.size() < 2) continue;
      int i = orb[0], j = orb[1];
      ++checked_pairs;
      for (int g = 0; g < 60; ++g) {
        MultiGraph graph = testutil::random_multigraph(rng, 5, 6);
        std::uniform_int_distribution<int> pick(0, graph.n - 1);
        int l1 = pick(rng), l2 = pick(rng);
        RatMatrix sig = oracle::naive_signature(graph, l1, l2, m);
        CHECK(sig.at(i, i) == sig.at(j, j));
      }
    }
  }
  CHECK(checked_pairs > 0);
}

TEST_CASE("classify_diag_distinct on pinned examples") {
  Verdict v1 = classify_diag_distinct(wm({{1, 2}, {2, 4}}));
  CHECK(v1.outcome == Outcome::Tractable);
  REQUIRE(v1.evaluator.has_value());

  Verdict v2 = classify_diag_distinct(wm({{2, 1}, {1, 1}}));
  CHECK(v2.outcome == Outcome::Hard);
  CHECK(v2.criterion == "nonneg-dichotomy-rank-ge-2-block");

  Verdict v3 = classify_diag_distinct(wm({{2, 0}, {0, 3}}));
  CHECK(v3.outcome == Outcome::Tractable);

  CHECK_THROWS_WITH_AS(classify_diag_distinct(wm({{1, 2}, {2, 1}})),
                       doctest::Contains("classify_general"), Error);

  // the at-most-one zero row is stripped, not fatal
  Verdict v4 = classify_diag_distinct(wm({{0, 0, 0}, {0, 2, 1}, {0, 1, 1}}));
  CHECK(v4.outcome == Outcome::Hard);
  Verdict v5 = classify_diag_distinct(wm({{0, 0, 0}, {0, 2, 4}, {0, 4, 8}}));
  CHECK(v5.outcome == Outcome::Tractable);
}

TEST_CASE("2x2 positive full-rank verdicts follow the diagonal-equality criterion") {
  testutil::Rng rng(65);
  int samples = 0;
  while (samples < 60) {
    WeightMatrix m = testutil::random_positive_matrix(rng, 2, 6, 3);
    if (rank_exact(m) != 2) continue;
    if (m.at(0, 0) == m.at(1, 1)) continue;  // outside phi_diag != 0
    ++samples;
    Verdict v = classify_diag_distinct(m);
    // positive full rank with distinct diagonal: always hard
    CHECK(v.outcome == Outcome::Hard);
  }
}

TEST_CASE("tractable verdicts come with an evaluator that matches brute force") {
  testutil::Rng rng(66);
  int tractable_seen = 0;
  for (int t = 0; t < 80; ++t) {
    int q = 1 + t % 3;
    WeightMatrix m = testutil::random_nonneg_matrix(rng, q, 3, 1);
    Rat phi(1);
    for (int i = 0; i < q; ++i)
      for (int j = i + 1; j < q; ++j) phi *= m.at(i, i) - m.at(j, j);
    if (phi == 0) continue;
    Verdict v = classify_diag_distinct(m);
    if (v.outcome != Outcome::Tractable) continue;
    ++tractable_seen;
    MultiGraph g = testutil::random_multigraph(rng, 4, 5);
    EvalResult r = eval_auto(m, g);
    CHECK(r.value == eval_bruteforce(m, g));
    CHECK((r.strategy == EvalStrategy::Rank1 ||
           r.strategy == EvalStrategy::DirectSum));
  }
  CHECK(tractable_seen > 0);
}

TEST_CASE("verdicts are stable under simultaneous permutation") {
  testutil::Rng rng(67);
  for (int t = 0; t < 30; ++t) {
    int q = 2 + t % 3;
    WeightMatrix m = testutil::random_nonneg_matrix(rng, q, 3, 1);
    std::vector<int> perm(q);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    RatMatrix pm(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) pm.at(i, j) = m.at(perm[i], perm[j]);
    WeightMatrix mp = WeightMatrix::from_mat(pm);
    Verdict a = classify_general(m);
    Verdict b = classify_general(mp);
    CHECK(a.outcome == b.outcome);
  }
}

TEST_CASE("classify_general on pinned examples") {
  Verdict i3 = classify_general(wm({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
  CHECK(i3.outcome == Outcome::Tractable);
  CHECK(i3.criterion == "span-IJ-scalar-I");

  Verdict potts = classify_general(wm({{2, 1, 1}, {1, 2, 1}, {1, 1, 2}}));
  CHECK(potts.outcome == Outcome::Hard);
  CHECK(potts.criterion == "potts-span-IJ");

  Verdict k2 = classify_general(wm({{0, 1}, {1, 0}}));
  CHECK(k2.outcome == Outcome::Tractable);
  CHECK(k2.criterion == "blocks-rank-le-1-or-bipartite-rank-2");
  CHECK(k2.evaluator == EvalStrategy::BipartiteRank2);

  // q = 2 in span(I, J) with equal diagonal: honest UNKNOWN (the matchgate
  // tractability of this case is outside the implemented criteria)
  Verdict xz = classify_general(wm({{2, 1}, {1, 2}}));
  CHECK(xz.outcome == Outcome::Unknown);
  REQUIRE_FALSE(xz.pairs.empty());
  CHECK(xz.pairs[0].status == SeparatorStatus::ProvenNone);

  // scalar of J
  Verdict j4 = classify_general(wm({{3, 3}, {3, 3}}));
  CHECK(j4.outcome == Outcome::Tractable);
  CHECK(j4.criterion == "span-IJ-scalar-J");

  // diagonal-distinct delegation
  Verdict hard = classify_general(wm({{2, 1}, {1, 1}}));
  CHECK(hard.outcome == Outcome::Hard);
  CHECK(hard.criterion == "nonneg-dichotomy-rank-ge-2-block");

  // separation-certified hardness: equal diagonals, trivial orbits, rank 3
  WeightMatrix sep = wm({{2, 1, 1}, {1, 2, 2}, {1, 2, 3}});
  Verdict vs = classify_general(sep);
  CHECK(vs.outcome == Outcome::Hard);
  CHECK(vs.criterion == "full-gadget-separation");
  REQUIRE(vs.pairs.size() == 3);
  for (const auto& p : vs.pairs) CHECK(p.status == SeparatorStatus::Found);
}

TEST_CASE("span(I,J) verdicts for q = 3 and 4") {
  for (int q : {3, 4}) {
    RatMatrix ident(q, q), allones(q, q), mix(q, q);
    for (int i = 0; i < q; ++i)
      for (int j = 0; j < q; ++j) {
        ident.at(i, j) = (i == j) ? 2 : 0;
        allones.at(i, j) = 3;
        mix.at(i, j) = (i == j) ? 5 : 2;
      }
    CHECK(classify_general(WeightMatrix::from_mat(ident)).outcome ==
          Outcome::Tractable);
    CHECK(classify_general(WeightMatrix::from_mat(allones)).outcome ==
          Outcome::Tractable);
    Verdict vm = classify_general(WeightMatrix::from_mat(mix));
    CHECK(vm.outcome == Outcome::Hard);
    CHECK(vm.criterion == "potts-span-IJ");
  }
}

TEST_CASE("combine_separators on pinned examples") {
  // q = 2: the witness itself
  WeightMatrix m2 = wm({{1, 2}, {2, 3}});
  std::map<std::pair<int, int>, EdgeGadget> w2{{{0, 1}, single_edge()}};
  CombineResult r2 = combine_separators(m2, w2);
  CHECK(r2.z == std::vector<long>{1});
  CHECK(r2.signature.at(0, 0) != r2.signature.at(1, 1));

  // strictly positive q = 3 with three depth-0 witnesses
  WeightMatrix m3 = wm({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}});
  std::map<std::pair<int, int>, EdgeGadget> w3{{{0, 1}, single_edge()},
                                               {{0, 2}, single_edge()},
                                               {{1, 2}, single_edge()}};
  CombineResult r3 = combine_separators(m3, w3);
  // diagonal pairwise distinct, verified against the naive oracle
  RatMatrix sig = oracle::naive_signature(r3.gadget.graph, r3.gadget.l1,
                                          r3.gadget.l2, m3);
  CHECK(sig == r3.signature);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) CHECK(sig.at(i, i) != sig.at(j, j));

  // zero-diagonal witnesses get repaired by edge-to-path replacement
  WeightMatrix mz = wm({{1, 1, 0}, {1, 0, 2}, {0, 2, 3}});
  std::map<std::pair<int, int>, EdgeGadget> wz{{{0, 1}, single_edge()},
                                               {{0, 2}, single_edge()},
                                               {{1, 2}, single_edge()}};
  CombineResult rz = combine_separators(mz, wz);
  for (int k : rz.stretch_k) CHECK(k >= 2);
  for (int i = 0; i < 3; ++i) CHECK(rz.signature.at(i, i) != 0);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(rz.signature.at(i, i) != rz.signature.at(j, j));
  CHECK(rz.gadget.planar_certified);

  // disconnected underlying graph is rejected with the obstruction story
  WeightMatrix disc = wm({{1, 0}, {0, 2}});
  std::map<std::pair<int, int>, EdgeGadget> wd{{{0, 1}, single_edge()}};
  CHECK_THROWS_WITH_AS(combine_separators(disc, wd),
                       doctest::Contains("connected"), Error);

  // non-separating witness is rejected
  WeightMatrix j2 = wm({{1, 1}, {1, 1}});
  std::map<std::pair<int, int>, EdgeGadget> wj{{{0, 1}, single_edge()}};
  CHECK_THROWS_AS(combine_separators(j2, wj), Error);

  // a missing pair is named
  WeightMatrix m3b = wm({{1, 2, 3}, {2, 4, 5}, {3, 5, 6}});
  std::map<std::pair<int, int>, EdgeGadget> incomplete{{{0, 1}, single_edge()}};
  CHECK_THROWS_WITH_AS(combine_separators(m3b, incomplete),
                       doctest::Contains("(0,2)"), Error);
}

TEST_CASE("combine_separators output feeds the diagonal-distinct pipeline") {
  // witnesses found by the search, combined, then checked diagonal distinct
  WeightMatrix m = wm({{2, 1, 1}, {1, 2, 2}, {1, 2, 3}});
  std::map<std::pair<int, int>, EdgeGadget> witnesses;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j) {
      SeparatorResult r = find_separator(m, i, j);
      REQUIRE(r.status == SeparatorStatus::Found);
      // the combination step needs ordinary two-label witnesses
      if (r.witness->l1 == r.witness->l2) {
        witnesses[{i, j}] = diag_square(*r.witness);
      } else {
        witnesses[{i, j}] = *r.witness;
      }
    }
  CombineResult combo = combine_separators(m, witnesses);
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      CHECK(combo.signature.at(i, i) != combo.signature.at(j, j));
}

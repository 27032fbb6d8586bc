#include <gtest/gtest.h>

#include <jsj/io.hpp>
#include <jsj/jsj.hpp>

using namespace jsj;

namespace {

Multiword mw(const char* s, int rank) { return parse_multiword(s, rank); }

RJSJResult run(const Multiword& m, int max_len) {
  RJSJConfig cfg;
  cfg.max_len = max_len;
  return compute_rjsj(m, cfg);
}

std::vector<int> degrees_at(const GraphOfGroups& g, int cyclic_id) {
  std::vector<int> ds;
  for (const auto& e : g.edges)
    if (e.cyclic == cyclic_id) ds.push_back(e.degree);
  std::sort(ds.begin(), ds.end());
  return ds;
}

std::vector<int> all_degrees(const GraphOfGroups& g) {
  std::vector<int> ds;
  for (const auto& e : g.edges) ds.push_back(e.degree);
  std::sort(ds.begin(), ds.end());
  return ds;
}

// Sum over non-cyclic vertices of (rank - 1) equals rank(F) - 1.
int euler_sum(const GraphOfGroups& g) {
  int s = 0;
  for (const auto& v : g.noncyclic) s += v.rank() - 1;
  return s;
}

}  // namespace

TEST(RJSJ, SurfaceWordIsQH) {
  auto r = run(mw("b, baa", 2), 12);
  EXPECT_EQ(r.outcome, Outcome::QHSurface);
  EXPECT_TRUE(r.certified);
  EXPECT_EQ(run(mw("abAB", 2), 12).outcome, Outcome::QHSurface);
}

TEST(RJSJ, CutPointSplitsOffCyclic) {
  auto m = mw("b, baa, a", 2);
  auto r = run(m, 12);
  ASSERT_EQ(r.outcome, Outcome::Decomposition);
  const auto& g = r.graph;
  ASSERT_EQ(g.cyclic.size(), 1u);
  ASSERT_EQ(g.noncyclic.size(), 1u);
  EXPECT_EQ(to_string(g.cyclic[0].root), "a");
  EXPECT_TRUE(g.cyclic[0].in_multiword);
  EXPECT_EQ(degrees_at(g, g.cyclic[0].id), (std::vector<int>{2}));
  EXPECT_TRUE(detail::same_subgroup(2, g.noncyclic[0].basis, {parse_word("b", 2), parse_word("aa", 2)}));
  EXPECT_TRUE(verify_rjsj(m, g).pass);
}

TEST(RJSJ, VerifyRejectsWrongMultiword) {
  auto g = run(mw("b, baa, a", 2), 12).graph;
  auto rep = verify_rjsj(mw("b, baa", 2), g);
  EXPECT_FALSE(rep.pass);
  EXPECT_FALSE(rep.violations.empty());
}

TEST(RJSJ, VerifyRejectsTamperedDegree) {
  auto m = mw("b, baa, a", 2);
  auto g = run(m, 12).graph;
  g.edges[0].degree = 3;
  EXPECT_FALSE(verify_rjsj(m, g).pass);
}

TEST(RJSJ, BaumslagSolitar) {
  auto m = mw("AAABaab", 2);
  auto r = run(m, 12);
  ASSERT_EQ(r.outcome, Outcome::Decomposition);
  const auto& g = r.graph;
  EXPECT_EQ(all_degrees(g), (std::vector<int>{2, 3}));
  ASSERT_EQ(g.noncyclic.size(), 1u);
  const auto& v = g.noncyclic[0];
  EXPECT_EQ(v.cls, PieceClass::QHSurface);
  EXPECT_EQ(canonical_multiword(v.induced), canonical_multiword(mw("A, B, aB", 2)));
  EXPECT_TRUE(verify_rjsj(m, g).pass);
}

TEST(RJSJ, BaumslagWord) {
  auto m = mw("AABAbaBab", 2);
  auto r = run(m, 8);
  ASSERT_EQ(r.outcome, Outcome::Decomposition);
  const auto& g = r.graph;
  ASSERT_EQ(g.cyclic.size(), 1u);
  EXPECT_EQ(to_string(g.cyclic[0].root), "a");
  EXPECT_EQ(degrees_at(g, g.cyclic[0].id), (std::vector<int>{1, 1}));
  ASSERT_EQ(g.noncyclic.size(), 1u);
  const auto& v = g.noncyclic[0];
  EXPECT_EQ(v.rank(), 2);
  EXPECT_EQ(v.cls, PieceClass::Rigid);
  EXPECT_EQ(canonical_multiword(v.induced), canonical_multiword(mw("AABab, a, b", 2)));
  EXPECT_TRUE(verify_rjsj(m, g, 8).pass);
}

TEST(RJSJ, RigidVertexStaysRigidAcrossScanLengths) {
  auto pieces = mw("AABab, a, b", 2);
  for (int len : {6, 8}) EXPECT_EQ(classify_multiword(pieces, len).cls, PieceClass::Rigid) << len;
}

TEST(RJSJ, FreeSplitting) {
  try {
    run(mw("ab, c", 3), 6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::FreeSplitting);
  }
  EXPECT_EQ(free_factors(mw("ab, c", 3)).size(), 3u);
}

TEST(RJSJ, EulerIdentity) {
  for (auto [s, rank, len] : std::vector<std::tuple<const char*, int, int>>{
           {"b, baa, a", 2, 12}, {"AAABaab", 2, 12}, {"AABaab", 2, 12}, {"AABAbaBab", 2, 8}, {"ab, ABab", 2, 12}}) {
    auto r = run(mw(s, rank), len);
    if (r.outcome != Outcome::Decomposition) continue;
    EXPECT_EQ(euler_sum(r.graph), rank - 1) << s;
  }
}

TEST(RJSJ, AugmentationGivesSameDecomposition) {
  for (auto [s, rank, len] : std::vector<std::tuple<const char*, int, int>>{
           {"b, baa, a", 2, 12}, {"AAABaab", 2, 12}, {"AABaab", 2, 12}, {"ab, ABab", 2, 12}, {"AABAbaBab", 2, 8}}) {
    auto m = mw(s, rank);
    auto r = run(m, len);
    ASSERT_EQ(r.outcome, Outcome::Decomposition) << s;
    auto aug = augmented_multiword(m, r.graph);
    auto ra = run(aug, len);
    ASSERT_EQ(ra.outcome, Outcome::Decomposition) << s;
    EXPECT_EQ(canonical_form(r.graph), canonical_form(ra.graph)) << s;
  }
}

TEST(RJSJ, NormalizeIsIdempotent) {
  for (auto [s, len] : std::vector<std::pair<const char*, int>>{{"b, baa, a", 12}, {"AAABaab", 12}, {"AABAbaBab", 8}}) {
    RJSJResult r = run(mw(s, 2), len);
    RJSJResult once = r, twice = r;
    once.graph = normalize_graph_of_groups(r.graph);
    twice.graph = normalize_graph_of_groups(once.graph);
    EXPECT_EQ(gog_json(r).dump(), gog_json(once).dump()) << s;
    EXPECT_EQ(gog_json(once).dump(), gog_json(twice).dump()) << s;
  }
}

TEST(RJSJ, JsonRoundTrip) {
  auto m = mw("AAABaab", 2);
  auto r = run(m, 12);
  auto g = gog_from_json(gog_json(r));
  EXPECT_TRUE(verify_rjsj(m, g).pass);
  EXPECT_EQ(canonical_form(g), canonical_form(r.graph));
}

TEST(RJSJ, SelectUncrossedKeepsCutPoint) {
  auto m = mw("b, baa, a", 2);
  auto scan = scan_candidates(m, 6);
  auto sel = select_uncrossed(m, scan.cutsets);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(to_string(sel[0].root), "a");
  EXPECT_EQ(sel[0].kind, CutKind::CutPoint);
}

TEST(RJSJ, CanonicalMultiwordIgnoresAutomorphisms) {
  for (const char* s : {"abAB", "AABAbaBab", "a, b, ab"}) {
    auto m = mw(s, 2);
    auto f = whitehead_move(2, make_letter(1, 1), (1u << 0) | (1u << 2));
    auto p = signed_permutation(2, {make_letter(2, -1), make_letter(1, 1)});
    EXPECT_EQ(canonical_multiword(m), canonical_multiword(apply_automorphism(p, apply_automorphism(f, m)))) << s;
  }
}

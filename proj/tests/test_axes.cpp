#include <gtest/gtest.h>

#include "oracles.hpp"

using namespace jsj;
using namespace jsj::oracle;

namespace {

Multiword mw(const char* s, int rank) { return parse_multiword(s, rank); }

}  // namespace

TEST(Axes, CutPointOnCommutatorPair) {
  auto m = mw("ab, ABab", 2);
  auto c = classify_cutset(m, parse_word("ab", 2));
  EXPECT_EQ(c.kind, CutKind::CutPoint);
  EXPECT_EQ(c.total_components, 2);
}

TEST(Axes, BaumslagSolitarMonodromies) {
  auto m = mw("AAABaab", 2);
  auto c = classify_cutset(m, parse_word("a", 2));
  EXPECT_EQ(c.kind, CutKind::CutPair);
  std::vector<long> ds;
  for (const auto& q : c.qcomponents) ds.push_back(q.d);
  std::sort(ds.begin(), ds.end());
  EXPECT_EQ(ds, (std::vector<long>{2, 3}));
  EXPECT_EQ(c.total_components, 5);
}

TEST(Axes, NotCutAndUnprepared) {
  EXPECT_EQ(classify_cutset(mw("b, baa, a", 2), parse_word("b", 2)).kind, CutKind::NotCut);
  EXPECT_EQ(classify_cutset(mw("b, baa, a", 2), parse_word("a", 2)).kind, CutKind::CutPoint);
  EXPECT_THROW(classify_cutset(mw("ab", 2), parse_word("a", 2)), Error);
}

TEST(Axes, CrossingCurvesOnSurface) {
  auto m = mw("b, baa", 2);
  auto a = analyze_axis(m, make_class(parse_word("a", 2)));
  auto ba = analyze_axis(m, make_class(parse_word("ba", 2)));
  ASSERT_EQ(a.cut.kind, CutKind::CutPair);
  ASSERT_EQ(ba.cut.kind, CutKind::CutPair);
  bool any = false;
  for (const char* h : {"", "a", "b", "A", "B", "ab", "ba"}) any = any || crosses(a, ba, parse_word(h, 2).letters);
  EXPECT_TRUE(any);
}

TEST(Axes, CandidateBound) {
  EXPECT_EQ(candidate_bound(mw("abAB", 2)), BigInt(257));
  EXPECT_EQ(candidate_bound(mw("ab, ABab", 2)), BigInt(16385));
  EXPECT_EQ(bell_number(4), BigInt(15));
  EXPECT_FALSE(bound_reached(mw("abAB", 2), 12));
  EXPECT_TRUE(bound_reached(mw("abAB", 2), 257));
}

TEST(Axes, ScanFindsSurfaceCurves) {
  auto r = scan_candidates(mw("abAB", 2), 4);
  EXPECT_FALSE(r.cutsets.empty());
  for (const auto& c : r.cutsets) EXPECT_NE(c.kind, CutKind::NotCut);
  EXPECT_FALSE(r.certified);
}

TEST(Axes, VoltageCountsAgreeWithWindowedOracle) {
  std::mt19937 rng(2024);
  int done = 0;
  while (done < 200) {
    int rank = 2 + static_cast<int>(rng() % 2);
    auto m = random_prepared(rng, rank, 1 + static_cast<int>(rng() % 3), 6);
    if (!m) continue;
    ConjClass g = make_class(Word{rank, random_cyclic(rng, rank, 4)});
    auto a = analyze_axis(*m, g);
    for (int N : {1, 2, 3, 4, 6}) {
      ASSERT_EQ(windowed_components(*m, g.letters(), N), predicted_components(a, N)) << to_string(*m) << " axis " << to_string(g) << " N=" << N;
    }
    ++done;
  }
}

TEST(Axes, CrossingIsSymmetric) {
  std::mt19937 rng(99);
  int done = 0;
  while (done < 50) {
    auto m = random_prepared(rng, 2, 1 + static_cast<int>(rng() % 2), 7);
    if (!m) continue;
    auto s = scan_candidates(*m, 4);
    std::vector<AxisAnalysis> pairs;
    for (const auto& c : s.cutsets)
      if (c.kind == CutKind::CutPair) pairs.push_back(analyze_axis(*m, c.root));
    for (std::size_t i = 0; i < pairs.size() && i < 6; ++i)
      for (std::size_t j = 0; j < pairs.size() && j < 6; ++j)
        for (int t = 0; t < 4; ++t) {
          Letters h = free_reduce(random_cyclic(rng, 2, 3));
          EXPECT_NO_THROW(crosses(pairs[i], pairs[j], h)) << to_string(*m);
          EXPECT_EQ(crosses(pairs[i], pairs[j], h), crosses(pairs[j], pairs[i], inverse_letters(h)));
        }
    ++done;
  }
}

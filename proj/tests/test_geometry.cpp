#include <gtest/gtest.h>

#include <jsj/geometry.hpp>
#include <random>

using namespace jsj;

namespace {

Multiword mw(const char* s, int rank) { return parse_multiword(s, rank); }

bool cyclic_equal(const std::vector<int>& a, const std::vector<int>& b) {
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  for (std::size_t s = 0; s < b.size(); ++s) {
    bool ok = true;
    for (std::size_t i = 0; i < a.size() && ok; ++i) ok = a[i] == b[(s + i) % b.size()];
    if (ok) return true;
  }
  return false;
}

// Orientable: the order at x^-1 is the reversed transport of the order at x.
// Reversing: it is the transport itself.
bool consistent(const WhiteheadGraph& g, const std::vector<std::vector<int>>& rot, const std::vector<int>& bits) {
  auto partner = detail::occurrence_pairing(g);
  for (int i = 0; i < g.rank; ++i) {
    std::vector<int> img;
    for (int e : rot[2 * i]) img.push_back(partner[e]);
    if (!bits[i]) std::reverse(img.begin(), img.end());
    if (!cyclic_equal(img, rot[2 * i + 1])) return false;
  }
  return true;
}

// Every rotation system at every vertex, each generator either way.
bool brute_force_geometric(const WhiteheadGraph& g) {
  int nv = 2 * g.rank;
  std::vector<std::vector<int>> ends(nv);
  for (int k = 0; k < static_cast<int>(2 * g.edges.size()); ++k) ends[detail::end_vertex(g, k)].push_back(k);
  std::vector<std::vector<int>> rot(nv);
  std::vector<int> bits(g.rank);
  auto rec = [&](auto&& self, int v) -> bool {
    if (v == nv) {
      if (!is_planar_rotation(g, rot)) return false;
      for (int mask = 0; mask < (1 << g.rank); ++mask) {
        for (int i = 0; i < g.rank; ++i) bits[i] = (mask >> i) & 1;
        if (consistent(g, rot, bits)) return true;
      }
      return false;
    }
    std::vector<int> e = ends[v];
    std::sort(e.begin(), e.end());
    if (e.size() <= 2) {
      rot[v] = e;
      return self(self, v + 1);
    }
    do {
      rot[v] = e;
      if (self(self, v + 1)) return true;
    } while (std::next_permutation(e.begin() + 1, e.end()));
    return false;
  };
  return rec(rec, 0);
}

Multiword random_multiword(std::mt19937& rng, int rank, int count, int maxlen) {
  std::vector<Word> ws;
  std::uniform_int_distribution<int> pick(0, 2 * rank - 1), len(1, maxlen);
  while (static_cast<int>(ws.size()) < count) {
    Letters ls;
    int n = len(rng);
    for (int i = 0; i < n; ++i) ls.push_back(pick(rng));
    Letters c = cyclic_core(free_reduce(ls));
    if (!c.empty()) ws.push_back(Word{rank, c});
  }
  return normalize_multiword(ws, rank);
}

}  // namespace

TEST(Geometry, CommutatorIsOrientable) {
  auto r = is_geometric(mw("abAB", 2));
  ASSERT_TRUE(r.geometric);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_TRUE(r.certificate->orientable());
  EXPECT_TRUE(consistent(whitehead_graph(r.minimal), r.certificate->rotation, r.certificate->reversing));
}

TEST(Geometry, ReversingBit) {
  auto r = is_geometric(mw("AABab", 2));
  ASSERT_TRUE(r.geometric);
  ASSERT_TRUE(r.certificate.has_value());
  EXPECT_EQ(r.certificate->reversing, (std::vector<int>{1, 0}));
}

TEST(Geometry, NotGeometric) {
  EXPECT_FALSE(is_geometric(mw("AAABab", 2)).geometric);
  EXPECT_FALSE(is_geometric(mw("AABAbaBab", 2)).geometric);
}

TEST(Geometry, CircleHasTwoFaces) {
  auto g = whitehead_graph(mw("abAB", 2));
  ASSERT_TRUE(is_circle(g));
  std::vector<std::vector<int>> rot(4);
  for (int k = 0; k < static_cast<int>(2 * g.edges.size()); ++k) rot[detail::end_vertex(g, k)].push_back(k);
  EXPECT_EQ(detail::count_faces(g, rot), 2);
  EXPECT_TRUE(is_planar_rotation(g, rot));
}

TEST(Geometry, OccurrencePairingIsInvolution) {
  auto g = whitehead_graph(mw("AABAbaBab, ab", 2));
  auto p = detail::occurrence_pairing(g);
  for (int k = 0; k < static_cast<int>(p.size()); ++k) {
    EXPECT_EQ(p[p[k]], k);
    EXPECT_EQ(detail::end_vertex(g, p[k]), inv(detail::end_vertex(g, k)));
  }
}

TEST(Geometry, SearchAgreesWithBruteForce) {
  std::mt19937 rng(8);
  int done = 0, yes = 0;
  while (done < 120) {
    auto m = random_multiword(rng, 2, 1 + static_cast<int>(rng() % 2), 6);
    auto mm = minimize(m).minimal;
    auto g = whitehead_graph(mm);
    if (!connectivity(g).connected || g.max_valence() > 5) continue;
    auto cert = find_consistent_embedding(g);
    EXPECT_EQ(cert.has_value(), brute_force_geometric(g)) << to_string(mm);
    if (cert) {
      ++yes;
      EXPECT_TRUE(is_planar_rotation(g, cert->rotation));
      EXPECT_TRUE(consistent(g, cert->rotation, cert->reversing));
    }
    ++done;
  }
  EXPECT_GT(yes, 0);
  EXPECT_LT(yes, done);
}

TEST(Geometry, InvariantUnderRelabelling) {
  std::mt19937 rng(13);
  for (int t = 0; t < 60; ++t) {
    auto m = random_multiword(rng, 2, 1 + t % 2, 7);
    bool base = is_geometric(m).geometric;
    auto p = signed_permutation(2, {make_letter(2, -1), make_letter(1, 1)});
    EXPECT_EQ(is_geometric(apply_automorphism(p, m)).geometric, base) << to_string(m);
    std::vector<Word> inverted;
    for (const auto& c : m.classes) inverted.push_back(inverse(c.rep));
    EXPECT_EQ(is_geometric(normalize_multiword(inverted, 2)).geometric, base) << to_string(m);
  }
}

TEST(Geometry, VirtualGeometry) {
  auto bs = mw("AAABab", 2);
  RJSJConfig cfg;
  auto r = compute_rjsj(bs, cfg);
  EXPECT_TRUE(is_virtually_geometric(bs, r).verdict);
  auto qh = mw("abAB", 2);
  EXPECT_TRUE(is_virtually_geometric(qh, compute_rjsj(qh, cfg)).verdict);
}

TEST(Geometry, BaumslagVirtuallyGeometric) {
  auto m = mw("AABAbaBab", 2);
  RJSJConfig cfg;
  cfg.max_len = 8;
  auto r = compute_rjsj(m, cfg);
  auto v = is_virtually_geometric(m, r);
  EXPECT_TRUE(v.verdict);
  EXPECT_FALSE(is_geometric(m).geometric);
  std::map<int, GeometryReport> certs;
  for (const auto& p : v.pieces) certs[p.id] = *p.geometry;
  auto a = assembly_obstructions(m, r, certs);
  EXPECT_FALSE(a.geometric());
}

TEST(Geometry, MoebiusParity) {
  RotationCertificate c;
  c.rank = 2;
  c.reversing = {1, 0};
  EXPECT_EQ(moebius_parity(c, parse_word("aab", 2).letters), 0);
  EXPECT_EQ(moebius_parity(c, parse_word("ab", 2).letters), 1);
}

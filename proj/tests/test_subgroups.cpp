#include <gtest/gtest.h>

#include <jsj/subgroups.hpp>
#include <jsj/whgraph.hpp>
#include <random>

using namespace jsj;

namespace {

std::vector<Word> words(std::initializer_list<const char*> ss, int rank) {
  std::vector<Word> out;
  for (const char* s : ss) out.push_back(parse_word(s, rank));
  return out;
}

// Replace each letter of u by the corresponding basis word.
Word substitute_by_hand(const std::vector<Word>& basis, int rank, const Word& u) {
  Letters out;
  for (Letter x : u.letters) {
    const Word& b = basis[letter_index(x) - 1];
    out = concat_reduce(out, letter_sign(x) > 0 ? b.letters : inverse_letters(b.letters));
  }
  return Word{rank, out};
}

}  // namespace

TEST(Subgroups, IndexTwo) {
  auto h = stallings_graph(2, words({"aa", "b", "abA"}, 2));
  EXPECT_EQ(h.index(), std::optional<long>(2));
  EXPECT_EQ(h.basis_size(), 3);
  EXPECT_TRUE(h.contains(parse_word("aba", 2)));
  EXPECT_FALSE(h.contains(parse_word("a", 2)));
  EXPECT_FALSE(stallings_graph(2, words({"aa"}, 2)).index().has_value());
}

TEST(Subgroups, ExpressAndEvaluate) {
  auto h = stallings_graph(2, words({"aa", "b", "abA"}, 2));
  for (const char* s : {"aa", "b", "abA", "aabaa", "abAAbA", "Bab"}) {
    Word w = parse_word(s, 2);
    auto e = h.express(w);
    if (!h.contains(w)) {
      EXPECT_FALSE(e.has_value());
      continue;
    }
    ASSERT_TRUE(e.has_value()) << s;
    EXPECT_EQ(h.evaluate(*e), w);
  }
}

TEST(Subgroups, ConjugateInto) {
  auto h = stallings_graph(2, words({"aa", "b"}, 2));
  auto c = h.conjugate_into(parse_word("aba", 2));
  ASSERT_TRUE(c.has_value());
  EXPECT_TRUE(h.contains(c->first));
  EXPECT_TRUE(conjugacy_equal(c->first, parse_word("aba", 2)));
  EXPECT_FALSE(h.contains_conjugate(parse_word("a", 2)));
}

TEST(Subgroups, LiftBaumslagSquare) {
  auto gens = words({"aa", "b", "abA"}, 2);
  auto r = lift_words(2, {parse_word("AABAbaBab", 2)}, gens);
  EXPECT_EQ(r.rank, 3);
  ASSERT_EQ(r.rewrites.size(), 2u);
  std::vector<std::string> spelled;
  for (const auto& w : r.rewrites) spelled.push_back(to_string(w));
  EXPECT_NE(std::find(spelled.begin(), spelled.end(), "ABAcaBcACbCab"), spelled.end());
  for (std::size_t i = 0; i < r.rewrites.size(); ++i)
    EXPECT_EQ(substitute_by_hand(r.basis, 2, r.rewrites[i]), r.elements[i]);
}

TEST(Subgroups, RewriterRoundTripOnRandomBases) {
  std::mt19937 rng(41);
  for (int t = 0; t < 100; ++t) {
    int rank = 2 + t % 2;
    // a random basis of F: images of the generators under random moves
    std::vector<Word> basis;
    for (int i = 1; i <= rank; ++i) basis.push_back(Word{rank, {make_letter(i, 1)}});
    for (int s = 0; s < 4; ++s) {
      Letter a = static_cast<Letter>(rng() % (2 * rank));
      std::uint64_t cut = std::uint64_t{1} << a;
      for (Letter x = 0; x < 2 * rank; ++x)
        if (generator_of(x) != generator_of(a) && (rng() & 1u)) cut |= std::uint64_t{1} << x;
      auto f = whitehead_move(rank, a, cut);
      for (auto& b : basis) b = apply_automorphism(f, b);
    }
    BasisRewriter rw(rank, basis);
    Letters u;
    for (int i = 0; i < 8; ++i) u.push_back(static_cast<Letter>(rng() % (2 * rank)));
    Word uw{rank, free_reduce(u)};
    Word w = substitute_by_hand(basis, rank, uw);
    auto back = rw.express(w);
    ASSERT_TRUE(back.has_value());
    EXPECT_EQ(back->letters, uw.letters);
  }
}

TEST(Subgroups, RewriterRejectsNonFreeBasis) {
  EXPECT_THROW(BasisRewriter(2, words({"a", "aa"}, 2)), Error);
}

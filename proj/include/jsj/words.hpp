#pragma once

// Free group words, conjugacy classes, multiwords and Whitehead automorphisms.
//
// A letter is encoded as 2*(i-1) for the generator x_i and 2*(i-1)+1 for its
// inverse, so inversion is `x ^ 1` and the fixed letter order is
// a < A < b < B < ...

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace jsj {

using Letter = int;
using Letters = std::vector<Letter>;

inline Letter make_letter(int index, int sign) { return 2 * (index - 1) + (sign < 0 ? 1 : 0); }
inline int letter_index(Letter x) { return x / 2 + 1; }
inline int letter_sign(Letter x) { return (x & 1) ? -1 : 1; }
inline Letter inv(Letter x) { return x ^ 1; }
inline Letter generator_of(Letter x) { return x & ~1; }

struct Word {
  int rank = 0;
  Letters letters;

  std::size_t size() const { return letters.size(); }
  bool empty() const { return letters.empty(); }
  Letter operator[](std::size_t i) const { return letters[i]; }
  bool operator==(const Word& o) const = default;
};

// Shortlex order; used wherever a deterministic order of words is needed.
inline bool shortlex_less(const Letters& a, const Letters& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

inline Letters free_reduce(const Letters& in) {
  Letters out;
  out.reserve(in.size());
  for (Letter x : in) {
    if (!out.empty() && out.back() == inv(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline void check_rank(int rank, const Letters& ls) {
  if (rank < 1) throw Error(ErrorKind::RankMismatch, "rank must be positive");
  for (Letter x : ls)
    if (x < 0 || letter_index(x) > rank)
      throw Error(ErrorKind::IndexOutOfRank, "letter index exceeds rank " + std::to_string(rank));
}

inline Word make_word(int rank, const Letters& ls) {
  check_rank(rank, ls);
  return Word{rank, free_reduce(ls)};
}

inline std::string letter_name(int rank, Letter x) {
  int i = letter_index(x);
  bool neg = letter_sign(x) < 0;
  if (rank <= 26) return std::string(1, static_cast<char>((neg ? 'A' : 'a') + i - 1));
  return (neg ? "G" : "g") + std::to_string(i);
}

inline std::string letters_to_string(int rank, const Letters& ls) {
  std::string s;
  for (Letter x : ls) s += letter_name(rank, x);
  return s;
}

inline std::string to_string(const Word& w) { return w.empty() ? "1" : letters_to_string(w.rank, w.letters); }

// Lexical format: a-z generators, A-Z inverses, g<k>/G<k> indexed generators,
// whitespace ignored, "1" or nothing for the identity.
inline Word parse_word(std::string_view text, int rank) {
  Letters ls;
  std::size_t i = 0;
  while (i < text.size()) {
    unsigned char c = static_cast<unsigned char>(text[i]);
    if (std::isspace(c) || (c == '1' && (i == 0 || !std::isdigit(static_cast<unsigned char>(text[i - 1]))))) {
      ++i;
      continue;
    }
    if ((c == 'g' || c == 'G') && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
      std::size_t j = i + 1;
      long k = 0;
      while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) {
        k = k * 10 + (text[j] - '0');
        if (k > 1000000) break;
        ++j;
      }
      if (k < 1) throw Error(ErrorKind::UnknownLetter, "bad indexed generator in '" + std::string(text) + "'");
      if (k > rank) throw Error(ErrorKind::IndexOutOfRank, std::string(text.substr(i, j - i)) + " exceeds rank " + std::to_string(rank));
      ls.push_back(make_letter(static_cast<int>(k), c == 'g' ? 1 : -1));
      i = j;
      continue;
    }
    if (std::islower(c) || std::isupper(c)) {
      int k = std::tolower(c) - 'a' + 1;
      if (k > rank)
        throw Error(ErrorKind::IndexOutOfRank, std::string(1, static_cast<char>(c)) + " exceeds rank " + std::to_string(rank));
      ls.push_back(make_letter(k, std::islower(c) ? 1 : -1));
      ++i;
      continue;
    }
    throw Error(ErrorKind::UnknownLetter, "unexpected character '" + std::string(1, static_cast<char>(c)) + "'");
  }
  return Word{rank, free_reduce(ls)};
}

inline Letters inverse_letters(const Letters& w) {
  Letters r(w.rbegin(), w.rend());
  for (Letter& x : r) x = inv(x);
  return r;
}

inline Word inverse(const Word& w) { return Word{w.rank, inverse_letters(w.letters)}; }

inline Letters concat_reduce(const Letters& a, const Letters& b) {
  Letters out = a;
  for (Letter x : b) {
    if (!out.empty() && out.back() == inv(x))
      out.pop_back();
    else
      out.push_back(x);
  }
  return out;
}

inline Word multiply(const Word& a, const Word& b) {
  if (a.rank != b.rank) throw Error(ErrorKind::RankMismatch, "multiply");
  return Word{a.rank, concat_reduce(a.letters, b.letters)};
}

inline Letters power_letters(const Letters& w, int k) {
  Letters base = k < 0 ? inverse_letters(w) : w;
  Letters out;
  for (int i = 0; i < std::abs(k); ++i) out = concat_reduce(out, base);
  return out;
}

inline Word power(const Word& w, int k) { return Word{w.rank, power_letters(w.letters, k)}; }

inline bool is_cyclically_reduced(const Letters& w) {
  return w.empty() || w.size() == 1 || w.front() != inv(w.back());
}

struct CyclicReduction {
  Word core;
  Word conjugator;  // w = conjugator * core * conjugator^-1
};

inline CyclicReduction cyclic_reduce(const Word& w) {
  if (w.empty()) throw Error(ErrorKind::EmptyWord, "cyclic_reduce of the identity");
  Letters r = free_reduce(w.letters);
  std::size_t i = 0, j = r.size();
  while (j - i >= 2 && r[i] == inv(r[j - 1])) {
    ++i;
    --j;
  }
  return {Word{w.rank, Letters(r.begin() + i, r.begin() + j)}, Word{w.rank, Letters(r.begin(), r.begin() + i)}};
}

inline Letters cyclic_core(const Letters& w) {
  std::size_t i = 0, j = w.size();
  while (j - i >= 2 && w[i] == inv(w[j - 1])) {
    ++i;
    --j;
  }
  return Letters(w.begin() + i, w.begin() + j);
}

// Smallest period p dividing |w| with w = (w[0..p))^(|w|/p).
inline std::size_t primitive_period(const Letters& w) {
  std::size_t n = w.size();
  for (std::size_t p = 1; p < n; ++p) {
    if (n % p) continue;
    bool ok = true;
    for (std::size_t i = p; i < n && ok; ++i) ok = w[i] == w[i - p];
    if (ok) return p;
  }
  return n;
}

struct Root {
  Word root;
  int exponent = 1;
};

inline Root extract_root(const Word& w) {
  if (w.empty()) throw Error(ErrorKind::EmptyWord, "extract_root of the identity");
  if (!is_cyclically_reduced(w.letters)) throw Error(ErrorKind::NotCyclicallyReduced, to_string(w));
  std::size_t p = primitive_period(w.letters);
  return {Word{w.rank, Letters(w.letters.begin(), w.letters.begin() + p)}, static_cast<int>(w.size() / p)};
}

inline Letters rotate_letters(const Letters& w, std::size_t k) {
  Letters r(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) r[i] = w[(i + k) % w.size()];
  return r;
}

inline Letters least_rotation(const Letters& w) {
  Letters best = w;
  for (std::size_t k = 1; k < w.size(); ++k) {
    Letters r = rotate_letters(w, k);
    if (r < best) best = std::move(r);
  }
  return best;
}

// Least rotation of w or of w^-1. w must be cyclically reduced.
inline Letters canonical_cyclic(const Letters& w) {
  Letters a = least_rotation(w);
  Letters b = least_rotation(inverse_letters(w));
  return std::min(a, b);
}

// Conjugacy class of a maximal cyclic subgroup, stored by its canonical
// representative: cyclically reduced, indivisible, least among the rotations
// of itself and of its inverse.
struct ConjClass {
  int rank = 0;
  Word rep;

  std::size_t size() const { return rep.size(); }
  const Letters& letters() const { return rep.letters; }
  bool operator==(const ConjClass& o) const { return rep.letters == o.rep.letters; }
  bool operator<(const ConjClass& o) const { return shortlex_less(rep.letters, o.rep.letters); }
};

inline ConjClass make_class(const Word& w) {
  Letters r = cyclic_core(free_reduce(w.letters));
  if (r.empty()) throw Error(ErrorKind::TrivialWord, "trivial word has no conjugacy class");
  r.resize(primitive_period(r));
  return ConjClass{w.rank, Word{w.rank, canonical_cyclic(r)}};
}

inline std::string to_string(const ConjClass& c) { return to_string(c.rep); }

struct Multiword {
  int rank = 0;
  std::vector<ConjClass> classes;  // sorted shortlex, pairwise distinct

  std::size_t size() const { return classes.size(); }
  bool empty() const { return classes.empty(); }
  bool contains(const ConjClass& c) const { return std::binary_search(classes.begin(), classes.end(), c); }
  int index_of(const ConjClass& c) const {
    auto it = std::lower_bound(classes.begin(), classes.end(), c);
    return (it != classes.end() && *it == c) ? static_cast<int>(it - classes.begin()) : -1;
  }
  std::size_t total_length() const {
    std::size_t s = 0;
    for (const auto& c : classes) s += c.size();
    return s;
  }
  bool operator==(const Multiword& o) const { return rank == o.rank && classes == o.classes; }
};

inline Multiword make_multiword(int rank, std::vector<ConjClass> cs) {
  std::sort(cs.begin(), cs.end());
  cs.erase(std::unique(cs.begin(), cs.end()), cs.end());
  return Multiword{rank, std::move(cs)};
}

inline Multiword normalize_multiword(const std::vector<Word>& words, int rank) {
  std::vector<ConjClass> cs;
  for (const Word& w : words) {
    if (w.rank != rank) throw Error(ErrorKind::RankMismatch, "word rank differs from multiword rank");
    check_rank(rank, w.letters);
    cs.push_back(make_class(w));
  }
  return make_multiword(rank, std::move(cs));
}

inline std::string to_string(const Multiword& m) {
  std::string s = "{";
  for (std::size_t i = 0; i < m.size(); ++i) s += (i ? ", " : "") + to_string(m.classes[i]);
  return s + "}";
}

// Words separated by commas or newlines; '#' starts a comment.
inline std::vector<Word> parse_word_list(std::string_view text, int rank) {
  std::vector<Word> out;
  std::string cur;
  bool comment = false;
  auto flush = [&] {
    bool blank = std::all_of(cur.begin(), cur.end(), [](unsigned char c) { return std::isspace(c); });
    if (!blank) out.push_back(parse_word(cur, rank));
    cur.clear();
  };
  for (char c : text) {
    if (c == '\n') {
      comment = false;
      flush();
    } else if (comment) {
      continue;
    } else if (c == '#') {
      comment = true;
    } else if (c == ',') {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return out;
}

inline Multiword parse_multiword(std::string_view text, int rank) {
  auto ws = parse_word_list(text, rank);
  if (ws.empty()) throw Error(ErrorKind::InvalidInput, "empty multiword");
  return normalize_multiword(ws, rank);
}

inline bool conjugacy_equal(const Word& u, const Word& v) {
  Letters a = cyclic_core(free_reduce(u.letters));
  Letters b = cyclic_core(free_reduce(v.letters));
  if (a.size() != b.size()) return false;
  if (a.empty()) return true;
  return least_rotation(a) == least_rotation(b);
}

// Whitehead automorphisms: either (multiplier a, cut Z) with a in Z and
// a^-1 not in Z, or a signed permutation of the generators.
struct WhAutomorphism {
  enum class Kind { Whitehead, Permutation };
  Kind kind = Kind::Permutation;
  int rank = 0;
  Letter multiplier = 0;
  std::uint64_t cut = 0;  // bit x set iff letter x is in Z
  Letters images;         // permutation: image letter of each generator

  bool in_cut(Letter x) const { return (cut >> x) & 1u; }
  bool operator==(const WhAutomorphism& o) const = default;
};

inline WhAutomorphism whitehead_move(int rank, Letter a, std::uint64_t cut) {
  if (2 * rank > 64) throw Error(ErrorKind::RankMismatch, "Whitehead moves limited to rank 32");
  if (!((cut >> a) & 1u) || ((cut >> inv(a)) & 1u))
    throw Error(ErrorKind::InvalidInput, "cut must contain the multiplier but not its inverse");
  WhAutomorphism f;
  f.kind = WhAutomorphism::Kind::Whitehead;
  f.rank = rank;
  f.multiplier = a;
  f.cut = cut;
  return f;
}

inline WhAutomorphism signed_permutation(int rank, const Letters& images) {
  std::vector<bool> seen(rank, false);
  if (static_cast<int>(images.size()) != rank) throw Error(ErrorKind::RankMismatch, "permutation size");
  for (Letter x : images) {
    int i = letter_index(x) - 1;
    if (i < 0 || i >= rank || seen[i]) throw Error(ErrorKind::InvalidInput, "not a signed permutation");
    seen[i] = true;
  }
  WhAutomorphism f;
  f.kind = WhAutomorphism::Kind::Permutation;
  f.rank = rank;
  f.images = images;
  return f;
}

inline WhAutomorphism inverse(const WhAutomorphism& f) {
  if (f.kind == WhAutomorphism::Kind::Whitehead) {
    std::uint64_t z = f.cut & ~(std::uint64_t{1} << f.multiplier);
    z |= std::uint64_t{1} << inv(f.multiplier);
    return whitehead_move(f.rank, inv(f.multiplier), z);
  }
  Letters im(f.rank);
  for (int i = 0; i < f.rank; ++i) {
    Letter y = f.images[i];
    Letter x = make_letter(i + 1, 1);
    im[letter_index(y) - 1] = letter_sign(y) > 0 ? x : inv(x);
  }
  return signed_permutation(f.rank, im);
}

// Image of a single letter, not yet reduced against its neighbours.
inline void append_image(const WhAutomorphism& f, Letter x, Letters& out) {
  if (f.kind == WhAutomorphism::Kind::Permutation) {
    Letter y = f.images[letter_index(x) - 1];
    out.push_back(letter_sign(x) > 0 ? y : inv(y));
    return;
  }
  Letter a = f.multiplier;
  if (generator_of(x) == generator_of(a)) {
    out.push_back(x);
    return;
  }
  Letter g = generator_of(x);
  bool left = f.in_cut(inv(g)), right = f.in_cut(g);
  if (letter_sign(x) > 0) {
    if (left) out.push_back(inv(a));
    out.push_back(g);
    if (right) out.push_back(a);
  } else {
    if (right) out.push_back(inv(a));
    out.push_back(x);
    if (left) out.push_back(a);
  }
}

inline Letters apply_letters(const WhAutomorphism& f, const Letters& w) {
  Letters raw;
  raw.reserve(w.size() * 3);
  for (Letter x : w) append_image(f, x, raw);
  return free_reduce(raw);
}

inline Word apply_automorphism(const WhAutomorphism& f, const Word& w) {
  if (f.rank != w.rank) throw Error(ErrorKind::RankMismatch, "automorphism and word ranks differ");
  return Word{w.rank, apply_letters(f, w.letters)};
}

inline Multiword apply_automorphism(const WhAutomorphism& f, const Multiword& m) {
  if (f.rank != m.rank) throw Error(ErrorKind::RankMismatch, "automorphism and multiword ranks differ");
  std::vector<ConjClass> cs;
  cs.reserve(m.size());
  for (const auto& c : m.classes) cs.push_back(make_class(apply_automorphism(f, c.rep)));
  return make_multiword(m.rank, std::move(cs));
}

inline std::string to_string(const WhAutomorphism& f) {
  if (f.kind == WhAutomorphism::Kind::Permutation) {
    std::string s = "perm(";
    for (int i = 0; i < f.rank; ++i)
      s += (i ? "," : "") + letter_name(f.rank, make_letter(i + 1, 1)) + "->" + letter_name(f.rank, f.images[i]);
    return s + ")";
  }
  std::string s = "wh(" + letter_name(f.rank, f.multiplier) + ";";
  for (Letter x = 0; x < 2 * f.rank; ++x)
    if (f.in_cut(x)) s += letter_name(f.rank, x);
  return s + ")";
}

}  // namespace jsj

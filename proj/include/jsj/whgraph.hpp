#pragma once

// Classical Whitehead graphs, Whitehead minimization and circle recognition.

#include <map>
#include <numeric>
#include <sstream>

#include "words.hpp"

namespace jsj {

struct WhEdge {
  Letter u = 0;  // inverse of the letter at `pos`
  Letter v = 0;  // the letter at `pos + 1` (cyclically)
  int cls = 0;   // index of the class in the multiword
  int pos = 0;
};

struct WhiteheadGraph {
  int rank = 0;
  std::vector<WhEdge> edges;

  int vertex_count() const { return 2 * rank; }
  std::vector<int> valences() const {
    std::vector<int> val(2 * rank, 0);
    for (const auto& e : edges) {
      ++val[e.u];
      ++val[e.v];
    }
    return val;
  }
  int max_valence() const {
    auto v = valences();
    return v.empty() ? 0 : *std::max_element(v.begin(), v.end());
  }
};

inline WhiteheadGraph whitehead_graph(const Multiword& m) {
  WhiteheadGraph g{m.rank, {}};
  for (std::size_t c = 0; c < m.size(); ++c) {
    const Letters& w = m.classes[c].letters();
    std::size_t n = w.size();
    for (std::size_t i = 0; i < n; ++i)
      g.edges.push_back({inv(w[i]), w[(i + 1) % n], static_cast<int>(c), static_cast<int>(i)});
  }
  return g;
}

namespace detail {

struct UnionFind {
  std::vector<int> p;
  explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
  int find(int x) {
    while (p[x] != x) x = p[x] = p[p[x]];
    return x;
  }
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a < b) std::swap(a, b);
    p[a] = b;
    return true;
  }
};

inline int count_components(const WhiteheadGraph& g, int removed) {
  UnionFind uf(g.vertex_count());
  for (const auto& e : g.edges)
    if (e.u != removed && e.v != removed) uf.unite(e.u, e.v);
  int k = 0;
  for (int x = 0; x < g.vertex_count(); ++x)
    if (x != removed && uf.find(x) == x) ++k;
  return k;
}

}  // namespace detail

struct ConnectivityReport {
  bool connected = false;
  std::vector<std::vector<Letter>> components;
  std::vector<Letter> cut_vertices;
};

inline ConnectivityReport connectivity(const WhiteheadGraph& g) {
  ConnectivityReport r;
  int n = g.vertex_count();
  detail::UnionFind uf(n);
  for (const auto& e : g.edges) uf.unite(e.u, e.v);
  std::map<int, std::vector<Letter>> comps;
  for (int x = 0; x < n; ++x) comps[uf.find(x)].push_back(x);
  for (auto& [root, vs] : comps) r.components.push_back(vs);
  r.connected = r.components.size() == 1;
  int base = static_cast<int>(r.components.size());
  for (int x = 0; x < n; ++x) {
    bool isolated = std::none_of(g.edges.begin(), g.edges.end(), [&](const WhEdge& e) { return e.u == x || e.v == x; });
    if (isolated) continue;
    if (detail::count_components(g, x) > base) r.cut_vertices.push_back(x);
  }
  return r;
}

// A connected graph in which every one of the 2n vertices has valence two.
inline bool is_circle(const WhiteheadGraph& g) {
  auto val = g.valences();
  if (val.empty()) return false;
  for (int v : val)
    if (v != 2) return false;
  return detail::count_components(g, -1) == 1;
}

inline bool is_prepared(const WhiteheadGraph& g) {
  auto r = connectivity(g);
  return r.connected && r.cut_vertices.empty();
}

inline std::size_t cyclic_length_after(const WhAutomorphism& f, const Multiword& m) {
  std::size_t s = 0;
  for (const auto& c : m.classes) s += cyclic_core(apply_letters(f, c.letters())).size();
  return s;
}

// All non-trivial Whitehead moves (multiplier, cut) in canonical order.
template <class Fn>
void for_each_whitehead_move(int rank, Fn&& fn) {
  int n = 2 * rank;
  for (Letter a = 0; a < n; ++a) {
    std::vector<Letter> others;
    for (Letter x = 0; x < n; ++x)
      if (generator_of(x) != generator_of(a)) others.push_back(x);
    std::uint64_t full = (std::uint64_t{1} << others.size()) - 1;
    for (std::uint64_t s = 1; s < full; ++s) {
      std::uint64_t cut = std::uint64_t{1} << a;
      for (std::size_t k = 0; k < others.size(); ++k)
        if ((s >> k) & 1u) cut |= std::uint64_t{1} << others[k];
      if (!fn(whitehead_move(rank, a, cut))) return;
    }
  }
}

struct MinimizeResult {
  Multiword minimal;
  std::vector<WhAutomorphism> moves;
};

// Steepest descent on total cyclic length; ties go to the first move in
// canonical order.
inline MinimizeResult minimize(const Multiword& m) {
  MinimizeResult r{m, {}};
  if (m.rank < 2) return r;
  std::size_t cur = m.total_length();
  for (;;) {
    std::size_t best = cur;
    WhAutomorphism best_move;
    for_each_whitehead_move(m.rank, [&](const WhAutomorphism& f) {
      std::size_t len = cyclic_length_after(f, r.minimal);
      if (len < best) {
        best = len;
        best_move = f;
      }
      return true;
    });
    if (best >= cur) break;
    r.minimal = apply_automorphism(best_move, r.minimal);
    r.moves.push_back(best_move);
    cur = best;
  }
  return r;
}

inline bool is_minimal(const Multiword& m) {
  std::size_t cur = m.total_length();
  bool minimal = true;
  if (m.rank < 2) return true;
  for_each_whitehead_move(m.rank, [&](const WhAutomorphism& f) {
    if (cyclic_length_after(f, m) < cur) minimal = false;
    return minimal;
  });
  return minimal;
}

inline Word apply_moves(const std::vector<WhAutomorphism>& moves, Word w) {
  for (const auto& f : moves) w = apply_automorphism(f, w);
  return w;
}

inline Word apply_moves_inverse(const std::vector<WhAutomorphism>& moves, Word w) {
  for (auto it = moves.rbegin(); it != moves.rend(); ++it) w = apply_automorphism(inverse(*it), w);
  return w;
}

// Free factors visible in a disconnected Whitehead graph of a minimal
// multiword: generator groups plus the classes living on each group.
struct FreeFactor {
  std::vector<int> generators;  // 1-based generator indices
  std::vector<ConjClass> classes;
};

inline std::vector<FreeFactor> visible_free_factors(const Multiword& m) {
  auto g = whitehead_graph(m);
  detail::UnionFind uf(2 * m.rank);
  for (const auto& e : g.edges) uf.unite(e.u, e.v);
  for (int i = 0; i < m.rank; ++i) uf.unite(2 * i, 2 * i + 1);
  std::map<int, FreeFactor> by_root;
  for (int i = 0; i < m.rank; ++i) by_root[uf.find(2 * i)].generators.push_back(i + 1);
  for (const auto& c : m.classes) by_root[uf.find(c.letters()[0])].classes.push_back(c);
  std::vector<FreeFactor> out;
  for (auto& [r, f] : by_root) out.push_back(std::move(f));
  return out;
}

// Restrict a factor to a multiword over its own generators, renumbered 1..k.
inline Multiword factor_multiword(const FreeFactor& f) {
  std::map<int, int> ren;
  for (std::size_t k = 0; k < f.generators.size(); ++k) ren[f.generators[k]] = static_cast<int>(k) + 1;
  int r = static_cast<int>(f.generators.size());
  std::vector<Word> ws;
  for (const auto& c : f.classes) {
    Letters ls;
    for (Letter x : c.letters()) ls.push_back(make_letter(ren.at(letter_index(x)), letter_sign(x)));
    ws.push_back(Word{r, ls});
  }
  return normalize_multiword(ws, r);
}

inline std::string to_dot(const WhiteheadGraph& g) {
  std::ostringstream os;
  os << "graph whitehead {\n";
  for (Letter x = 0; x < g.vertex_count(); ++x) os << "  " << letter_name(g.rank, x) << ";\n";
  for (const auto& e : g.edges)
    os << "  " << letter_name(g.rank, e.u) << " -- " << letter_name(g.rank, e.v) << " [prov=\"w" << e.cls << ":" << e.pos
       << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace jsj

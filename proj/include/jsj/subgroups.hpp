#pragma once

// Stallings graphs of finitely generated subgroups of F.

#include <deque>
#include <optional>
#include <tuple>

#include "words.hpp"

namespace jsj {

class SubgroupGraph {
 public:
  explicit SubgroupGraph(int rank) : rank_(rank) { new_vertex(); }

  // Folded graph of the subgroup generated by `gens`.
  static SubgroupGraph from_generators(int rank, const std::vector<Word>& gens) {
    SubgroupGraph g(rank);
    for (const auto& w : gens) g.add_loop(w.letters);
    g.finish();
    return g;
  }

  // Folded graph from an arbitrary labeled graph (vertex 0 is the base).
  struct RawEdge {
    int from, to;
    Letter label;
  };
  static SubgroupGraph from_edges(int rank, int vertices, const std::vector<RawEdge>& edges) {
    SubgroupGraph g(rank);
    for (int i = 1; i < vertices; ++i) g.new_vertex();
    for (const auto& e : edges) g.add_edge(e.from, e.label, e.to);
    g.finish();
    return g;
  }

  int rank() const { return rank_; }
  int vertex_count() const { return static_cast<int>(out_.size()); }
  int target(int v, Letter x) const { return out_[v][x]; }
  int edge_count() const {
    int s = 0;
    for (const auto& row : out_)
      for (int t : row) s += t >= 0;
    return s / 2;
  }
  int basis_size() const { return edge_count() - vertex_count() + 1; }
  const std::vector<Word>& basis() const { return basis_; }
  const std::vector<Word>& transversal() const { return path_; }

  std::optional<long> index() const {
    for (const auto& row : out_)
      for (int t : row)
        if (t < 0) return std::nullopt;
    return vertex_count();
  }

  // Vertex reached from v by reading w, or -1.
  int read(int v, const Letters& w) const {
    for (Letter x : w) {
      if (v < 0) return -1;
      v = out_[v][x];
    }
    return v;
  }

  bool contains(const Word& w) const { return read(0, free_reduce(w.letters)) == 0; }

  // Rewrite a member in the basis; basis element k is generator k+1.
  std::optional<Word> express(const Word& w) const {
    int r = static_cast<int>(basis_.size());
    Letters out;
    int v = 0;
    for (Letter x : free_reduce(w.letters)) {
      int t = out_[v][x];
      if (t < 0) return std::nullopt;
      int b = edge_basis_[v][x];
      if (b != 0) out.push_back(b > 0 ? make_letter(b, 1) : make_letter(-b, -1));
      v = t;
    }
    if (v != 0) return std::nullopt;
    return Word{std::max(r, 1), free_reduce(out)};
  }

  // Substitute basis words for the letters of a word over the basis.
  Word evaluate(const Word& u) const {
    Letters out;
    for (Letter x : u.letters) {
      const Letters& b = basis_.at(letter_index(x) - 1).letters;
      out = concat_reduce(out, letter_sign(x) > 0 ? b : inverse_letters(b));
    }
    return Word{rank_, out};
  }

  // Is some conjugate of the cyclic word w a loop somewhere in the graph?
  bool contains_conjugate(const Word& w) const { return conjugating_vertex(w) >= 0; }

  // Vertex v such that the cyclic reduction of w reads a loop at v, or -1.
  int conjugating_vertex(const Word& w) const {
    Letters c = cyclic_core(free_reduce(w.letters));
    if (c.empty()) return 0;
    for (int v = 0; v < vertex_count(); ++v)
      if (read(v, c) == v) return v;
    return -1;
  }

  // A conjugate of w lying in the subgroup, with its conjugator, when the
  // core of the graph carries w as a closed path.
  std::optional<std::pair<Word, Word>> conjugate_into(const Word& w) const {
    Word core = Word{w.rank, cyclic_core(free_reduce(w.letters))};
    int v = conjugating_vertex(core);
    if (v < 0) return std::nullopt;
    const Word& p = path_[v];
    Word elt{rank_, concat_reduce(concat_reduce(p.letters, core.letters), inverse_letters(p.letters))};
    return std::make_pair(elt, p);
  }

 private:
  int rank_;
  std::vector<std::vector<int>> out_;
  std::vector<int> parent_;
  std::vector<Word> basis_;
  std::vector<Word> path_;
  std::vector<std::vector<int>> edge_basis_;  // +k / -k basis letter, 0 on tree edges

  int new_vertex() {
    out_.push_back(std::vector<int>(2 * rank_, -1));
    parent_.push_back(static_cast<int>(parent_.size()));
    return static_cast<int>(out_.size()) - 1;
  }

  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }

  void add_edge(int v, Letter x, int w) {
    v = find(v);
    w = find(w);
    if (out_[v][x] >= 0) {
      int t = find(out_[v][x]);
      if (t != w) merge(t, w);
      return;
    }
    if (out_[w][inv(x)] >= 0) {
      int t = find(out_[w][inv(x)]);
      if (t != v) merge(t, v);
      return;
    }
    out_[v][x] = w;
    out_[w][inv(x)] = v;
  }

  void merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    std::vector<std::pair<Letter, int>> moved;
    for (Letter y = 0; y < 2 * rank_; ++y) {
      if (out_[b][y] < 0) continue;
      int c = find(out_[b][y]);
      out_[b][y] = -1;
      if (c != b && out_[c][inv(y)] >= 0 && find(out_[c][inv(y)]) == b) out_[c][inv(y)] = -1;
      moved.push_back({y, c});
    }
    parent_[b] = a;
    for (auto [y, c] : moved) add_edge(a, y, find(c));
  }

  void add_loop(const Letters& raw) {
    Letters w = free_reduce(raw);
    if (w.empty()) return;
    int v = 0;
    for (std::size_t i = 0; i < w.size(); ++i) {
      int t = (i + 1 == w.size()) ? 0 : -1;
      int cur = find(v);
      int existing = out_[cur][w[i]];
      if (t < 0) {
        if (existing >= 0) {
          v = find(existing);
          continue;
        }
        t = new_vertex();
      }
      add_edge(cur, w[i], t);
      v = find(t);
    }
  }

  // Compact to root vertices, renumber breadth-first from the base, and
  // extract the spanning-tree basis.
  void finish() {
    int n = static_cast<int>(out_.size());
    std::vector<int> order, id(n, -1);
    int base = find(0);
    std::deque<int> q{base};
    id[base] = 0;
    order.push_back(base);
    std::vector<int> tree_from(n, -1);
    std::vector<Letter> tree_letter(n, -1);
    while (!q.empty()) {
      int v = q.front();
      q.pop_front();
      for (Letter x = 0; x < 2 * rank_; ++x) {
        if (out_[v][x] < 0) continue;
        int t = find(out_[v][x]);
        if (id[t] >= 0) continue;
        id[t] = static_cast<int>(order.size());
        order.push_back(t);
        tree_from[t] = v;
        tree_letter[t] = x;
        q.push_back(t);
      }
    }
    int m = static_cast<int>(order.size());
    std::vector<std::vector<int>> out(m, std::vector<int>(2 * rank_, -1));
    for (int k = 0; k < m; ++k)
      for (Letter x = 0; x < 2 * rank_; ++x)
        if (out_[order[k]][x] >= 0) out[k][x] = id[find(out_[order[k]][x])];
    path_.assign(m, Word{rank_, {}});
    std::vector<int> tparent(m, -1);
    std::vector<Letter> tletter(m, -1);
    for (int k = 1; k < m; ++k) {
      tparent[k] = id[tree_from[order[k]]];
      tletter[k] = tree_letter[order[k]];
      path_[k] = Word{rank_, path_[tparent[k]].letters};
      path_[k].letters.push_back(tletter[k]);
    }
    out_ = std::move(out);
    parent_.resize(m);
    std::iota(parent_.begin(), parent_.end(), 0);
    edge_basis_.assign(m, std::vector<int>(2 * rank_, 0));
    basis_.clear();
    for (int v = 0; v < m; ++v)
      for (Letter x = 0; x < 2 * rank_; x += 2) {
        int t = out_[v][x];
        if (t < 0) continue;
        bool tree = (tparent[t] == v && tletter[t] == x) || (tparent[v] == t && tletter[v] == inv(x));
        if (tree || edge_basis_[v][x] != 0) continue;
        basis_.push_back(Word{rank_, concat_reduce(concat_reduce(path_[v].letters, {x}), inverse_letters(path_[t].letters))});
        int k = static_cast<int>(basis_.size());
        edge_basis_[v][x] = k;
        edge_basis_[t][inv(x)] = -k;
      }
  }
};

// Rewrites elements of a subgroup in a prescribed free basis. Folding keeps,
// on every edge, a tag in the free group on the basis so that the product of
// tags along a closed path at the base spells the element in that basis.
class BasisRewriter {
 public:
  BasisRewriter(int rank, const std::vector<Word>& basis) : rank_(rank), k_(static_cast<int>(basis.size())) {
    int n = 1;
    for (int i = 0; i < k_; ++i) {
      Letters w = free_reduce(basis[i].letters);
      if (w.empty()) throw Error(ErrorKind::RewriteFailure, "trivial basis element");
      int v = 0;
      for (std::size_t j = 0; j < w.size(); ++j) {
        int t = (j + 1 == w.size()) ? 0 : n++;
        Letters tag;
        if (j == 0) tag.push_back(make_letter(i + 1, 1));
        edges_.push_back({v, w[j], t, tag});
        v = t;
      }
    }
    fold_all(n);
    out_.assign(n, std::vector<int>(2 * rank_, -1));
    for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
      out_[edges_[e].u][edges_[e].x] = 2 * e;
      out_[edges_[e].v][inv(edges_[e].x)] = 2 * e + 1;
    }
  }

  int basis_rank() const { return k_; }

  std::optional<Word> express(const Word& w) const {
    int v = 0;
    Letters acc;
    for (Letter x : free_reduce(w.letters)) {
      int h = out_[v][x];
      if (h < 0) return std::nullopt;
      const Edge& e = edges_[h / 2];
      acc = concat_reduce(acc, h % 2 ? inverse_letters(e.tag) : e.tag);
      v = h % 2 ? e.u : e.v;
    }
    if (v != 0) return std::nullopt;
    return Word{std::max(k_, 1), acc};
  }

 private:
  struct Edge {
    int u;
    Letter x;
    int v;
    Letters tag;
  };
  int rank_, k_;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;  // half-edge 2e (forward) or 2e+1 (backward)

  // Change of gauge at z by gamma: outgoing tags t -> gamma^-1 t, incoming
  // tags t -> t gamma.
  void gauge(int z, const Letters& gamma) {
    Letters gi = inverse_letters(gamma);
    for (auto& e : edges_) {
      if (e.u == z) e.tag = concat_reduce(gi, e.tag);
      if (e.v == z) e.tag = concat_reduce(e.tag, gamma);
    }
  }

  void fold_all(int n) {
    for (;;) {
      // half-edges leaving each vertex: (edge, backward)
      std::vector<std::vector<std::pair<int, bool>>> at(static_cast<std::size_t>(n) * 2 * rank_);
      for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
        at[edges_[e].u * 2 * rank_ + edges_[e].x].push_back({e, false});
        at[edges_[e].v * 2 * rank_ + inv(edges_[e].x)].push_back({e, true});
      }
      bool changed = false;
      for (auto& slot : at) {
        if (slot.size() < 2) continue;
        auto [e1, b1] = slot[0];
        auto [e2, b2] = slot[1];
        if (e1 == e2) continue;  // a loop read both ways
        auto far = [&](int e, bool b) { return b ? edges_[e].u : edges_[e].v; };
        auto tag = [&](int e, bool b) { return b ? inverse_letters(edges_[e].tag) : edges_[e].tag; };
        int w1 = far(e1, b1), w2 = far(e2, b2);
        if (w2 == 0) {
          std::swap(e1, e2);
          std::swap(b1, b2);
          std::swap(w1, w2);
        }
        if (w1 == w2) {
          if (tag(e1, b1) != tag(e2, b2)) throw Error(ErrorKind::RewriteFailure, "elements do not form a free basis");
        } else {
          gauge(w2, concat_reduce(inverse_letters(tag(e2, b2)), tag(e1, b1)));
          for (auto& e : edges_) {
            if (e.u == w2) e.u = w1;
            if (e.v == w2) e.v = w1;
          }
        }
        edges_.erase(edges_.begin() + e2);
        changed = true;
        break;
      }
      if (!changed) break;
    }
  }
};

inline SubgroupGraph stallings_graph(int rank, const std::vector<Word>& gens) {
  return SubgroupGraph::from_generators(rank, gens);
}

inline std::optional<Word> express_in_basis(const SubgroupGraph& h, const Word& w) { return h.express(w); }

inline std::optional<long> index(const SubgroupGraph& h) { return h.index(); }

struct LiftResult {
  int rank = 0;                // rank of the subgroup
  std::vector<Word> basis;     // basis words in F
  Multiword lifted;            // multiword over the basis
  std::vector<Word> elements;  // f_i w_j^a f_i^-1 in F, one per (coset, class)
  std::vector<Word> rewrites;  // the same elements spelled in the basis
};

// Lift words to a finite index subgroup: for every coset f and word w, the
// least power with f w^a f^-1 in the subgroup. The generators are used as the
// basis when they are free; otherwise the spanning-tree basis.
inline LiftResult lift_words(int rank, const std::vector<Word>& ws, const std::vector<Word>& gens) {
  SubgroupGraph h = stallings_graph(rank, gens);
  auto k = h.index();
  if (!k) throw Error(ErrorKind::InfiniteIndex, "lifting needs a finite index subgroup");
  LiftResult r;
  std::optional<BasisRewriter> given;
  if (static_cast<int>(gens.size()) == h.basis_size()) {
    given.emplace(rank, gens);
    r.basis = gens;
  } else {
    r.basis = h.basis();
  }
  r.rank = static_cast<int>(r.basis.size());
  std::vector<Word> words;
  for (int v = 0; v < h.vertex_count(); ++v) {
    const Word& f = h.transversal()[v];
    for (const auto& w : ws) {
      int a = 0, cur = v;
      do {
        cur = h.read(cur, w.letters);
        ++a;
      } while (cur != v);
      Letters e = concat_reduce(concat_reduce(f.letters, power_letters(w.letters, a)), inverse_letters(f.letters));
      Word elt{rank, e};
      r.elements.push_back(elt);
      auto ex = given ? given->express(elt) : h.express(elt);
      if (!ex) throw Error(ErrorKind::RewriteFailure, "lifted element not in subgroup");
      ex->rank = std::max(r.rank, 1);
      r.rewrites.push_back(*ex);
      words.push_back(*ex);
    }
  }
  r.lifted = normalize_multiword(words, std::max(r.rank, 1));
  return r;
}

inline LiftResult lift_multiword(const Multiword& m, const std::vector<Word>& gens) {
  std::vector<Word> ws;
  for (const auto& c : m.classes) ws.push_back(c.rep);
  return lift_words(m.rank, ws, gens);
}

}  // namespace jsj

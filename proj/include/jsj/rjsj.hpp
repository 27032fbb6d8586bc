#pragma once

// Relative cyclic JSJ decompositions.
//
// The collection of cut points and uncrossed cut pairs defines a bipartite
// tree: Type 1 vertices are translates of the collection axes, Type 2
// vertices are maximal sets of pattern lines and collection axes not
// separated by any translate. Stabilizers of Type 2 vertices are found by
// walking the Cayley tree along member lines; two tree vertices carrying the
// same local member data lie in one orbit of the stabilizer, so the walk
// closes up into a finite graph whose fundamental group is the stabilizer.

#include <chrono>
#include <functional>
#include <map>
#include <set>

#include "axes.hpp"
#include "subgroups.hpp"

namespace jsj {

enum class PieceClass { Rigid, QHSurface, Undetermined };

inline const char* piece_class_name(PieceClass c) {
  switch (c) {
    case PieceClass::Rigid: return "rigid";
    case PieceClass::QHSurface: return "qh-surface";
    case PieceClass::Undetermined: return "undetermined";
  }
  return "";
}

struct CyclicVertex {
  int id = 0;
  ConjClass root;
  bool in_multiword = false;
};

struct NoncyclicVertex {
  int id = 0;
  std::vector<Word> basis;  // words in F
  Multiword induced;        // over the basis
  PieceClass cls = PieceClass::Undetermined;
  bool certified = false;   // rigid verdict reached the candidate bound

  int rank() const { return static_cast<int>(basis.size()); }
};

struct GogEdge {
  int cyclic = 0;
  int noncyclic = 0;
  int degree = 1;
  ConjClass image;  // over the basis of the non-cyclic vertex
  Word image_f;     // the edge group generator in F
};

struct GraphOfGroups {
  int rank = 0;
  std::vector<CyclicVertex> cyclic;
  std::vector<NoncyclicVertex> noncyclic;
  std::vector<GogEdge> edges;

  bool trivial() const { return cyclic.empty() && noncyclic.size() <= 1; }
  const NoncyclicVertex& vertex(int id) const {
    for (const auto& v : noncyclic)
      if (v.id == id) return v;
    throw Error(ErrorKind::InvalidInput, "no non-cyclic vertex " + std::to_string(id));
  }
  const CyclicVertex& cyclic_vertex(int id) const {
    for (const auto& v : cyclic)
      if (v.id == id) return v;
    throw Error(ErrorKind::InvalidInput, "no cyclic vertex " + std::to_string(id));
  }
};

enum class Outcome { Rigid, QHSurface, Decomposition };

inline const char* outcome_name(Outcome o) {
  switch (o) {
    case Outcome::Rigid: return "rigid";
    case Outcome::QHSurface: return "qh-surface";
    case Outcome::Decomposition: return "decomposition";
  }
  return "";
}

struct RJSJConfig {
  int max_len = 12;
  bool require_certified = false;
  int stabilizer_cap = 0;  // 0: derived from max_len, or JSJ_MAX_STABILIZER_LEN
};

struct RJSJResult {
  Outcome outcome = Outcome::Rigid;
  bool certified = false;
  int scan_length = 0;
  Multiword input;
  GraphOfGroups graph;  // in the coordinates of the input
};

// ---------------------------------------------------------------------------
// Uncrossed collection

// Cut points, cut pairs with three or more components, and two-component cut
// pairs crossed by no translate of a scanned cut pair through their axis.
inline std::vector<CutSet> select_uncrossed(const Multiword& m, const std::vector<CutSet>& cutsets) {
  std::vector<AxisAnalysis> pairs;
  for (const auto& c : cutsets)
    if (c.kind == CutKind::CutPair) pairs.push_back(analyze_axis(m, c.root));
  std::vector<CutSet> out;
  for (const auto& c : cutsets) {
    if (c.kind == CutKind::NotCut) continue;
    if (c.kind == CutKind::CutPoint || c.total_components >= 3) {
      out.push_back(c);
      continue;
    }
    AxisAnalysis a = analyze_axis(m, c.root);
    const Letters& g = a.base.letters();
    bool crossed = false;
    for (const auto& b : pairs) {
      const Letters& h = b.base.letters();
      for (std::size_t j = 0; j < g.size() && !crossed; ++j)
        for (std::size_t t = 0; t < h.size() && !crossed; ++t) {
          Letters pos = concat_reduce(Letters(g.begin(), g.begin() + j), inverse_letters(Letters(h.begin(), h.begin() + t)));
          crossed = crosses(a, b, pos);
        }
      if (crossed) break;
    }
    if (!crossed) out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Type 2 stabilizers

namespace detail {

// A line through a Cayley tree vertex v: a pattern line (type 0, class idx) or
// a collection axis (type 1, root idx), read from v at `phase`. Axes carry
// the side (comp, res) of the Type 2 vertex, relative to the translate
// v * prefix(phase)^-1 of the axis.
struct LineRef {
  int type = 0;
  int idx = 0;
  int phase = 0;
  int comp = -1;
  long res = 0;
  auto operator<=>(const LineRef&) const = default;
};

struct PieceData {
  SubgroupGraph stab{1};
  std::map<std::pair<int, int>, Word> attachments;  // (root, comp) -> edge group generator
  std::map<int, Word> classes;                      // class -> element of the stabilizer
};

class Explorer {
 public:
  Explorer(const Multiword& m, const std::vector<AxisAnalysis>& axes, int cap)
      : m_(m), axes_(axes), cap_(cap), skip_(m.size(), false) {
    for (const auto& a : axes_) {
      int j = m_.index_of(a.base);
      if (j >= 0) skip_[j] = true;
    }
  }

  bool is_root_class(int j) const { return skip_[j]; }

  PieceData explore(const LineRef& seed) const {
    struct Node {
      Letters u;
      std::vector<LineRef> members;
    };
    std::vector<Node> nodes;
    std::map<std::vector<LineRef>, int> by_sig;
    std::vector<SubgroupGraph::RawEdge> raw;
    auto seed_members = members_at({}, seed);
    by_sig[seed_members] = 0;
    nodes.push_back({{}, seed_members});
    for (std::size_t k = 0; k < nodes.size(); ++k) {
      Letters u = nodes[k].u;
      std::vector<LineRef> mem = nodes[k].members;
      std::set<Letter> done;
      for (const auto& x : mem) {
        for (int dir : {1, -1}) {
          LineRef y = x;
          Letter step = advance(y, dir);
          if (!done.insert(step).second) continue;
          Letters v = concat_reduce(u, {step});
          auto sig = members_at(v, y);
          auto it = by_sig.find(sig);
          int target;
          if (it == by_sig.end()) {
            if (static_cast<int>(nodes.size()) >= node_cap() || static_cast<int>(v.size()) > cap_)
              throw Error(ErrorKind::StabilizerSearchExhausted,
                          "stabilizer walk exceeded its cap of " + std::to_string(cap_));
            target = static_cast<int>(nodes.size());
            by_sig.emplace(sig, target);
            nodes.push_back({v, sig});
          } else {
            target = it->second;
          }
          raw.push_back({static_cast<int>(k), target, step});
        }
      }
    }
    PieceData d;
    d.stab = SubgroupGraph::from_edges(m_.rank, static_cast<int>(nodes.size()), raw);
    for (const auto& n : nodes)
      for (const auto& x : n.members) {
        Letters h = conj_at(n.u, x);
        if (x.type == 0) {
          if (!d.classes.count(x.idx)) d.classes[x.idx] = conjugate(h, word(x));
        } else {
          auto key = std::make_pair(x.idx, x.comp);
          if (!d.attachments.count(key)) {
            long deg = axes_[x.idx].d[x.comp];
            d.attachments[key] = conjugate(h, power_letters(word(x), static_cast<int>(deg)));
          }
        }
      }
    return d;
  }

 private:
  const Multiword& m_;
  const std::vector<AxisAnalysis>& axes_;
  int cap_;
  std::vector<bool> skip_;

  int node_cap() const { return 200000; }

  const Letters& word(const LineRef& x) const {
    return x.type == 0 ? m_.classes[x.idx].letters() : axes_[x.idx].base.letters();
  }

  Word conjugate(const Letters& h, const Letters& w) const {
    return Word{m_.rank, concat_reduce(concat_reduce(h, w), inverse_letters(h))};
  }

  // h with h * axis(word) the line, h = v * prefix(phase)^-1.
  Letters conj_at(const Letters& v, const LineRef& x) const {
    const Letters& w = word(x);
    return concat_reduce(v, inverse_letters(Letters(w.begin(), w.begin() + x.phase)));
  }

  // Move one step along the line; returns the letter read. The side of an
  // axis is rebased when the phase wraps.
  Letter advance(LineRef& x, int dir) const {
    const Letters& w = word(x);
    int p = static_cast<int>(w.size());
    if (dir > 0) {
      Letter s = w[x.phase];
      if (++x.phase == p) {
        x.phase = 0;
        if (x.type == 1) x.res = posmod(x.res - 1, axes_[x.idx].d[x.comp]);
      }
      return s;
    }
    if (x.phase == 0) {
      x.phase = p;
      if (x.type == 1) x.res = posmod(x.res + 1, axes_[x.idx].d[x.comp]);
    }
    --x.phase;
    return inv(w[x.phase]);
  }

  Letter letter_from(const LineRef& x, int dir, int k) const {
    const Letters& w = word(x);
    long p = static_cast<long>(w.size());
    if (dir > 0) return w[posmod(x.phase + k, p)];
    return inv(w[posmod(x.phase - 1 - k, p)]);
  }

  std::optional<EndpointLabel> label(int axis, const Letters& hz, const Letters& hx, const Letters& w) const {
    return locate_endpoint(axes_[axis], concat_reduce(inverse_letters(hz), hx), w, 1);
  }

  // Is y in the Type 2 vertex of x, both lines through v? For an axis y the
  // side is filled in.
  bool member(const Letters& v, const LineRef& x, LineRef& y) const {
    const Letters& wx = word(x);
    const Letters& wy = word(y);
    int cap = static_cast<int>(wx.size() + wy.size()) + 1;
    // extent of the common segment in each direction of x, and which
    // direction of y it follows
    int ext[2] = {0, 0}, ydir[2] = {0, 0};
    for (int s = 0; s < 2; ++s) {
      int dx = s == 0 ? 1 : -1;
      for (int dy : {1, -1}) {
        int k = 0;
        while (k < cap && letter_from(x, dx, k) == letter_from(y, dy, k)) ++k;
        if (k > 0) {
          ext[s] = k;
          ydir[s] = dy;
          break;
        }
      }
      if (ext[s] >= cap) return false;  // same line under another name
    }
    Letters hx = conj_at(v, x), hy = conj_at(v, y);
    // walk the segment; at each vertex try every translate of every axis
    for (int s = 0; s < 2; ++s) {
      int dx = s == 0 ? 1 : -1;
      LineRef px = x, py = y;
      Letters z = v;
      for (int k = 0; k <= ext[s]; ++k) {
        if (k > 0) {
          Letter step = advance(px, dx);
          advance(py, ydir[s]);
          z = concat_reduce(z, {step});
        }
        if (s == 1 && k == 0) continue;  // v already visited
        for (std::size_t i = 0; i < axes_.size(); ++i) {
          const Letters& g = axes_[i].base.letters();
          for (int t = 0; t < static_cast<int>(g.size()); ++t) {
            if (px.type == 1 && px.idx == static_cast<int>(i) && px.phase == t) continue;
            if (py.type == 1 && py.idx == static_cast<int>(i) && py.phase == t) continue;
            Letters hz = concat_reduce(z, inverse_letters(Letters(g.begin(), g.begin() + t)));
            auto lx = label(static_cast<int>(i), hz, hx, wx);
            auto ly = label(static_cast<int>(i), hz, hy, wy);
            if (!lx || !ly) throw Error(ErrorKind::CrossingInCollection, "line shares an endpoint with a collection axis");
            if (!(*lx == *ly)) return false;
          }
        }
      }
    }
    if (x.type == 1) {
      auto ly = label(x.idx, hx, hy, wy);
      if (!ly || ly->component != x.comp || ly->residue != x.res) return false;
    }
    if (y.type == 1) {
      auto lx = label(y.idx, hy, hx, wx);
      if (!lx) throw Error(ErrorKind::CrossingInCollection, "collection axes share an endpoint");
      y.comp = lx->component;
      y.res = lx->residue;
    }
    return true;
  }

  std::vector<LineRef> members_at(const Letters& v, const LineRef& x) const {
    std::vector<LineRef> out{x};
    for (std::size_t j = 0; j < m_.size(); ++j) {
      if (skip_[j]) continue;
      for (int s = 0; s < static_cast<int>(m_.classes[j].size()); ++s) {
        LineRef y{0, static_cast<int>(j), s};
        if (x.type == 0 && x.idx == y.idx && x.phase == s) continue;
        if (member(v, x, y)) out.push_back(y);
      }
    }
    for (std::size_t i = 0; i < axes_.size(); ++i)
      for (int t = 0; t < axes_[i].length(); ++t) {
        LineRef y{1, static_cast<int>(i), t};
        if (x.type == 1 && x.idx == y.idx && x.phase == t) continue;
        if (member(v, x, y)) out.push_back(y);
      }
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline int stabilizer_cap(const RJSJConfig& cfg, const std::vector<AxisAnalysis>& axes) {
  if (cfg.stabilizer_cap > 0) return cfg.stabilizer_cap;
  if (const char* env = std::getenv("JSJ_MAX_STABILIZER_LEN")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  int period = 0;
  for (const auto& a : axes) period = std::max(period, a.length());
  return 2 * cfg.max_len + period;
}

inline bool same_subgroup(int rank, const std::vector<Word>& a, const std::vector<Word>& b) {
  auto ga = stallings_graph(rank, a), gb = stallings_graph(rank, b);
  for (const auto& w : a)
    if (!gb.contains(w)) return false;
  for (const auto& w : b)
    if (!ga.contains(w)) return false;
  return true;
}

// A free basis of the stabilizer, preferring short edge generators and
// multiword elements; falls back to the spanning-tree basis.
inline std::vector<Word> choose_basis(int rank, const SubgroupGraph& stab, std::vector<Word> candidates) {
  std::sort(candidates.begin(), candidates.end(),
            [](const Word& a, const Word& b) { return shortlex_less(a.letters, b.letters); });
  std::vector<Word> chosen;
  for (const auto& c : candidates) {
    if (c.empty()) continue;
    auto trial = chosen;
    trial.push_back(c);
    if (stallings_graph(rank, trial).basis_size() == static_cast<int>(trial.size())) chosen = std::move(trial);
  }
  if (static_cast<int>(chosen.size()) == stab.basis_size() && same_subgroup(rank, chosen, stab.basis())) return chosen;
  return stab.basis();
}

inline ConjClass rewrite_class(const BasisRewriter& r, const Word& w) {
  auto e = r.express(w);
  if (!e) throw Error(ErrorKind::RewriteFailure, "element " + to_string(w) + " is not in the vertex group");
  return make_class(*e);
}

}  // namespace detail

// Graph of groups dual to a non-crossing collection, in the coordinates of m.
inline GraphOfGroups build_graph_of_groups(const Multiword& m, const std::vector<CutSet>& collection,
                                           const RJSJConfig& cfg = {}) {
  if (collection.empty()) throw Error(ErrorKind::InvalidInput, "empty collection");
  std::vector<AxisAnalysis> axes;
  for (const auto& c : collection) axes.push_back(analyze_axis(m, c.root));
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (axes[a].cut.kind == CutKind::NotCut)
      throw Error(ErrorKind::InvalidInput, to_string(axes[a].base) + " is not a cut set");
    for (std::size_t b = a; b < axes.size(); ++b) {
      if (axes[a].cut.kind != CutKind::CutPair || axes[b].cut.kind != CutKind::CutPair) continue;
      const Letters& g = axes[a].base.letters();
      const Letters& h = axes[b].base.letters();
      for (std::size_t j = 0; j < g.size(); ++j)
        for (std::size_t t = 0; t < h.size(); ++t) {
          Letters pos = concat_reduce(Letters(g.begin(), g.begin() + j), inverse_letters(Letters(h.begin(), h.begin() + t)));
          if (crosses(axes[a], axes[b], pos))
            throw Error(ErrorKind::CrossingInCollection, to_string(axes[a].base) + " crosses " + to_string(axes[b].base));
        }
    }
  }
  detail::Explorer ex(m, axes, detail::stabilizer_cap(cfg, axes));

  std::vector<detail::PieceData> pieces;
  std::map<std::pair<int, int>, int> attached;
  std::map<int, int> found;
  for (;;) {
    std::optional<detail::LineRef> seed;
    for (std::size_t j = 0; j < m.size() && !seed; ++j)
      if (!ex.is_root_class(static_cast<int>(j)) && !found.count(static_cast<int>(j)))
        seed = detail::LineRef{0, static_cast<int>(j), 0};
    for (std::size_t i = 0; i < axes.size() && !seed; ++i)
      for (int c = 0; c < static_cast<int>(axes[i].d.size()) && !seed; ++c)
        if (!attached.count({static_cast<int>(i), c})) seed = detail::LineRef{1, static_cast<int>(i), 0, c, 0};
    if (!seed) break;
    auto piece = ex.explore(*seed);
    int id = static_cast<int>(pieces.size());
    for (const auto& [key, w] : piece.attachments)
      if (!attached.emplace(key, id).second)
        throw Error(ErrorKind::MissingCertificate, "edge attached to two vertex orbits");
    for (const auto& [j, w] : piece.classes)
      if (!found.emplace(j, id).second) throw Error(ErrorKind::MissingCertificate, "class found in two vertex orbits");
    pieces.push_back(std::move(piece));
  }
  int euler = 0;
  for (const auto& p : pieces) euler += p.stab.basis_size() - 1;
  if (euler != m.rank - 1)
    throw Error(ErrorKind::StabilizerSearchExhausted,
                "vertex groups fail the Euler identity (" + std::to_string(euler) + " != " + std::to_string(m.rank - 1) + ")");

  GraphOfGroups g;
  g.rank = m.rank;
  for (std::size_t i = 0; i < axes.size(); ++i)
    g.cyclic.push_back({static_cast<int>(i), axes[i].base, m.contains(axes[i].base)});
  int base_id = static_cast<int>(axes.size());
  for (std::size_t p = 0; p < pieces.size(); ++p) {
    std::vector<Word> cands;
    for (const auto& [k, w] : pieces[p].attachments) cands.push_back(w);
    for (const auto& [j, w] : pieces[p].classes) cands.push_back(w);
    NoncyclicVertex v;
    v.id = base_id + static_cast<int>(p);
    v.basis = detail::choose_basis(m.rank, pieces[p].stab, cands);
    BasisRewriter rw(m.rank, v.basis);
    std::vector<ConjClass> ind;
    int r = std::max(v.rank(), 1);
    for (const auto& w : cands) {
      ConjClass c = detail::rewrite_class(rw, w);
      c.rank = c.rep.rank = r;
      ind.push_back(c);
    }
    v.induced = make_multiword(r, ind);
    for (const auto& [key, w] : pieces[p].attachments) {
      GogEdge e;
      e.cyclic = key.first;
      e.noncyclic = v.id;
      e.degree = static_cast<int>(axes[key.first].d[key.second]);
      e.image = detail::rewrite_class(rw, w);
      e.image.rank = e.image.rep.rank = r;
      e.image_f = w;
      g.edges.push_back(e);
    }
    g.noncyclic.push_back(std::move(v));
  }
  return g;
}

// Fold edges from one cyclic vertex whose images at a vertex are conjugate.
inline GraphOfGroups normalize_graph_of_groups(GraphOfGroups g) {
  std::vector<GogEdge> kept;
  for (const auto& e : g.edges) {
    bool dup = false;
    for (auto& k : kept)
      if (k.cyclic == e.cyclic && k.noncyclic == e.noncyclic && k.image == e.image) {
        k.degree = std::gcd(k.degree, e.degree);
        dup = true;
      }
    if (!dup) kept.push_back(e);
  }
  g.edges = std::move(kept);
  std::sort(g.edges.begin(), g.edges.end(), [](const GogEdge& a, const GogEdge& b) {
    return std::tie(a.cyclic, a.noncyclic, a.degree) < std::tie(b.cyclic, b.noncyclic, b.degree);
  });
  return g;
}

inline Multiword induced_multiword(const GraphOfGroups& g, int id) { return g.vertex(id).induced; }

inline Multiword augmented_multiword(const Multiword& m, const GraphOfGroups& g) {
  std::vector<ConjClass> cs = m.classes;
  for (const auto& c : g.cyclic) cs.push_back(c.root);
  return make_multiword(m.rank, cs);
}

// ---------------------------------------------------------------------------
// Pieces

struct VertexVerdict {
  PieceClass cls = PieceClass::Undetermined;
  bool certified = false;
  std::optional<ConjClass> witness;  // over the vertex basis
};

inline VertexVerdict classify_multiword(const Multiword& induced, int max_len) {
  VertexVerdict v;
  if (induced.rank < 2) {
    v.cls = PieceClass::QHSurface;
    v.certified = true;
    return v;
  }
  auto mr = minimize(induced);
  auto wh = whitehead_graph(mr.minimal);
  if (!connectivity(wh).connected) throw Error(ErrorKind::DisconnectedPiece, "induced multiword splits freely");
  if (is_circle(wh)) {
    v.cls = PieceClass::QHSurface;
    v.certified = true;
    return v;
  }
  auto scan = scan_candidates(mr.minimal, max_len);
  auto sel = select_uncrossed(mr.minimal, scan.cutsets);
  if (sel.empty()) {
    v.cls = PieceClass::Rigid;
    v.certified = scan.certified;
    return v;
  }
  v.witness = make_class(apply_moves_inverse(mr.moves, sel.front().root.rep));
  return v;
}

inline VertexVerdict classify_vertex(const GraphOfGroups& g, int id, int max_len) {
  return classify_multiword(g.vertex(id).induced, max_len);
}

// ---------------------------------------------------------------------------
// Driver

namespace detail {

inline GraphOfGroups map_graph(GraphOfGroups g, const std::vector<WhAutomorphism>& moves) {
  for (auto& c : g.cyclic) c.root = make_class(apply_moves_inverse(moves, c.root.rep));
  for (auto& v : g.noncyclic)
    for (auto& b : v.basis) b = apply_moves_inverse(moves, b);
  for (auto& e : g.edges) e.image_f = apply_moves_inverse(moves, e.image_f);
  return g;
}

// Lift a class over a vertex basis to F.
inline Word substitute(const std::vector<Word>& basis, int rank, const Letters& w) {
  Letters out;
  for (Letter x : w) {
    const Letters& b = basis.at(letter_index(x) - 1).letters;
    out = concat_reduce(out, letter_sign(x) > 0 ? b : inverse_letters(b));
  }
  return Word{rank, out};
}

}  // namespace detail

// Free factors of a multiword whose minimal Whitehead graph is disconnected,
// in the coordinates of the input.
inline std::vector<FreeFactor> free_factors(const Multiword& m) {
  auto mr = minimize(m);
  auto fs = visible_free_factors(mr.minimal);
  for (auto& f : fs)
    for (auto& c : f.classes) c = make_class(apply_moves_inverse(mr.moves, c.rep));
  return fs;
}

inline std::string describe_factors(const std::vector<FreeFactor>& fs, int rank) {
  std::string s;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    s += i ? "; " : "";
    s += "rank " + std::to_string(fs[i].generators.size()) + " {";
    for (std::size_t k = 0; k < fs[i].classes.size(); ++k)
      s += (k ? ", " : "") + letters_to_string(rank, fs[i].classes[k].letters());
    s += "}";
  }
  return s;
}

inline RJSJResult compute_rjsj(const Multiword& m, const RJSJConfig& cfg = {}) {
  if (m.rank < 2) throw Error(ErrorKind::RankMismatch, "analysis needs rank at least 2");
  if (m.empty()) throw Error(ErrorKind::InvalidInput, "empty multiword");
  RJSJResult r;
  r.input = m;
  r.scan_length = cfg.max_len;
  auto mr = minimize(m);
  const Multiword& mm = mr.minimal;
  auto wh = whitehead_graph(mm);
  if (!connectivity(wh).connected)
    throw Error(ErrorKind::FreeSplitting, "free splitting: " + describe_factors(free_factors(m), m.rank));
  r.graph.rank = m.rank;
  if (is_circle(wh)) {
    r.outcome = Outcome::QHSurface;
    r.certified = true;
    return r;
  }
  auto scan = scan_candidates(mm, cfg.max_len);
  auto collection = select_uncrossed(mm, scan.cutsets);
  if (collection.empty()) {
    r.outcome = Outcome::Rigid;
    r.certified = scan.certified;
    return r;
  }
  for (;;) {
    GraphOfGroups g = normalize_graph_of_groups(build_graph_of_groups(mm, collection, cfg));
    std::optional<ConjClass> witness;
    bool certified = scan.certified;
    for (auto& v : g.noncyclic) {
      auto verdict = classify_multiword(v.induced, cfg.max_len);
      v.cls = verdict.cls;
      v.certified = verdict.certified;
      certified = certified && verdict.certified;
      if (verdict.witness && !witness)
        witness = make_class(detail::substitute(v.basis, m.rank, verdict.witness->letters()));
    }
    // a cut pair bounding only QH pieces with degree sum two lies inside a
    // larger surface
    std::optional<std::size_t> drop;
    for (const auto& c : g.cyclic) {
      if (c.in_multiword) continue;
      int deg = 0;
      bool all_qh = true;
      for (const auto& e : g.edges)
        if (e.cyclic == c.id) {
          deg += e.degree;
          all_qh = all_qh && g.vertex(e.noncyclic).cls == PieceClass::QHSurface;
        }
      if (all_qh && deg == 2) {
        drop = static_cast<std::size_t>(c.id);
        break;
      }
    }
    if (drop) {
      collection.erase(collection.begin() + static_cast<long>(*drop));
      if (collection.empty()) {
        r.outcome = Outcome::QHSurface;
        r.certified = true;
        return r;
      }
      continue;
    }
    if (witness) {
      auto cut = analyze_axis(mm, *witness).cut;
      if (cut.kind == CutKind::NotCut)
        throw Error(ErrorKind::CrossingInCollection, "lifted witness " + to_string(*witness) + " is not a cut set");
      bool dup = std::any_of(collection.begin(), collection.end(), [&](const CutSet& c) { return c.root == cut.root; });
      if (dup) throw Error(ErrorKind::CrossingInCollection, "lifted witness already in the collection");
      collection.push_back(cut);
      std::sort(collection.begin(), collection.end(), [](const CutSet& a, const CutSet& b) { return a.root < b.root; });
      continue;
    }
    r.outcome = Outcome::Decomposition;
    r.certified = certified;
    r.graph = detail::map_graph(std::move(g), mr.moves);
    return r;
  }
}

// ---------------------------------------------------------------------------
// Verification

struct VerifyReport {
  bool pass = true;
  std::vector<std::string> violations;
  void fail(std::string s) {
    pass = false;
    violations.push_back(std::move(s));
  }
};

inline VerifyReport verify_rjsj(const Multiword& m, const GraphOfGroups& g, int max_len = 12) {
  VerifyReport rep;
  if (g.rank != m.rank) {
    rep.fail("rank differs from the multiword");
    return rep;
  }
  std::set<int> ids;
  for (const auto& c : g.cyclic)
    if (!ids.insert(c.id).second) rep.fail("duplicate vertex id " + std::to_string(c.id));
  for (const auto& v : g.noncyclic)
    if (!ids.insert(v.id).second) rep.fail("duplicate vertex id " + std::to_string(v.id));
  if (!rep.pass) return rep;
  std::map<int, const CyclicVertex*> cyc;
  std::map<int, const NoncyclicVertex*> non;
  for (const auto& c : g.cyclic) cyc[c.id] = &c;
  for (const auto& v : g.noncyclic) non[v.id] = &v;
  for (const auto& e : g.edges)
    if (!cyc.count(e.cyclic) || !non.count(e.noncyclic)) {
      rep.fail("edge is not between a cyclic and a non-cyclic vertex");
      return rep;
    }

  int euler = 0;
  for (const auto& v : g.noncyclic) {
    euler += v.rank() - 1;
    if (stallings_graph(m.rank, v.basis).basis_size() != v.rank())
      rep.fail("basis of vertex " + std::to_string(v.id) + " is not free");
  }
  if (euler != m.rank - 1)
    rep.fail("Euler identity fails: " + std::to_string(euler) + " != " + std::to_string(m.rank - 1));

  for (const auto& c : g.cyclic) {
    int deg = 0;
    bool all_qh = true;
    for (const auto& e : g.edges)
      if (e.cyclic == c.id) deg += e.degree;
    if (deg < 2) rep.fail("cyclic vertex " + std::to_string(c.id) + " has degree sum " + std::to_string(deg));
    for (const auto& e : g.edges)
      if (e.cyclic == c.id) all_qh = all_qh && non[e.noncyclic]->cls == PieceClass::QHSurface;
    if (!m.contains(c.root) && all_qh && deg == 2)
      rep.fail("cyclic vertex " + to_string(c.root) + " is not in the multiword, bounds only QH pieces, degree sum 2");
    if (m.contains(c.root) != c.in_multiword) rep.fail("membership flag of " + to_string(c.root) + " is wrong");
  }

  // every class of the multiword is elliptic
  for (const auto& c : m.classes) {
    bool ell = std::any_of(g.cyclic.begin(), g.cyclic.end(), [&](const CyclicVertex& v) { return v.root == c; });
    for (const auto& v : g.noncyclic)
      if (!ell) ell = stallings_graph(m.rank, v.basis).contains_conjugate(c.rep);
    if (!ell) rep.fail("class " + to_string(c) + " is not elliptic");
  }

  for (const auto& v : g.noncyclic) {
    auto sg = stallings_graph(m.rank, v.basis);
    BasisRewriter rw(m.rank, v.basis);
    std::vector<ConjClass> ind;
    int r = std::max(v.rank(), 1);
    std::vector<ConjClass> images;
    for (const auto& e : g.edges) {
      if (e.noncyclic != v.id) continue;
      const auto& root = cyc[e.cyclic]->root;
      Word power = Word{m.rank, power_letters(root.letters(), e.degree)};
      bool in_range = std::all_of(e.image.letters().begin(), e.image.letters().end(),
                                  [&](Letter x) { return letter_index(x) <= v.rank(); });
      if (!in_range || !conjugacy_equal(detail::substitute(v.basis, m.rank, e.image.letters()), power)) {
        rep.fail("edge image at vertex " + std::to_string(v.id) + " is not conjugate to " + to_string(power));
        continue;
      }
      images.push_back(e.image);
      ind.push_back(e.image);
    }
    auto sorted = images;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      rep.fail("two edge images at vertex " + std::to_string(v.id) + " are conjugate");
    for (const auto& c : m.classes) {
      if (std::any_of(g.cyclic.begin(), g.cyclic.end(), [&](const CyclicVertex& x) { return x.root == c; })) continue;
      auto conj = sg.conjugate_into(c.rep);
      if (!conj) continue;
      auto ex = rw.express(conj->first);
      if (!ex) continue;
      ConjClass k = make_class(*ex);
      k.rank = k.rep.rank = r;
      ind.push_back(k);
    }
    Multiword recomputed = make_multiword(r, ind);
    if (!(recomputed == v.induced)) rep.fail("induced multiword of vertex " + std::to_string(v.id) + " differs");
    try {
      auto verdict = classify_multiword(recomputed, max_len);
      if (verdict.cls != v.cls)
        rep.fail("vertex " + std::to_string(v.id) + " classifies as " + piece_class_name(verdict.cls));
      if (verdict.cls == PieceClass::Undetermined)
        rep.fail("vertex " + std::to_string(v.id) + " is neither rigid nor a QH surface");
    } catch (const Error& e) {
      rep.fail("vertex " + std::to_string(v.id) + ": " + e.what());
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Canonical form, for comparing decompositions up to isomorphism

// Least form of a multiword under automorphisms reachable by length
// preserving Whitehead moves from a minimal representative, and signed
// permutations.
inline std::string canonical_multiword(const Multiword& m) {
  if (m.rank < 1 || m.empty()) return "{}";
  auto perm_canon = [](const Multiword& x) {
    std::vector<int> idx(x.rank);
    std::iota(idx.begin(), idx.end(), 1);
    std::string best;
    bool first = true;
    do {
      for (int signs = 0; signs < (1 << x.rank); ++signs) {
        Letters im(x.rank);
        for (int i = 0; i < x.rank; ++i) im[i] = make_letter(idx[i], (signs >> i) & 1 ? -1 : 1);
        auto y = apply_automorphism(signed_permutation(x.rank, im), x);
        std::string s = to_string(y);
        if (first || s < best) best = s, first = false;
      }
    } while (std::next_permutation(idx.begin(), idx.end()));
    return best;
  };
  Multiword start = minimize(m).minimal;
  if (start.rank < 2) return perm_canon(start);
  std::set<std::string> seen;
  std::vector<Multiword> queue{start};
  std::set<std::vector<ConjClass>> visited{start.classes};
  std::string best;
  for (std::size_t k = 0; k < queue.size() && k < 2000; ++k) {
    std::string s = perm_canon(queue[k]);
    if (best.empty() || s < best) best = s;
    std::size_t len = queue[k].total_length();
    for_each_whitehead_move(queue[k].rank, [&](const WhAutomorphism& f) {
      if (cyclic_length_after(f, queue[k]) == len) {
        auto y = apply_automorphism(f, queue[k]);
        if (visited.insert(y.classes).second) queue.push_back(y);
      }
      return true;
    });
  }
  return best;
}

struct CanonicalVertex {
  std::string kind;
  std::string cls;
  std::vector<int> degrees;
  std::string induced;
  int rank = 0;
  auto operator<=>(const CanonicalVertex&) const = default;
};

// Vertex list sorted on (kind, classification, degree multiset, canonical
// induced multiword), and edges between sorted positions.
struct CanonicalForm {
  std::vector<CanonicalVertex> vertices;
  std::vector<std::tuple<int, int, int>> edges;
  bool operator==(const CanonicalForm&) const = default;
};

inline CanonicalForm canonical_form(const GraphOfGroups& g) {
  std::vector<std::pair<CanonicalVertex, int>> vs;
  for (const auto& c : g.cyclic) {
    CanonicalVertex cv{"cyclic", "", {}, "", 1};
    for (const auto& e : g.edges)
      if (e.cyclic == c.id) cv.degrees.push_back(e.degree);
    std::sort(cv.degrees.begin(), cv.degrees.end());
    vs.push_back({cv, c.id});
  }
  for (const auto& v : g.noncyclic) {
    CanonicalVertex cv{"vertex", piece_class_name(v.cls), {}, canonical_multiword(v.induced), v.rank()};
    for (const auto& e : g.edges)
      if (e.noncyclic == v.id) cv.degrees.push_back(e.degree);
    std::sort(cv.degrees.begin(), cv.degrees.end());
    vs.push_back({cv, v.id});
  }
  std::sort(vs.begin(), vs.end());
  std::map<int, int> pos;
  CanonicalForm f;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    pos[vs[i].second] = static_cast<int>(i);
    f.vertices.push_back(vs[i].first);
  }
  for (const auto& e : g.edges) f.edges.emplace_back(pos[e.cyclic], pos[e.noncyclic], e.degree);
  std::sort(f.edges.begin(), f.edges.end());
  return f;
}

}  // namespace jsj

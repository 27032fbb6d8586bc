#pragma once

// Planar rotation systems on Whitehead graphs with consistent orderings at
// inverse vertices, and the geometricity verdicts built on them.

#include "rjsj.hpp"

namespace jsj {

// Edge-end k is end (k % 2) of edge k / 2: 0 the u end, 1 the v end.
struct RotationCertificate {
  int rank = 0;
  std::vector<std::vector<int>> rotation;  // per letter, cyclic order of edge-ends
  std::vector<int> reversing;              // per generator: 0 orientable, 1 reversing

  bool orientable() const { return std::none_of(reversing.begin(), reversing.end(), [](int b) { return b != 0; }); }
};

namespace detail {

inline Letter end_vertex(const WhiteheadGraph& g, int end) {
  const auto& e = g.edges[end / 2];
  return end % 2 ? e.v : e.u;
}

// Occurrence pairing: the end at x of each occurrence of the generator x
// mapped to its end at x^-1.
inline std::vector<int> occurrence_pairing(const WhiteheadGraph& g) {
  std::vector<int> partner(2 * g.edges.size(), -1);
  std::map<std::pair<int, int>, int> edge_of;
  std::map<int, int> length;
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    edge_of[{g.edges[k].cls, g.edges[k].pos}] = static_cast<int>(k);
    length[g.edges[k].cls] = std::max(length[g.edges[k].cls], g.edges[k].pos + 1);
  }
  for (std::size_t k = 0; k < g.edges.size(); ++k) {
    const auto& e = g.edges[k];
    // the letter at pos + 1 is shared by edge pos (v end) and edge pos + 1 (u end)
    int next = edge_of.at({e.cls, (e.pos + 1) % length[e.cls]});
    int a = 2 * static_cast<int>(k) + 1, b = 2 * next;
    partner[a] = b;
    partner[b] = a;
  }
  return partner;
}

inline int count_faces(const WhiteheadGraph& g, const std::vector<std::vector<int>>& rot) {
  int n = static_cast<int>(2 * g.edges.size());
  std::vector<int> succ(n, -1);
  for (const auto& r : rot)
    for (std::size_t i = 0; i < r.size(); ++i) succ[r[i]] = r[(i + 1) % r.size()];
  std::vector<bool> seen(n, false);
  int faces = 0;
  for (int s = 0; s < n; ++s) {
    if (seen[s]) continue;
    ++faces;
    for (int d = s; !seen[d]; d = succ[d ^ 1]) seen[d] = true;
  }
  return faces;
}

}  // namespace detail

// Faces of the rotation system minus the Euler count of a sphere.
inline bool is_planar_rotation(const WhiteheadGraph& g, const std::vector<std::vector<int>>& rot) {
  int v = 0;
  for (const auto& r : rot) v += !r.empty();
  int e = static_cast<int>(g.edges.size());
  return v - e + detail::count_faces(g, rot) == 2;
}

// Exhaustive search: a free cyclic order at each generator x (first end
// fixed), the order at x^-1 transported by the occurrence pairing, reversed
// for an orientable generator and preserved for a reversing one. Bits are
// branched last.
inline std::optional<RotationCertificate> find_consistent_embedding(const WhiteheadGraph& g) {
  if (!connectivity(g).connected) return std::nullopt;
  int n = g.rank;
  auto partner = detail::occurrence_pairing(g);
  std::vector<std::vector<int>> ends(2 * n);
  for (int k = 0; k < static_cast<int>(2 * g.edges.size()); ++k) ends[detail::end_vertex(g, k)].push_back(k);
  std::vector<std::vector<int>> free_order(n);
  RotationCertificate cert;
  cert.rank = n;
  cert.rotation.assign(2 * n, {});
  cert.reversing.assign(n, 0);
  bool found = false;

  auto fill = [&](int gen, int bit) {
    const auto& fo = free_order[gen];
    std::vector<int> img;
    for (int e : fo) img.push_back(partner[e]);
    if (!bit && img.size() > 1) std::reverse(img.begin() + 1, img.end());
    cert.rotation[2 * gen] = fo;
    cert.rotation[2 * gen + 1] = img;
  };

  auto try_bits = [&] {
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
      for (int i = 0; i < n; ++i) {
        cert.reversing[i] = static_cast<int>((mask >> i) & 1u);
        fill(i, cert.reversing[i]);
      }
      if (is_planar_rotation(g, cert.rotation)) return true;
    }
    return false;
  };

  auto rec = [&](auto&& self, int gen) -> bool {
    if (gen == n) return try_bits();
    std::vector<int> e = ends[2 * gen];
    if (e.size() <= 2) {
      free_order[gen] = e;
      return self(self, gen + 1);
    }
    std::sort(e.begin() + 1, e.end());
    do {
      free_order[gen] = e;
      if (self(self, gen + 1)) return true;
    } while (std::next_permutation(e.begin() + 1, e.end()));
    return false;
  };
  found = rec(rec, 0);
  if (!found) return std::nullopt;
  return cert;
}

struct GeometryReport {
  bool geometric = false;
  Multiword minimal;
  std::vector<WhAutomorphism> moves;
  std::optional<RotationCertificate> certificate;  // when connected and geometric
  std::vector<GeometryReport> factors;              // when the minimal graph is disconnected
};

inline GeometryReport is_geometric(const Multiword& m) {
  GeometryReport r;
  auto mr = minimize(m);
  r.minimal = mr.minimal;
  r.moves = mr.moves;
  if (m.rank < 2 || m.empty()) {
    r.geometric = true;
    return r;
  }
  auto wh = whitehead_graph(r.minimal);
  if (!connectivity(wh).connected) {
    r.geometric = true;
    for (const auto& f : visible_free_factors(r.minimal)) {
      auto sub = is_geometric(factor_multiword(f));
      r.geometric = r.geometric && sub.geometric;
      r.factors.push_back(std::move(sub));
    }
    return r;
  }
  r.certificate = find_consistent_embedding(wh);
  r.geometric = r.certificate.has_value();
  return r;
}

struct PieceReport {
  int id = 0;
  PieceClass cls = PieceClass::Undetermined;
  bool geometric = false;
  std::optional<GeometryReport> geometry;
};

struct VirtualGeometryReport {
  bool verdict = false;
  bool certified = false;
  std::vector<PieceReport> pieces;
};

inline VirtualGeometryReport is_virtually_geometric(const Multiword& m, const RJSJResult& rj) {
  VirtualGeometryReport r;
  r.certified = rj.certified;
  switch (rj.outcome) {
    case Outcome::QHSurface: r.verdict = true; break;
    case Outcome::Rigid: r.verdict = is_geometric(m).geometric; break;
    case Outcome::Decomposition:
      r.verdict = true;
      for (const auto& v : rj.graph.noncyclic) {
        PieceReport p{v.id, v.cls, true, std::nullopt};
        p.geometry = is_geometric(v.induced);
        if (v.cls != PieceClass::QHSurface) p.geometric = p.geometry->geometric;
        r.verdict = r.verdict && p.geometric;
        r.pieces.push_back(std::move(p));
      }
      break;
  }
  return r;
}

// Parity of the reversing bits met by a cyclic word: 1 when its regular
// neighbourhood in the handlebody boundary is a Moebius band.
inline int moebius_parity(const RotationCertificate& c, const Letters& w) {
  int p = 0;
  for (Letter x : w) p ^= c.reversing.at(letter_index(x) - 1);
  return p;
}

struct AssemblyReport {
  std::vector<std::string> obstructions;
  bool geometric() const { return obstructions.empty(); }
};

// Obstructions to gluing handlebody realizations of the pieces along the
// cyclic vertices: degree patterns that fit neither a solid torus nor a
// solid Klein bottle, and cyclic vertices whose curves have neighbourhoods
// of different types in different pieces.
inline AssemblyReport assembly_obstructions(const Multiword& m, const RJSJResult& rj,
                                            const std::map<int, GeometryReport>& certs) {
  AssemblyReport rep;
  if (rj.outcome != Outcome::Decomposition) return rep;
  const auto& g = rj.graph;
  for (const auto& c : g.cyclic) {
    std::vector<int> degs;
    std::vector<int> parity;
    for (const auto& e : g.edges) {
      if (e.cyclic != c.id) continue;
      degs.push_back(e.degree);
      auto it = certs.find(e.noncyclic);
      if (it == certs.end()) throw Error(ErrorKind::MissingCertificate, "no certificate for vertex " + std::to_string(e.noncyclic));
      const GeometryReport& gr = it->second;
      if (!gr.certificate) {
        if (gr.minimal.rank >= 2 && !gr.factors.empty()) continue;
        throw Error(ErrorKind::MissingCertificate, "vertex " + std::to_string(e.noncyclic) + " has no rotation certificate");
      }
      Word img = apply_moves(gr.moves, e.image.rep);
      parity.push_back(moebius_parity(*gr.certificate, cyclic_core(img.letters)));
    }
    std::vector<int> all = degs;
    if (c.in_multiword) all.push_back(1);
    std::sort(all.begin(), all.end());
    bool torus = !all.empty() && all.front() == all.back();
    int ones = static_cast<int>(std::count(all.begin(), all.end(), 1));
    int twos = static_cast<int>(std::count(all.begin(), all.end(), 2));
    bool klein = ones <= 1 && ones + twos == static_cast<int>(all.size());
    std::string name = "<" + to_string(c.root) + ">";
    if (!torus && !klein) {
      std::string ds;
      for (int d : all) ds += (ds.empty() ? "" : ",") + std::to_string(d);
      rep.obstructions.push_back("degrees {" + ds + "} at " + name + " fit neither a solid torus nor a solid Klein bottle");
    }
    if (!parity.empty() && std::any_of(parity.begin(), parity.end(), [&](int p) { return p != parity.front(); }))
      rep.obstructions.push_back("curves at " + name + " have annulus and Moebius band neighbourhoods");
  }
  (void)m;
  return rep;
}

}  // namespace jsj

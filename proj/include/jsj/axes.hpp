#pragma once

// Whitehead graphs over axes, as finite graphs with integer voltages.
//
// For a cyclically reduced indivisible g of length L the axis of g in the
// Cayley tree has vertices v_k (k in Z), v_k the prefix of g^infinity of length
// k. A quotient vertex (i, x) is the direction x leaving v_i off the axis.
// Every pattern line meeting the axis in a segment [v_j, v_k] gives one edge
// between its entry and exit directions, with voltage floor(k/L) - floor(j/L).

#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <optional>
#include <thread>

#include "whgraph.hpp"

namespace jsj {

using BigInt = boost::multiprecision::cpp_int;

struct QVertex {
  int pos = 0;
  Letter dir = 0;
};

struct QEdge {
  int u = 0;
  int v = 0;
  long voltage = 0;
  int cls = 0;  // class of the pattern line
};

struct AxisGraph {
  ConjClass base;
  int rank = 0;
  std::vector<QVertex> qvertices;
  std::vector<int> qid;  // (pos * 2n + letter) -> qvertex id, -1 on the axis
  std::vector<QEdge> qedges;
  bool dropped_trivial_loop = false;
  int max_overlap = 0;  // longest common segment of a pattern line and the axis
  int window = 1;       // smallest W with W*|g| > max_overlap + 2|g|

  int length() const { return static_cast<int>(base.size()); }
  int id(int pos, Letter x) const { return qid[pos * 2 * rank + x]; }
};

namespace detail {

inline long floordiv(long a, long b) { return a >= 0 ? a / b : -((-a + b - 1) / b); }
inline long posmod(long a, long b) { return ((a % b) + b) % b; }

inline std::vector<int> axis_qids(int rank, const Letters& g, std::vector<QVertex>* out) {
  int L = static_cast<int>(g.size());
  std::vector<int> q(static_cast<std::size_t>(L) * 2 * rank, -1);
  int next = 0;
  for (int i = 0; i < L; ++i) {
    Letter fwd = g[i], back = inv(g[(i + L - 1) % L]);
    for (Letter x = 0; x < 2 * rank; ++x) {
      if (x == fwd || x == back) continue;
      q[i * 2 * rank + x] = next++;
      if (out) out->push_back({i, x});
    }
  }
  return q;
}

// Enumerate the quotient edges. fn(i1, x1, i2, x2, voltage, cls) receives
// positions in [0, L). Returns (dropped_trivial_loop, max_overlap).
template <class Fn>
std::pair<bool, int> for_each_axis_edge(const Multiword& m, const Letters& g, Fn&& fn) {
  int L = static_cast<int>(g.size());
  bool dropped = false;
  int overlap = 0;
  Letters inv_w;
  for (std::size_t c = 0; c < m.size(); ++c) {
    const Letters& w = m.classes[c].letters();
    int p = static_cast<int>(w.size());
    inv_w = inverse_letters(w);
    for (int s = 0; s < 2; ++s) {
      const Letters& u = s == 0 ? w : inv_w;
      for (int t = 0; t < p; ++t) {
        Letter prev = u[(t + p - 1) % p];
        for (int i = 0; i < L; ++i) {
          int mlen = 0;
          int cap = p + L;
          while (mlen < cap && u[(t + mlen) % p] == g[(i + mlen) % L]) ++mlen;
          if (mlen >= cap) {
            dropped = true;  // the line is the axis itself
            continue;
          }
          Letter back = g[(i + L - 1) % L];
          if (mlen >= 1) {
            if (prev == back) continue;  // not the start of the common segment
            overlap = std::max(overlap, mlen);
            long end = i + mlen;
            fn(i, inv(prev), static_cast<int>(end % L), u[(t + mlen) % p], end / L, static_cast<int>(c));
          } else if (s == 0) {
            Letter in = inv(prev), out = u[t];
            Letter fwd = g[i], bk = inv(back);
            if (in == fwd || in == bk || out == fwd || out == bk) continue;
            fn(i, in, i, out, 0L, static_cast<int>(c));
          }
        }
      }
    }
  }
  return {dropped, overlap};
}

}  // namespace detail

inline AxisGraph axis_graph(const Multiword& m, const ConjClass& g, bool check_prepared = true) {
  if (check_prepared && !is_prepared(whitehead_graph(m)))
    throw Error(ErrorKind::BasisNotPrepared, "Whitehead graph must be connected without cut vertices");
  if (g.rank != m.rank) throw Error(ErrorKind::RankMismatch, "axis rank");
  AxisGraph a;
  a.base = g;
  a.rank = m.rank;
  a.qid = detail::axis_qids(m.rank, g.letters(), &a.qvertices);
  auto [dropped, overlap] =
      detail::for_each_axis_edge(m, g.letters(), [&](int i1, Letter x1, int i2, Letter x2, long volt, int cls) {
        a.qedges.push_back({a.id(i1, x1), a.id(i2, x2), volt, cls});
      });
  a.dropped_trivial_loop = dropped;
  a.max_overlap = overlap;
  int L = a.length();
  a.window = 1;
  while (a.window * L <= overlap + 2 * L) ++a.window;
  return a;
}

struct QComponent {
  int id = 0;
  long d = 1;
};

enum class CutKind { CutPoint, CutPair, NotCut };

inline const char* cut_kind_name(CutKind k) {
  switch (k) {
    case CutKind::CutPoint: return "cut point";
    case CutKind::CutPair: return "cut pair";
    case CutKind::NotCut: return "not a cut set";
  }
  return "";
}

struct CutSet {
  ConjClass root;
  CutKind kind = CutKind::NotCut;
  std::vector<QComponent> qcomponents;
  long total_components = 0;
};

// Component and potential data of an axis quotient; enough to label any
// lifted direction by (component, residue mod d).
struct AxisAnalysis {
  ConjClass base;
  int rank = 0;
  std::vector<int> qid;
  std::vector<int> comp;  // per qvertex
  std::vector<long> pot;  // per qvertex
  std::vector<long> d;    // per component
  bool dropped_trivial_loop = false;
  CutSet cut;

  int length() const { return static_cast<int>(base.size()); }
};

namespace detail {

struct VoltageUnionFind {
  std::vector<int> parent;
  std::vector<long> off;  // pot(x) - pot(parent(x))
  std::vector<long> g;
  explicit VoltageUnionFind(int n) : parent(n), off(n, 0), g(n, 0) { std::iota(parent.begin(), parent.end(), 0); }
  int find(int x) {
    if (parent[x] == x) return x;
    int r = find(parent[x]);
    off[x] += off[parent[x]];
    parent[x] = r;
    return r;
  }
  // record an edge with pot(v) = pot(u) + delta
  void unite(int u, int v, long delta) {
    int ru = find(u), rv = find(v);
    if (ru == rv) {
      long mis = off[u] + delta - off[v];
      g[ru] = std::gcd(g[ru], std::labs(mis));
      return;
    }
    if (rv < ru) {
      std::swap(u, v);
      std::swap(ru, rv);
      delta = -delta;
    }
    parent[rv] = ru;
    off[rv] = off[u] + delta - off[v];
    g[ru] = std::gcd(g[ru], g[rv]);
  }
};

}  // namespace detail

inline CutKind kind_for(bool in_multiword, long total) {
  if (total < 2) return CutKind::NotCut;
  return in_multiword ? CutKind::CutPoint : CutKind::CutPair;
}

inline AxisAnalysis analyze_axis(const Multiword& m, const ConjClass& g) {
  AxisAnalysis a;
  a.base = g;
  a.rank = m.rank;
  std::vector<QVertex> qv;
  a.qid = detail::axis_qids(m.rank, g.letters(), &qv);
  int nq = static_cast<int>(qv.size());
  int r2 = 2 * m.rank;
  detail::VoltageUnionFind uf(nq);
  auto res = detail::for_each_axis_edge(m, g.letters(), [&](int i1, Letter x1, int i2, Letter x2, long volt, int) {
    uf.unite(a.qid[i1 * r2 + x1], a.qid[i2 * r2 + x2], volt);
  });
  a.dropped_trivial_loop = res.first;
  a.comp.assign(nq, -1);
  a.pot.assign(nq, 0);
  std::vector<int> root_to_comp(nq, -1);
  for (int v = 0; v < nq; ++v) {
    int r = uf.find(v);
    if (root_to_comp[r] < 0) {
      root_to_comp[r] = static_cast<int>(a.d.size());
      if (uf.g[r] == 0)
        throw Error(ErrorKind::ZeroMonodromy, "component with zero monodromy over axis " + to_string(g));
      a.d.push_back(uf.g[r]);
    }
    a.comp[v] = root_to_comp[r];
    a.pot[v] = uf.off[v];
  }
  a.cut.root = g;
  for (std::size_t c = 0; c < a.d.size(); ++c) {
    a.cut.qcomponents.push_back({static_cast<int>(c), a.d[c]});
    a.cut.total_components += a.d[c];
  }
  a.cut.kind = kind_for(m.contains(g), a.cut.total_components);
  return a;
}

inline std::vector<QComponent> cut_components(const AxisGraph& a) {
  int nq = static_cast<int>(a.qvertices.size());
  detail::VoltageUnionFind uf(nq);
  for (const auto& e : a.qedges) uf.unite(e.u, e.v, e.voltage);
  std::vector<QComponent> out;
  std::vector<int> seen(nq, -1);
  for (int v = 0; v < nq; ++v) {
    int r = uf.find(v);
    if (seen[r] >= 0) continue;
    if (uf.g[r] == 0) throw Error(ErrorKind::ZeroMonodromy, "component with zero monodromy");
    seen[r] = static_cast<int>(out.size());
    out.push_back({seen[r], uf.g[r]});
  }
  return out;
}

inline CutSet classify_cutset(const Multiword& m, const Word& g) {
  ConjClass c = make_class(g);
  if (!is_prepared(whitehead_graph(m)))
    throw Error(ErrorKind::BasisNotPrepared, "Whitehead graph must be connected without cut vertices");
  return analyze_axis(m, c).cut;
}

struct EndpointLabel {
  int component = 0;
  long residue = 0;
  bool operator==(const EndpointLabel& o) const = default;
};

// Prefix of the geodesic ray from the identity to (conj * w^(sign*inf)).
inline Letters ray_prefix(const Letters& conj, const Letters& w, int sign, std::size_t extra) {
  Letters red = free_reduce(w);
  if (red.empty()) throw Error(ErrorKind::TrivialWord, "endpoint of the identity");
  std::size_t i = 0, j = red.size();
  while (j - i >= 2 && red[i] == inv(red[j - 1])) {
    ++i;
    --j;
  }
  Letters core(red.begin() + i, red.begin() + j);
  if (sign < 0) core = inverse_letters(core);
  Letters head = concat_reduce(conj, Letters(red.begin(), red.begin() + i));
  std::size_t want = head.size() + extra;
  std::size_t reps = (2 * head.size() + want) / core.size() + 2;
  Letters ray = head;
  for (std::size_t r = 0; r < reps; ++r) ray = concat_reduce(ray, core);
  ray.resize(std::min(ray.size(), want));
  return ray;
}

// Label of the endpoint (conj * w^(sign*inf)) relative to the axis of a.base:
// the lifted complementary component containing it, or nullopt when the
// endpoint is one of the axis endpoints.
inline std::optional<EndpointLabel> locate_endpoint(const AxisAnalysis& a, const Letters& conj, const Letters& w,
                                                    int sign) {
  const Letters& g = a.base.letters();
  long L = static_cast<long>(g.size());
  Letters cr = cyclic_core(free_reduce(w));
  std::size_t extra = 2 * (cr.size() + g.size()) + 2;
  Letters ray = ray_prefix(conj, w, sign, extra);
  std::size_t K = ray.size();
  long index = 0;
  std::size_t k = 0;
  if (ray[0] == g[0]) {
    while (k < K && ray[k] == g[k % L]) ++k;
    index = static_cast<long>(k);
  } else if (ray[0] == inv(g[L - 1])) {
    while (k < K && ray[k] == inv(g[detail::posmod(L - 1 - static_cast<long>(k), L)])) ++k;
    index = -static_cast<long>(k);
  }
  if (k >= K) return std::nullopt;
  Letter dir = ray[k];
  long i = detail::posmod(index, L);
  long mdom = detail::floordiv(index, L);
  int q = a.qid[i * 2 * a.rank + dir];
  if (q < 0) throw Error(ErrorKind::SymmetryViolation, "ray left the axis along the axis");
  int c = a.comp[q];
  return EndpointLabel{c, detail::posmod(mdom - a.pot[q], a.d[c])};
}

// A cut set translated into position: conj * axis(root).
struct Positioned {
  ConjClass root;
  Letters conj;
};

// Do the endpoints of h*axis(b) lie in different lifted components relative
// to the axis of a? The mirrored computation must agree.
inline bool crosses(const AxisAnalysis& a, const AxisAnalysis& b, const Letters& h) {
  if (a.cut.kind != CutKind::CutPair || b.cut.kind != CutKind::CutPair)
    throw Error(ErrorKind::NotCutPair, "crossing is defined for cut pairs");
  auto p = locate_endpoint(a, h, b.base.letters(), 1);
  auto q = locate_endpoint(a, h, b.base.letters(), -1);
  Letters hi = inverse_letters(h);
  auto r = locate_endpoint(b, hi, a.base.letters(), 1);
  auto s = locate_endpoint(b, hi, a.base.letters(), -1);
  if (!p || !q || !r || !s) {
    if (p.has_value() != r.has_value() || q.has_value() != s.has_value())
      throw Error(ErrorKind::SymmetryViolation, "shared endpoint seen from one side only");
    return false;
  }
  bool one = !(*p == *q), two = !(*r == *s);
  if (one != two)
    throw Error(ErrorKind::SymmetryViolation,
                "crossing of " + to_string(a.base) + " and " + to_string(b.base) + " is not symmetric");
  return one;
}

inline bool separates(const AxisAnalysis& s, const Positioned& t1, const Positioned& t2) {
  auto side = [&](const Positioned& t) {
    auto p = locate_endpoint(s, t.conj, t.root.letters(), 1);
    auto q = locate_endpoint(s, t.conj, t.root.letters(), -1);
    if (!p || !q) throw Error(ErrorKind::CrossingPair, "positioned cut set meets the separating cut set");
    if (!(*p == *q)) throw Error(ErrorKind::CrossingPair, "positioned cut set crosses the separating cut set");
    return *p;
  };
  return !(side(t1) == side(t2));
}

// Bell numbers by the Bell triangle.
inline BigInt bell_number(int x) {
  std::vector<BigInt> row{1};
  for (int i = 0; i < x; ++i) {
    std::vector<BigInt> next{row.back()};
    for (const auto& v : row) next.push_back(next.back() + v);
    row = std::move(next);
  }
  return row.front();
}

// z = 1 + (2n)^(Bell(x) + 2), x the largest valence of the Whitehead graph.
inline BigInt candidate_bound(const Multiword& m) {
  int x = whitehead_graph(m).max_valence();
  BigInt y = bell_number(x);
  double bits = (static_cast<double>(y) + 2.0) * std::log2(2.0 * m.rank);
  if (bits > 8e6) throw Error(ErrorKind::InvalidInput, "candidate bound too large to materialize");
  return 1 + boost::multiprecision::pow(BigInt(2 * m.rank), static_cast<unsigned>(y) + 2);
}

inline bool bound_reached(const Multiword& m, long max_len) {
  int x = whitehead_graph(m).max_valence();
  BigInt y = bell_number(x);
  double bits = (static_cast<double>(y) + 2.0) * std::log2(2.0 * m.rank);
  if (bits > 62) return false;
  return BigInt(max_len) >= candidate_bound(m);
}

// Visit canonical representatives of all indivisible conjugacy classes of
// length `len` whose first two letters are (c0, c1). Pruned by the
// pre-necklace condition.
template <class Fn>
void enumerate_classes_with_prefix(int rank, int len, Letter c0, Letter c1, Fn&& fn) {
  Letters w(len);
  w[0] = c0;
  if (len == 1) {
    if (c1 < 0) fn(w);
    return;
  }
  if (c1 == inv(c0) || c1 < c0 || inv(c1) < c0) return;
  w[1] = c1;
  int n = 2 * rank;
  auto rec = [&](auto&& self, int k, int p) -> void {
    if (k == len) {
      if (len % p != 0 && p != len) return;
      if (w[len - 1] == inv(w[0])) return;
      if (primitive_period(w) != static_cast<std::size_t>(len)) return;
      if (canonical_cyclic(w) != w) return;
      fn(w);
      return;
    }
    for (Letter x = c0; x < n; ++x) {
      if (x == inv(w[k - 1]) || inv(x) < c0) continue;
      Letter ref = w[k - p];
      if (x < ref) continue;
      w[k] = x;
      self(self, k + 1, x == ref ? p : k + 1);
    }
  };
  rec(rec, 2, c1 == c0 ? 1 : 2);
}

template <class Fn>
void enumerate_classes(int rank, int max_len, Fn&& fn) {
  for (int len = 1; len <= max_len; ++len)
    for (Letter c0 = 0; c0 < 2 * rank; c0 += 2) {
      if (len == 1) {
        enumerate_classes_with_prefix(rank, 1, c0, -1, fn);
        continue;
      }
      for (Letter c1 = c0; c1 < 2 * rank; ++c1) enumerate_classes_with_prefix(rank, len, c0, c1, fn);
    }
}

inline unsigned worker_count() {
  if (const char* env = std::getenv("JSJ_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return static_cast<unsigned>(v);
  }
  unsigned h = std::thread::hardware_concurrency();
  return h == 0 ? 1 : h;
}

struct ScanResult {
  std::vector<CutSet> cutsets;  // shortlex by root
  bool certified = false;
  int max_len = 0;
};

// Classify every indivisible class of length <= max_len; keep the cut sets.
inline ScanResult scan_candidates(const Multiword& m, int max_len) {
  if (!is_prepared(whitehead_graph(m)))
    throw Error(ErrorKind::BasisNotPrepared, "Whitehead graph must be connected without cut vertices");
  struct Task {
    int len;
    Letter c0, c1;
  };
  std::vector<Task> tasks;
  for (int len = 1; len <= max_len; ++len)
    for (Letter c0 = 0; c0 < 2 * m.rank; c0 += 2) {
      if (len == 1) {
        tasks.push_back({1, c0, -1});
        continue;
      }
      for (Letter c1 = c0; c1 < 2 * m.rank; ++c1) tasks.push_back({len, c0, c1});
    }
  std::atomic<std::size_t> next{0};
  std::mutex mu;
  std::vector<CutSet> found;
  std::exception_ptr failure;
  auto work = [&] {
    try {
      for (std::size_t t; (t = next++) < tasks.size();) {
        std::vector<CutSet> local;
        enumerate_classes_with_prefix(m.rank, tasks[t].len, tasks[t].c0, tasks[t].c1, [&](const Letters& w) {
          ConjClass c{m.rank, Word{m.rank, w}};
          CutSet cs = analyze_axis(m, c).cut;
          if (cs.kind != CutKind::NotCut) local.push_back(std::move(cs));
        });
        std::lock_guard<std::mutex> lk(mu);
        for (auto& c : local) found.push_back(std::move(c));
      }
    } catch (...) {
      std::lock_guard<std::mutex> lk(mu);
      if (!failure) failure = std::current_exception();
      next = tasks.size();
    }
  };
  unsigned nw = std::min<unsigned>(worker_count(), static_cast<unsigned>(std::max<std::size_t>(tasks.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < nw; ++i) pool.emplace_back(work);
  work();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
  std::sort(found.begin(), found.end(), [](const CutSet& a, const CutSet& b) { return a.root < b.root; });
  return ScanResult{std::move(found), bound_reached(m, max_len), max_len};
}

}  // namespace jsj

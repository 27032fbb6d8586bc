#pragma once

// JSON documents for every command, text rendered from them, and DOT export.

#include <json.hpp>

#include "geometry.hpp"

namespace jsj {

using Json = nlohmann::ordered_json;

inline Json words_json(const std::vector<Word>& ws) {
  Json a = Json::array();
  for (const auto& w : ws) a.push_back(to_string(w));
  return a;
}

inline Json multiword_json(const Multiword& m) {
  Json a = Json::array();
  for (const auto& c : m.classes) a.push_back(to_string(c));
  return a;
}

inline Json whitehead_json(const Multiword& m) {
  auto g = whitehead_graph(m);
  auto con = connectivity(g);
  Json j;
  j["rank"] = m.rank;
  j["multiword"] = multiword_json(m);
  Json vs = Json::array();
  auto val = g.valences();
  for (Letter x = 0; x < g.vertex_count(); ++x) vs.push_back({{"name", letter_name(m.rank, x)}, {"valence", val[x]}});
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& e : g.edges)
    es.push_back({{"u", letter_name(m.rank, e.u)},
                  {"v", letter_name(m.rank, e.v)},
                  {"prov", "w" + std::to_string(e.cls) + ":" + std::to_string(e.pos)}});
  j["edges"] = es;
  j["connected"] = con.connected;
  Json cv = Json::array();
  for (Letter x : con.cut_vertices) cv.push_back(letter_name(m.rank, x));
  j["cut_vertices"] = cv;
  j["circle"] = is_circle(g);
  return j;
}

inline Json minimize_json(const Multiword& m) {
  auto r = minimize(m);
  auto g = whitehead_graph(r.minimal);
  Json j;
  j["rank"] = m.rank;
  j["input"] = multiword_json(m);
  j["length"] = m.total_length();
  j["minimal"] = multiword_json(r.minimal);
  j["minimal_length"] = r.minimal.total_length();
  Json mv = Json::array();
  for (const auto& f : r.moves) mv.push_back(to_string(f));
  j["moves"] = mv;
  j["connected"] = connectivity(g).connected;
  j["circle"] = is_circle(g);
  return j;
}

inline Json cutset_json(const CutSet& c) {
  Json j;
  j["root"] = to_string(c.root);
  j["kind"] = cut_kind_name(c.kind);
  j["total_components"] = c.total_components;
  Json d = Json::array();
  for (const auto& q : c.qcomponents) d.push_back(q.d);
  j["monodromy"] = d;
  return j;
}

inline Json scan_json(const Multiword& m, const ScanResult& s, const std::vector<CutSet>& uncrossed) {
  Json j;
  j["rank"] = m.rank;
  j["multiword"] = multiword_json(m);
  j["max_len"] = s.max_len;
  j["certified"] = s.certified;
  Json cs = Json::array();
  for (const auto& c : s.cutsets) cs.push_back(cutset_json(c));
  j["cutsets"] = cs;
  Json u = Json::array();
  for (const auto& c : uncrossed) u.push_back(to_string(c.root));
  j["uncrossed"] = u;
  return j;
}

inline Json gog_json(const RJSJResult& r) {
  Json j;
  j["rank"] = r.input.rank;
  j["multiword"] = multiword_json(r.input);
  j["outcome"] = outcome_name(r.outcome);
  j["certified"] = r.certified;
  j["scan_length"] = r.scan_length;
  Json vs = Json::array();
  for (const auto& c : r.graph.cyclic)
    vs.push_back({{"id", c.id}, {"kind", "cyclic"}, {"root", to_string(c.root)}, {"in_multiword", c.in_multiword}});
  for (const auto& v : r.graph.noncyclic)
    vs.push_back({{"id", v.id},
                  {"kind", "vertex"},
                  {"basis", words_json(v.basis)},
                  {"induced", multiword_json(v.induced)},
                  {"class", piece_class_name(v.cls)},
                  {"certified", v.certified}});
  j["vertices"] = vs;
  Json es = Json::array();
  for (const auto& e : r.graph.edges)
    es.push_back({{"cyclic", e.cyclic}, {"noncyclic", e.noncyclic}, {"degree", e.degree}, {"image", to_string(e.image)}});
  j["edges"] = es;
  return j;
}

inline PieceClass piece_class_from(const std::string& s) {
  if (s == "rigid") return PieceClass::Rigid;
  if (s == "qh-surface") return PieceClass::QHSurface;
  if (s == "undetermined") return PieceClass::Undetermined;
  throw Error(ErrorKind::InvalidInput, "unknown vertex class '" + s + "'");
}

// Graph of groups from its JSON document.
inline GraphOfGroups gog_from_json(const Json& j) {
  try {
    GraphOfGroups g;
    g.rank = j.at("rank").get<int>();
    std::map<int, int> rank_of;
    for (const auto& v : j.at("vertices")) {
      std::string kind = v.at("kind").get<std::string>();
      int id = v.at("id").get<int>();
      if (kind == "cyclic") {
        CyclicVertex c;
        c.id = id;
        c.root = make_class(parse_word(v.at("root").get<std::string>(), g.rank));
        c.in_multiword = v.value("in_multiword", false);
        g.cyclic.push_back(c);
      } else if (kind == "vertex") {
        NoncyclicVertex n;
        n.id = id;
        for (const auto& b : v.at("basis")) n.basis.push_back(parse_word(b.get<std::string>(), g.rank));
        int r = std::max(n.rank(), 1);
        std::vector<Word> ind;
        for (const auto& w : v.at("induced")) ind.push_back(parse_word(w.get<std::string>(), r));
        n.induced = normalize_multiword(ind, r);
        n.cls = piece_class_from(v.at("class").get<std::string>());
        n.certified = v.value("certified", false);
        rank_of[id] = r;
        g.noncyclic.push_back(std::move(n));
      } else {
        throw Error(ErrorKind::InvalidInput, "unknown vertex kind '" + kind + "'");
      }
    }
    for (const auto& e : j.at("edges")) {
      GogEdge x;
      x.cyclic = e.at("cyclic").get<int>();
      x.noncyclic = e.at("noncyclic").get<int>();
      x.degree = e.at("degree").get<int>();
      if (!rank_of.count(x.noncyclic)) throw Error(ErrorKind::InvalidInput, "edge to an unknown vertex");
      x.image = make_class(parse_word(e.at("image").get<std::string>(), rank_of[x.noncyclic]));
      g.edges.push_back(x);
    }
    return g;
  } catch (const nlohmann::json::exception& ex) {
    throw Error(ErrorKind::InvalidInput, std::string("malformed graph of groups: ") + ex.what());
  }
}

inline Json verify_json(const VerifyReport& rep) {
  Json j;
  j["pass"] = rep.pass;
  j["violations"] = rep.violations;
  return j;
}

inline Json certificate_json(const Multiword& minimal, const RotationCertificate& c) {
  auto g = whitehead_graph(minimal);
  Json j;
  Json rot = Json::object();
  for (Letter x = 0; x < 2 * c.rank; ++x) {
    Json ends = Json::array();
    for (int e : c.rotation[x]) {
      const auto& ed = g.edges[e / 2];
      ends.push_back("w" + std::to_string(ed.cls) + ":" + std::to_string(ed.pos));
    }
    rot[letter_name(c.rank, x)] = ends;
  }
  j["rotation"] = rot;
  Json bits = Json::object();
  for (int i = 0; i < c.rank; ++i)
    bits[letter_name(c.rank, make_letter(i + 1, 1))] = c.reversing[i] ? "reversing" : "orientable";
  j["bits"] = bits;
  j["orientable"] = c.orientable();
  return j;
}

inline Json geometry_json(const GeometryReport& r) {
  Json j;
  j["geometric"] = r.geometric;
  j["minimal"] = multiword_json(r.minimal);
  if (r.certificate)
    j["certificate"] = certificate_json(r.minimal, *r.certificate);
  else
    j["certificate"] = nullptr;
  if (!r.factors.empty()) {
    Json fs = Json::array();
    for (const auto& f : r.factors) fs.push_back(geometry_json(f));
    j["factors"] = fs;
  }
  return j;
}

inline Json vgeom_json(const Multiword& m, const RJSJResult& rj) {
  auto v = is_virtually_geometric(m, rj);
  Json j;
  j["rank"] = m.rank;
  j["multiword"] = multiword_json(m);
  j["outcome"] = outcome_name(rj.outcome);
  j["virtually_geometric"] = v.verdict;
  j["certified"] = v.certified;
  j["scan_length"] = rj.scan_length;
  Json ps = Json::array();
  std::map<int, GeometryReport> certs;
  for (const auto& p : v.pieces) {
    ps.push_back({{"id", p.id}, {"class", piece_class_name(p.cls)}, {"geometric", p.geometric}});
    certs[p.id] = *p.geometry;
  }
  j["pieces"] = ps;
  if (v.verdict && rj.outcome == Outcome::Decomposition) {
    bool all_geom = std::all_of(v.pieces.begin(), v.pieces.end(), [](const PieceReport& p) { return p.geometry->geometric; });
    if (all_geom) {
      auto a = assembly_obstructions(m, rj, certs);
      j["assembly_obstructions"] = a.obstructions;
    }
  }
  return j;
}

inline Json lift_json(const Multiword& m, const std::vector<Word>& gens, const LiftResult& r) {
  Json j;
  j["rank"] = m.rank;
  j["multiword"] = multiword_json(m);
  j["subgroup"] = words_json(gens);
  j["index"] = stallings_graph(m.rank, gens).index().value_or(0);
  j["basis"] = words_json(r.basis);
  Json es = Json::array();
  for (std::size_t i = 0; i < r.elements.size(); ++i)
    es.push_back({{"element", to_string(r.elements[i])}, {"rewrite", to_string(r.rewrites[i])}});
  j["elements"] = es;
  j["lifted"] = multiword_json(r.lifted);
  return j;
}

// ---------------------------------------------------------------------------
// Text

namespace detail {

inline std::string join(const Json& a, const char* sep = ", ") {
  std::string s;
  for (std::size_t i = 0; i < a.size(); ++i) s += (i ? sep : "") + a[i].get<std::string>();
  return s;
}

inline std::string flag(bool certified) { return certified ? "certified" : "uncertified"; }

}  // namespace detail

inline std::string render_text(const std::string& cmd, const Json& j) {
  std::ostringstream os;
  if (cmd == "wh") {
    os << "Whitehead graph of {" << detail::join(j["multiword"]) << "}\n";
    for (const auto& e : j["edges"])
      os << "  " << e["u"].get<std::string>() << " -- " << e["v"].get<std::string>() << "  (" << e["prov"].get<std::string>() << ")\n";
    os << (j["connected"].get<bool>() ? "connected" : "disconnected");
    if (!j["cut_vertices"].empty()) os << ", cut vertices " << detail::join(j["cut_vertices"]);
    if (j["circle"].get<bool>()) os << ", circle";
    os << "\n";
  } else if (cmd == "min") {
    os << "minimal: {" << detail::join(j["minimal"]) << "}  length " << j["minimal_length"].get<long>() << " (was "
       << j["length"].get<long>() << ")\n";
    if (!j["moves"].empty()) os << "moves: " << detail::join(j["moves"], " ") << "\n";
    if (j["circle"].get<bool>()) os << "Whitehead graph is a circle\n";
    if (!j["connected"].get<bool>()) os << "Whitehead graph is disconnected\n";
  } else if (cmd == "cut") {
    os << j["kind"].get<std::string>() << ", " << j["total_components"].get<long>() << " components\n";
    os << "monodromy:";
    for (const auto& d : j["monodromy"]) os << " " << d.get<long>();
    os << "\n";
  } else if (cmd == "scan") {
    os << "scan to length " << j["max_len"].get<int>() << " (" << detail::flag(j["certified"].get<bool>()) << "): "
       << j["cutsets"].size() << " cut sets\n";
    for (const auto& c : j["cutsets"])
      os << "  " << c["root"].get<std::string>() << ": " << c["kind"].get<std::string>() << ", "
         << c["total_components"].get<long>() << " components\n";
    os << "uncrossed: " << (j["uncrossed"].empty() ? std::string("none") : detail::join(j["uncrossed"])) << "\n";
  } else if (cmd == "jsj") {
    os << "rJSJ of {" << detail::join(j["multiword"]) << "}: " << j["outcome"].get<std::string>() << " ("
       << detail::flag(j["certified"].get<bool>()) << ", scan length " << j["scan_length"].get<int>() << ")\n";
    for (const auto& v : j["vertices"]) {
      if (v["kind"] == "cyclic")
        os << "  [" << v["id"].get<int>() << "] cyclic <" << v["root"].get<std::string>() << ">"
           << (v["in_multiword"].get<bool>() ? " in multiword" : "") << "\n";
      else
        os << "  [" << v["id"].get<int>() << "] " << v["class"].get<std::string>() << " <" << detail::join(v["basis"])
           << ">  induced {" << detail::join(v["induced"]) << "}\n";
    }
    for (const auto& e : j["edges"])
      os << "  [" << e["cyclic"].get<int>() << "] -- [" << e["noncyclic"].get<int>() << "]  degree "
         << e["degree"].get<int>() << ", image " << e["image"].get<std::string>() << "\n";
  } else if (cmd == "geom") {
    os << (j["geometric"].get<bool>() ? "geometric" : "not geometric");
    if (j["certificate"].is_object()) {
      os << " (" << (j["certificate"]["orientable"].get<bool>() ? "orientable" : "non-orientable") << ")\n";
      for (const auto& [k, v] : j["certificate"]["rotation"].items()) os << "  " << k << ": " << detail::join(v, " ") << "\n";
      os << "  bits:";
      for (const auto& [k, v] : j["certificate"]["bits"].items()) os << " " << k << "=" << v.get<std::string>();
    }
    os << "\n";
  } else if (cmd == "vgeom") {
    bool vg = j["virtually_geometric"].get<bool>();
    os << (vg ? "virtually geometric" : "not virtually geometric");
    if (!j["certified"].get<bool>())
      os << " (uncertified: rigidity checked to length " << j["scan_length"].get<int>() << ")";
    os << "\n";
    for (const auto& p : j["pieces"])
      os << "  [" << p["id"].get<int>() << "] " << p["class"].get<std::string>() << ": "
         << (p["geometric"].get<bool>() ? "geometric" : "not geometric") << "\n";
    if (j.contains("assembly_obstructions")) {
      if (j["assembly_obstructions"].empty())
        os << "no assembly obstruction\n";
      else
        for (const auto& o : j["assembly_obstructions"]) os << "  obstruction: " << o.get<std::string>() << "\n";
    }
  } else if (cmd == "lift") {
    os << "index " << j["index"].get<std::size_t>() << ", basis " << detail::join(j["basis"]) << "\n";
    for (const auto& e : j["elements"])
      os << "  " << e["element"].get<std::string>() << " = " << e["rewrite"].get<std::string>() << "\n";
    os << "lifted: {" << detail::join(j["lifted"]) << "}\n";
  } else if (cmd == "verify") {
    os << (j["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    for (const auto& v : j["violations"]) os << "  " << v.get<std::string>() << "\n";
  } else if (cmd == "free") {
    os << "free splitting:\n";
    for (const auto& f : j["factors"]) os << "  rank " << f["rank"].get<int>() << ": {" << detail::join(f["classes"]) << "}\n";
  } else {
    os << j.dump(2) << "\n";
  }
  return os.str();
}

inline Json free_splitting_json(const Multiword& m) {
  Json j;
  j["rank"] = m.rank;
  j["multiword"] = multiword_json(m);
  j["outcome"] = "free-splitting";
  Json fs = Json::array();
  for (const auto& f : free_factors(m)) {
    Json c = Json::array();
    for (const auto& k : f.classes) c.push_back(to_string(k));
    fs.push_back({{"rank", f.generators.size()}, {"classes", c}});
  }
  j["factors"] = fs;
  return j;
}

// ---------------------------------------------------------------------------
// DOT

inline std::string gog_dot(const Json& j) {
  std::ostringstream os;
  os << "graph gog {\n";
  for (const auto& v : j["vertices"]) {
    int id = v["id"].get<int>();
    if (v["kind"] == "cyclic")
      os << "  v" << id << " [shape=ellipse, label=\"<" << v["root"].get<std::string>() << ">\"];\n";
    else
      os << "  v" << id << " [shape=box, label=\"<" << detail::join(v["basis"]) << ">\\n" << v["class"].get<std::string>()
         << "\"];\n";
  }
  for (const auto& e : j["edges"])
    os << "  v" << e["cyclic"].get<int>() << " -- v" << e["noncyclic"].get<int>() << " [label=\"" << e["degree"].get<int>()
       << "\"];\n";
  os << "}\n";
  return os.str();
}

}  // namespace jsj

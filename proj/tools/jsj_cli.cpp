// Command-line front end.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <jsj/jsj.hpp>

namespace {

struct Options {
  int rank = 0;
  std::string words;
  std::string file;
  int max_len = 12;
  bool certified = false;
  std::string format = "text";
  std::string subgroup;
  std::string arg;  // positional: word for `cut`, document for `verify`
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw jsj::Error(jsj::ErrorKind::InvalidInput, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

jsj::Multiword load_multiword(const Options& o) {
  if (o.words.empty() == o.file.empty())
    throw jsj::Error(jsj::ErrorKind::InvalidInput, "give exactly one of --words and --file");
  return jsj::parse_multiword(o.words.empty() ? read_file(o.file) : o.words, o.rank);
}

void need_analysis_rank(const Options& o) {
  if (o.rank < 2) throw jsj::Error(jsj::ErrorKind::RankMismatch, "analysis needs --rank at least 2");
}

void check_certified(const Options& o, const jsj::Multiword& m) {
  if (!o.certified) return;
  jsj::BigInt bound = jsj::candidate_bound(m);
  if (bound > o.max_len)
    throw jsj::Error(jsj::ErrorKind::InvalidInput,
                     "a certified scan needs --max-len at least " + bound.str() + " for this multiword");
}

void emit(const Options& o, const std::string& cmd, const jsj::Json& j, const std::string& dot = {}) {
  if (o.format == "json")
    std::cout << j.dump(2) << "\n";
  else if (o.format == "dot" && !dot.empty())
    std::cout << dot;
  else
    std::cout << jsj::render_text(cmd, j);
}

int run(const std::string& cmd, const Options& o) {
  jsj::Multiword m = load_multiword(o);
  if (cmd == "wh") {
    emit(o, cmd, jsj::whitehead_json(m), jsj::to_dot(jsj::whitehead_graph(m)));
    return 0;
  }
  if (cmd == "min") {
    emit(o, cmd, jsj::minimize_json(m), jsj::to_dot(jsj::whitehead_graph(jsj::minimize(m).minimal)));
    return 0;
  }
  if (cmd == "lift") {
    if (o.subgroup.empty()) throw jsj::Error(jsj::ErrorKind::InvalidInput, "lift needs --subgroup");
    auto gens = jsj::parse_word_list(o.subgroup, o.rank);
    auto ws = jsj::parse_word_list(o.words.empty() ? read_file(o.file) : o.words, o.rank);
    auto r = jsj::lift_words(o.rank, ws, gens);
    emit(o, cmd, jsj::lift_json(m, gens, r));
    return 0;
  }
  need_analysis_rank(o);
  jsj::RJSJConfig cfg;
  cfg.max_len = o.max_len;
  cfg.require_certified = o.certified;
  if (cmd == "cut") {
    if (o.arg.empty()) throw jsj::Error(jsj::ErrorKind::InvalidInput, "cut needs a word");
    jsj::Word g = jsj::parse_word(o.arg, o.rank);
    if (!jsj::is_prepared(jsj::whitehead_graph(m)))
      throw jsj::Error(jsj::ErrorKind::BasisNotPrepared,
                       "Whitehead graph must be connected without cut vertices; run `min` first");
    auto c = jsj::classify_cutset(m, g);
    emit(o, cmd, jsj::cutset_json(c));
    return 0;
  }
  if (cmd == "scan") {
    check_certified(o, m);
    auto mr = jsj::minimize(m);
    if (!jsj::is_prepared(jsj::whitehead_graph(mr.minimal)))
      throw jsj::Error(jsj::ErrorKind::FreeSplitting, "minimal Whitehead graph is disconnected");
    if (!mr.moves.empty() && o.format != "json")
      std::cout << "scanning the minimal representative {" << jsj::to_string(mr.minimal) << "}\n";
    auto s = jsj::scan_candidates(mr.minimal, o.max_len);
    auto sel = jsj::select_uncrossed(mr.minimal, s.cutsets);
    emit(o, cmd, jsj::scan_json(mr.minimal, s, sel));
    return 0;
  }
  if (cmd == "geom") {
    emit(o, cmd, jsj::geometry_json(jsj::is_geometric(m)));
    return 0;
  }
  if (cmd == "jsj" || cmd == "vgeom") {
    check_certified(o, m);
    auto r = jsj::compute_rjsj(m, cfg);
    if (cmd == "jsj") {
      auto j = jsj::gog_json(r);
      emit(o, cmd, j, jsj::gog_dot(j));
    } else {
      emit(o, cmd, jsj::vgeom_json(m, r));
    }
    return 0;
  }
  if (cmd == "verify") {
    if (o.arg.empty()) throw jsj::Error(jsj::ErrorKind::InvalidInput, "verify needs a graph of groups document");
    jsj::Json doc;
    try {
      doc = jsj::Json::parse(read_file(o.arg));
    } catch (const nlohmann::json::exception& e) {
      throw jsj::Error(jsj::ErrorKind::InvalidInput, std::string("cannot parse document: ") + e.what());
    }
    auto g = jsj::gog_from_json(doc);
    emit(o, cmd, jsj::verify_json(jsj::verify_rjsj(m, g, o.max_len)));
    return 0;
  }
  throw jsj::Error(jsj::ErrorKind::InvalidInput, "unknown command " + cmd);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Relative JSJ decompositions of multiwords in free groups"};
  app.require_subcommand(1);
  Options o;
  const std::vector<std::pair<std::string, std::string>> cmds = {
      {"wh", "Whitehead graph"},
      {"min", "Whitehead minimization"},
      {"cut", "classify a cut set candidate"},
      {"scan", "enumerate cut sets up to --max-len"},
      {"jsj", "relative JSJ decomposition"},
      {"geom", "geometricity"},
      {"vgeom", "virtual geometricity"},
      {"lift", "lift to a finite index subgroup"},
      {"verify", "check a graph of groups document"},
  };
  for (const auto& [name, help] : cmds) {
    auto* sc = app.add_subcommand(name, help);
    sc->add_option("--rank", o.rank, "rank of the free group")->required()->check(CLI::PositiveNumber);
    sc->add_option("--words", o.words, "comma separated words");
    sc->add_option("--file", o.file, "file with one word per line");
    sc->add_option("--max-len", o.max_len, "scan length")->check(CLI::PositiveNumber);
    sc->add_flag("--certified", o.certified, "require a certified scan");
    sc->add_option("--format", o.format, "output format")->check(CLI::IsMember({"text", "json", "dot"}));
    sc->add_option("--subgroup", o.subgroup, "subgroup generators for lift");
    if (name == "cut") sc->add_option("word", o.arg, "candidate word");
    if (name == "verify") sc->add_option("document", o.arg, "graph of groups JSON");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 3;
  }
  std::string cmd = app.get_subcommands().front()->get_name();
  try {
    return run(cmd, o);
  } catch (const jsj::Error& e) {
    if (e.kind() == jsj::ErrorKind::FreeSplitting) {
      try {
        auto m = load_multiword(o);
        auto j = jsj::free_splitting_json(m);
        if (o.format == "json")
          std::cout << j.dump(2) << "\n";
        else
          std::cout << jsj::render_text("free", j);
      } catch (...) {
      }
      std::cerr << e.what() << "\n";
      return 2;
    }
    std::cerr << "error: " << e.what() << "\n";
    return jsj::is_input_error(e.kind()) ? 3 : 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}

#include <fstream>
#include <iostream>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dcfg/cnf.hpp"
#include "dcfg/enumerate.hpp"
#include "dcfg/error.hpp"
#include "dcfg/geometry.hpp"
#include "dcfg/grammar_io.hpp"
#include "dcfg/parser.hpp"
#include "dcfg/pumping.hpp"

using nlohmann::json;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;  // non-member, invalid grammar, no certificate
constexpr int kUsage = 2;

dcfg::Grammar load_valid(const std::string& path) {
  dcfg::Grammar g = dcfg::load_grammar(path);
  auto violations = dcfg::validate(g);
  if (!violations.empty()) {
    for (const auto& v : violations) std::cerr << v << "\n";
    throw dcfg::Error(dcfg::Errc::FormatError, "grammar is not valid");
  }
  return g;
}

dcfg::SepWord input_word(const dcfg::Grammar& g, const std::string& text) {
  std::vector<dcfg::Symbol> syms;
  for (char c : text) {
    dcfg::Symbol s = static_cast<unsigned char>(c);
    if (!g.has_symbol(s))
      throw dcfg::Error(dcfg::Errc::FormatError,
                        std::string("symbol '") + c + "' is not in the alphabet");
    syms.push_back(s);
  }
  return dcfg::SepWord(std::move(syms));
}

std::string plain(const dcfg::SepWord& w) { return w.empty() ? std::string() : w.render(); }

json tree_json(const dcfg::CnfGrammar& g, const dcfg::DerivationTree& t, int v) {
  const auto& n = t.nodes[v];
  json j;
  j["label"] = g.nonterminals[n.label].name;
  switch (n.kind) {
    case dcfg::CnfRule::Concat:
      j["op"] = "concat";
      j["children"] = {tree_json(g, t, n.left), tree_json(g, t, n.right)};
      break;
    case dcfg::CnfRule::Inter:
      j["op"] = "inter";
      j["j"] = n.j;
      j["children"] = {tree_json(g, t, n.left), tree_json(g, t, n.right)};
      break;
    case dcfg::CnfRule::Term:
      j["op"] = "term";
      j["sym"] = dcfg::SepWord({n.sym}).render();
      break;
    case dcfg::CnfRule::Eps:
      j["op"] = "eps";
      break;
  }
  j["yield"] = plain(n.yield);
  return j;
}

int cmd_validate(const std::string& path) {
  dcfg::Grammar g = dcfg::load_grammar(path);
  auto violations = dcfg::validate(g);
  json out;
  out["valid"] = violations.empty();
  out["violations"] = violations;
  std::cout << out.dump() << "\n";
  return violations.empty() ? kOk : kNegative;
}

int cmd_cnf(const std::string& path, const std::string& out_path) {
  dcfg::Grammar g = load_valid(path);
  dcfg::CnfGrammar cnf = dcfg::to_cnf(g);
  std::string text = dcfg::serialize_grammar(dcfg::cnf_to_grammar(cnf));
  json out;
  out["nonterminals"] = cnf.nonterminals.size();
  out["rules"] = cnf.rules.size();
  if (!out_path.empty()) {
    std::ofstream f(out_path);
    if (!f) throw dcfg::Error(dcfg::Errc::FormatError, "cannot write " + out_path);
    f << text;
  } else {
    out["grammar"] = text;
  }
  std::cout << out.dump() << "\n";
  return kOk;
}

int cmd_parse(const std::string& path, const std::string& word, int all, int max_trees) {
  dcfg::Grammar g = load_valid(path);
  dcfg::CnfGrammar cnf = dcfg::cnf_of_grammar(g);
  dcfg::SepWord w = input_word(g, word);
  int want = all > 0 ? std::min(all, max_trees) : 1;
  auto trees = dcfg::parse_all(cnf, w, want);
  json out;
  out["member"] = !trees.empty();
  out["trees"] = json::array();
  for (const auto& t : trees) out["trees"].push_back(tree_json(cnf, t, t.root));
  std::cout << out.dump() << "\n";
  return trees.empty() ? kNegative : kOk;
}

int cmd_generate(const std::string& path, int max_len) {
  dcfg::Grammar g = load_valid(path);
  json out;
  out["words"] = json::array();
  for (const auto& w : dcfg::language(g, max_len)) out["words"].push_back(plain(w));
  std::cout << out.dump() << "\n";
  return kOk;
}

int cmd_pump(const std::string& path, const std::string& word, const std::vector<int>& powers,
             const std::vector<int>& select, int max_trees) {
  dcfg::Grammar g = load_valid(path);
  dcfg::CnfGrammar cnf = dcfg::cnf_of_grammar(g);
  dcfg::SepWord w = input_word(g, word);
  std::optional<dcfg::PumpDecomposition> cert;
  if (select.empty()) {
    cert = dcfg::pumping_certificate(cnf, w, max_trees);
  } else {
    cert = dcfg::ogden_certificate(cnf, w, std::set<int>(select.begin(), select.end()), max_trees);
  }
  if (!cert) {
    json out;
    out["error"] = "NoneFound";
    std::cout << out.dump() << "\n";
    return kNegative;
  }
  json out = dcfg::certificate_json(*cert);
  out["verified_powers"] = json::object();
  for (int p : powers)
    out["verified_powers"][std::to_string(p)] = dcfg::recognize(cnf, dcfg::pump_word(*cert, p));
  std::cout << out.dump() << "\n";
  return kOk;
}

int cmd_geometry(const std::string& path, const std::string& word, int max_trees) {
  dcfg::Grammar g = load_valid(path);
  if (g.k > 1)
    throw dcfg::Error(dcfg::Errc::FormatError,
                      "geometry covers rank-1 grammars only (k = " + std::to_string(g.k) + ")");
  dcfg::CnfGrammar cnf = dcfg::cnf_of_grammar(g);
  dcfg::SepWord w = input_word(g, word);
  auto tree = dcfg::parse(cnf, w);
  if (!tree) throw dcfg::Error(dcfg::Errc::NotMember, "word is not in the language");
  (void)max_trees;
  json out;
  out["constituents"] = json::array();
  auto constituents = dcfg::constituents_rank1(*tree);
  for (const auto& [node, c] : constituents)
    out["constituents"].push_back({c.i1, c.j1, c.i2, c.j2});
  out["pumps"] = json::array();
  auto pumps = dcfg::pumps_rank1(*tree);
  for (const auto& p : pumps) out["pumps"].push_back(p.tuple());
  out["constituent_table"] = json::array();
  for (std::size_t a = 0; a < constituents.size(); ++a)
    for (std::size_t b = a + 1; b < constituents.size(); ++b)
      out["constituent_table"].push_back(dcfg::classification_json(
          constituents[a].second, constituents[b].second,
          dcfg::classify_constituents(constituents[a].second, constituents[b].second)));
  out["pump_table"] = json::array();
  for (std::size_t a = 0; a < pumps.size(); ++a)
    for (std::size_t b = a + 1; b < pumps.size(); ++b)
      out["pump_table"].push_back(dcfg::classification_json(
          pumps[a].tuple(), pumps[b].tuple(), dcfg::classify_pumps(pumps[a], pumps[b])));
  std::cout << out.dump() << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"k-displacement context-free grammar toolkit"};
  app.require_subcommand(1);
  int max_trees = 32;
  bool json_flag = true;
  app.add_option("--max-trees", max_trees, "derivation-tree search bound")->capture_default_str();
  app.add_flag("--json,!--no-json", json_flag, "emit JSON payloads (always on)");

  std::string path, word, out_path;
  int all = 0, max_len = 8;
  std::vector<int> powers{0, 2, 3}, select;

  auto* validate = app.add_subcommand("validate", "check a grammar file");
  validate->add_option("path", path)->required();

  auto* cnf = app.add_subcommand("cnf", "convert to normal form");
  cnf->add_option("path", path)->required();
  cnf->add_option("out", out_path, "output grammar file (omit to inline in the payload)");

  auto* parse = app.add_subcommand("parse", "parse a word");
  parse->add_option("path", path)->required();
  parse->add_option("word", word)->required();
  parse->add_option("--all", all, "return up to N derivation trees");

  auto* generate = app.add_subcommand("generate", "enumerate the language");
  generate->add_option("path", path)->required();
  generate->add_option("--max-len", max_len, "length bound")->capture_default_str();

  auto* pump = app.add_subcommand("pump", "extract a pumping certificate");
  pump->add_option("path", path)->required();
  pump->add_option("word", word)->required();
  pump->add_option("--power", powers, "powers to verify")->capture_default_str();
  pump->add_option("--select", select, "Ogden selected positions");

  auto* geometry = app.add_subcommand("geometry", "rank-1 constituent and pump tables");
  geometry->add_option("path", path)->required();
  geometry->add_option("word", word)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) ? kUsage : kOk;
  }

  try {
    if (*validate) return cmd_validate(path);
    if (*cnf) return cmd_cnf(path, out_path);
    if (*parse) return cmd_parse(path, word, all, max_trees);
    if (*generate) return cmd_generate(path, max_len);
    if (*pump) return cmd_pump(path, word, powers, select, max_trees);
    if (*geometry) return cmd_geometry(path, word, max_trees);
  } catch (const dcfg::Error& e) {
    std::cerr << e.what() << "\n";
    return e.code() == dcfg::Errc::NotMember ? kNegative : kUsage;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

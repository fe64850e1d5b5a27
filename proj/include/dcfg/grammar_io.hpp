#pragma once

#include <cctype>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dcfg/error.hpp"
#include "dcfg/grammar.hpp"

namespace dcfg {
namespace io_detail {

struct Token {
  enum Kind { LParen, RParen, Pipe, At, Sep, Eps, Ident, Sym } kind;
  std::string text;
  int at_gap = 0;
};

inline std::vector<Token> tokenize(const std::string& s, int line_no) {
  std::vector<Token> out;
  std::size_t i = 0;
  auto fail = [&](const std::string& m) {
    throw Error(Errc::FormatError, "line " + std::to_string(line_no) + ": " + m);
  };
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (c == '(') { out.push_back({Token::LParen, "("}); ++i; continue; }
    if (c == ')') { out.push_back({Token::RParen, ")"}); ++i; continue; }
    if (c == '|') { out.push_back({Token::Pipe, "|"}); ++i; continue; }
    if (c == '@') {
      std::size_t j = i + 1;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      if (j == i + 1) fail("'@' must be followed by a gap index");
      Token t{Token::At, s.substr(i, j - i)};
      t.at_gap = std::stoi(s.substr(i + 1, j - i - 1));
      out.push_back(t);
      i = j;
      continue;
    }
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j])) && s[j] != '(' &&
           s[j] != ')' && s[j] != '|' && s[j] != '@')
      ++j;
    std::string word = s.substr(i, j - i);
    if (word == "1")
      out.push_back({Token::Sep, word});
    else if (word == "eps")
      out.push_back({Token::Eps, word});
    else if (std::isupper(static_cast<unsigned char>(word[0])))
      out.push_back({Token::Ident, word});
    else if (word.size() == 1)
      out.push_back({Token::Sym, word});
    else
      fail("'" + word + "' is neither a nonterminal nor a single alphabet symbol");
    i = j;
  }
  return out;
}

class TermParser {
 public:
  TermParser(const std::vector<Token>& toks, const Grammar& g, int line_no)
      : toks_(toks), g_(g), line_(line_no) {}

  // expr := seq ('@j' seq)*, concatenation binds tighter than '@'.
  TermPtr parse_expr() {
    TermPtr t = parse_seq();
    while (pos_ < toks_.size() && toks_[pos_].kind == Token::At) {
      int gap = toks_[pos_].at_gap;
      ++pos_;
      TermPtr r = parse_seq();
      t = Term::intercalate(gap, t, r);
    }
    return t;
  }

  bool at_end() const { return pos_ >= toks_.size(); }
  bool at_pipe() const { return pos_ < toks_.size() && toks_[pos_].kind == Token::Pipe; }
  void skip_pipe() { ++pos_; }

 private:
  TermPtr parse_seq() {
    TermPtr t = parse_atom();
    while (pos_ < toks_.size() &&
           (toks_[pos_].kind == Token::LParen || toks_[pos_].kind == Token::Sep ||
            toks_[pos_].kind == Token::Eps || toks_[pos_].kind == Token::Ident ||
            toks_[pos_].kind == Token::Sym)) {
      t = Term::concat(t, parse_atom());
    }
    return t;
  }

  TermPtr parse_atom() {
    if (pos_ >= toks_.size()) fail("unexpected end of rule body");
    const Token& tk = toks_[pos_];
    switch (tk.kind) {
      case Token::LParen: {
        ++pos_;
        TermPtr t = parse_expr();
        if (pos_ >= toks_.size() || toks_[pos_].kind != Token::RParen) fail("missing ')'");
        ++pos_;
        return t;
      }
      case Token::Sep: ++pos_; return Term::sep();
      case Token::Eps: ++pos_; return Term::word(SepWord());
      case Token::Ident: {
        int id = g_.find_nonterminal(tk.text);
        if (id < 0) fail("undefined nonterminal " + tk.text);
        ++pos_;
        return Term::nonterminal(tk.text, g_.nonterminals[id].rank);
      }
      case Token::Sym: {
        Symbol s = static_cast<unsigned char>(tk.text[0]);
        if (!g_.has_symbol(s)) fail("symbol '" + tk.text + "' is not in the alphabet");
        ++pos_;
        return Term::word(SepWord({s}));
      }
      default: fail("unexpected token '" + tk.text + "'");
    }
    return nullptr;
  }

  [[noreturn]] void fail(const std::string& m) const {
    throw Error(Errc::FormatError, "line " + std::to_string(line_) + ": " + m);
  }

  const std::vector<Token>& toks_;
  const Grammar& g_;
  int line_;
  std::size_t pos_ = 0;
};

}  // namespace io_detail

// Parse the line-oriented grammar text format. '#' starts a comment line;
// declarations may appear in any order but must precede nothing (rules are
// resolved in a second pass).
inline Grammar parse_grammar(const std::string& text) {
  Grammar g;
  std::string start_name;
  std::vector<std::pair<int, std::string>> rule_lines;  // (line no, tail after "rule")
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& m) {
    throw Error(Errc::FormatError, "line " + std::to_string(line_no) + ": " + m);
  };
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream ls(line);
    std::string head;
    if (!(ls >> head) || head[0] == '#') continue;
    if (head == "alphabet") {
      std::string sym;
      while (ls >> sym) {
        if (sym.size() != 1) fail("alphabet symbols must be single characters: '" + sym + "'");
        if (sym == "1") fail("'1' is the reserved separator and cannot be an alphabet symbol");
        g.alphabet.push_back(static_cast<unsigned char>(sym[0]));
      }
    } else if (head == "k") {
      if (!(ls >> g.k)) fail("expected an integer after 'k'");
    } else if (head == "start") {
      if (!(ls >> start_name)) fail("expected a nonterminal after 'start'");
    } else if (head == "nonterm") {
      NontermDecl d;
      if (!(ls >> d.name >> d.rank)) fail("expected 'nonterm NAME RANK'");
      g.nonterminals.push_back(d);
    } else if (head == "rule") {
      std::string rest;
      std::getline(ls, rest);
      rule_lines.emplace_back(line_no, rest);
    } else {
      fail("unknown directive '" + head + "'");
    }
  }
  if (!start_name.empty()) g.start = g.find_nonterminal(start_name);
  if (g.start < 0) throw Error(Errc::FormatError, "start symbol '" + start_name + "' undeclared");
  for (auto& [ln, rest] : rule_lines) {
    line_no = ln;
    auto arrow = rest.find("->");
    if (arrow == std::string::npos) fail("expected 'rule NAME -> BODY'");
    std::istringstream hs(rest.substr(0, arrow));
    std::string lhs_name;
    if (!(hs >> lhs_name)) fail("missing rule left side");
    int lhs = g.find_nonterminal(lhs_name);
    if (lhs < 0) fail("undefined nonterminal " + lhs_name);
    auto toks = io_detail::tokenize(rest.substr(arrow + 2), ln);
    io_detail::TermParser p(toks, g, ln);
    for (;;) {
      g.rules.push_back({lhs, p.parse_expr()});
      if (p.at_pipe()) {
        p.skip_pipe();
        continue;
      }
      if (!p.at_end()) fail("trailing tokens in rule body");
      break;
    }
  }
  return g;
}

inline Grammar load_grammar(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw Error(Errc::FormatError, "cannot read " + path);
  std::stringstream buf;
  buf << f.rdbuf();
  return parse_grammar(buf.str());
}

namespace io_detail {

inline std::string render_term_src(const TermPtr& t) {
  switch (t->kind()) {
    case TermKind::Word: {
      if (t->leaf_word().empty()) return "eps";
      std::string out;
      for (Symbol s : t->leaf_word().symbols()) {
        if (!out.empty()) out += ' ';
        out += static_cast<char>(s);
      }
      return t->leaf_word().size() > 1 ? "(" + out + ")" : out;
    }
    case TermKind::Sep: return "1";
    case TermKind::Nonterminal: return t->nt_name();
    case TermKind::Concat:
      return "(" + render_term_src(t->left()) + " " + render_term_src(t->right()) + ")";
    case TermKind::Intercalate:
      return "(" + render_term_src(t->left()) + " @" + std::to_string(t->gap()) + " " +
             render_term_src(t->right()) + ")";
    default:
      throw Error(Errc::FormatError, "variables cannot be serialized in a grammar file");
  }
}

}  // namespace io_detail

inline std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "alphabet";
  for (Symbol s : g.alphabet) out << ' ' << static_cast<char>(s);
  out << "\nk " << g.k << "\nstart " << g.nonterminals[g.start].name << "\n";
  for (const auto& nt : g.nonterminals) out << "nonterm " << nt.name << ' ' << nt.rank << "\n";
  for (const auto& r : g.rules)
    out << "rule " << g.nonterminals[r.lhs].name << " -> " << io_detail::render_term_src(r.rhs)
        << "\n";
  return out.str();
}

}  // namespace dcfg

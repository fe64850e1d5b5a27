#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dcfg/error.hpp"

namespace dcfg {

// Alphabet letters are small positive ints (printable ASCII in practice).
// The separator is a reserved token outside every alphabet; symbols >= 256
// are used internally as fresh letters for equivalence checking.
using Symbol = int;
inline constexpr Symbol kSep = 0;

// A word over Sigma extended with the separator. Rank = separator count.
class SepWord {
 public:
  SepWord() = default;

  explicit SepWord(std::vector<Symbol> syms) : syms_(std::move(syms)) {
    for (Symbol s : syms_) rank_ += (s == kSep) ? 1 : 0;
  }

  // Text form: '1' is the separator, "eps" the empty word.
  static SepWord parse(std::string_view text) {
    if (text == "eps") return SepWord();
    std::vector<Symbol> syms;
    syms.reserve(text.size());
    for (char c : text) syms.push_back(c == '1' ? kSep : Symbol(static_cast<unsigned char>(c)));
    return SepWord(std::move(syms));
  }

  int rank() const { return rank_; }
  std::size_t size() const { return syms_.size(); }
  bool empty() const { return syms_.empty(); }
  Symbol operator[](std::size_t i) const { return syms_[i]; }
  const std::vector<Symbol>& symbols() const { return syms_; }

  bool operator==(const SepWord& o) const = default;
  auto operator<=>(const SepWord& o) const = default;

  SepWord operator+(const SepWord& o) const {
    std::vector<Symbol> syms = syms_;
    syms.insert(syms.end(), o.syms_.begin(), o.syms_.end());
    return SepWord(std::move(syms));
  }

  std::string render() const {
    if (syms_.empty()) return "eps";
    std::string out;
    for (Symbol s : syms_) {
      if (s == kSep)
        out += '1';
      else if (s < 256)
        out += static_cast<char>(s);
      else
        out += "<" + std::to_string(s) + ">";
    }
    return out;
  }

  // Split at the separators: a rank-l word yields l+1 separator-free parts.
  std::vector<SepWord> split_at_separators() const {
    std::vector<SepWord> parts;
    std::vector<Symbol> cur;
    for (Symbol s : syms_) {
      if (s == kSep) {
        parts.emplace_back(std::move(cur));
        cur.clear();
      } else {
        cur.push_back(s);
      }
    }
    parts.emplace_back(std::move(cur));
    return parts;
  }

 private:
  std::vector<Symbol> syms_;
  int rank_ = 0;
};

inline SepWord sep_word() { return SepWord({kSep}); }

inline int rank(const SepWord& w) { return w.rank(); }

// Replace the j-th separator (1-based, left to right) of w1 by w2.
inline SepWord word_intercalate(const SepWord& w1, int j, const SepWord& w2) {
  if (j < 1 || j > w1.rank())
    throw Error(Errc::IndexOutOfRank,
                "intercalation index " + std::to_string(j) + " on a word of rank " +
                    std::to_string(w1.rank()));
  std::vector<Symbol> out;
  out.reserve(w1.size() + w2.size() - 1);
  int seen = 0;
  for (std::size_t i = 0; i < w1.size(); ++i) {
    if (w1[i] == kSep && ++seen == j) {
      out.insert(out.end(), w2.symbols().begin(), w2.symbols().end());
    } else {
      out.push_back(w1[i]);
    }
  }
  return SepWord(std::move(out));
}

// Simultaneous replacement of all separators of w by the fillers (the
// "wrap" operation, written with a circled times in the literature).
inline SepWord word_wrap(const SepWord& w, std::span<const SepWord> fillers) {
  if (static_cast<int>(fillers.size()) != w.rank())
    throw Error(Errc::ArityMismatch, "wrap needs " + std::to_string(w.rank()) +
                                         " fillers, got " + std::to_string(fillers.size()));
  std::vector<Symbol> out;
  int seen = 0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (w[i] == kSep) {
      const SepWord& f = fillers[seen++];
      out.insert(out.end(), f.symbols().begin(), f.symbols().end());
    } else {
      out.push_back(w[i]);
    }
  }
  return SepWord(std::move(out));
}

struct SepWordHash {
  std::size_t operator()(const SepWord& w) const {
    std::size_t h = 1469598103934665603ull;
    for (Symbol s : w.symbols()) {
      h ^= static_cast<std::size_t>(s + 1);
      h *= 1099511628211ull;
    }
    return h;
  }
};

}  // namespace dcfg

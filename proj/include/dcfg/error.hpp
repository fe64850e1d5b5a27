#pragma once

#include <stdexcept>
#include <string>

namespace dcfg {

enum class Errc {
  IndexOutOfRank,
  ArityMismatch,
  NotGround,
  RuleNotApplicable,
  NotEssential,
  VariableMismatch,
  RankMismatch,
  SeparatorInInput,
  NodeNotInTree,
  InvalidPump,
  NotMember,
  PositionOutOfRange,
  MissingRanges,
  FormatError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::IndexOutOfRank: return "IndexOutOfRank";
    case Errc::ArityMismatch: return "ArityMismatch";
    case Errc::NotGround: return "NotGround";
    case Errc::RuleNotApplicable: return "RuleNotApplicable";
    case Errc::NotEssential: return "NotEssential";
    case Errc::VariableMismatch: return "VariableMismatch";
    case Errc::RankMismatch: return "RankMismatch";
    case Errc::SeparatorInInput: return "SeparatorInInput";
    case Errc::NodeNotInTree: return "NodeNotInTree";
    case Errc::InvalidPump: return "InvalidPump";
    case Errc::NotMember: return "NotMember";
    case Errc::PositionOutOfRange: return "PositionOutOfRange";
    case Errc::MissingRanges: return "MissingRanges";
    case Errc::FormatError: return "FormatError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace dcfg

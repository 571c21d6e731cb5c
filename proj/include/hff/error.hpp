#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace hff {

// Stable error codes; the CLI maps these onto process exit codes.
enum class Errc {
  index_overflow,
  not_a_pair,
  syntax_error,
  unbound_variable,
  not_pure,
  decode_error,
  stage_too_large,
  segment_too_large,
  budget_exceeded,
  not_equivalence,
  element_not_in_universe,
  cardinal_too_large,
  cross_universe,
  literal_too_large,
  not_v_stage,
  index_too_large,
  universe_too_large,
  eps_under_quantifier,
  arity_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::index_overflow: return "IndexOverflow";
    case Errc::not_a_pair: return "NotAPair";
    case Errc::syntax_error: return "SyntaxError";
    case Errc::unbound_variable: return "UnboundVariable";
    case Errc::not_pure: return "NotPure";
    case Errc::decode_error: return "DecodeError";
    case Errc::stage_too_large: return "StageTooLarge";
    case Errc::segment_too_large: return "SegmentTooLarge";
    case Errc::budget_exceeded: return "BudgetExceeded";
    case Errc::not_equivalence: return "NotEquivalence";
    case Errc::element_not_in_universe: return "ElementNotInUniverse";
    case Errc::cardinal_too_large: return "CardinalTooLarge";
    case Errc::cross_universe: return "CrossUniverse";
    case Errc::literal_too_large: return "LiteralTooLarge";
    case Errc::not_v_stage: return "NotVStage";
    case Errc::index_too_large: return "IndexTooLarge";
    case Errc::universe_too_large: return "UniverseTooLarge";
    case Errc::eps_under_quantifier: return "EpsUnderQuantifier";
    case Errc::arity_error: return "ArityError";
  }
  return "Error";
}

// Resource/budget errors get exit code 3 in the CLI; the rest are user errors (2).
inline bool is_budget_error(Errc c) {
  switch (c) {
    case Errc::budget_exceeded:
    case Errc::index_overflow:
    case Errc::literal_too_large:
    case Errc::index_too_large:
    case Errc::stage_too_large:
    case Errc::segment_too_large:
    case Errc::universe_too_large:
    case Errc::cardinal_too_large:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string msg)
      : std::runtime_error(std::string(errc_name(code)) + ": " + msg), code_(code) {}

  Errc code() const { return code_; }

  // Optional payloads, meaningful per code.
  std::uint64_t count = 0;             // budget tried, offending index/cardinality
  std::size_t position = 0;            // byte offset for syntax_error
  std::vector<std::string> expected;   // expected tokens for syntax_error

 private:
  Errc code_;
};

[[noreturn]] inline void throw_syntax(std::size_t pos, std::vector<std::string> expected,
                                      const std::string& detail = {}) {
  std::string msg = "at offset " + std::to_string(pos);
  if (!expected.empty()) {
    msg += ", expected ";
    for (std::size_t i = 0; i < expected.size(); ++i) {
      if (i) msg += " | ";
      msg += expected[i];
    }
  }
  if (!detail.empty()) msg += " (" + detail + ")";
  Error e(Errc::syntax_error, msg);
  e.position = pos;
  e.expected = std::move(expected);
  throw e;
}

}  // namespace hff

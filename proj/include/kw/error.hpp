#pragma once

#include <stdexcept>
#include <string>

namespace kw {

enum class Errc {
  not_an_involution,
  not_a_permutation,
  theta_out_of_range,
  non_orientable_or_inconsistent,
  disconnected_graph,
  backtrack_transition,
  size_overflow,
  parse_error,
  inconsistent_system,
  hypothesis_violation,
  unsolvable_signs,
  not_plus_minus_one,
  degenerate_form,
  gauss_sum_not_pm_2g,
  not_a_square,
  too_large,
  genus_too_high,
  genus_too_low,
  internal_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::not_an_involution: return "NotAnInvolution";
    case Errc::not_a_permutation: return "NotAPermutation";
    case Errc::theta_out_of_range: return "ThetaOutOfRange";
    case Errc::non_orientable_or_inconsistent: return "NonOrientableOrInconsistent";
    case Errc::disconnected_graph: return "DisconnectedGraph";
    case Errc::backtrack_transition: return "BacktrackTransition";
    case Errc::size_overflow: return "SizeOverflow";
    case Errc::parse_error: return "ParseError";
    case Errc::inconsistent_system: return "InconsistentSystem";
    case Errc::hypothesis_violation: return "HypothesisViolation";
    case Errc::unsolvable_signs: return "UnsolvableSigns";
    case Errc::not_plus_minus_one: return "NotPlusMinusOne";
    case Errc::degenerate_form: return "DegenerateForm";
    case Errc::gauss_sum_not_pm_2g: return "GaussSumNotPM2g";
    case Errc::not_a_square: return "NotASquare";
    case Errc::too_large: return "TooLarge";
    case Errc::genus_too_high: return "GenusTooHigh";
    case Errc::genus_too_low: return "GenusTooLow";
    case Errc::internal_error: return "InternalError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace kw

#ifndef PROBCOMB_ERRORS_HPP
#define PROBCOMB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace probcomb {

/// Failure categories raised by the combination operators.
enum class errc {
  out_of_range_probability,
  subtrahend_exceeds_minuend,
  division_by_zero_complement,
  zero_evidence_probability,
  partition_not_normalized,
  implication_violated,
  not_disfavored_side,
  zero_consequence,
  extensional_evidence_rejected,
  semantic_overlap,
  space_too_large,
  zero_evidence_column,
  chain_overflow,
  lex_error,
  parse_error,
  document_invalid,
  invalid_argument,
};

const char* errc_name(errc code) noexcept;

/// Exception carrying a machine-readable error category.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(errc_name(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace probcomb

#endif

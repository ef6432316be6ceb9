#ifndef PROBCOMB_DIAGNOSTICS_HPP
#define PROBCOMB_DIAGNOSTICS_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "probcomb/probability.hpp"

namespace probcomb::diagnostics {

struct DiagnosticStep {
  std::string label;
  double value;
};

/// Outcome of a pathology check.  raw_value may exceed 1; that overflow is
/// the finding, quarantined here so it can never feed back into
/// Probability arithmetic.
struct DiagnosticReport {
  double raw_value = 0.0;
  bool valid = true;
  /// 1-based position at which the running value first exceeds 1;
  /// present exactly when the report is invalid.
  std::optional<std::size_t> overflow_index;
  std::vector<DiagnosticStep> steps;

  nlohmann::json to_json() const;
};

/// First step whose label matches, or nullptr.
const DiagnosticStep* find_step(const DiagnosticReport& report,
                                std::string_view label);

/// Hypothesis probability divided by the probabilities of its verified
/// consequences, one division per consequence.  The quotient grows with
/// every factor below 1 and is reported even when it passes 1.
DiagnosticReport broad_chain(const Probability& prior,
                             std::span<const Probability> consequence_probs);
DiagnosticReport broad_chain(const Probability& prior,
                             std::initializer_list<Probability> consequence_probs);

/// Combines testimonies for the two sides of a binary hypothesis and
/// reports how far the pair lands from summing to 1.  With
/// treat_both_sides_as_cmpe the deliberately flawed method is applied to
/// both sides; otherwise the correct split rule, whose sides are
/// complementary by construction.
/// Steps carry "disfavored_side", "favored_side" and "defect".
DiagnosticReport cohen_complementarity_check(
    std::span<const Probability> testimonies, bool treat_both_sides_as_cmpe);
DiagnosticReport cohen_complementarity_check(
    std::initializer_list<Probability> testimonies,
    bool treat_both_sides_as_cmpe);

/// The two readings of evidence implied by a hypothesis, left
/// unreconciled: combination of weight-bearing support versus division by
/// the evidence extension.
struct ImpliedComparison {
  Probability cmpe_reading;
  Probability bayes_reading;
};

ImpliedComparison implied_evidence_comparison(
    const Probability& prior, const Probability& weight_bearing_support,
    const Probability& evidence_total);

}  // namespace probcomb::diagnostics

#endif

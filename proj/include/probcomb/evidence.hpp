#ifndef PROBCOMB_EVIDENCE_HPP
#define PROBCOMB_EVIDENCE_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "probcomb/combinators.hpp"
#include "probcomb/probability.hpp"

namespace probcomb::evidence {

/// Observation channel an evidence item draws on ("visual", "tactile",
/// ...).  Compared case-sensitively.
struct SemanticTag {
  std::string name;

  auto operator<=>(const SemanticTag&) const = default;
};

/// Whether an item actively raises the hypothesis (WeightBearing) or
/// merely delimits the space of cases it competes in (Extensional).
/// Only weight-bearing items may enter combination.
enum class EvidenceKind { WeightBearing, Extensional };

struct Evidence {
  std::string id;
  Probability probability;
  EvidenceKind kind = EvidenceKind::WeightBearing;
  std::set<SemanticTag> tags;
  /// Present when the item supports the hypothesis only via a carrier:
  /// it then contributes carrier_prior * transfer instead of its own
  /// probability.
  std::optional<SupportContribution> conditional_on_carrier;
};

struct EvidenceDocument {
  std::string hypothesis_id;
  std::optional<Probability> prior;
  std::vector<Evidence> items;
};

/// A pair of weight-bearing items whose declared channels intersect.
struct TagOverlap {
  std::string first_id;
  std::string second_id;
  std::vector<std::string> shared_tags;
};

struct ValidationResult {
  std::vector<TagOverlap> violations;

  bool ok() const noexcept { return violations.empty(); }
};

/// Checks that the tag sets of all weight-bearing items are pairwise
/// disjoint.  Violations are data, not exceptions.
ValidationResult validate_semantic_independence(std::span<const Evidence> items);

struct CombinationResult {
  Probability value;
  /// One line per operand plus the final fold, in application order.
  std::vector<std::string> audit;
};

/// Folds prior and items into one probability with cmpe_add.  Conditional
/// items contribute carrier_prior * transfer.  Throws
/// ExtensionalEvidenceRejected or SemanticOverlap before touching any
/// arithmetic.
CombinationResult combine_document(const EvidenceDocument& doc);

/// Strict parse of the JSON document format; unknown keys, missing
/// fields, duplicate ids, out-of-range numbers and untagged weight-bearing
/// items are all DocumentInvalid.  Malformed JSON is ParseError.
/// Probabilities are built in the requested mode; in ExactRational mode
/// numbers are taken as exact decimals.
EvidenceDocument parse_evidence_document(const std::string& json_text,
                                         Mode mode = Mode::Floating);

/// One row of the homogeneous-versus-diverse comparison: n observations
/// per group, all successful.
struct LaplaceComparisonRow {
  std::uint64_t group_size;
  Rational laplace_single;  // one group of n
  Rational laplace_pooled;  // all groups pooled into k*n trials
  Rational cmpe_groups;     // k groups combined group-wise
  Rational dpe_margin;      // cmpe_groups minus pooled, in DPE terms
};

/// Evaluates the comparison for each group size with `groups` groups of
/// equal size (the tabulated claim is for 2; more groups widen the gap).
std::vector<LaplaceComparisonRow> laplace_vs_cmpe(
    std::span<const std::uint64_t> group_sizes, unsigned groups = 2);

}  // namespace probcomb::evidence

#endif

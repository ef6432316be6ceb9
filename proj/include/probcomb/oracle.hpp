#ifndef PROBCOMB_ORACLE_HPP
#define PROBCOMB_ORACLE_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "probcomb/probability.hpp"

namespace probcomb::oracle {

/// n independent binary events with exact probabilities, small enough to
/// enumerate all 2^n outcomes.
class FiniteEventSpace {
 public:
  explicit FiniteEventSpace(std::vector<Rational> event_probs);

  std::size_t size() const noexcept { return probs_.size(); }
  const std::vector<Rational>& event_probs() const noexcept { return probs_; }

 private:
  std::vector<Rational> probs_;
};

/// Joint mass over k alternatives crossed with {evidence, no evidence}.
/// cell(i, 0) is the mass of (alternative i AND evidence).
class JointTable {
 public:
  explicit JointTable(std::vector<std::array<Rational, 2>> cells);

  std::size_t alternatives() const noexcept { return cells_.size(); }
  const Rational& cell(std::size_t i, std::size_t evidence_state) const {
    return cells_.at(i).at(evidence_state);
  }

 private:
  std::vector<std::array<Rational, 2>> cells_;
};

/// Mass of "at least one event occurs" by full enumeration of outcome
/// atoms.  Deliberately shares no algebra with cmpe_add, which it exists
/// to check.  Throws SpaceTooLarge above 20 events.
Rational union_probability(const FiniteEventSpace& space);

/// P(alternative k | evidence) read directly off the joint table.
Rational posterior_from_table(const JointTable& table, std::size_t k);

/// One battery draw: event probabilities for the union/subtraction
/// properties plus low-side testimonies for the complementarity property.
struct BatteryCase {
  std::vector<Rational> event_probs;
  std::vector<Rational> testimonies;

  bool operator==(const BatteryCase&) const = default;
};

/// Draws a case with denominators <= 64, using the raw engine output so
/// results are identical across platforms.
BatteryCase draw_battery_case(std::mt19937_64& rng);

/// Returns an explanation of the first violated property, or nullopt when
/// the case passes all of: cmpe_add vs enumeration, n-ary subtraction
/// round-trip, expanded-sum identity, complementarity of the two sides.
std::optional<std::string> check_battery_case(const BatteryCase& c);

struct BatteryFailure {
  std::size_t case_index;
  std::string detail;
};

struct BatterySummary {
  std::size_t cases_run = 0;
  std::size_t failures = 0;
  std::optional<BatteryFailure> first_failure;

  bool passed() const noexcept { return failures == 0; }
};

BatterySummary random_property_battery(std::uint64_t seed, std::size_t cases);

}  // namespace probcomb::oracle

#endif

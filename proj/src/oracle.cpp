#include "probcomb/oracle.hpp"

#include <sstream>

#include "probcomb/combinators.hpp"
#include "probcomb/errors.hpp"

namespace probcomb::oracle {

namespace {

constexpr std::size_t kMaxEvents = 20;

void require_unit_interval(const Rational& p, const char* what) {
  if (p < 0 || p > 1) {
    throw Error(errc::out_of_range_probability,
                std::string(what) + " outside [0,1]");
  }
}

std::vector<Probability> as_probabilities(const std::vector<Rational>& rs) {
  std::vector<Probability> ps;
  ps.reserve(rs.size());
  for (const auto& r : rs) ps.push_back(Probability::exact(r));
  return ps;
}

std::string to_string(const Rational& r) {
  std::ostringstream out;
  out << r;
  return out.str();
}

}  // namespace

FiniteEventSpace::FiniteEventSpace(std::vector<Rational> event_probs)
    : probs_(std::move(event_probs)) {
  if (probs_.empty()) {
    throw Error(errc::invalid_argument, "event space needs at least one event");
  }
  for (const auto& p : probs_) require_unit_interval(p, "event probability");
}

JointTable::JointTable(std::vector<std::array<Rational, 2>> cells)
    : cells_(std::move(cells)) {
  if (cells_.empty()) {
    throw Error(errc::invalid_argument, "joint table needs at least one row");
  }
  Rational total = 0;
  for (const auto& row : cells_) {
    for (const auto& mass : row) {
      if (mass < 0) {
        throw Error(errc::invalid_argument, "joint table mass below zero");
      }
      total += mass;
    }
  }
  if (total != 1) {
    throw Error(errc::partition_not_normalized,
                "joint table mass must sum to exactly 1, got " +
                    to_string(total));
  }
}

Rational union_probability(const FiniteEventSpace& space) {
  const auto& probs = space.event_probs();
  const std::size_t n = probs.size();
  if (n > kMaxEvents) {
    throw Error(errc::space_too_large,
                "enumeration capped at 20 events, got " + std::to_string(n));
  }
  // Walk every outcome atom and add up the mass of those where at least
  // one event occurs.  Quadratic-ish and proud of it: this is the check,
  // not the implementation.
  Rational at_least_one = 0;
  const std::uint32_t atoms = 1u << n;
  for (std::uint32_t mask = 1; mask < atoms; ++mask) {
    Rational mass = 1;
    for (std::size_t i = 0; i < n; ++i) {
      mass *= (mask >> i) & 1u ? probs[i] : 1 - probs[i];
    }
    at_least_one += mass;
  }
  return at_least_one;
}

Rational posterior_from_table(const JointTable& table, std::size_t k) {
  if (k >= table.alternatives()) {
    throw Error(errc::invalid_argument, "alternative index out of range");
  }
  Rational evidence_mass = 0;
  for (std::size_t i = 0; i < table.alternatives(); ++i) {
    evidence_mass += table.cell(i, 0);
  }
  if (evidence_mass == 0) {
    throw Error(errc::zero_evidence_column,
                "evidence column carries no mass");
  }
  return table.cell(k, 0) / evidence_mass;
}

BatteryCase draw_battery_case(std::mt19937_64& rng) {
  // Raw engine output with modulo folding: uniform_int_distribution is
  // implementation-defined and would break cross-platform reproducibility.
  const auto draw = [&rng](std::uint64_t bound) {
    return static_cast<std::uint64_t>(rng() % bound);
  };
  BatteryCase c;
  const std::size_t n = 2 + draw(5);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t den = 1 + draw(64);
    const std::uint64_t num = draw(den + 1);
    c.event_probs.emplace_back(num, den);
  }
  const std::size_t t = 1 + draw(3);
  for (std::size_t i = 0; i < t; ++i) {
    c.testimonies.emplace_back(draw(33), 64);
  }
  return c;
}

std::optional<std::string> check_battery_case(const BatteryCase& c) {
  const std::vector<Probability> ps = as_probabilities(c.event_probs);

  const Rational combined = cmpe_add(ps).exact_value();
  const Rational enumerated = union_probability(FiniteEventSpace(c.event_probs));
  if (combined != enumerated) {
    return "cmpe_add " + to_string(combined) + " != enumerated union " +
           to_string(enumerated);
  }

  bool tail_subtracts = c.event_probs.size() >= 2;
  for (std::size_t i = 1; i < c.event_probs.size(); ++i) {
    tail_subtracts = tail_subtracts && c.event_probs[i] != 1;
  }
  if (tail_subtracts) {
    const std::span<const Probability> tail(ps.data() + 1, ps.size() - 1);
    const Rational back = dpe_sub(cmpe_add(ps), tail).exact_value();
    if (back != c.event_probs.front()) {
      return "subtraction round-trip returned " + to_string(back) +
             ", expected " + to_string(c.event_probs.front());
    }
  }

  if (c.event_probs.size() >= 2) {
    const Rational& a = c.event_probs[0];
    const Rational& b = c.event_probs[1];
    const Rational expanded = a * b + (1 - a) * b + a * (1 - b);
    const Rational folded =
        cmpe_add({Probability::exact(a), Probability::exact(b)}).exact_value();
    if (expanded != folded) {
      return "expanded sum " + to_string(expanded) + " != complement form " +
             to_string(folded);
    }
  }

  if (!c.testimonies.empty()) {
    const CohenResult sides = cohen_binary_combine(as_probabilities(c.testimonies));
    const Rational sum =
        sides.favored.exact_value() + sides.disfavored.exact_value();
    if (sum != 1) {
      return "favored and disfavored sides sum to " + to_string(sum);
    }
  }
  return std::nullopt;
}

BatterySummary random_property_battery(std::uint64_t seed, std::size_t cases) {
  if (cases == 0) {
    throw Error(errc::invalid_argument, "battery needs at least one case");
  }
  std::mt19937_64 rng(seed);
  BatterySummary summary;
  for (std::size_t i = 0; i < cases; ++i) {
    const BatteryCase c = draw_battery_case(rng);
    ++summary.cases_run;
    if (auto detail = check_battery_case(c)) {
      ++summary.failures;
      if (!summary.first_failure) {
        summary.first_failure = BatteryFailure{i, *detail};
      }
    }
  }
  return summary;
}

}  // namespace probcomb::oracle

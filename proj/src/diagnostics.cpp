#include "probcomb/diagnostics.hpp"

#include <cmath>

#include "probcomb/combinators.hpp"
#include "probcomb/errors.hpp"

namespace probcomb::diagnostics {

namespace {

std::vector<Probability> complements_of(std::span<const Probability> ps) {
  std::vector<Probability> out;
  out.reserve(ps.size());
  for (const auto& p : ps) out.push_back(complement(p));
  return out;
}

}  // namespace

nlohmann::json DiagnosticReport::to_json() const {
  nlohmann::json j{{"raw_value", raw_value}, {"valid", valid}};
  if (overflow_index) j["overflow_index"] = *overflow_index;
  nlohmann::json steps_json = nlohmann::json::array();
  for (const auto& s : steps) {
    steps_json.push_back({{"label", s.label}, {"value", s.value}});
  }
  j["steps"] = std::move(steps_json);
  return j;
}

const DiagnosticStep* find_step(const DiagnosticReport& report,
                                std::string_view label) {
  for (const auto& s : report.steps) {
    if (s.label == label) return &s;
  }
  return nullptr;
}

DiagnosticReport broad_chain(const Probability& prior,
                             std::span<const Probability> consequence_probs) {
  for (const auto& c : consequence_probs) {
    if (c.is_zero()) {
      throw Error(errc::zero_consequence,
                  "consequence with probability zero cannot divide the prior");
    }
  }
  DiagnosticReport report;
  double running = prior.value();
  report.steps.push_back({"prior", running});
  std::size_t index = 0;
  for (const auto& c : consequence_probs) {
    ++index;
    running /= c.value();
    report.steps.push_back(
        {"after consequence " + std::to_string(index), running});
    if (running > 1.0 && !report.overflow_index) {
      report.overflow_index = index;
    }
  }
  report.raw_value = running;
  report.valid = running <= 1.0;
  return report;
}

DiagnosticReport broad_chain(
    const Probability& prior,
    std::initializer_list<Probability> consequence_probs) {
  return broad_chain(prior,
                     std::span<const Probability>(consequence_probs.begin(),
                                                  consequence_probs.size()));
}

DiagnosticReport cohen_complementarity_check(
    std::span<const Probability> testimonies, bool treat_both_sides_as_cmpe) {
  if (testimonies.empty()) {
    throw Error(errc::invalid_argument,
                "complementarity check over an empty list");
  }
  for (const auto& t : testimonies) {
    if (t.is_zero() || t.is_one()) {
      throw Error(errc::invalid_argument,
                  "testimonies must lie strictly between 0 and 1");
    }
  }
  DiagnosticReport report;
  if (treat_both_sides_as_cmpe) {
    // The flawed reading: combine both sides with the ascending operator.
    // The pair drifts above a total of 1 from the second testimony on;
    // record where, mirroring the chain overflow index.
    const bool exact = testimonies.front().mode() == Mode::ExactRational;
    double disfavored = 0.0;
    double favored = 0.0;
    double sum = 0.0;
    for (std::size_t k = 1; k <= testimonies.size(); ++k) {
      const auto head = testimonies.subspan(0, k);
      const Probability low = cmpe_add(head);
      const Probability high = cmpe_add(complements_of(head));
      if (exact) {
        const Rational total = low.exact_value() + high.exact_value();
        sum = static_cast<double>(total);
        if (total > 1 && !report.overflow_index) report.overflow_index = k;
      } else if (k == 1) {
        // t plus its complement: exactly 1, immune to rounding by fiat.
        sum = 1.0;
      } else {
        sum = low.value() + high.value();
        if (sum > 1.0 && !report.overflow_index) report.overflow_index = k;
      }
      disfavored = low.value();
      favored = high.value();
    }
    report.raw_value = sum;
    report.valid = !report.overflow_index.has_value();
    report.steps.push_back({"disfavored_side", disfavored});
    report.steps.push_back({"favored_side", favored});
    report.steps.push_back({"defect", std::fabs(sum - 1.0)});
    return report;
  }
  const CohenResult sides = cohen_binary_combine(testimonies);
  // The split rule is complementary by construction; the defect it is
  // being checked for is identically zero.
  report.raw_value = 1.0;
  report.valid = true;
  report.steps.push_back({"disfavored_side", sides.disfavored.value()});
  report.steps.push_back({"favored_side", sides.favored.value()});
  report.steps.push_back({"defect", 0.0});
  return report;
}

DiagnosticReport cohen_complementarity_check(
    std::initializer_list<Probability> testimonies,
    bool treat_both_sides_as_cmpe) {
  return cohen_complementarity_check(
      std::span<const Probability>(testimonies.begin(), testimonies.size()),
      treat_both_sides_as_cmpe);
}

ImpliedComparison implied_evidence_comparison(
    const Probability& prior, const Probability& weight_bearing_support,
    const Probability& evidence_total) {
  return {cmpe_add({prior, weight_bearing_support}),
          bayes_implied(prior, evidence_total)};
}

}  // namespace probcomb::diagnostics

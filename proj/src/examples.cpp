#include "probcomb/examples.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <vector>

#include "probcomb/combinators.hpp"
#include "probcomb/diagnostics.hpp"
#include "probcomb/evidence.hpp"
#include "probcomb/probability.hpp"

namespace probcomb::examples {

bool matches_printed(double value, std::string_view reference) {
  const std::string ref(reference);
  if (ref.find('e') != std::string::npos ||
      ref.find('E') != std::string::npos) {
    const double target = std::strtod(ref.c_str(), nullptr);
    if (target == 0.0) return value == 0.0;
    return std::abs(value / target - 1.0) <= 1e-6;
  }
  const double target = std::strtod(ref.c_str(), nullptr);
  const std::size_t dot = ref.find('.');
  const std::size_t decimals = dot == std::string::npos
                                   ? 0
                                   : ref.size() - dot - 1;
  // Within one unit of the last printed digit, so a value the source either
  // rounded or truncated still counts as agreement.
  return std::abs(value - target) < std::pow(10.0, -static_cast<double>(decimals));
}

namespace {

Probability fl(double v) { return Probability::floating(v); }

ExampleResult row(std::string id, std::string detail, double value,
                  std::string reference, std::string note = "") {
  ExampleResult r;
  r.id = std::move(id);
  r.detail = std::move(detail);
  r.value = value;
  r.reference = std::move(reference);
  r.pass = matches_printed(r.value, r.reference);
  r.note = std::move(note);
  return r;
}

ExampleResult erratum(std::string id, std::string detail, double value,
                      std::string reference, std::string note) {
  ExampleResult r =
      row(std::move(id), std::move(detail), value, std::move(reference),
          std::move(note));
  r.errata = true;
  return r;
}

}  // namespace

std::vector<ExampleResult> run_worked_examples() {
  std::vector<ExampleResult> out;

  out.push_back(row("posterior-with-remainder", "bayes(0.5, 0.6, 0.8)",
                    bayes_posterior(fl(0.5), fl(0.6), fl(0.8)).value(),
                    ".43"));
  {
    const double posterior =
        bayes_posterior(fl(0.5), fl(0.4), fl(1.0)).value();
    ExampleResult r = row("posterior-below-prior", "bayes(0.5, 0.4, 1)",
                          posterior, ".29");
    r.pass = r.pass && posterior < 0.5;
    r.note = "posterior falls below the 0.5 prior";
    out.push_back(r);
  }
  out.push_back(row("two-premises-union", "0.4 (+) 0.7",
                    cmpe_add({fl(0.4), fl(0.7)}).value(), ".82"));
  out.push_back(row("three-premises-union", "0.4 (+) 0.7 (+) 0.3",
                    cmpe_add({fl(0.4), fl(0.7), fl(0.3)}).value(), ".874"));
  out.push_back(row(
      "conferred-support", "0.6*0.5 (+) 0.8*0.4",
      support_transfer({SupportContribution{fl(0.6), fl(0.5)},
                        SupportContribution{fl(0.8), fl(0.4)}})
          .value(),
      ".524"));
  out.push_back(row("complement-expansion-left",
                    "0.3*0.8 + 0.7*0.8 + 0.3*0.2 (disjoint parts)",
                    0.3 * 0.8 + 0.7 * 0.8 + 0.3 * 0.2, ".86"));
  out.push_back(row("complement-expansion-right", "0.3 (+) 0.8",
                    cmpe_add({fl(0.3), fl(0.8)}).value(), ".86"));
  {
    const CohenResult witnesses =
        cohen_binary_combine({fl(0.25), fl(0.25)});
    out.push_back(row("binary-testimony-favored",
                      "complement of 0.25 * 0.25",
                      witnesses.favored.value(), ".94"));
    out.push_back(row("binary-testimony-disfavored", "0.25 * 0.25",
                      witnesses.disfavored.value(), ".06"));
  }
  out.push_back(row("binary-testimony-two-sided-flaw", "0.25 (+) 0.25",
                    cmpe_add({fl(0.25), fl(0.25)}).value(), ".44",
                    "combining both sides this way breaks complementarity"));
  out.push_back(row("thunderstorm-forecast", "0.6 (+) 0.4 (+) 0.5",
                    cmpe_add({fl(0.6), fl(0.4), fl(0.5)}).value(), ".88"));
  out.push_back(row("therapeutic-window-conventional", "0.5 (-) 0.1",
                    dpe_sub(fl(0.5), {fl(0.1)}).value(), ".444"));
  out.push_back(row("therapeutic-window-new", "0.6 (-) 0.2",
                    dpe_sub(fl(0.6), {fl(0.2)}).value(), ".5"));
  out.push_back(row("near-certain-increment", "0.99 (+) 0.999",
                    cmpe_add({fl(0.99), fl(0.999)}).value(), ".99999"));
  out.push_back(row("near-certain-decrement", "0.99999 (-) 0.999",
                    dpe_sub(fl(0.99999), {fl(0.999)}).value(), ".99"));
  out.push_back(row("succession-after-fifty", "laplace(50, 50)",
                    laplace_succession(50, 50).value(), ".98"));
  out.push_back(row("succession-after-hundred", "laplace(100, 100)",
                    laplace_succession(100, 100).value(), ".99"));
  {
    const Probability group = laplace_succession(50, 50);
    const Probability both = cmpe_add({group, group});
    out.push_back(row("diverse-groups-union",
                      "laplace(50, 50) (+) laplace(50, 50)", both.value(),
                      ".9996"));
    out.push_back(row(
        "diverse-groups-margin",
        "laplace(50, 50) (+) laplace(50, 50) (-) laplace(100, 100)",
        dpe_sub(both, {laplace_succession(100, 100)}).value(), ".96"));
  }
  out.push_back(row("weight-bearing-diagnosis", "0.4 (+) 0.5",
                    cmpe_add({fl(0.4), fl(0.5)}).value(), ".7"));
  out.push_back(row("extensional-diagnosis", "0.4 / 0.9 (implied reading)",
                    bayes_implied(fl(0.4), fl(0.9)).value(), ".44"));
  {
    const diagnostics::DiagnosticReport chain = diagnostics::broad_chain(
        fl(0.5), {fl(0.8), fl(0.8), fl(0.8), fl(0.8)});
    ExampleResult r = row("consequence-chain-quotient",
                          "broad(0.5, 0.8, 0.8, 0.8, 0.8)", chain.raw_value,
                          "1.2");
    r.pass = r.pass && !chain.valid && chain.overflow_index.has_value() &&
             *chain.overflow_index == 4;
    r.note = "flagged invalid: quotient exceeds 1 at consequence 4";
    out.push_back(r);
  }
  {
    const Probability tiny =
        Probability::floating(1e-15).to_mode(Mode::LogComplement);
    const MpeResult joint = mpe_error_product({tiny, tiny, tiny});
    out.push_back(row("consilience-error-bound",
                      "1e-15 * 1e-15 * 1e-15 (log-complement mode)",
                      joint.error.value(), "1e-45",
                      "computed without underflow in log-complement mode"));
  }
  {
    const auto curve = nonlinear_add_curve(fl(0.4), 0.1);
    out.push_back(row("added-weight-at-zero", "0 (+) 0.4",
                      curve.front().second.value(), ".4"));
    out.push_back(row("added-weight-at-sixty", "0.6 (+) 0.4",
                      curve.at(6).second.value(), ".76"));
  }

  out.push_back(erratum(
      "sensory-error-bound", "0.001 * 0.01 * 0.001",
      mpe_error_product({fl(1e-3), fl(1e-2), fl(1e-3)}).error.value(),
      "1e-7", "formula yields 1e-8; the printed exponent is off by one"));
  {
    const auto rows =
        evidence::laplace_vs_cmpe(std::vector<std::uint64_t>{5, 10});
    out.push_back(erratum(
        "succession-margin-row-five",
        "laplace(5, 5) (+) laplace(5, 5) (-) laplace(10, 10)",
        rows[0].dpe_margin.convert_to<double>(), ".253",
        "formula yields .7551; the printed value does not follow from the "
        "subtraction rule"));
    out.push_back(erratum(
        "succession-margin-row-ten",
        "laplace(10, 10) (+) laplace(10, 10) (-) laplace(20, 20)",
        rows[1].dpe_margin.convert_to<double>(), ".286",
        "formula yields .8472; the printed value does not follow from the "
        "subtraction rule"));
  }
  return out;
}

bool all_pass(const std::vector<ExampleResult>& results) {
  for (const ExampleResult& r : results) {
    if (!r.errata && !r.pass) return false;
  }
  return true;
}

std::span<const Table1Reference> table1_printed_references() {
  static const Table1Reference refs[] = {
      {5, {".857", ".917", ".979", ".253"}},
      {10, {".917", ".955", ".993", ".286"}},
      {50, {".98", ".990", ".996", ".96"}},
      {100, {".99", ".995", ".9999", ".98"}},
      {1000, {".999", ".9995", ".999999", ".998"}},
  };
  return refs;
}

}  // namespace probcomb::examples

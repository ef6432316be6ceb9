#ifndef PROBCOMB_EXAMPLES_HPP
#define PROBCOMB_EXAMPLES_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace probcomb::examples {

/// One regression row: a documented calculation, the value this library
/// computes for it, and the reference text it is compared against.
struct ExampleResult {
  std::string id;
  std::string detail;     // the formula or expression that was computed
  double value = 0.0;     // computed result
  std::string reference;  // printed value in the source material
  bool errata = false;    // documented discrepancy: reported, never failing
  bool pass = false;      // value matches reference at its printed precision
  std::string note;       // extra findings (validity flags, corrections)
};

/// True when `value` agrees with the printed reference at the reference's
/// own precision: within 10^-d of a d-decimal reference (so both rounded
/// and truncated printings match), or relative error <= 1e-6 for
/// scientific-notation references.
bool matches_printed(double value, std::string_view reference);

/// Runs every documented worked example and returns one row each. Rows with
/// errata=true reproduce the documented discrepancies between the reference
/// text and its own formulas; they never count as failures.
std::vector<ExampleResult> run_worked_examples();

/// True when every non-errata row passed.
bool all_pass(const std::vector<ExampleResult>& results);

/// Printed cells of the published Laplace-versus-cMPE table, one row per
/// group size.  Column order: single group, pooled, two groups combined,
/// margin.  Cells that fail matches_printed against the formula output are
/// the table's known discrepancies.
struct Table1Reference {
  std::uint64_t group_size;
  std::array<std::string_view, 4> printed;
};

std::span<const Table1Reference> table1_printed_references();

}  // namespace probcomb::examples

#endif

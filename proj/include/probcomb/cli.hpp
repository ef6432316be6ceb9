#ifndef PROBCOMB_CLI_HPP
#define PROBCOMB_CLI_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "probcomb/probability.hpp"

namespace probcomb::cli {

enum class OutputFormat {
  PlainTable,  // aligned human-readable text
  Csv,         // comma separator, dot decimal point, one header row
  Json,
};

struct GlobalOptions {
  Mode mode = Mode::Floating;
  OutputFormat format = OutputFormat::PlainTable;
  int precision = 6;        // significant digits in printed values
  double tolerance = 1e-9;  // allowed |float - exact| in cross-checks
};

// Exit statuses shared by every subcommand.
inline constexpr int exit_success = 0;
inline constexpr int exit_verification_failure = 1;
inline constexpr int exit_usage = 2;  // bad flags, lex/parse errors
inline constexpr int exit_evaluation = 3;
inline constexpr int exit_validation = 4;  // evidence document rejected
inline constexpr int exit_io = 5;

/// Evaluates one expression and prints the result.  Lex/parse failures get
/// a caret-annotated diagnostic and exit_usage; evaluation failures get
/// exit_evaluation.  Outside ExactRational mode the value is cross-checked
/// against an exact re-evaluation and deviations beyond opts.tolerance are
/// reported on err (the exit status is unaffected).
int run_eval(const std::string& expression, const GlobalOptions& opts,
             std::ostream& out, std::ostream& err);

/// Reads an evidence document from `path`, combines it and prints the
/// result with its audit trail.  Unreadable file: exit_io; malformed JSON:
/// exit_usage; rejected document (structure, tag overlap, extensional
/// item): exit_validation.
int run_combine(const std::string& path, const GlobalOptions& opts,
                std::ostream& out, std::ostream& err);

/// Prints the Laplace-versus-cMPE comparison for the given group sizes
/// (columns: n, one group, pooled, two groups combined, margin).  Rows
/// with a published reference get footnotes where the formula output
/// disagrees with the printed value.
int run_table1(const std::vector<std::uint64_t>& counts,
               const GlobalOptions& opts, std::ostream& out,
               std::ostream& err);

/// Prints the combination curve x -> x (+) delta sampled at `step`.
int run_curve(double delta, double step, const GlobalOptions& opts,
              std::ostream& out, std::ostream& err);

/// Runs the worked-example regressions; prints one line per entry and a
/// separate errata section.  Exit_success only when every non-errata entry
/// passes.
int run_examples(const GlobalOptions& opts, std::ostream& out,
                 std::ostream& err);

/// Runs the randomized property battery.  Exit_success on a clean run,
/// exit_verification_failure with the first counterexample otherwise.
int run_verify(std::uint64_t seed, std::size_t cases,
               const GlobalOptions& opts, std::ostream& out,
               std::ostream& err);

/// Full argument-vector entry point (no program name in `args`).
/// Dispatches to the run_* commands above and maps CLI parse problems to
/// exit_usage.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace probcomb::cli

#endif

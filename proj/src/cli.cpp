#include "probcomb/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string_view>

#include "CLI11.hpp"
#include "json.hpp"
#include "probcomb/combinators.hpp"
#include "probcomb/dsl.hpp"
#include "probcomb/errors.hpp"
#include "probcomb/evidence.hpp"
#include "probcomb/examples.hpp"
#include "probcomb/oracle.hpp"

namespace probcomb::cli {
namespace {

using nlohmann::json;

const char* flag_name(Mode mode) {
  switch (mode) {
    case Mode::Floating: return "float";
    case Mode::LogComplement: return "log";
    case Mode::ExactRational: return "rational";
  }
  return "float";
}

int exit_for(errc code) {
  switch (code) {
    case errc::lex_error:
    case errc::parse_error:
      return exit_usage;
    case errc::document_invalid:
    case errc::semantic_overlap:
    case errc::extensional_evidence_rejected:
      return exit_validation;
    default:
      return exit_evaluation;
  }
}

/// RFC-4180 style: quote when the field contains a separator, quote or
/// newline; double embedded quotes.
std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\n") == std::string_view::npos) {
    return std::string(text);
  }
  std::string quoted = "\"";
  for (const char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

std::string fraction_of(const Probability& p) {
  std::ostringstream os;
  os << p.exact_value();
  return os.str();
}

/// Two-line diagnostic: the offending text and a caret run under the span.
void report_span(std::ostream& err, const char* what, std::string_view text,
                 dsl::SourceSpan span) {
  err << "error: " << what << '\n';
  const std::size_t begin = std::min(span.begin, text.size());
  const std::size_t end = std::clamp(span.end, begin + 1, text.size() + 1);
  err << "  " << text << '\n'
      << "  " << std::string(begin, ' ') << std::string(end - begin, '^')
      << '\n';
}

void print_aligned(std::ostream& out,
                   const std::vector<std::vector<std::string>>& rows) {
  if (rows.empty()) return;
  std::vector<std::size_t> widths(rows.front().size(), 0);
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      widths[i] = std::max(widths[i], row[i].size());
    }
  }
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      out << row[i];
      if (i + 1 < row.size()) {
        out << std::string(widths[i] - row[i].size() + 2, ' ');
      }
    }
    out << '\n';
  }
}

}  // namespace

int run_eval(const std::string& expression, const GlobalOptions& opts,
             std::ostream& out, std::ostream& err) {
  Probability value;
  try {
    value = dsl::evaluate_text(expression, opts.mode);
  } catch (const dsl::LexError& e) {
    report_span(err, e.what(), expression, e.span());
    return exit_usage;
  } catch (const dsl::ParseError& e) {
    report_span(err, e.what(), expression, e.span());
    return exit_usage;
  } catch (const dsl::EvalError& e) {
    report_span(err, e.what(), expression, e.span());
    return exit_evaluation;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  }

  const std::string decimal = to_display_string(value, opts.precision);
  const bool rational = opts.mode == Mode::ExactRational;
  switch (opts.format) {
    case OutputFormat::PlainTable:
      out << decimal;
      if (rational) out << " (" << fraction_of(value) << ')';
      out << '\n';
      break;
    case OutputFormat::Csv:
      if (rational) {
        out << "value,exact\n"
            << decimal << ',' << csv_field(fraction_of(value)) << '\n';
      } else {
        out << "value\n" << decimal << '\n';
      }
      break;
    case OutputFormat::Json: {
      json j{{"expression", expression},
             {"mode", flag_name(opts.mode)},
             {"value", value.value()}};
      if (rational) j["exact"] = fraction_of(value);
      out << j.dump() << '\n';
      break;
    }
  }

  // Every inexact evaluation is cross-checked against the exact oracle;
  // a drift beyond the tolerance is worth a warning but not a failure.
  if (!rational) {
    try {
      const Probability exact =
          dsl::evaluate_text(expression, Mode::ExactRational);
      const double drift = std::fabs(value.value() - exact.value());
      if (!(drift <= opts.tolerance)) {
        err << "warning: result deviates from the exact evaluation by "
            << format_decimal(drift, 3) << '\n';
      }
    } catch (const Error&) {
      // The main evaluation succeeded; an oracle failure here would be a
      // library bug and shows up in the verify battery instead.
    }
  }
  return exit_success;
}

int run_combine(const std::string& path, const GlobalOptions& opts,
                std::ostream& out, std::ostream& err) {
  std::ifstream file(path);
  if (!file) {
    err << "error: cannot read '" << path << "'\n";
    return exit_io;
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  if (file.bad()) {
    err << "error: cannot read '" << path << "'\n";
    return exit_io;
  }

  evidence::EvidenceDocument doc;
  try {
    doc = evidence::parse_evidence_document(buffer.str(), opts.mode);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  }

  // Pre-validate so a rejection lists every overlap, not just the first.
  const auto validation = evidence::validate_semantic_independence(doc.items);
  if (!validation.ok()) {
    err << "error: document rejected, overlapping semantic tags:\n";
    for (const auto& v : validation.violations) {
      err << "  '" << v.first_id << "' and '" << v.second_id << "' share";
      for (const auto& tag : v.shared_tags) err << " '" << tag << "'";
      err << '\n';
    }
    return exit_validation;
  }

  evidence::CombinationResult result;
  try {
    result = evidence::combine_document(doc);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_for(e.code());
  }

  const std::string decimal = to_display_string(result.value, opts.precision);
  const bool rational = opts.mode == Mode::ExactRational;
  switch (opts.format) {
    case OutputFormat::PlainTable:
      out << doc.hypothesis_id << " = " << decimal;
      if (rational) out << " (" << fraction_of(result.value) << ')';
      out << '\n';
      for (const auto& line : result.audit) out << "  " << line << '\n';
      break;
    case OutputFormat::Csv:
      out << "key,value\n";
      out << "hypothesis," << csv_field(doc.hypothesis_id) << '\n';
      out << "value," << decimal << '\n';
      if (rational) out << "exact," << csv_field(fraction_of(result.value)) << '\n';
      for (const auto& line : result.audit) {
        out << "audit," << csv_field(line) << '\n';
      }
      break;
    case OutputFormat::Json: {
      json j{{"hypothesis", doc.hypothesis_id},
             {"value", result.value.value()},
             {"audit", result.audit}};
      if (rational) j["exact"] = fraction_of(result.value);
      out << j.dump() << '\n';
      break;
    }
  }
  return exit_success;
}

int run_table1(const std::vector<std::uint64_t>& counts,
               const GlobalOptions& opts, std::ostream& out,
               std::ostream& err) {
  if (counts.empty()) {
    err << "error: at least one group size is required\n";
    return exit_usage;
  }
  const auto rows = evidence::laplace_vs_cmpe(counts);
  const auto refs = examples::table1_printed_references();

  struct Footnote {
    std::uint64_t group_size;
    int column;  // 1-based, counting the n column as 1
    std::string computed;
    std::string printed;
  };
  std::vector<Footnote> footnotes;

  std::vector<std::vector<std::string>> table;
  table.push_back(
      {"n", "laplace_n", "laplace_2n", "cmpe_two_groups", "dpe_margin"});
  std::vector<json> json_rows;
  for (const auto& row : rows) {
    const double values[4] = {row.laplace_single.convert_to<double>(),
                              row.laplace_pooled.convert_to<double>(),
                              row.cmpe_groups.convert_to<double>(),
                              row.dpe_margin.convert_to<double>()};
    const auto ref = std::find_if(
        refs.begin(), refs.end(),
        [&](const auto& r) { return r.group_size == row.group_size; });

    std::vector<std::string> cells{std::to_string(row.group_size)};
    json row_notes = json::array();
    for (int i = 0; i < 4; ++i) {
      std::string cell = format_decimal(values[i], opts.precision);
      if (ref != refs.end() &&
          !examples::matches_printed(values[i], ref->printed[i])) {
        footnotes.push_back({row.group_size, i + 2, cell,
                             std::string(ref->printed[i])});
        row_notes.push_back(json{{"column", i + 2},
                                 {"computed", values[i]},
                                 {"printed", ref->printed[i]}});
        if (opts.format == OutputFormat::PlainTable) cell += '*';
      }
      cells.push_back(std::move(cell));
    }
    json_rows.push_back(json{{"n", row.group_size},
                             {"laplace_n", values[0]},
                             {"laplace_2n", values[1]},
                             {"cmpe_two_groups", values[2]},
                             {"dpe_margin", values[3]},
                             {"footnotes", row_notes}});
    table.push_back(std::move(cells));
  }

  switch (opts.format) {
    case OutputFormat::PlainTable:
      print_aligned(out, table);
      for (const auto& f : footnotes) {
        out << "* n=" << f.group_size << ", column " << f.column
            << ": formula gives " << f.computed << "; reference prints "
            << f.printed << '\n';
      }
      break;
    case OutputFormat::Csv:
      out << "n,laplace_n,laplace_2n,cmpe_two_groups,dpe_margin,footnotes\n";
      for (std::size_t r = 1; r < table.size(); ++r) {
        const auto& cells = table[r];
        std::string notes;
        for (const auto& f : footnotes) {
          if (std::to_string(f.group_size) != cells[0]) continue;
          if (!notes.empty()) notes += "; ";
          notes += "column " + std::to_string(f.column) + ": formula " +
                   f.computed + ", printed " + f.printed;
        }
        out << cells[0] << ',' << cells[1] << ',' << cells[2] << ','
            << cells[3] << ',' << cells[4] << ',' << csv_field(notes) << '\n';
      }
      break;
    case OutputFormat::Json:
      out << json{{"rows", json_rows}}.dump() << '\n';
      break;
  }
  return exit_success;
}

int run_curve(double delta, double step, const GlobalOptions& opts,
              std::ostream& out, std::ostream& err) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    err << "error: delta must lie in [0, 1]\n";
    return exit_usage;
  }
  if (!(step > 0.0 && step < 1.0)) {
    err << "error: step must lie in (0, 1)\n";
    return exit_usage;
  }
  const auto series =
      nonlinear_add_curve(Probability::floating(delta).to_mode(opts.mode), step);

  switch (opts.format) {
    case OutputFormat::PlainTable: {
      std::vector<std::vector<std::string>> table{{"x", "y"}};
      for (const auto& [x, y] : series) {
        table.push_back({format_decimal(x.value(), opts.precision),
                         format_decimal(y.value(), opts.precision)});
      }
      print_aligned(out, table);
      break;
    }
    case OutputFormat::Csv:
      out << "x,y\n";
      for (const auto& [x, y] : series) {
        out << format_decimal(x.value(), opts.precision) << ','
            << format_decimal(y.value(), opts.precision) << '\n';
      }
      break;
    case OutputFormat::Json: {
      json points = json::array();
      for (const auto& [x, y] : series) {
        points.push_back(json{{"x", x.value()}, {"y", y.value()}});
      }
      out << json{{"delta", delta}, {"step", step}, {"points", points}}.dump()
          << '\n';
      break;
    }
  }
  return exit_success;
}

int run_examples(const GlobalOptions& opts, std::ostream& out,
                 std::ostream& err) {
  (void)err;
  const auto results = examples::run_worked_examples();
  const bool ok = examples::all_pass(results);
  std::size_t passed = 0, failed = 0, errata = 0;
  for (const auto& r : results) {
    if (r.errata) ++errata;
    else if (r.pass) ++passed;
    else ++failed;
  }

  switch (opts.format) {
    case OutputFormat::PlainTable: {
      std::vector<std::vector<std::string>> table;
      for (const auto& r : results) {
        if (r.errata) continue;
        std::string tail = "[prints " + r.reference + "]";
        if (!r.note.empty()) tail += "  -- " + r.note;
        table.push_back({r.pass ? "PASS" : "FAIL", r.id,
                         r.detail + " = " + format_decimal(r.value, opts.precision),
                         tail});
      }
      print_aligned(out, table);
      out << "\nerrata (documented discrepancies in the reference; reported,"
             " never failing):\n";
      std::vector<std::vector<std::string>> etable;
      for (const auto& r : results) {
        if (!r.errata) continue;
        etable.push_back({"  " + r.id,
                          r.detail + " = " + format_decimal(r.value, opts.precision),
                          "[prints " + r.reference + "]  -- " + r.note});
      }
      print_aligned(out, etable);
      out << '\n' << passed << " passed, " << failed << " failed, " << errata
          << " errata\n";
      break;
    }
    case OutputFormat::Csv:
      out << "id,status,detail,value,reference,note\n";
      for (const auto& r : results) {
        const char* status = r.errata ? "erratum" : (r.pass ? "pass" : "fail");
        out << csv_field(r.id) << ',' << status << ',' << csv_field(r.detail)
            << ',' << format_decimal(r.value, opts.precision) << ','
            << csv_field(r.reference) << ',' << csv_field(r.note) << '\n';
      }
      break;
    case OutputFormat::Json: {
      json entries = json::array();
      for (const auto& r : results) {
        entries.push_back(
            json{{"id", r.id},
                 {"status", r.errata ? "erratum" : (r.pass ? "pass" : "fail")},
                 {"detail", r.detail},
                 {"value", r.value},
                 {"reference", r.reference},
                 {"note", r.note}});
      }
      out << json{{"results", entries}, {"all_pass", ok}}.dump() << '\n';
      break;
    }
  }
  return ok ? exit_success : exit_verification_failure;
}

int run_verify(std::uint64_t seed, std::size_t cases,
               const GlobalOptions& opts, std::ostream& out,
               std::ostream& err) {
  if (cases == 0) {
    err << "error: cases must be positive\n";
    return exit_usage;
  }
  const auto summary = oracle::random_property_battery(seed, cases);

  switch (opts.format) {
    case OutputFormat::PlainTable:
      if (summary.passed()) {
        out << "battery passed: " << summary.cases_run << " cases, seed "
            << seed << '\n';
      } else {
        out << "battery failed: " << summary.failures << " of "
            << summary.cases_run << " cases, seed " << seed << '\n';
        if (summary.first_failure) {
          out << "first counterexample (case "
              << summary.first_failure->case_index
              << "): " << summary.first_failure->detail << '\n';
        }
      }
      break;
    case OutputFormat::Csv:
      out << "seed,cases,failures,first_case,first_detail\n";
      out << seed << ',' << summary.cases_run << ',' << summary.failures
          << ',';
      if (summary.first_failure) {
        out << summary.first_failure->case_index << ','
            << csv_field(summary.first_failure->detail);
      } else {
        out << ',';
      }
      out << '\n';
      break;
    case OutputFormat::Json: {
      json j{{"seed", seed},
             {"cases", summary.cases_run},
             {"failures", summary.failures}};
      if (summary.first_failure) {
        j["first_failure"] = json{{"case", summary.first_failure->case_index},
                                  {"detail", summary.first_failure->detail}};
      }
      out << j.dump() << '\n';
      break;
    }
  }
  return summary.passed() ? exit_success : exit_verification_failure;
}

namespace {

std::optional<std::vector<std::uint64_t>> parse_counts(
    const std::string& text) {
  std::vector<std::uint64_t> counts;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string_view field(text.data() + pos, comma - pos);
    while (!field.empty() && field.front() == ' ') field.remove_prefix(1);
    while (!field.empty() && field.back() == ' ') field.remove_suffix(1);
    std::uint64_t n = 0;
    const auto [ptr, ec] =
        std::from_chars(field.data(), field.data() + field.size(), n);
    if (ec != std::errc{} || ptr != field.data() + field.size() || n == 0) {
      return std::nullopt;
    }
    counts.push_back(n);
    pos = comma + 1;
  }
  if (counts.empty()) return std::nullopt;
  return counts;
}

Mode mode_of(const std::string& name) {
  if (name == "log") return Mode::LogComplement;
  if (name == "rational") return Mode::ExactRational;
  return Mode::Floating;
}

OutputFormat format_of(const std::string& name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  return OutputFormat::PlainTable;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"probability combination toolkit", "probcomb"};
  app.require_subcommand(1);

  std::string mode_name = "float";
  std::string format_name = "table";
  int precision = 6;
  double tolerance = 1e-9;
  app.add_option("--mode", mode_name, "arithmetic mode")
      ->check(CLI::IsMember({"float", "log", "rational"}))
      ->capture_default_str();
  app.add_option("--format", format_name, "output format")
      ->check(CLI::IsMember({"table", "csv", "json"}))
      ->capture_default_str();
  app.add_option("--precision", precision, "significant digits in output")
      ->check(CLI::Range(1, 17))
      ->capture_default_str();
  app.add_option("--tolerance", tolerance,
                 "allowed |value - exact| before eval warns")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  std::string expression;
  auto* eval_cmd =
      app.add_subcommand("eval", "evaluate a combination expression");
  eval_cmd->fallthrough();
  eval_cmd->add_option("expression", expression,
                       "expression, e.g. \"0.4 (+) 0.7\"")
      ->required();

  std::string path;
  auto* combine_cmd =
      app.add_subcommand("combine", "combine a JSON evidence document");
  combine_cmd->fallthrough();
  combine_cmd->add_option("path", path, "path to the document")->required();

  std::string counts_text = "5,10,50,100,1000";
  auto* table1_cmd = app.add_subcommand(
      "table1", "Laplace succession versus cMPE group combination");
  table1_cmd->fallthrough();
  table1_cmd->add_option("--counts", counts_text, "comma-separated group sizes")
      ->capture_default_str();

  double delta = 0.4;
  double step = 0.1;
  auto* curve_cmd =
      app.add_subcommand("curve", "combination curve x -> x (+) delta");
  curve_cmd->fallthrough();
  curve_cmd->add_option("--delta", delta, "probability added at every x")
      ->capture_default_str();
  curve_cmd->add_option("--step", step, "abscissa step width")
      ->capture_default_str();

  auto* examples_cmd =
      app.add_subcommand("examples", "worked-example regression report");
  examples_cmd->fallthrough();

  std::uint64_t seed = 42;
  std::size_t cases = 1000;
  auto* verify_cmd =
      app.add_subcommand("verify", "randomized property battery");
  verify_cmd->fallthrough();
  verify_cmd->add_option("--seed", seed, "RNG seed")->capture_default_str();
  verify_cmd->add_option("--cases", cases, "number of random cases")
      ->capture_default_str();

  // The vector overload consumes the arguments back to front.
  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return exit_success;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  const GlobalOptions opts{mode_of(mode_name), format_of(format_name),
                           precision, tolerance};
  if (app.got_subcommand(eval_cmd)) {
    return run_eval(expression, opts, out, err);
  }
  if (app.got_subcommand(combine_cmd)) {
    return run_combine(path, opts, out, err);
  }
  if (app.got_subcommand(table1_cmd)) {
    const auto counts = parse_counts(counts_text);
    if (!counts) {
      err << "error: counts must be comma-separated positive integers\n";
      return exit_usage;
    }
    return run_table1(*counts, opts, out, err);
  }
  if (app.got_subcommand(curve_cmd)) {
    return run_curve(delta, step, opts, out, err);
  }
  if (app.got_subcommand(examples_cmd)) {
    return run_examples(opts, out, err);
  }
  return run_verify(seed, cases, opts, out, err);
}

}  // namespace probcomb::cli

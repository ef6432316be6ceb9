#include "probcomb/probability.hpp"

#include <charconv>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

namespace probcomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string to_string(const Rational& r) {
  std::ostringstream os;
  os << r;
  return os.str();
}

}  // namespace

const char* errc_name(errc code) noexcept {
  switch (code) {
    case errc::out_of_range_probability: return "OutOfRangeProbability";
    case errc::subtrahend_exceeds_minuend: return "SubtrahendExceedsMinuend";
    case errc::division_by_zero_complement: return "DivisionByZeroComplement";
    case errc::zero_evidence_probability: return "ZeroEvidenceProbability";
    case errc::partition_not_normalized: return "PartitionNotNormalized";
    case errc::implication_violated: return "ImplicationViolated";
    case errc::not_disfavored_side: return "NotDisfavoredSide";
    case errc::zero_consequence: return "ZeroConsequence";
    case errc::extensional_evidence_rejected: return "ExtensionalEvidenceRejected";
    case errc::semantic_overlap: return "SemanticOverlap";
    case errc::space_too_large: return "SpaceTooLarge";
    case errc::zero_evidence_column: return "ZeroEvidenceColumn";
    case errc::chain_overflow: return "ChainOverflow";
    case errc::lex_error: return "LexError";
    case errc::parse_error: return "ParseError";
    case errc::document_invalid: return "DocumentInvalid";
    case errc::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

const char* mode_name(Mode mode) noexcept {
  switch (mode) {
    case Mode::Floating: return "float";
    case Mode::LogComplement: return "log";
    case Mode::ExactRational: return "rational";
  }
  return "?";
}

double detail::log1mexp(double x) noexcept {
  // Split at -ln 2 so both log() and log1p() stay well conditioned.
  if (x == -kInf) return 0.0;
  if (x > -M_LN2) return std::log(-std::expm1(x));
  return std::log1p(-std::exp(x));
}

ErrorComplement::ErrorComplement(double log_complement) : log_(log_complement) {
  if (std::isnan(log_complement) || log_complement > 0.0) {
    throw Error(errc::out_of_range_probability,
                "log-complement must be <= 0, got " +
                    std::to_string(log_complement));
  }
  if (log_ == 0.0) log_ = 0.0;  // normalize -0
}

double ErrorComplement::probability_value() const noexcept {
  return -std::expm1(log_);
}

Probability Probability::floating(double value) {
  if (std::isnan(value) || value < 0.0 || value > 1.0) {
    throw Error(errc::out_of_range_probability,
                "probability must lie in [0,1], got " + std::to_string(value));
  }
  if (value == 0.0) value = 0.0;  // normalize -0
  return Probability(Repr{std::in_place_index<0>, value});
}

Probability Probability::exact(Rational value) {
  if (value < 0 || value > 1) {
    throw Error(errc::out_of_range_probability,
                "probability must lie in [0,1], got " + to_string(value));
  }
  return Probability(Repr{std::in_place_index<2>, std::move(value)});
}

Probability Probability::exact(long long numerator, long long denominator) {
  if (denominator == 0) {
    throw Error(errc::invalid_argument, "zero denominator");
  }
  // The backing rational type insists on a positive denominator.
  BigInt n = numerator;
  BigInt d = denominator;
  if (d < 0) {
    n = -n;
    d = -d;
  }
  return exact(Rational(n, d));
}

Probability Probability::from_error_complement(ErrorComplement ec) {
  return Probability(Repr{std::in_place_index<1>, ec});
}

double Probability::value() const {
  switch (repr_.index()) {
    case 0: return std::get<0>(repr_);
    case 1: return std::get<1>(repr_).probability_value();
    default: return std::get<2>(repr_).convert_to<double>();
  }
}

const Rational& Probability::exact_value() const {
  if (mode() != Mode::ExactRational) {
    throw Error(errc::invalid_argument,
                "exact_value() requires ExactRational mode");
  }
  return std::get<2>(repr_);
}

ErrorComplement Probability::error_complement() const {
  switch (repr_.index()) {
    case 0:
      return ErrorComplement(std::log1p(-std::get<0>(repr_)));
    case 1:
      return std::get<1>(repr_);
    default: {
      const Rational& r = std::get<2>(repr_);
      if (r == 1) return ErrorComplement(-kInf);
      // Form 1 - r exactly first so complements near 1 keep their scale.
      Rational c = Rational(1) - r;
      return ErrorComplement(std::log(c.convert_to<double>()));
    }
  }
}

Probability Probability::to_mode(Mode target) const {
  if (target == mode()) return *this;
  switch (target) {
    case Mode::Floating:
      return floating(value());
    case Mode::LogComplement:
      return from_error_complement(error_complement());
    case Mode::ExactRational:
      if (mode() == Mode::Floating) {
        return exact(Rational(std::get<0>(repr_)));  // exact binary expansion
      }
      return exact(Rational(value()));
  }
  throw Error(errc::invalid_argument, "unknown representation mode");
}

Probability Probability::complement() const {
  switch (repr_.index()) {
    case 0:
      return floating(1.0 - std::get<0>(repr_));
    case 1: {
      // p has L = ln(1-p); the complement 1-p has ln(p) = log1mexp(L).
      double flipped = detail::log1mexp(std::get<1>(repr_).log_value());
      return from_error_complement(ErrorComplement(flipped));
    }
    default:
      return exact(Rational(1) - std::get<2>(repr_));
  }
}

bool Probability::is_zero() const {
  switch (repr_.index()) {
    case 0: return std::get<0>(repr_) == 0.0;
    case 1: return std::get<1>(repr_).log_value() == 0.0;
    default: return std::get<2>(repr_) == 0;
  }
}

bool Probability::is_one() const {
  switch (repr_.index()) {
    case 0: return std::get<0>(repr_) == 1.0;
    case 1: return std::get<1>(repr_).log_value() == -kInf;
    default: return std::get<2>(repr_) == 1;
  }
}

Probability complement(const Probability& p) { return p.complement(); }

ProductResult product_checked(std::span<const Probability> ps) {
  if (ps.empty()) {
    throw Error(errc::invalid_argument, "product over an empty list");
  }
  const Mode mode = ps.front().mode();
  switch (mode) {
    case Mode::Floating: {
      double acc = 1.0;
      bool any_zero = false;
      for (const auto& p : ps) {
        double v = p.to_mode(Mode::Floating).value();
        any_zero = any_zero || v == 0.0;
        acc *= v;
      }
      bool underflowed =
          !any_zero && (acc == 0.0 ||
                        (acc > 0.0 && acc < std::numeric_limits<double>::min()));
      return {Probability::floating(acc), underflowed};
    }
    case Mode::LogComplement: {
      // Multiply the values in plain log space: ln p = log1mexp(ln(1-p)).
      double log_acc = 0.0;
      bool any_zero = false;
      for (const auto& p : ps) {
        double lc = p.to_mode(Mode::LogComplement).error_complement().log_value();
        double logp = detail::log1mexp(lc);
        any_zero = any_zero || logp == -kInf;
        log_acc += logp;
      }
      if (any_zero) log_acc = -kInf;
      double result_lc = detail::log1mexp(log_acc);
      bool underflowed =
          !any_zero && log_acc != 0.0 && std::exp(log_acc) == 0.0;
      return {Probability::from_error_complement(ErrorComplement(result_lc)),
              underflowed};
    }
    case Mode::ExactRational: {
      Rational acc = 1;
      for (const auto& p : ps) acc *= p.to_mode(Mode::ExactRational).exact_value();
      return {Probability::exact(std::move(acc)), false};
    }
  }
  throw Error(errc::invalid_argument, "unknown representation mode");
}

ProductResult product_checked(std::initializer_list<Probability> ps) {
  return product_checked(std::span<const Probability>(ps.begin(), ps.size()));
}

Probability product(std::span<const Probability> ps) {
  return product_checked(ps).value;
}

Probability product(std::initializer_list<Probability> ps) {
  return product(std::span<const Probability>(ps.begin(), ps.size()));
}

ErrorComplement to_log_complement(const Probability& p) {
  return p.error_complement();
}

Probability from_log_complement(const ErrorComplement& ec) {
  return Probability::floating(ec.probability_value());
}

bool approx_equal(const Probability& a, const Probability& b, double tol) {
  if (a.mode() == Mode::ExactRational && b.mode() == Mode::ExactRational) {
    return a.exact_value() == b.exact_value();
  }
  return std::fabs(a.value() - b.value()) <= tol;
}

Rational parse_decimal_rational(std::string_view text) {
  std::size_t i = 0;
  const std::size_t n = text.size();
  bool negative = false;
  if (i < n && (text[i] == '+' || text[i] == '-')) {
    negative = text[i] == '-';
    ++i;
  }
  std::string digits;
  long long scale = 0;
  const auto take_digits = [&] {
    bool any = false;
    while (i < n && text[i] >= '0' && text[i] <= '9') {
      digits.push_back(text[i++]);
      any = true;
    }
    return any;
  };
  bool got = take_digits();
  if (i < n && text[i] == '.') {
    ++i;
    const std::size_t before = digits.size();
    got = take_digits() || got;
    scale = static_cast<long long>(digits.size() - before);
  }
  if (!got) {
    throw Error(errc::invalid_argument,
                "not a decimal literal: '" + std::string(text) + "'");
  }
  long long exponent = 0;
  if (i < n && (text[i] == 'e' || text[i] == 'E')) {
    ++i;
    bool exp_negative = false;
    if (i < n && (text[i] == '+' || text[i] == '-')) {
      exp_negative = text[i] == '-';
      ++i;
    }
    bool any = false;
    for (; i < n && text[i] >= '0' && text[i] <= '9'; ++i) {
      any = true;
      if (exponent < 100000) exponent = exponent * 10 + (text[i] - '0');
    }
    if (!any) {
      throw Error(errc::invalid_argument,
                  "empty exponent in '" + std::string(text) + "'");
    }
    if (exp_negative) exponent = -exponent;
  }
  if (i != n) {
    throw Error(errc::invalid_argument,
                "trailing characters in decimal literal '" +
                    std::string(text) + "'");
  }
  // Accumulate digit by digit; the BigInt string constructor would read a
  // leading '0' as an octal prefix.
  BigInt mantissa(0);
  for (const char d : digits) {
    mantissa = mantissa * 10 + (d - '0');
  }
  if (negative) mantissa = -mantissa;
  Rational value(mantissa);
  const long long power = exponent - scale;
  const BigInt ten_to =
      boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(
                                                 power < 0 ? -power : power));
  if (power >= 0) {
    value *= ten_to;
  } else {
    value /= ten_to;
  }
  return value;
}

Rational decimal_value_of(double value) {
  char buffer[32];
  const auto [end, ec] =
      std::to_chars(buffer, buffer + sizeof buffer, value);
  if (ec != std::errc()) {
    throw Error(errc::invalid_argument, "unprintable double");
  }
  return parse_decimal_rational(std::string_view(buffer, end - buffer));
}

std::string format_decimal(double value, int significant_digits) {
  std::ostringstream out;
  out << std::setprecision(std::max(significant_digits, 1)) << value;
  return out.str();
}

std::string to_display_string(const Probability& p, int significant_digits) {
  return format_decimal(p.value(), significant_digits);
}

}  // namespace probcomb

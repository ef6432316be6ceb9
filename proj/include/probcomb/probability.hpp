#ifndef PROBCOMB_PROBABILITY_HPP
#define PROBCOMB_PROBABILITY_HPP

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <string_view>
#include <variant>

#include "probcomb/errors.hpp"

namespace probcomb {

/// Arbitrary-precision rational, always kept in lowest terms with a
/// positive denominator.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

/// How a probability value is carried.
///
/// Floating is an ordinary binary double.  LogComplement stores ln(1-p),
/// which keeps probabilities arbitrarily close to 1 distinguishable from 1.
/// ExactRational is exact and is what the verification oracle runs on.
enum class Mode { Floating, LogComplement, ExactRational };

const char* mode_name(Mode mode) noexcept;

/// ln(1 - p) for a probability p.  Always <= 0; 0 encodes p = 0 and the
/// -infinity sentinel encodes p = 1.
class ErrorComplement {
 public:
  /// Wraps a log-complement value.  Rejects NaN and positive values.
  explicit ErrorComplement(double log_complement);

  /// The stored ln(1 - p), in natural-log units.
  double log_value() const noexcept { return log_; }

  /// Recovers p = 1 - exp(log_value());  the -infinity sentinel maps back
  /// to exactly 1.
  double probability_value() const noexcept;

  bool operator==(const ErrorComplement&) const = default;

 private:
  double log_;
};

/// A probability in [0, 1], carried in one of the three representation
/// modes.  Values are immutable; construction from an out-of-range number
/// throws rather than clamping.
class Probability {
 public:
  /// Zero probability in Floating mode.
  Probability() : repr_(0.0) {}

  static Probability floating(double value);
  static Probability exact(Rational value);
  static Probability exact(long long numerator, long long denominator);
  static Probability from_error_complement(ErrorComplement ec);

  Mode mode() const noexcept { return static_cast<Mode>(repr_.index()); }

  /// Numeric view as a double.  In LogComplement mode values within one
  /// double ulp of 1 collapse to 1.0; the full information stays in
  /// error_complement().
  double value() const;

  /// The exact fraction; only valid in ExactRational mode.
  const Rational& exact_value() const;

  /// ln(1 - p), computed from any mode.
  ErrorComplement error_complement() const;

  /// Converts between representations.  Floating -> ExactRational is exact
  /// (binary expansion); other directions round to double precision.
  Probability to_mode(Mode target) const;

  /// 1 - p in the same representation mode.  Involutive.
  Probability complement() const;

  bool is_zero() const;
  bool is_one() const;

 private:
  using Repr = std::variant<double, ErrorComplement, Rational>;
  explicit Probability(Repr repr) : repr_(std::move(repr)) {}
  Repr repr_;
};

Probability complement(const Probability& p);

struct ProductResult {
  Probability value;
  /// True when a nonzero exact result was rounded to zero (or subnormal)
  /// by the floating representation.
  bool underflowed;
};

/// Product of probabilities in the mode of the first operand.
/// In LogComplement mode the factors are multiplied in log space.
ProductResult product_checked(std::span<const Probability> ps);
ProductResult product_checked(std::initializer_list<Probability> ps);
Probability product(std::span<const Probability> ps);
Probability product(std::initializer_list<Probability> ps);

ErrorComplement to_log_complement(const Probability& p);
/// Inverse of to_log_complement; yields a Floating-mode probability.
Probability from_log_complement(const ErrorComplement& ec);

/// |a - b| <= tol on the double views.  Exact in ExactRational mode when
/// both operands are rational.
bool approx_equal(const Probability& a, const Probability& b,
                  double tol = 1e-9);

/// Exact rational value of a decimal literal, e.g. "0.4" -> 2/5,
/// "1e-3" -> 1/1000.  Scientific notation allowed; no range restriction.
Rational parse_decimal_rational(std::string_view text);

/// Shortest-round-trip decimal reading of a double, taken exactly.  The
/// inverse of writing a probability as a short decimal literal.
Rational decimal_value_of(double value);

/// %g-style rendering at the given number of significant digits.
std::string format_decimal(double value, int significant_digits);

/// Display form of the double view; rationals print their decimal
/// approximation (use exact_value() for the fraction).
std::string to_display_string(const Probability& p,
                              int significant_digits = 6);

namespace detail {
/// ln(1 - e^x) for x <= 0, stable near both ends.
double log1mexp(double x) noexcept;
}  // namespace detail

}  // namespace probcomb

#endif

#include "probcomb/combinators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "probcomb/errors.hpp"

namespace probcomb {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

Probability one_in(Mode mode) {
  switch (mode) {
    case Mode::Floating:
      return Probability::floating(1.0);
    case Mode::LogComplement:
      return Probability::from_error_complement(ErrorComplement(-kInf));
    case Mode::ExactRational:
      return Probability::exact(Rational(1));
  }
  throw Error(errc::invalid_argument, "unknown representation mode");
}

}  // namespace

// Mixed-mode operand lists are computed in the mode of the first operand;
// the remaining operands are converted with to_mode.

Probability cmpe_add(std::span<const Probability> ps) {
  if (ps.empty()) {
    throw Error(errc::invalid_argument, "cmpe_add over an empty list");
  }
  switch (ps.front().mode()) {
    case Mode::Floating: {
      double comp = 1.0;
      double largest = 0.0;
      for (const auto& p : ps) {
        const double v = p.value();
        comp *= 1.0 - v;
        largest = std::max(largest, v);
      }
      // Rounding inside the complement product can land a few ulp below the
      // largest input; the operator is ascending by contract, so guard it.
      const double r = std::min(std::max(1.0 - comp, largest), 1.0);
      return Probability::floating(r);
    }
    case Mode::LogComplement: {
      // ln(1 - result) = sum of ln(1 - p_i); the operator is exact here.
      double sum = 0.0;
      for (const auto& p : ps) sum += to_log_complement(p).log_value();
      return Probability::from_error_complement(ErrorComplement(sum));
    }
    case Mode::ExactRational: {
      Rational comp = 1;
      for (const auto& p : ps) {
        comp *= 1 - p.to_mode(Mode::ExactRational).exact_value();
      }
      return Probability::exact(1 - comp);
    }
  }
  throw Error(errc::invalid_argument, "unknown representation mode");
}

Probability cmpe_add(std::initializer_list<Probability> ps) {
  return cmpe_add(std::span<const Probability>(ps.begin(), ps.size()));
}

Probability dpe_sub(const Probability& minuend,
                    std::span<const Probability> subtrahends) {
  if (subtrahends.empty()) {
    throw Error(errc::invalid_argument, "dpe_sub with no subtrahends");
  }
  for (const auto& b : subtrahends) {
    if (b.is_one()) {
      throw Error(errc::division_by_zero_complement,
                  "dpe_sub subtrahend equals 1, its complement divides by zero");
    }
  }
  const Mode mode = minuend.mode();
  if (minuend.is_one()) {
    // 1 - 0 / anything positive: certainty is a fixed point of subtraction.
    return one_in(mode);
  }
  switch (mode) {
    case Mode::Floating: {
      const double numer = 1.0 - minuend.value();
      double denom = 1.0;
      for (const auto& b : subtrahends) denom *= 1.0 - b.value();
      if (numer > denom) {
        throw Error(errc::subtrahend_exceeds_minuend,
                    "dpe_sub result would be negative");
      }
      return Probability::floating(1.0 - numer / denom);
    }
    case Mode::LogComplement: {
      double out = to_log_complement(minuend).log_value();
      for (const auto& b : subtrahends) out -= to_log_complement(b).log_value();
      if (out > 0.0) {
        throw Error(errc::subtrahend_exceeds_minuend,
                    "dpe_sub result would be negative");
      }
      return Probability::from_error_complement(ErrorComplement(out));
    }
    case Mode::ExactRational: {
      const Rational numer = 1 - minuend.exact_value();
      Rational denom = 1;
      for (const auto& b : subtrahends) {
        denom *= 1 - b.to_mode(Mode::ExactRational).exact_value();
      }
      if (numer > denom) {
        throw Error(errc::subtrahend_exceeds_minuend,
                    "dpe_sub result would be negative");
      }
      return Probability::exact(1 - numer / denom);
    }
  }
  throw Error(errc::invalid_argument, "unknown representation mode");
}

Probability dpe_sub(const Probability& minuend,
                    std::initializer_list<Probability> subtrahends) {
  return dpe_sub(minuend,
                 std::span<const Probability>(subtrahends.begin(),
                                              subtrahends.size()));
}

MpeResult mpe_error_product(std::span<const Probability> errors) {
  if (errors.empty()) {
    throw Error(errc::invalid_argument, "mpe_error_product over an empty list");
  }
  ProductResult r = product_checked(errors);
  return {std::move(r.value), r.underflowed};
}

MpeResult mpe_error_product(std::initializer_list<Probability> errors) {
  return mpe_error_product(
      std::span<const Probability>(errors.begin(), errors.size()));
}

Probability bayes_posterior(const Probability& prior,
                            const Probability& likelihood,
                            const Probability& alt_likelihood) {
  const BayesAlternative alts[2] = {
      {prior, likelihood},
      {complement(prior), alt_likelihood},
  };
  return bayes_total(std::span<const BayesAlternative>(alts, 2), 0);
}

Probability bayes_total(std::span<const BayesAlternative> alternatives,
                        std::size_t k, bool exhaustive, double tolerance) {
  if (alternatives.empty()) {
    throw Error(errc::invalid_argument, "bayes_total over an empty partition");
  }
  if (k >= alternatives.size()) {
    throw Error(errc::invalid_argument, "bayes_total index out of range");
  }
  const Mode mode = alternatives[k].prior.mode();
  if (exhaustive) {
    if (mode == Mode::ExactRational) {
      Rational total = 0;
      for (const auto& a : alternatives) {
        total += a.prior.to_mode(Mode::ExactRational).exact_value();
      }
      if (total != 1) {
        throw Error(errc::partition_not_normalized,
                    "priors of an exhaustive partition must sum to 1");
      }
    } else {
      double total = 0.0;
      for (const auto& a : alternatives) total += a.prior.value();
      if (std::abs(total - 1.0) > tolerance) {
        throw Error(errc::partition_not_normalized,
                    "priors of an exhaustive partition must sum to 1");
      }
    }
  }
  if (mode == Mode::ExactRational) {
    Rational numer;
    Rational denom = 0;
    for (std::size_t i = 0; i < alternatives.size(); ++i) {
      Rational term = alternatives[i].prior.to_mode(Mode::ExactRational).exact_value() *
                      alternatives[i].likelihood.to_mode(Mode::ExactRational).exact_value();
      if (i == k) numer = term;
      denom += term;
    }
    if (denom == 0) {
      throw Error(errc::zero_evidence_probability,
                  "total probability of the evidence is zero");
    }
    return Probability::exact(numer / denom);
  }
  // Posteriors are ratios near the middle of [0,1]; plain doubles are the
  // right tool even when the caller works in LogComplement elsewhere.
  double numer = 0.0;
  double denom = 0.0;
  for (std::size_t i = 0; i < alternatives.size(); ++i) {
    const double term =
        alternatives[i].prior.value() * alternatives[i].likelihood.value();
    if (i == k) numer = term;
    denom += term;
  }
  if (denom == 0.0) {
    throw Error(errc::zero_evidence_probability,
                "total probability of the evidence is zero");
  }
  const double post = numer / denom;
  return mode == Mode::LogComplement
             ? Probability::floating(post).to_mode(Mode::LogComplement)
             : Probability::floating(post);
}

Probability bayes_implied(const Probability& prior,
                          const Probability& evidence_total) {
  if (evidence_total.is_zero()) {
    throw Error(errc::zero_evidence_probability,
                "implied evidence has probability zero");
  }
  const Mode mode = prior.mode();
  if (mode == Mode::ExactRational) {
    const Rational& h = prior.exact_value();
    const Rational e = evidence_total.to_mode(Mode::ExactRational).exact_value();
    if (e < h) {
      throw Error(errc::implication_violated,
                  "evidence must be at least as probable as what implies it");
    }
    return Probability::exact(h / e);
  }
  const double h = prior.value();
  const double e = evidence_total.value();
  if (e < h) {
    throw Error(errc::implication_violated,
                "evidence must be at least as probable as what implies it");
  }
  const double post = std::min(h / e, 1.0);
  return mode == Mode::LogComplement
             ? Probability::floating(post).to_mode(Mode::LogComplement)
             : Probability::floating(post);
}

Probability laplace_succession(std::uint64_t successes, std::uint64_t trials) {
  if (successes > trials) {
    throw Error(errc::invalid_argument,
                "laplace_succession needs successes <= trials");
  }
  return Probability::exact(Rational(BigInt(successes) + 1, BigInt(trials) + 2));
}

Probability support_transfer(std::span<const SupportContribution> contributions) {
  if (contributions.empty()) {
    throw Error(errc::invalid_argument, "support_transfer over an empty list");
  }
  std::vector<Probability> conferred;
  conferred.reserve(contributions.size());
  for (const auto& c : contributions) {
    conferred.push_back(product({c.carrier_prior, c.transfer}));
  }
  return cmpe_add(conferred);
}

Probability support_transfer(std::initializer_list<SupportContribution> contributions) {
  return support_transfer(
      std::span<const SupportContribution>(contributions.begin(),
                                           contributions.size()));
}

CohenResult cohen_binary_combine(
    std::span<const Probability> testimonies_for_disfavored) {
  if (testimonies_for_disfavored.empty()) {
    throw Error(errc::invalid_argument,
                "cohen_binary_combine over an empty list");
  }
  for (const auto& t : testimonies_for_disfavored) {
    const bool low_side = t.mode() == Mode::ExactRational
                              ? t.exact_value() <= Rational(1, 2)
                              : t.value() <= 0.5;
    if (!low_side) {
      throw Error(errc::not_disfavored_side,
                  "testimonies must be given for the disfavored side (<= 1/2)");
    }
  }
  Probability disfavored = product(testimonies_for_disfavored);
  // Deriving the favored side as the complement of the disfavored product
  // keeps the pair summing to exactly 1 in every mode; cmpe_add of the
  // complements is the same quantity algebraically.
  Probability favored = complement(disfavored);
  return {std::move(favored), std::move(disfavored)};
}

CohenResult cohen_binary_combine(
    std::initializer_list<Probability> testimonies_for_disfavored) {
  return cohen_binary_combine(std::span<const Probability>(
      testimonies_for_disfavored.begin(), testimonies_for_disfavored.size()));
}

std::vector<std::pair<Probability, Probability>> nonlinear_add_curve(
    const Probability& delta, double step) {
  if (!(step > 0.0 && step < 1.0)) {
    throw Error(errc::invalid_argument, "curve step must lie in (0, 1)");
  }
  const double cells = 1.0 / step;
  const auto n = static_cast<long long>(std::llround(cells));
  if (n < 1 || std::abs(cells - static_cast<double>(n)) > 1e-9) {
    throw Error(errc::invalid_argument, "curve step must divide [0, 1] evenly");
  }
  const auto grid_point = [&](long long i) {
    switch (delta.mode()) {
      case Mode::ExactRational:
        return Probability::exact(i, n);
      case Mode::LogComplement:
        return Probability::floating(static_cast<double>(i) /
                                     static_cast<double>(n))
            .to_mode(Mode::LogComplement);
      default:
        return Probability::floating(static_cast<double>(i) /
                                     static_cast<double>(n));
    }
  };
  std::vector<std::pair<Probability, Probability>> points;
  points.reserve(static_cast<std::size_t>(n) + 1);
  for (long long i = 0; i <= n; ++i) {
    Probability x = grid_point(i);
    Probability y = cmpe_add({x, delta});
    points.emplace_back(std::move(x), std::move(y));
  }
  return points;
}

}  // namespace probcomb

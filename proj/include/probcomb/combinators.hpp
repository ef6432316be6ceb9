#ifndef PROBCOMB_COMBINATORS_HPP
#define PROBCOMB_COMBINATORS_HPP

#include <cstdint>
#include <initializer_list>
#include <span>
#include <utility>
#include <vector>

#include "probcomb/probability.hpp"

namespace probcomb {

/// One source of conferred support: a carrier hypothesis with prior
/// probability `carrier_prior` passes probability `transfer` on to the
/// supported event, contributing carrier_prior * transfer.
struct SupportContribution {
  Probability carrier_prior;
  Probability transfer;
};

/// One alternative of a Bayes partition: its prior and the likelihood of
/// the observed evidence under it.
struct BayesAlternative {
  Probability prior;
  Probability likelihood;
};

/// Non-linear addition of mutually supporting probabilities:
/// 1 - (1-p1)(1-p2)...(1-pn).  Commutative, associative, identity 0,
/// absorbing element 1; the result never exceeds 1 and never drops below
/// any input.
Probability cmpe_add(std::span<const Probability> ps);
Probability cmpe_add(std::initializer_list<Probability> ps);

/// Non-linear subtraction, the inverse of cmpe_add:
/// 1 - (1-minuend) / ((1-s1)...(1-sn)).
/// Throws SubtrahendExceedsMinuend when the result would be negative and
/// DivisionByZeroComplement when a subtrahend equals 1.
Probability dpe_sub(const Probability& minuend,
                    std::span<const Probability> subtrahends);
Probability dpe_sub(const Probability& minuend,
                    std::initializer_list<Probability> subtrahends);

struct MpeResult {
  /// Joint probability of error across independent channels.
  Probability error;
  /// Floating (and, for extreme tails, log) arithmetic can lose a nonzero
  /// product to underflow; when that happens it is reported here instead
  /// of being silently returned as 0.
  bool underflowed;
};

/// Product of per-channel error probabilities.  Inputs below 1e-6 should
/// be combined in LogComplement or ExactRational mode.
MpeResult mpe_error_product(std::span<const Probability> errors);
MpeResult mpe_error_product(std::initializer_list<Probability> errors);

/// Posterior P(H|E) from prior, P(E|H) and P(E|not-H).
Probability bayes_posterior(const Probability& prior,
                            const Probability& likelihood,
                            const Probability& alt_likelihood);

/// Posterior of alternative k over a partition.  When `exhaustive` the
/// priors must sum to 1 (exactly in rational mode, within `tolerance`
/// otherwise).
Probability bayes_total(std::span<const BayesAlternative> alternatives,
                        std::size_t k, bool exhaustive = true,
                        double tolerance = 1e-9);

/// Posterior when H implies E: P(H|E) = P(H) / P(E).
Probability bayes_implied(const Probability& prior,
                          const Probability& evidence_total);

/// Rule of succession, (successes + 1) / (trials + 2), as an exact
/// rational.  Strictly below 1 for every finite trial count.
Probability laplace_succession(std::uint64_t successes, std::uint64_t trials);

/// cmpe_add over the conferred contributions carrier_prior * transfer.
Probability support_transfer(std::span<const SupportContribution> contributions);
Probability support_transfer(std::initializer_list<SupportContribution> contributions);

struct CohenResult {
  Probability favored;
  Probability disfavored;
};

/// Binary-hypothesis combination of testimonies given for the disfavored
/// side (each <= 1/2): the favored side combines by cmpe_add of the
/// complements, the disfavored side by plain multiplication.  The two
/// outputs sum to exactly 1.
CohenResult cohen_binary_combine(std::span<const Probability> testimonies_for_disfavored);
CohenResult cohen_binary_combine(std::initializer_list<Probability> testimonies_for_disfavored);

/// Samples y = cmpe_add(x, delta) on the grid x = 0, step, 2*step, ..., 1.
/// `step` must divide [0,1] evenly.
std::vector<std::pair<Probability, Probability>> nonlinear_add_curve(
    const Probability& delta, double step);

}  // namespace probcomb

#endif

#include "probcomb/oracle.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "doctest.h"
#include "probcomb/combinators.hpp"
#include "probcomb/errors.hpp"

using namespace probcomb;
using namespace probcomb::oracle;

namespace {

std::vector<Rational> rationals(
    std::initializer_list<std::pair<long long, long long>> fractions) {
  std::vector<Rational> out;
  for (const auto& [n, d] : fractions) out.emplace_back(n, d);
  return out;
}

std::array<Rational, 2> row(long long en, long long ed, long long cn,
                            long long cd) {
  return {Rational(en, ed), Rational(cn, cd)};
}

}  // namespace

TEST_CASE("union_probability enumerates the at-least-one mass") {
  CHECK(union_probability(FiniteEventSpace(rationals({{2, 5}, {7, 10}}))) ==
        Rational(41, 50));
  CHECK(union_probability(FiniteEventSpace(rationals({{1, 2}}))) ==
        Rational(1, 2));
  CHECK(union_probability(
            FiniteEventSpace(rationals({{3, 5}, {2, 5}, {1, 2}}))) ==
        Rational(22, 25));

  SUBCASE("order of events is irrelevant") {
    std::vector<Rational> probs = rationals({{1, 3}, {2, 7}, {5, 8}, {1, 64}});
    const Rational reference = union_probability(FiniteEventSpace(probs));
    std::mt19937_64 rng(3);
    for (int i = 0; i < 10; ++i) {
      std::shuffle(probs.begin(), probs.end(), rng);
      CHECK(union_probability(FiniteEventSpace(probs)) == reference);
    }
  }

  SUBCASE("agrees with the combinator it audits") {
    std::mt19937_64 rng(4);
    for (int i = 0; i < 50; ++i) {
      BatteryCase c = draw_battery_case(rng);
      std::vector<Probability> ps;
      for (const auto& r : c.event_probs) ps.push_back(Probability::exact(r));
      CHECK(cmpe_add(ps).exact_value() ==
            union_probability(FiniteEventSpace(c.event_probs)));
    }
  }

  SUBCASE("size and validity guards") {
    CHECK_THROWS_AS(FiniteEventSpace(std::vector<Rational>{}), Error);
    CHECK_THROWS_AS(FiniteEventSpace(rationals({{3, 2}})), Error);
    std::vector<Rational> too_many(21, Rational(1, 2));
    try {
      union_probability(FiniteEventSpace(too_many));
      FAIL("expected SpaceTooLarge");
    } catch (const Error& e) {
      CHECK(e.code() == errc::space_too_large);
    }
  }
}

TEST_CASE("posterior_from_table reads conditional mass off the joint") {
  SUBCASE("posterior as a ratio of evidence cells") {
    JointTable t({row(3, 10, 1, 5), row(2, 5, 1, 10)});
    CHECK(posterior_from_table(t, 0) == Rational(3, 7));
  }
  SUBCASE("identical conditionals leave the prior untouched") {
    // Both alternatives spread their mass 2/5 vs 3/5 across the evidence
    // states, so conditioning changes nothing.
    JointTable t({row(3 * 2, 10 * 5, 3 * 3, 10 * 5),
                  row(7 * 2, 10 * 5, 7 * 3, 10 * 5)});
    CHECK(posterior_from_table(t, 0) == Rational(3, 10));
    CHECK(posterior_from_table(t, 1) == Rational(7, 10));
  }
  SUBCASE("matches bayes_total built from the same marginals") {
    JointTable t({row(1, 5, 1, 20), row(1, 10, 3, 20), row(1, 20, 9, 20)});
    CHECK(posterior_from_table(t, 0) == Rational(4, 7));

    std::vector<BayesAlternative> alts;
    for (std::size_t i = 0; i < t.alternatives(); ++i) {
      const Rational prior = t.cell(i, 0) + t.cell(i, 1);
      alts.push_back({Probability::exact(prior),
                      Probability::exact(t.cell(i, 0) / prior)});
    }
    for (std::size_t k = 0; k < alts.size(); ++k) {
      CHECK(bayes_total(alts, k).exact_value() == posterior_from_table(t, k));
    }
  }
  SUBCASE("guards") {
    CHECK_THROWS_AS(JointTable(std::vector<std::array<Rational, 2>>{}), Error);
    CHECK_THROWS_AS(JointTable({row(1, 2, 1, 4)}), Error);  // mass 3/4
    JointTable empty_evidence({row(0, 1, 1, 2), row(0, 1, 1, 2)});
    try {
      posterior_from_table(empty_evidence, 0);
      FAIL("expected ZeroEvidenceColumn");
    } catch (const Error& e) {
      CHECK(e.code() == errc::zero_evidence_column);
    }
    JointTable ok({row(1, 2, 1, 2)});
    CHECK_THROWS_AS(posterior_from_table(ok, 5), Error);
  }
}

TEST_CASE("battery draws are bitwise-reproducible") {
  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 50; ++i) {
    CHECK(draw_battery_case(a) == draw_battery_case(b));
  }
  BatterySummary s1 = random_property_battery(42, 200);
  BatterySummary s2 = random_property_battery(42, 200);
  CHECK(s1.cases_run == s2.cases_run);
  CHECK(s1.failures == s2.failures);
}

TEST_CASE("battery passes on random and degenerate cases") {
  BatterySummary s = random_property_battery(42, 1000);
  CHECK(s.cases_run == 1000);
  CHECK(s.passed());
  CHECK_FALSE(s.first_failure.has_value());

  SUBCASE("impossible events everywhere") {
    BatteryCase zeros{rationals({{0, 1}, {0, 1}}), rationals({{0, 1}})};
    CHECK_FALSE(check_battery_case(zeros).has_value());
  }
  SUBCASE("certain events everywhere") {
    BatteryCase ones{rationals({{1, 1}, {1, 1}}), rationals({{1, 2}})};
    CHECK_FALSE(check_battery_case(ones).has_value());
  }
  SUBCASE("a case count of zero is a usage error") {
    CHECK_THROWS_AS(random_property_battery(42, 0), Error);
  }
}

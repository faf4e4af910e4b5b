#include <gtest/gtest.h>

#include "modbasis/error.hpp"
#include "modbasis/eta.hpp"
#include "modbasis/leveldata.hpp"
#include "oracles.hpp"

using namespace modbasis;

namespace {

const char* const kPsi6Quotient = "eta(1)^-4 * eta(2)^8 * eta(3)^4 * eta(6)^-8";

BigRational r(std::int64_t n, std::int64_t d = 1) { return make_rational(n, d); }

}  // namespace

TEST(EulerProduct, MatchesMultipliedOutFactors) {
  EXPECT_EQ(euler_product(8), parse_series("1 - q - q^2 + q^5 + q^7 + O(q^8)"));
  EXPECT_EQ(euler_product(8).coeff(0), 1);
  EXPECT_EQ(euler_product(13).coeff(12), -1);
  const QSeries e = euler_product(65);
  EXPECT_EQ(oracle::agree({0, oracle::euler_by_factors(65)}, e, 65), "");
}

TEST(ExpandQuotient, HauptmodulQuotientOffsetAndUnit) {
  const EtaQuotient eq = parse_eta_quotient(kPsi6Quotient);
  const QuotientExpansion x = expand_quotient(eq, 6);
  EXPECT_EQ(x.offset, -1);
  // quotient = psi + 4 = q^-1 + 4 + 6q + 4q^2 - 3q^3
  EXPECT_EQ(x.unit.truncated(5), parse_series("1 + 4q + 6q^2 + 4q^3 - 3q^4 + O(q^5)"));
  EXPECT_EQ(x.unit.coeff(1), 4);
  EXPECT_EQ(x.unit.coeff(2), 6);
}

TEST(ExpandQuotient, SingleEtaIsEulerProduct) {
  const QuotientExpansion x = expand_quotient(parse_eta_quotient("eta(1)"), 20);
  EXPECT_EQ(x.offset, r(1, 24));
  EXPECT_TRUE(agree_to_precision(x.unit, euler_product(20)));
  EXPECT_GE(x.unit.prec(), 20);
}

TEST(ExpandQuotient, PrintedLevel18TermHasQuarterOffset) {
  const EtaQuotient term = parse_eta_quotient(
      "1/972 * eta(1)^-6 * eta(2)^9 * eta(3)^8 * eta(6)^-6 * eta(9)^-2 * eta(12)", 18);
  EXPECT_EQ(expand_quotient(term, 10).offset, r(-1, 4));
}

TEST(ExpandQuotient, AgreesWithDenseOracle) {
  const std::vector<std::string> quotients = {
      kPsi6Quotient,
      "eta(1)^2 * eta(2)^-4 * eta(3)^-6 * eta(6)^12",
      "eta(2)^6 * eta(3)^8 * eta(6)^-10",
      "eta(1)^5 * eta(2)^-1 * eta(3) * eta(6)^-5",
      "eta(3)^-1 * eta(6) * eta(9)^3 * eta(18)^-3",
      "eta(1)^-1 * eta(2) * eta(5)^5 * eta(10)^-5",
      "eta(1)^24",
  };
  for (const auto& text : quotients) {
    const EtaQuotient eq = parse_eta_quotient(text);
    const QuotientExpansion got = expand_quotient(eq, 64);
    const oracle::EtaOracle want = oracle::eta_quotient(eq.factors, 64);
    EXPECT_EQ(got.offset, want.offset) << text;
    EXPECT_EQ(oracle::agree({0, want.unit}, got.unit, 64), "") << text;
  }
}

TEST(ExpandQuotient, TruncationCoherence) {
  const EtaQuotient eq = parse_eta_quotient("eta(1)^5 * eta(2)^-1 * eta(3) * eta(6)^-5");
  const QSeries hi = expand_quotient(eq, 80).unit;
  for (Exponent p : {1, 7, 33, 79}) {
    EXPECT_EQ(expand_quotient(eq, p).unit, hi.truncated(expand_quotient(eq, p).unit.prec()));
  }
}

TEST(ExpandCombination, MultiTermFormsHaveMaximalOrder) {
  const QSeries f12 = expand_combination(get_level(12).weight_forms.at(0).combination, 30);
  EXPECT_EQ(f12.valuation(), 4);
  EXPECT_EQ(f12.coeff(4), 1);
  const QSeries f10 = expand_combination(get_level(10).weight_forms.at(0).combination, 30);
  EXPECT_EQ(f10.valuation(), 6);
  EXPECT_EQ(f10.coeff(6), 1);
  const QSeries f18 = expand_combination(get_level(18).weight_forms.at(0).combination, 30);
  EXPECT_EQ(f18.valuation(), 6);
  EXPECT_EQ(f18.coeff(6), 1);
}

TEST(ExpandCombination, IntegralityEmergesFromRationalScalars) {
  for (int level : {10, 12, 18}) {
    const QSeries s = expand_combination(get_level(level).weight_forms.at(0).combination, 120);
    EXPECT_TRUE(s.is_integral()) << level;
    EXPECT_GE(s.prec(), 120);
  }
}

TEST(ExpandCombination, PrintedLevel18FormRaisesFractionalValuation) {
  const LevelData printed = load_level_fixture(oracle::fixture_path("as_printed/level18.json"));
  try {
    expand_combination(printed.weight_forms.at(0).combination, 20);
    FAIL() << "expected FractionalValuation";
  } catch (const FractionalValuation& e) {
    EXPECT_NE(std::string(e.what()).find("eta(12)"), std::string::npos) << e.what();
  }
}

TEST(ExpandCombination, Level18CorrectionIsTheOnlyIntegralChoice) {
  const WeightForm& form = get_level(18).weight_forms.at(0);
  ASSERT_TRUE(form.correction.has_value());
  const EtaQuotient& used = form.combination.terms.at(form.correction->term - 1);
  const LevelData as_printed = load_level_fixture(oracle::fixture_path("as_printed/level18.json"));
  const EtaQuotient& printed =
      as_printed.weight_forms.at(0).combination.terms.at(form.correction->term - 1);
  int integral = 0;
  for (std::int64_t delta : {1, 2, 3, 6, 9, 18}) {
    EtaQuotient candidate = printed;
    candidate.factors.erase(12);
    if (++candidate.factors[delta] == 0) candidate.factors.erase(delta);
    if (expand_quotient(candidate, 1).offset.get_den() != 1) continue;
    EtaCombination trial = form.combination;
    trial.terms[form.correction->term - 1] = candidate;
    const QSeries s = expand_combination(trial, 12);
    if (s.valuation() == 6 && s.coeff(6) == 1) {
      ++integral;
      EXPECT_EQ(candidate.factors, used.factors);
    }
  }
  EXPECT_EQ(integral, 1);
}

TEST(ExpandCombination, PrintedLevel12FormHasOddWeightTerm) {
  const LevelData printed = load_level_fixture(oracle::fixture_path("as_printed/level12.json"));
  EXPECT_THROW(weight(printed.weight_forms.at(0).combination), MixedWeight);
  const WeightForm& form = get_level(12).weight_forms.at(0);
  ASSERT_TRUE(form.correction.has_value());
  EXPECT_EQ(weight(form.combination).twice, 4);
}

TEST(Weight, SumOfExponentsOverTwo) {
  EXPECT_EQ(weight(parse_eta_quotient(kPsi6Quotient)).twice, 0);
  EXPECT_EQ(weight(parse_eta_quotient("eta(1)^2 * eta(2)^-4 * eta(3)^-6 * eta(6)^12")).twice, 4);
  EXPECT_EQ(weight(get_level(10).weight_forms.at(0).combination.terms.at(0)).twice, 8);
  EXPECT_EQ(weight(get_level(10).weight_forms.at(0).combination).twice, 8);
  EXPECT_FALSE(weight(parse_eta_quotient("eta(1)")).is_integral());
}

TEST(Weight, MixedCombinationThrows) {
  EXPECT_THROW(weight(parse_eta_combination("eta(1)^2 + eta(2)^4")), MixedWeight);
}

TEST(Ligozat, OrdersAtCusps) {
  const EtaQuotient psi = parse_eta_quotient(kPsi6Quotient, 6);
  EXPECT_EQ(ligozat_order(psi, 6), -1);
  EXPECT_EQ(ligozat_order(psi, 6), expand_quotient(psi, 1).offset);
  const EtaQuotient g21 = parse_eta_quotient("eta(2)^6 * eta(3)^8 * eta(6)^-10", 6);
  for (std::int64_t c : {1, 2, 3}) EXPECT_GT(ligozat_order(g21, c), 0) << c;
  EXPECT_EQ(ligozat_order(g21, 6), -1);
  EXPECT_EQ(ligozat_order(parse_eta_quotient("eta(1)^24", 1), 1), 1);
  EXPECT_THROW(ligozat_order(psi, 4), InvalidCusp);
}

TEST(Ligozat, MatchesValuationForEveryFixtureQuotient) {
  for (int level : supported_levels()) {
    const LevelData& d = get_level(level);
    std::vector<EtaQuotient> quotients = {d.hauptmodul.quotient};
    for (const auto& form : d.weight_forms) {
      for (const auto& t : form.combination.terms) quotients.push_back(t);
    }
    for (const auto& aux : d.aux) {
      quotients.push_back(aux.alt_hauptmodul);
      quotients.push_back(aux.cusp_function);
    }
    for (EtaQuotient q : quotients) {
      q.level = level;
      EXPECT_EQ(ligozat_order(q, level), expand_quotient(q, 1).offset) << to_string(q);
    }
  }
}

TEST(Parse, RoundTripAndErrors) {
  const EtaQuotient eq = parse_eta_quotient("-25/216 * eta(1)^8 * eta(2)^-4");
  EXPECT_EQ(eq.scalar, r(-25, 216));
  EXPECT_EQ(parse_eta_quotient(to_string(eq)), eq);
  const EtaCombination c = get_level(12).weight_forms.at(0).combination;
  EXPECT_EQ(parse_eta_combination(to_string(c), 12), c);
  EXPECT_THROW(parse_eta_quotient("eta(0)^2"), ParseError);
  EXPECT_THROW(parse_eta_quotient("eta(2)^"), ParseError);
  EXPECT_THROW(parse_eta_quotient("theta(2)"), ParseError);
}

#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include "modbasis/basis.hpp"
#include "modbasis/error.hpp"
#include "modbasis/leveldata.hpp"
#include "modbasis/operators.hpp"
#include "modbasis/verify.hpp"
#include "oracles.hpp"

using namespace modbasis;

namespace {

const ValuationRow* find_row(const ScanResult& scan, int a, int b, std::int64_t r, std::int64_t s) {
  for (const auto& row : scan.rows) {
    if (row.a == a && row.b == b && row.r == r && row.s == s) return &row;
  }
  return nullptr;
}


}  // namespace

TEST(Duality, PrintedPairs) {
  EXPECT_EQ(a_coeff(6, 0, 1, 2), 4);
  EXPECT_EQ(b_coeff(6, 2, 2, 1), -4);
  EXPECT_EQ(a_coeff(6, 0, 1, 1), 6);
  EXPECT_EQ(b_coeff(6, 2, 1, 1), -6);
  const CheckReport r = duality_check(6, 0, 15, 15);
  EXPECT_TRUE(r.passed());
  EXPECT_FALSE(r.vacuous);
  EXPECT_GT(r.cases, 0);
  EXPECT_EQ(r.failures, 0);
}

TEST(Duality, AllLevelsModerateWindow) {
  for (int level : supported_levels()) {
    for (int k : {-4, -2, 0, 2, 4, 6}) {
      const CheckReport r = duality_check(level, k, 25, 25);
      EXPECT_TRUE(r.passed()) << level << " " << k << " " << report_to_text(r);
    }
  }
}

TEST(Duality, EmptyWindowIsVacuousPass) {
  // m_max below the first index: nothing to compare.
  const CheckReport r = duality_check(18, 4, -13, 5);
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(r.vacuous);
  EXPECT_EQ(r.cases, 0);
}

TEST(GenFun, Examples) {
  for (auto [level, k] : {std::pair{6, 0}, std::pair{6, 2}, std::pair{10, 4}}) {
    const CheckReport r = genfun_check(level, k, 10, 24);
    EXPECT_TRUE(r.passed()) << level << " " << k << " " << report_to_text(r);
    EXPECT_GT(r.cases, 0);
  }
}

TEST(GenFun, ReportsAdmissibleCells) {
  const CheckReport r = genfun_check(12, -2, 8, 32);
  ASSERT_TRUE(r.passed());
  bool noted = false;
  for (const auto& n : r.notes) noted = noted || n.find("admissible") != std::string::npos;
  EXPECT_TRUE(noted);
}

TEST(Theta, AllLevels) {
  for (int level : supported_levels()) {
    const CheckReport r = theta_check(level, 10);
    EXPECT_TRUE(r.passed()) << level << " " << report_to_text(r);
  }
}

TEST(UpLemma, PulledBackValues) {
  EXPECT_EQ(a_coeff(12, 0, 2, 2), 6);
  EXPECT_EQ(a_coeff(12, 0, 2, 4), 4);
  const QSeries f1 = f_basis(12, 0, 1, 40).expansion;
  for (Exponent n = -1; n < 40; ++n) {
    if (n % 2 == 0) EXPECT_EQ(f1.coeff(n), 0) << n;
  }
  EXPECT_TRUE(u_p(f1, 2).is_zero());
  const QSeries u3 = u_p(f_basis(18, 0, 3, 120).expansion, 3);
  EXPECT_TRUE(agree_to_precision(u3, get_level(6).hauptmodul_series(40)));
  EXPECT_GE(u3.prec(), 40);
}

TEST(UpLemma, BothLevels) {
  for (int level : {12, 18}) {
    const CheckReport r = up_lemma_check(level, 12);
    EXPECT_TRUE(r.passed()) << report_to_text(r);
  }
  EXPECT_THROW(up_lemma_check(6, 4), UnsupportedPair);
}

TEST(AtkinLehner, StoredSignsAreUniqueAndDeriveDivisibility) {
  const std::map<std::pair<int, int>, std::int64_t> divisor = {
      {{6, 2}, 4}, {{6, 3}, 3}, {{10, 2}, 2}};
  for (const auto& [pair, d] : divisor) {
    const AlOutcome out = al_identity_check(pair.first, pair.second, {1, 5, 7}, 1);
    EXPECT_TRUE(out.report.passed()) << report_to_text(out.report);
    EXPECT_TRUE(out.sign_unique);
    EXPECT_EQ(out.sign, get_level(pair.first).aux_for(pair.second).sign);
    EXPECT_TRUE(out.divisibility_derived);
    EXPECT_TRUE(out.divisibility_observed);
    EXPECT_EQ(out.derived_divisor, d);
  }
}

TEST(AtkinLehner, ForcedWrongSignFails) {
  const AlOutcome out = al_identity_check(6, 2, {1}, 1, +1);
  EXPECT_FALSE(out.report.passed());
  EXPECT_GT(out.report.failures, 0);
}

TEST(AtkinLehner, PrintedScaleAtThreeHasNoConsistentSign) {
  EXPECT_THROW(al_identity_check_with_scale(6, 3, 3, {1}, 1), NoConsistentSign);
  EXPECT_THROW(al_identity_check(12, 2, {1}, 1), UnsupportedPair);
}

TEST(Routing, TableOfClaims) {
  using B = std::pair<Route, std::optional<std::int64_t>>;
  EXPECT_EQ(congruence_bound(6, 2, 3, 1, 1), (B{Route::strong, 4}));
  EXPECT_EQ(congruence_bound(6, 2, 1, 2, 1), (B{Route::strong, 2}));
  EXPECT_EQ(congruence_bound(6, 3, 3, 1, 1), (B{Route::strong, 3}));
  EXPECT_EQ(congruence_bound(10, 5, 2, 1, 1), (B{Route::strong, 1}));
  EXPECT_EQ(congruence_bound(10, 5, 1, 2, 1), (B{Route::none, std::nullopt}));
  EXPECT_EQ(congruence_bound(18, 2, 2, 0, 3), (B{Route::strong, 4}));
  EXPECT_EQ(congruence_bound(18, 2, 2, 0, 1), (B{Route::weak, 2}));
  EXPECT_EQ(congruence_bound(18, 2, 0, 2, 1), (B{Route::none, std::nullopt}));
  EXPECT_EQ(congruence_bound(12, 3, 2, 1, 2), (B{Route::strong, 2}));
  EXPECT_EQ(congruence_bound(12, 3, 2, 1, 1), (B{Route::weak, 1}));
  EXPECT_EQ(congruence_bound(6, 2, 2, 2, 1), (B{Route::none, std::nullopt}));
  EXPECT_THROW(congruence_bound(6, 5, 1, 0, 1), UnsupportedPair);
  EXPECT_EQ(congruence_pairs().size(), 8u);
  EXPECT_EQ(admissible_residues(2), (std::vector<std::int64_t>{1, 3, 5}));
  EXPECT_EQ(admissible_residues(3), (std::vector<std::int64_t>{1, 2, 4}));
  EXPECT_EQ(admissible_residues(5), (std::vector<std::int64_t>{1, 2, 3}));
}

TEST(Scan, NamedRows) {
  const ScanResult s6 = congruence_scan(6, 2, 3, 2, {1}, {1}, 100);
  const ValuationRow* r12 = find_row(s6, 1, 2, 1, 1);
  ASSERT_NE(r12, nullptr);
  EXPECT_EQ(r12->m, 2);
  EXPECT_EQ(r12->n, 4);
  EXPECT_EQ(r12->coeff, a_coeff(6, 0, 2, 4));
  EXPECT_EQ(r12->bound, 2);
  EXPECT_GE(r12->valuation.value_or(1000), 2);
  EXPECT_EQ(r12->status, RowStatus::pass);
  const ValuationRow* r31 = find_row(s6, 3, 1, 1, 1);
  ASSERT_NE(r31, nullptr);
  EXPECT_EQ(r31->bound, 4);
  EXPECT_EQ(r31->status, RowStatus::pass);
  const ValuationRow* diag = find_row(s6, 1, 1, 1, 1);
  ASSERT_NE(diag, nullptr);
  EXPECT_EQ(diag->status, RowStatus::no_claim);

  const ScanResult s10 = congruence_scan(10, 5, 2, 1, {1}, {1}, 100);
  const ValuationRow* r21 = find_row(s10, 2, 1, 1, 1);
  ASSERT_NE(r21, nullptr);
  EXPECT_EQ(r21->bound, 1);
  EXPECT_EQ(r21->status, RowStatus::pass);
  EXPECT_TRUE(s10.report.passed());
}

TEST(Scan, ValuationsAreExact) {
  const ScanResult scan = congruence_scan(6, 3, 2, 2, {1, 2}, {1, 2}, 50);
  for (const auto& row : scan.rows) {
    EXPECT_EQ(row.coeff, a_coeff(6, 0, row.m, row.n));
    if (row.coeff == 0) {
      EXPECT_FALSE(row.valuation.has_value());
      continue;
    }
    ASSERT_TRUE(row.valuation.has_value());
    BigInt c = abs(row.coeff);
    std::int64_t v = 0;
    while (c % 3 == 0) {
      c /= 3;
      ++v;
    }
    EXPECT_EQ(*row.valuation, v);
  }
}

TEST(Scan, RejectsResiduesSharingP) {
  EXPECT_THROW(congruence_scan(6, 2, 1, 1, {2}, {1}, 50), std::invalid_argument);
  EXPECT_THROW(congruence_scan(6, 5, 1, 1, {1}, {1}, 50), UnsupportedPair);
}

TEST(Serialization, ReportJsonRoundTrip) {
  CheckReport r = duality_check(10, 2, 6, 8);
  r.notes.push_back("extra");
  r.fail("m=1 n=2", "3", "-25/216");
  EXPECT_EQ(report_from_json(report_to_json(r)), r);
  const CheckReport g = genfun_check(6, 0, 4, 16);
  EXPECT_EQ(report_from_json(report_to_json(g)), g);
  EXPECT_NE(report_to_text(r).find("fail"), std::string::npos);
  EXPECT_THROW(report_from_json("{}"), ParseError);
}

TEST(Serialization, ScanRoundTripAndCsv) {
  const ScanResult scan = congruence_scan(18, 2, 2, 2, {1, 3}, {1}, 60);
  EXPECT_EQ(scan_from_json(scan_to_json(scan)), scan);
  EXPECT_EQ(rows_from_json(rows_to_json(scan.rows)), scan.rows);
  const std::string csv = rows_to_csv(scan.rows);
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "N,p,a,b,r,s,m,n,coeff,valuation,bound,status");
  EXPECT_EQ(static_cast<std::size_t>(std::count(csv.begin(), csv.end(), '\n')), scan.rows.size() + 1);
}

TEST(Serialization, SeriesJson) {
  const QSeries s = parse_series("-3q^-2 + 25/216q + O(q^4)");
  EXPECT_EQ(series_from_json(series_to_json(s)), s);
  EXPECT_EQ(series_from_json(series_to_json(QSeries::monomial(2, 5))), QSeries::monomial(2, 5));
  EXPECT_EQ(series_from_json(series_to_json(QSeries::zero())), QSeries::zero());
  const auto doc = nlohmann::json::parse(series_to_json(s));
  EXPECT_EQ(doc.at("coeffs").at(0), "-3");
  EXPECT_EQ(doc.at("coeffs").at(3), "25/216");
  EXPECT_EQ(doc.at("prec"), 4);
}

TEST(Report, InsufficientPrecisionIsDistinct) {
  EXPECT_EQ(parse_check_status(to_string(CheckStatus::insufficient_precision)),
            CheckStatus::insufficient_precision);
  EXPECT_NE(to_string(CheckStatus::insufficient_precision), to_string(CheckStatus::fail));
  EXPECT_EQ(to_string(RowStatus::no_claim), "no claim");
  EXPECT_EQ(parse_row_status("no claim"), RowStatus::no_claim);
  EXPECT_EQ(parse_route(to_string(Route::weak)), Route::weak);
}

TEST(Report, CounterexamplesAreCappedButCounted) {
  CheckReport r;
  for (int i = 0; i < 40; ++i) r.fail("i=" + std::to_string(i), "0", "1");
  EXPECT_EQ(r.failures, 40);
  EXPECT_EQ(r.counterexamples.size(), kMaxCounterexamples);
  EXPECT_EQ(r.status, CheckStatus::fail);
}

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <thread>

#include "modbasis/basis.hpp"
#include "modbasis/error.hpp"
#include "modbasis/leveldata.hpp"
#include "modbasis/operators.hpp"
#include "oracles.hpp"

using namespace modbasis;
namespace fs = std::filesystem;

namespace {

const std::vector<int> kWeights = {-4, -2, 0, 2, 4, 6};

class TempDir {
 public:
  TempDir() {
    path_ = fs::temp_directory_path() /
            ("modbasis-test-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
             "-" + std::to_string(reinterpret_cast<std::uintptr_t>(this)));
    fs::create_directories(path_);
  }
  ~TempDir() { fs::remove_all(path_); }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

}  // namespace

TEST(FirstElement, WeightTwoLevelSix) {
  const BasisElement f = first_element(6, 2, Space::M, 9);
  EXPECT_EQ(f.expansion, parse_series("q^2 - 2q^3 + 3q^4 - q^6 + 7q^8 + O(q^9)"));
  EXPECT_EQ(f.index, -2);
  EXPECT_EQ(first_element(6, 0, Space::M, 10).expansion.truncated(10), QSeries::one(10));
  const BasisElement g = first_element(6, 2, Space::S, 10);
  EXPECT_EQ(g.expansion.valuation(), -1);
  EXPECT_EQ(g.expansion.coeff(-1), 1);
  EXPECT_THROW(first_element(6, 3, Space::M, 10), std::invalid_argument);
}

TEST(FirstElement, NegativeWeightUsesInversePowers) {
  for (int level : supported_levels()) {
    const BasisElement f = first_element(level, -4, Space::M, 30);
    EXPECT_EQ(f.expansion.valuation(), get_level(level).n0(-4)) << level;
    EXPECT_EQ(f.expansion.coeff(f.expansion.valuation()), 1);
    EXPECT_TRUE(f.expansion.is_integral());
  }
}

TEST(FBasis, HauptmodulAndItsSquare) {
  EXPECT_EQ(f_basis(6, 0, 1, 4).expansion, parse_series("q^-1 + 6q + 4q^2 - 3q^3 + O(q^4)"));
  const QSeries psi = get_level(6).hauptmodul_series(40);
  const auto sq = oracle::multiply(oracle::from_series(psi), oracle::from_series(psi), 41);
  oracle::Laurent want = sq;
  want.c[2] -= 12;  // q^0
  const QSeries f2 = f_basis(6, 0, 2, 38).expansion;
  EXPECT_EQ(oracle::agree(want, f2, 38), "");
  EXPECT_EQ(f2.truncated(3), parse_series("q^-2 + 8q + 30q^2 + O(q^3)"));
}

TEST(GBasis, FirstCuspElementAgainstTwoOracles) {
  const QSeries g = g_basis(6, 2, 1, 40).expansion;
  EXPECT_EQ(g.truncated(4), parse_series("q^-1 - 6q - 8q^2 + 9q^3 + O(q^4)"));
  const QSeries minus_theta = neg(theta(get_level(6).hauptmodul_series(40)));
  EXPECT_TRUE(agree_to_precision(g, minus_theta));
  const auto eta = oracle::eta_quotient({{2, 6}, {3, 8}, {6, -10}}, 41);
  EXPECT_EQ(eta.offset, -1);
  EXPECT_EQ(oracle::agree({-1, eta.unit}, g, 40), "");
}

TEST(Coefficients, Examples) {
  EXPECT_EQ(a_coeff(6, 0, 1, 2), 4);
  EXPECT_EQ(a_coeff(6, 0, 1, 1), 6);
  EXPECT_EQ(a_coeff(12, 0, 1, 5), 0);
  EXPECT_EQ(b_coeff(6, 2, 1, 1), -6);
  EXPECT_EQ(b_coeff(6, 2, 2, 1), -4);
}

TEST(Coefficients, IndexBelowRange) {
  EXPECT_THROW(f_basis(6, 2, -3, 10), IndexBelowRange);
  EXPECT_NO_THROW(f_basis(6, 2, -2, 10));
  EXPECT_THROW(g_basis(6, 2, 0, 10), IndexBelowRange);
  EXPECT_THROW(a_coeff(12, 4, -9, 3), IndexBelowRange);
  try {
    f_basis(6, 2, -3, 10);
  } catch (const IndexBelowRange& e) {
    EXPECT_NE(std::string(e.what()).find("-2"), std::string::npos) << e.what();
  }
}

TEST(Ladder, TriangularIntegralUnitLeading) {
  for (int level : supported_levels()) {
    for (int k : kWeights) {
      for (Space space : {Space::M, Space::S}) {
        const Ladder l = Ladder::build(level, k, space, 30, 60);
        for (Exponent m = l.m_min(); m <= 30; ++m) {
          const QSeries& e = l.expansion(m);
          ASSERT_GE(e.prec(), 61);
          ASSERT_EQ(e.valuation(), -m) << level << " " << k << " " << to_string(space) << " " << m;
          ASSERT_EQ(e.coeff(-m), 1);
          for (Exponent t = -m + 1; t <= l.gap(); ++t) ASSERT_EQ(e.coeff(t), 0);
          ASSERT_TRUE(e.truncated(61).is_integral()) << level << " " << k << " " << m;
        }
      }
    }
  }
}

TEST(Ladder, HauptmodulPolynomialsIntegralForM) {
  for (int level : supported_levels()) {
    const Ladder l = Ladder::build(level, 2, Space::M, 12, 20);
    const QSeries psi = get_level(level).hauptmodul_series(40);
    const QSeries first = first_element(level, 2, Space::M, 40).expansion;
    for (Exponent m = l.m_min(); m <= 12; ++m) {
      const auto poly = l.haupt_poly(m);
      for (const auto& c : poly) EXPECT_TRUE(is_integral(c));
      QSeries rebuilt = QSeries::zero();
      QSeries power = QSeries::one();
      for (const auto& c : poly) {
        rebuilt = add(rebuilt, scalar_mul(c, power));
        power = mul(power, psi);
      }
      EXPECT_TRUE(agree_to_precision(mul(first, rebuilt), l.expansion(m))) << level << " " << m;
    }
  }
}

TEST(Ladder, DirectEliminationAgrees) {
  for (int level : supported_levels()) {
    for (int k : {-2, 0, 4}) {
      for (Space space : {Space::M, Space::S}) {
        const Exponent m_min = -basis_gap(level, k, space);
        for (Exponent m : {m_min, m_min + 1, m_min + 7, m_min + 12}) {
          const QSeries direct = f_basis_direct(level, k, space, m, 30).expansion;
          const QSeries ladder = (space == Space::M ? f_basis(level, k, m, 30) : g_basis(level, k, m, 30)).expansion;
          EXPECT_TRUE(agree_to_precision(direct, ladder)) << level << " " << k << " " << m;
          EXPECT_GE(std::min(direct.prec(), ladder.prec()), 30);
        }
      }
    }
  }
}

TEST(Ladder, CuspFormsHaveNoConstantTerm) {
  for (int level : supported_levels()) {
    const Ladder l = Ladder::build(level, 2, Space::S, 30, 2);
    for (Exponent m = 1; m <= 30; ++m) EXPECT_EQ(l.expansion(m).coeff(0), 0) << level << " " << m;
  }
}

TEST(Ladder, JsonRoundTripIsExact) {
  const Ladder l = Ladder::build(10, -2, Space::S, 9, 25);
  const Ladder back = ladder_from_json(ladder_to_json(l));
  EXPECT_EQ(back.m_max(), l.m_max());
  EXPECT_EQ(back.gap(), l.gap());
  for (Exponent m = l.m_min(); m <= l.m_max(); ++m) {
    EXPECT_EQ(back.expansion(m), l.expansion(m));
    EXPECT_EQ(back.haupt_poly(m), l.haupt_poly(m));
  }
  EXPECT_THROW(ladder_from_json("{\"format\": 1}"), ParseError);
  EXPECT_THROW(ladder_from_json("not json"), ParseError);
}

TEST(Cache, PersistenceRoundTripAndGrowth) {
  TempDir dir;
  std::vector<QSeries> before;
  {
    BasisCache cache(dir.path());
    const auto l = cache.ladder(6, 2, Space::M, 10, 30);
    for (Exponent m = -2; m <= 10; ++m) before.push_back(l->expansion(m));
    cache.save();
    // A wider request rebuilds with at least the requested bounds.
    const auto wide = cache.ladder(6, 2, Space::M, 40, 30);
    EXPECT_GE(wide->m_max(), 40);
    EXPECT_TRUE(agree_to_precision(wide->expansion(10), l->expansion(10)));
  }
  EXPECT_FALSE(fs::is_empty(dir.path()));
  BasisCache reloaded(dir.path());
  EXPECT_EQ(reloaded.load(), 1u);
  const auto keys = reloaded.keys();
  ASSERT_EQ(keys.size(), 1u);
  EXPECT_EQ(keys[0].level, 6);
  const auto l = reloaded.ladder(6, 2, Space::M, 10, 30);
  for (Exponent m = -2; m <= 10; ++m) EXPECT_EQ(l->expansion(m), before[static_cast<std::size_t>(m + 2)]);
  reloaded.clear();
  EXPECT_TRUE(reloaded.keys().empty());
}

TEST(Cache, StaleFilesAreSkipped) {
  TempDir dir;
  {
    std::ofstream out(dir.path() / "basis-N6-k2-M.json");
    out << "{\"format\": 99}";
  }
  BasisCache cache(dir.path());
  EXPECT_EQ(cache.load(), 0u);
  EXPECT_EQ(cache.ladder(6, 2, Space::M, 3, 5)->expansion(1).coeff(-1), 1);
}

TEST(Cache, ConcurrentReadersSeeIdenticalLadders) {
  BasisCache cache;
  std::vector<std::thread> threads;
  std::vector<std::string> rendered(8);
  for (std::size_t i = 0; i < rendered.size(); ++i) {
    threads.emplace_back([&, i] {
      const int level = (i % 2 == 0) ? 12 : 18;
      const auto l = cache.ladder(level, 0, Space::M, 15 + static_cast<Exponent>(i), 40);
      rendered[i] = format_series(l->expansion(15).truncated(41));
    });
  }
  for (auto& t : threads) t.join();
  for (std::size_t i = 2; i < rendered.size(); ++i) EXPECT_EQ(rendered[i], rendered[i % 2]);
  EXPECT_EQ(cache.keys().size(), 2u);
}

TEST(Decompose, PolynomialsInHauptmodul) {
  const QSeries psi = get_level(6).hauptmodul_series(30);
  const auto sq = decompose_in_hauptmodul(mul(psi, psi), psi);
  EXPECT_EQ(sq.coeffs, (std::vector<BigRational>{0, 0, 1}));
  // f_{0,2} = psi^2 - 12
  const auto f2 = decompose_in_hauptmodul(f_basis(6, 0, 2, 28).expansion, psi);
  EXPECT_EQ(f2.coeffs, (std::vector<BigRational>{-12, 0, 1}));
  EXPECT_GE(f2.residual.is_zero() ? f2.residual.prec() : f2.residual.valuation(), 1);
  EXPECT_GE(sq.residual.is_zero() ? sq.residual.prec() : sq.residual.valuation(), 1);
  const auto one = decompose_in_hauptmodul(QSeries::one(30), psi);
  EXPECT_EQ(one.coeffs, (std::vector<BigRational>{1}));
  EXPECT_TRUE(one.residual.is_zero());
}

TEST(Decompose, CuspPolynomialRecoveredFromEtaQuotient) {
  const LevelData& d = get_level(6);
  const QSeries psi = d.hauptmodul_series(40);
  const QSeries g = expand_series(d.cusp_form->quotient, 40);
  const QSeries ratio = mul(g, reciprocal(d.weight_form_series(0, 42)));
  const auto dec = decompose_in_hauptmodul(ratio, psi);
  ASSERT_EQ(dec.coeffs.size(), 4u);
  EXPECT_EQ(dec.coeffs.back(), 1);
  std::vector<BigInt> poly;
  for (const auto& c : dec.coeffs) poly.push_back(c.get_num());
  EXPECT_EQ(integer_roots(poly), (std::vector<BigInt>{-4, -3, 5}));
  // Shifted back to the quotient psi + 4 the roots are 0, 1, 9.
  EXPECT_TRUE(dec.residual.is_zero());
}

TEST(Decompose, InsufficientPrecision) {
  const QSeries psi = get_level(6).hauptmodul_series(3);
  EXPECT_THROW(decompose_in_hauptmodul(int_pow(get_level(6).hauptmodul_series(30), 6), psi),
               InsufficientPrecision);
}

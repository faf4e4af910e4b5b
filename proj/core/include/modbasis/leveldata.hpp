#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modbasis/eta.hpp"
#include "modbasis/rational.hpp"
#include "modbasis/series.hpp"

namespace modbasis {

struct Hauptmodul {
  EtaQuotient quotient;
  BigRational shift;
  std::optional<std::string> display;  // expansion as printed in the source tables
  std::string provenance;
};

// A fixture entry that differs from the printed table.
struct FixtureCorrection {
  int term = 0;  // 1-based index into the combination
  std::string printed;
  std::string used;
  std::string reason;
};

enum class FormConstruction {
  eta,                   // the eta combination below
  theta_over_cusp_poly,  // -theta(psi) / P(psi), weight 2
};

struct WeightForm {
  int weight = 0;
  Exponent order = 0;  // vanishing order at infinity
  FormConstruction construction = FormConstruction::eta;
  EtaCombination combination;  // empty unless construction == eta
  std::optional<EtaCombination> printed_combination;
  std::optional<std::string> display;
  std::optional<std::string> printed_display;
  std::optional<FixtureCorrection> correction;
  std::string provenance;
};

// Known cusp form given directly as an eta quotient (cross-check data).
struct CuspFormFixture {
  int weight = 0;
  std::int64_t index = 0;
  EtaQuotient quotient;
  std::string provenance;
};

// Atkin-Lehner data for one prime p dividing the level: the alternative
// Hauptmodul (a shift of the main one) and the cusp function its image is a
// multiple of, the multiple being sign * scale_magnitude.
struct AuxPrime {
  int prime = 0;
  EtaQuotient alt_hauptmodul;
  BigRational alt_shift;
  EtaQuotient cusp_function;
  std::int64_t scale_magnitude = 0;
  int sign = 0;
  std::optional<std::int64_t> printed_scale_magnitude;
  std::string provenance;

  std::int64_t signed_scale() const noexcept { return sign * scale_magnitude; }
};

// Weight form index and exponent making up the initial element of a weight.
struct FormPower {
  std::size_t form = 0;
  std::int64_t power = 0;
};

struct LevelData {
  int level = 0;
  int fixture_version = 0;
  Hauptmodul hauptmodul;
  std::vector<WeightForm> weight_forms;  // sorted by decreasing weight
  std::vector<BigInt> cusp_poly;         // low to high degree
  std::optional<std::vector<BigInt>> printed_cusp_poly;
  std::string cusp_poly_provenance;
  std::optional<CuspFormFixture> cusp_form;
  std::vector<AuxPrime> aux;

  // Initial element of weight k as a product of weight forms. Throws
  // std::invalid_argument for odd k.
  std::vector<FormPower> initial_powers(int k) const;
  // Largest vanishing order at infinity in weight k, with and without the
  // cusp conditions.
  Exponent n0(int k) const;
  Exponent n1(int k) const;
  std::size_t cusp_degree() const { return cusp_poly.empty() ? 0 : cusp_poly.size() - 1; }

  // Throws UnsupportedPair if the level has no data for p.
  const AuxPrime& aux_for(int p) const;

  QSeries hauptmodul_series(Exponent prec) const;
  QSeries alt_hauptmodul_series(int p, Exponent prec) const;
  QSeries cusp_function_series(int p, Exponent prec) const;
  QSeries weight_form_series(std::size_t index, Exponent prec) const;
};

// Parses one fixture document (JSON). Throws ParseError.
LevelData parse_level_fixture(std::string_view json_text);
LevelData load_level_fixture(const std::string& path);

// Built-in fixtures. Throws UnsupportedLevel for levels other than 6, 10, 12, 18.
const LevelData& get_level(std::int64_t level);
std::vector<int> supported_levels();

// P(x) with P(psi) vanishing at every cusp value of psi except infinity.
std::vector<BigInt> cusp_polynomial(std::int64_t level);
// Integer roots of an integer polynomial, ascending, with multiplicity.
std::vector<BigInt> integer_roots(const std::vector<BigInt>& poly);
// Number of cusps of Gamma_0(N): sum over d | N of phi(gcd(d, N/d)).
std::int64_t cusp_count(std::int64_t level);
// Polynomial evaluated at a series.
QSeries evaluate_polynomial(const std::vector<BigInt>& poly, const QSeries& x);

struct ValidationCheck {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct ValidationReport {
  int level = 0;
  Exponent prec = 0;
  std::vector<ValidationCheck> checks;

  bool passed() const;
  const ValidationCheck* find(std::string_view name) const;
};

// Runs the fixture invariants. Library errors raised while checking become
// failed entries; nothing escapes except std::bad_alloc.
ValidationReport validate_level(const LevelData& data, Exponent prec);
ValidationReport validate_level(std::int64_t level, Exponent prec);

}  // namespace modbasis

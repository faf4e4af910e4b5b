#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "modbasis/rational.hpp"
#include "modbasis/series.hpp"

namespace modbasis {

/// Formal product scalar * prod eta(delta z)^r_delta.
///
/// `level` is the Gamma_0(N) the quotient is considered on; it only matters
/// for ligozat_order. It defaults to the lcm of the deltas when parsed.
/// Deltas are not required to divide the level.
struct EtaQuotient {
  std::int64_t level = 1;
  std::map<std::int64_t, std::int64_t> factors;  // delta -> r_delta, r_delta != 0
  BigRational scalar{1};

  friend bool operator==(const EtaQuotient&, const EtaQuotient&) = default;
};

/// Rational linear combination of eta quotients of equal weight.
struct EtaCombination {
  std::vector<EtaQuotient> terms;

  friend bool operator==(const EtaCombination&, const EtaCombination&) = default;
};

/// Weight as twice its value, so half-integral weights stay exact.
struct HalfIntegerWeight {
  std::int64_t twice = 0;
  bool is_integral() const noexcept { return twice % 2 == 0; }
  friend bool operator==(HalfIntegerWeight, HalfIntegerWeight) = default;
};

// prod_{n>=1} (1 - q^n) to absolute precision prec, via the pentagonal
// number theorem.
QSeries euler_product(Exponent prec);

struct QuotientExpansion {
  BigRational offset;  // sum r_delta * delta / 24, exact
  QSeries unit;        // valuation 0, leading coefficient 1, scalar not applied
};

// quotient == scalar * q^offset * unit. `prec` is the precision of unit,
// i.e. the number of terms past the leading one.
QuotientExpansion expand_quotient(const EtaQuotient& eq, Exponent prec);

// Sum of scalar * q^offset * unit over the terms, known below q^prec
// (absolute precision). Throws FractionalValuation naming the first term whose
// offset is not an integer.
QSeries expand_combination(const EtaCombination& c, Exponent prec);
// Single quotient with integral offset, to absolute precision prec.
QSeries expand_series(const EtaQuotient& eq, Exponent prec);

HalfIntegerWeight weight(const EtaQuotient& eq);
// prod delta^r_delta is a rational square, the condition for trivial
// character once the other Ligozat congruences hold.
bool has_square_eta_product(const EtaQuotient& eq);
// Throws MixedWeight if the terms disagree.
HalfIntegerWeight weight(const EtaCombination& c);

// Order of vanishing at a cusp a/c of Gamma_0(level):
//   level / (24 gcd(c^2, level)) * sum_delta gcd(c, delta)^2 r_delta / delta.
// Throws InvalidCusp if c does not divide the level or some delta does not.
BigRational ligozat_order(const EtaQuotient& eq, std::int64_t cusp_denominator);

// Text form: "eta(1)^-4 * eta(2)^8 * eta(3)^4 * eta(6)^-8", optionally led by
// "<rational> *". Combinations join terms with " + " / " - ", e.g.
// "1/27 * eta(1)^10 * eta(2)^-7 - 1/12 * eta(1)^4 * eta(2)^-7".
EtaQuotient parse_eta_quotient(std::string_view text, std::int64_t level = 0);
EtaCombination parse_eta_combination(std::string_view text, std::int64_t level = 0);
std::string to_string(const EtaQuotient& eq);
std::string to_string(const EtaCombination& c);

}  // namespace modbasis

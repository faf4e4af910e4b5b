#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "modbasis/rational.hpp"

namespace modbasis {

using Exponent = std::int64_t;

// Precision bound used for series that are exact (finite Laurent polynomials).
inline constexpr Exponent kExactPrec = std::numeric_limits<Exponent>::max() / 4;

// p + d, saturating at kExactPrec so exact series stay exact.
constexpr Exponent prec_add(Exponent p, Exponent d) {
  if (p >= kExactPrec) return kExactPrec;
  const Exponent r = p + d;
  return r >= kExactPrec ? kExactPrec : r;
}

/// Truncated Laurent series in q with exact rational coefficients.
///
/// Coefficients of q^n are known for every n < prec(). Storage is dense from
/// valuation() up to end(); exponents in [end(), prec()) are zero. The value is
/// canonical: the stored leading coefficient is nonzero and there are no
/// trailing stored zeros. A series that is zero to its precision has
/// valuation() == prec() and no stored coefficients.
///
/// Values are immutable once built by the free functions below and can be
/// shared between threads.
class QSeries {
 public:
  QSeries() = default;  // exact zero

  static QSeries zero(Exponent prec = kExactPrec);
  static QSeries constant(BigRational c, Exponent prec = kExactPrec);
  static QSeries one(Exponent prec = kExactPrec) { return constant(BigRational(1), prec); }
  static QSeries monomial(BigRational c, Exponent exponent, Exponent prec = kExactPrec);
  // coeffs[i] is the coefficient of q^(valuation + i); entries at or beyond
  // prec are dropped.
  static QSeries from_coefficients(Exponent valuation, std::vector<BigRational> coeffs,
                                   Exponent prec);

  Exponent valuation() const noexcept { return valuation_; }
  Exponent prec() const noexcept { return prec_; }
  Exponent end() const noexcept { return valuation_ + static_cast<Exponent>(coeffs_.size()); }
  bool is_exact() const noexcept { return prec_ >= kExactPrec; }
  bool is_zero() const noexcept { return coeffs_.empty(); }
  bool is_integral() const;

  // Throws PrecisionExceeded for n >= prec().
  BigRational coeff(Exponent n) const;
  // Leading stored coefficient; throws ZeroLeadingTerm on a zero series.
  const BigRational& leading_coefficient() const;
  std::span<const BigRational> stored() const noexcept { return coeffs_; }

  QSeries truncated(Exponent prec) const;

  // In-place y -= scale * s, with prec lowered to min(prec, s.prec).
  void subtract_scaled(const BigRational& scale, const QSeries& s);

  friend bool operator==(const QSeries&, const QSeries&) = default;

 private:
  void normalize();

  Exponent valuation_ = kExactPrec;
  Exponent prec_ = kExactPrec;
  std::vector<BigRational> coeffs_;
};

BigRational coeff(const QSeries& s, Exponent n);

QSeries add(const QSeries& a, const QSeries& b);
QSeries sub(const QSeries& a, const QSeries& b);
QSeries neg(const QSeries& a);
QSeries scalar_mul(const BigRational& c, const QSeries& a);

// Cauchy product; prec = min(a.prec + b.valuation, b.prec + a.valuation).
QSeries mul(const QSeries& a, const QSeries& b);
// Reference kernel (plain rational schoolbook convolution). mul() must agree
// with it exactly.
QSeries mul_schoolbook(const QSeries& a, const QSeries& b);

// 1/a. The result is known to the same relative precision as a. An exact
// non-monomial input yields an infinite series, so cap (absolute precision of
// the result) is then required.
QSeries reciprocal(const QSeries& a, std::optional<Exponent> cap = std::nullopt);
QSeries int_pow(const QSeries& a, std::int64_t e);

// q^by * s
QSeries shift(const QSeries& s, Exponent by);
// s(q^factor); factor >= 1
QSeries dilate(const QSeries& s, Exponent factor);

inline QSeries operator+(const QSeries& a, const QSeries& b) { return add(a, b); }
inline QSeries operator-(const QSeries& a, const QSeries& b) { return sub(a, b); }
inline QSeries operator-(const QSeries& a) { return neg(a); }
inline QSeries operator*(const QSeries& a, const QSeries& b) { return mul(a, b); }
inline QSeries operator*(const BigRational& c, const QSeries& a) { return scalar_mul(c, a); }

// Lowest exponent below min(a.prec, b.prec) where a and b differ.
std::optional<Exponent> first_difference(const QSeries& a, const QSeries& b);
inline bool agree_to_precision(const QSeries& a, const QSeries& b) {
  return !first_difference(a, b).has_value();
}

// Human-readable rendering, e.g. "q^-1 + 6q + 4q^2 - 3q^3 + O(q^4)".
// max_terms limits the number of nonzero terms shown (0 = all).
std::string format_series(const QSeries& s, std::size_t max_terms = 0, bool big_o = true);
// Inverse of format_series (with big_o). Without an O-term the series is
// exact. Throws ParseError.
QSeries parse_series(std::string_view text);

}  // namespace modbasis

#include "modbasis/operators.hpp"

#include <stdexcept>
#include <vector>

#include "modbasis/error.hpp"
#include "modbasis/leveldata.hpp"

namespace modbasis {
namespace {

Exponent floor_div(Exponent a, Exponent b) {
  Exponent q = a / b;
  if (a % b != 0 && (a < 0) != (b < 0)) --q;
  return q;
}

Exponent ceil_div(Exponent a, Exponent b) { return -floor_div(-a, b); }

}  // namespace

QSeries theta(const QSeries& s) {
  std::vector<BigRational> coeffs(s.stored().begin(), s.stored().end());
  Exponent e = s.valuation();
  for (auto& c : coeffs) c *= BigRational(e++);
  return QSeries::from_coefficients(s.valuation(), std::move(coeffs), s.prec());
}

QSeries u_p(const QSeries& s, int p) {
  if (p < 2) throw std::invalid_argument("u_p needs p >= 2");
  const Exponent prec = s.is_exact() ? kExactPrec : floor_div(s.prec(), p);
  if (s.is_zero()) return QSeries::zero(prec);
  const Exponent lo = ceil_div(s.valuation(), p);
  const Exponent hi = std::min(prec, ceil_div(s.end(), p));
  if (hi <= lo) return QSeries::zero(prec);
  std::vector<BigRational> coeffs(static_cast<std::size_t>(hi - lo));
  const auto src = s.stored();
  for (Exponent n = lo; n < hi; ++n) {
    coeffs[static_cast<std::size_t>(n - lo)] = src[static_cast<std::size_t>(p * n - s.valuation())];
  }
  return QSeries::from_coefficients(lo, std::move(coeffs), prec);
}

QSeries v_p(const QSeries& s, int p) {
  if (p < 1) throw std::invalid_argument("v_p needs p >= 1");
  return dilate(s, p);
}

QSeries power_sum(std::span<const BigRational> coeffs, const BigRational& factor,
                  const QSeries& h) {
  QSeries total = QSeries::zero(h.prec());
  const QSeries scaled = scalar_mul(factor, h);
  QSeries power = QSeries::one(h.prec());
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (i > 0) power = mul(power, scaled);
    if (sgn(coeffs[i]) != 0) total = add(total, scalar_mul(coeffs[i], power));
  }
  return total;
}

QSeries al_sum(std::int64_t level, int p, std::span<const BigRational> coeffs, int sign,
               Exponent prec) {
  if (sign != 1 && sign != -1) throw std::invalid_argument("al_sum sign must be +1 or -1");
  const AuxPrime& aux = get_level(level).aux_for(p);
  return power_sum(coeffs, BigRational(sign * aux.scale_magnitude),
                   expand_series(aux.cusp_function, prec));
}

}  // namespace modbasis

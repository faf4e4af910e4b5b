#include "modbasis/eta.hpp"

#include <algorithm>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>

#include "modbasis/error.hpp"

namespace modbasis {
namespace {

// Nonzero terms (exponent, sign) of prod (1 - q^(delta n)) below prec.
std::vector<std::pair<std::size_t, int>> sparse_euler_terms(std::int64_t delta, Exponent prec) {
  std::vector<std::pair<std::size_t, int>> terms;
  for (std::int64_t k = 0;; ++k) {
    bool any = false;
    for (const std::int64_t j : {k, -k}) {
      if (k == 0 && j == -k && !terms.empty()) continue;
      const std::int64_t e = delta * (j * (3 * j - 1) / 2);
      if (e < prec) {
        terms.emplace_back(static_cast<std::size_t>(e), (k % 2 == 0) ? 1 : -1);
        any = true;
      }
    }
    if (!any) break;
  }
  return terms;
}

}  // namespace

QSeries euler_product(Exponent prec) {
  if (prec < 1) throw std::invalid_argument("euler_product needs prec >= 1");
  std::vector<BigRational> coeffs(static_cast<std::size_t>(prec));
  for (const auto& [e, sign] : sparse_euler_terms(1, prec)) coeffs[e] = sign;
  return QSeries::from_coefficients(0, std::move(coeffs), prec);
}

QuotientExpansion expand_quotient(const EtaQuotient& eq, Exponent prec) {
  if (prec < 1) throw std::invalid_argument("expand_quotient needs prec >= 1");
  BigRational offset(0);
  for (const auto& [delta, r] : eq.factors) offset += BigRational(delta * r);
  offset /= 24;

  // Multiply (r > 0) or divide (r < 0) |r| times by the sparse series
  // prod(1 - q^(delta n)). Every factor has constant term 1, so the unit stays
  // integral and the division is exact. Equivalent to the dense route
  // int_pow(dilate(euler_product, delta), r), which the tests use as oracle.
  const std::size_t n = static_cast<std::size_t>(prec);
  std::vector<BigInt> u(n);
  u[0] = 1;
  for (const auto& [delta, r] : eq.factors) {
    const auto terms = sparse_euler_terms(delta, prec);
    const std::int64_t reps = r < 0 ? -r : r;
    for (std::int64_t rep = 0; rep < reps; ++rep) {
      if (r > 0) {
        for (std::size_t i = n; i-- > 0;) {
          for (const auto& [e, sign] : terms) {
            if (e == 0 || e > i) continue;
            if (sign > 0) {
              u[i] += u[i - e];
            } else {
              u[i] -= u[i - e];
            }
          }
        }
      } else {
        for (std::size_t i = 1; i < n; ++i) {
          for (const auto& [e, sign] : terms) {
            if (e == 0 || e > i) continue;
            if (sign > 0) {
              u[i] -= u[i - e];
            } else {
              u[i] += u[i - e];
            }
          }
        }
      }
    }
  }
  std::vector<BigRational> coeffs(n);
  for (std::size_t i = 0; i < n; ++i) mpz_swap(coeffs[i].get_num_mpz_t(), u[i].get_mpz_t());
  return {std::move(offset), QSeries::from_coefficients(0, std::move(coeffs), prec)};
}

QSeries expand_combination(const EtaCombination& c, Exponent prec) {
  if (c.terms.empty()) throw std::invalid_argument("empty eta combination");
  std::vector<std::pair<Exponent, const EtaQuotient*>> shifts;
  for (const auto& term : c.terms) {
    BigRational offset(0);
    for (const auto& [delta, r] : term.factors) offset += BigRational(delta * r);
    offset /= 24;
    if (offset.get_den() != 1) throw FractionalValuation(to_string(term), to_string(offset));
    shifts.emplace_back(offset.get_num().get_si(), &term);
  }
  std::optional<QSeries> total;
  for (const auto& [off, term] : shifts) {
    QuotientExpansion e = expand_quotient(*term, std::max<Exponent>(1, prec - off));
    QSeries piece = scalar_mul(term->scalar, shift(e.unit, off));
    total = total ? add(*total, piece) : std::move(piece);
  }
  return total->truncated(prec);
}

QSeries expand_series(const EtaQuotient& eq, Exponent prec) {
  return expand_combination(EtaCombination{{eq}}, prec);
}

HalfIntegerWeight weight(const EtaQuotient& eq) {
  std::int64_t sum = 0;
  for (const auto& [delta, r] : eq.factors) sum += r;
  return {sum};
}

bool has_square_eta_product(const EtaQuotient& eq) {
  BigInt num = 1;
  BigInt den = 1;
  for (const auto& [delta, r] : eq.factors) {
    BigInt power;
    mpz_ui_pow_ui(power.get_mpz_t(), static_cast<unsigned long>(delta),
                  static_cast<unsigned long>(r < 0 ? -r : r));
    (r > 0 ? num : den) *= power;
  }
  return mpz_perfect_square_p(BigInt(num * den).get_mpz_t()) != 0;
}

HalfIntegerWeight weight(const EtaCombination& c) {
  if (c.terms.empty()) throw std::invalid_argument("empty eta combination");
  const HalfIntegerWeight w = weight(c.terms.front());
  for (const auto& t : c.terms) {
    if (weight(t) != w) {
      throw MixedWeight("terms of weight " + std::to_string(w.twice) + "/2 and " +
                        std::to_string(weight(t).twice) + "/2 in one combination (" + to_string(t) +
                        ")");
    }
  }
  return w;
}

BigRational ligozat_order(const EtaQuotient& eq, std::int64_t c) {
  const std::int64_t level = eq.level;
  if (c < 1 || level % c != 0) {
    throw InvalidCusp("cusp denominator " + std::to_string(c) + " does not divide level " +
                      std::to_string(level));
  }
  BigRational sum(0);
  for (const auto& [delta, r] : eq.factors) {
    if (level % delta != 0) {
      throw InvalidCusp("eta(" + std::to_string(delta) + "z) is not a form on level " +
                        std::to_string(level));
    }
    const std::int64_t g = std::gcd(c, delta);
    sum += make_rational(g * g * r, delta);
  }
  const std::int64_t g2 = std::gcd(c * c, level);
  return sum * make_rational(level, 24 * g2);
}

}  // namespace modbasis

#pragma once

#include <cstdint>
#include <span>

#include "modbasis/rational.hpp"
#include "modbasis/series.hpp"

namespace modbasis {

// q d/dq: the coefficient of q^n is multiplied by n.
QSeries theta(const QSeries& s);

// sum a(n) q^n -> sum a(p n) q^n. A result coefficient at n needs the input at
// p n, so the precision becomes floor(prec / p).
QSeries u_p(const QSeries& s, int p);

// s(q^p), precision p * prec.
QSeries v_p(const QSeries& s, int p);

// sum_i coeffs[i] * (factor * h)^i, known to the precision of h (valuation >= 0).
QSeries power_sum(std::span<const BigRational> coeffs, const BigRational& factor,
                  const QSeries& h);

// sum_i coeffs[i] * (sign * lambda)^i * h^i with h the cusp function and
// lambda the scale magnitude stored for (level, p). Throws UnsupportedPair
// when the level has no Atkin-Lehner data for p.
QSeries al_sum(std::int64_t level, int p, std::span<const BigRational> coeffs, int sign,
               Exponent prec);

}  // namespace modbasis

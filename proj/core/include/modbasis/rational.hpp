#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace modbasis {

using BigInt = mpz_class;
// gmpxx keeps mpq_class canonical (lowest terms, positive denominator) after
// every arithmetic operation; parse_rational canonicalizes on input.
using BigRational = mpq_class;

// "-3", "25/216". Rejects zero denominators, whitespace and decimals.
BigRational parse_rational(std::string_view text);
BigInt parse_integer(std::string_view text);

std::string to_string(const BigRational& x);
std::string to_string(const BigInt& x);

// num/den in lowest terms; den != 0.
BigRational make_rational(std::int64_t num, std::int64_t den);

inline bool is_integral(const BigRational& x) { return x.get_den() == 1; }

// Exponent of the prime p in x; nullopt for x == 0 (valuation +infinity).
std::optional<std::int64_t> p_adic_valuation(const BigInt& x, std::int64_t p);

BigInt int_pow(const BigInt& base, std::uint64_t exponent);

}  // namespace modbasis

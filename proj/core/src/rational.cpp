#include "modbasis/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

#include "modbasis/error.hpp"

namespace modbasis {
namespace {

bool is_integer_literal(std::string_view s) {
  if (s.empty()) return false;
  std::size_t i = (s[0] == '-' || s[0] == '+') ? 1 : 0;
  if (i == s.size()) return false;
  return std::all_of(s.begin() + static_cast<std::ptrdiff_t>(i), s.end(),
                     [](unsigned char c) { return std::isdigit(c) != 0; });
}

}  // namespace

BigInt parse_integer(std::string_view text) {
  if (!is_integer_literal(text)) {
    throw ParseError("not an integer literal: '" + std::string(text) + "'");
  }
  if (text.front() == '+') text.remove_prefix(1);
  return BigInt(std::string(text), 10);
}

BigRational parse_rational(std::string_view text) {
  const auto slash = text.find('/');
  if (slash == std::string_view::npos) return BigRational(parse_integer(text));
  const std::string_view den_text = text.substr(slash + 1);
  if (!den_text.empty() && (den_text[0] == '-' || den_text[0] == '+')) {
    throw ParseError("denominator must be unsigned: '" + std::string(text) + "'");
  }
  BigInt num = parse_integer(text.substr(0, slash));
  BigInt den = parse_integer(den_text);
  if (den == 0) throw ParseError("zero denominator: '" + std::string(text) + "'");
  BigRational r(num, den);
  r.canonicalize();
  return r;
}

BigRational make_rational(std::int64_t num, std::int64_t den) {
  if (den == 0) throw std::invalid_argument("zero denominator");
  BigRational r{BigInt(num), BigInt(den)};
  r.canonicalize();
  return r;
}

std::string to_string(const BigRational& x) { return x.get_str(10); }
std::string to_string(const BigInt& x) { return x.get_str(10); }

std::optional<std::int64_t> p_adic_valuation(const BigInt& x, std::int64_t p) {
  if (x == 0) return std::nullopt;
  BigInt prime(static_cast<long>(p));
  BigInt rest;
  // mpz_remove strips every factor of p and reports how many it removed.
  const auto count = mpz_remove(rest.get_mpz_t(), x.get_mpz_t(), prime.get_mpz_t());
  return static_cast<std::int64_t>(count);
}

BigInt int_pow(const BigInt& base, std::uint64_t exponent) {
  BigInt r;
  mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
  return r;
}

}  // namespace modbasis

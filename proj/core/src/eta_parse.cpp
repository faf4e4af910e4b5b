#include <cctype>
#include <numeric>
#include <sstream>

#include "modbasis/error.hpp"
#include "modbasis/eta.hpp"

namespace modbasis {
namespace {

class Cursor {
 public:
  explicit Cursor(std::string_view text) : text_(text) {}

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ == text_.size();
  }
  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }
  bool accept(char c) {
    if (peek() != c) return false;
    ++pos_;
    return true;
  }
  bool accept(std::string_view word) {
    skip_ws();
    if (text_.substr(pos_, word.size()) != word) return false;
    pos_ += word.size();
    return true;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::string digits() {
    skip_ws();
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (start == pos_) fail("expected digits");
    return std::string(text_.substr(start, pos_ - start));
  }
  std::int64_t small_int() {
    const std::string d = digits();
    if (d.size() > 12) fail("integer too large");
    return std::stoll(d);
  }
  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at offset " + std::to_string(pos_) + " in '" + std::string(text_) + "'");
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
};

// factor ('*' factor)* with factor = "eta(" int ")" ["^" [sign] int]
void parse_factors(Cursor& cur, EtaQuotient& out) {
  do {
    if (!cur.accept("eta")) cur.fail("expected 'eta('");
    cur.expect('(');
    const std::int64_t delta = cur.small_int();
    if (delta < 1) cur.fail("eta argument must be >= 1");
    cur.expect(')');
    std::int64_t r = 1;
    if (cur.accept('^')) {
      int sign = 1;
      if (cur.accept('-')) {
        sign = -1;
      } else {
        cur.accept('+');
      }
      r = sign * cur.small_int();
    }
    out.factors[delta] += r;
    if (out.factors[delta] == 0) out.factors.erase(delta);
  } while (cur.accept('*'));
}

EtaQuotient parse_term(Cursor& cur, int sign, std::int64_t level) {
  EtaQuotient eq;
  eq.scalar = sign;
  if (std::isdigit(static_cast<unsigned char>(cur.peek()))) {
    std::string lit = cur.digits();
    if (cur.accept('/')) lit += "/" + cur.digits();
    eq.scalar *= parse_rational(lit);
    cur.expect('*');
  }
  parse_factors(cur, eq);
  if (eq.factors.empty()) cur.fail("eta quotient with no factors");
  if (level > 0) {
    eq.level = level;
  } else {
    eq.level = 1;
    for (const auto& [delta, r] : eq.factors) eq.level = std::lcm(eq.level, delta);
  }
  return eq;
}

std::string factors_string(const EtaQuotient& eq) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [delta, r] : eq.factors) {
    if (!first) out << " * ";
    first = false;
    out << "eta(" << delta << ')';
    if (r != 1) out << '^' << r;
  }
  return out.str();
}

}  // namespace

EtaQuotient parse_eta_quotient(std::string_view text, std::int64_t level) {
  Cursor cur(text);
  int sign = 1;
  if (cur.accept('-')) sign = -1;
  EtaQuotient eq = parse_term(cur, sign, level);
  if (!cur.done()) cur.fail("trailing input");
  return eq;
}

EtaCombination parse_eta_combination(std::string_view text, std::int64_t level) {
  Cursor cur(text);
  EtaCombination c;
  int sign = 1;
  if (cur.accept('-')) {
    sign = -1;
  } else {
    cur.accept('+');
  }
  c.terms.push_back(parse_term(cur, sign, level));
  while (!cur.done()) {
    if (cur.accept('+')) {
      sign = 1;
    } else if (cur.accept('-')) {
      sign = -1;
    } else {
      cur.fail("expected '+' or '-' between terms");
    }
    c.terms.push_back(parse_term(cur, sign, level));
  }
  // A combination's terms share one level: the largest requested or implied.
  if (level <= 0) {
    std::int64_t common = 1;
    for (const auto& t : c.terms) common = std::lcm(common, t.level);
    for (auto& t : c.terms) t.level = common;
  }
  return c;
}

std::string to_string(const EtaQuotient& eq) {
  if (eq.scalar == 1) return factors_string(eq);
  return to_string(eq.scalar) + " * " + factors_string(eq);
}

std::string to_string(const EtaCombination& c) {
  std::string out;
  for (std::size_t i = 0; i < c.terms.size(); ++i) {
    const auto& t = c.terms[i];
    if (i == 0) {
      out += to_string(t);
      continue;
    }
    EtaQuotient magnitude = t;
    magnitude.scalar = abs(t.scalar);
    out += sgn(t.scalar) < 0 ? " - " : " + ";
    out += to_string(magnitude);
  }
  return out;
}

}  // namespace modbasis

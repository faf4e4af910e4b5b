#include "modbasis/series.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>

#include "modbasis/error.hpp"

namespace modbasis {
namespace {

// Integer view of a series' stored coefficients: values[i] * 1/denominator is
// the coefficient. For integral series the pointers alias the numerators and
// nothing is copied.
struct IntegerView {
  std::vector<mpz_srcptr> values;
  std::vector<BigInt> scaled;  // owns the data when denominators had to be cleared
  BigInt denominator{1};
};

IntegerView integer_view(const QSeries& s) {
  IntegerView view;
  const auto coeffs = s.stored();
  view.values.reserve(coeffs.size());
  if (s.is_integral()) {
    for (const auto& c : coeffs) view.values.push_back(c.get_num_mpz_t());
    return view;
  }
  for (const auto& c : coeffs) {
    mpz_lcm(view.denominator.get_mpz_t(), view.denominator.get_mpz_t(), c.get_den_mpz_t());
  }
  view.scaled.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    BigInt v = view.denominator / c.get_den();
    v *= c.get_num();
    view.scaled.push_back(std::move(v));
  }
  for (const auto& v : view.scaled) view.values.push_back(v.get_mpz_t());
  return view;
}

Exponent product_prec(const QSeries& a, const QSeries& b) {
  return std::min(prec_add(a.prec(), b.valuation()), prec_add(b.prec(), a.valuation()));
}

}  // namespace

QSeries QSeries::zero(Exponent prec) {
  QSeries s;
  s.prec_ = std::min(prec, kExactPrec);
  s.valuation_ = s.prec_;
  return s;
}

QSeries QSeries::constant(BigRational c, Exponent prec) { return monomial(std::move(c), 0, prec); }

QSeries QSeries::monomial(BigRational c, Exponent exponent, Exponent prec) {
  std::vector<BigRational> coeffs;
  coeffs.push_back(std::move(c));
  return from_coefficients(exponent, std::move(coeffs), prec);
}

QSeries QSeries::from_coefficients(Exponent valuation, std::vector<BigRational> coeffs,
                                   Exponent prec) {
  QSeries s;
  s.prec_ = std::min(prec, kExactPrec);
  s.valuation_ = valuation;
  s.coeffs_ = std::move(coeffs);
  for (auto& c : s.coeffs_) c.canonicalize();
  s.normalize();
  return s;
}

void QSeries::normalize() {
  if (valuation_ >= prec_) {
    coeffs_.clear();
  } else if (end() > prec_) {
    coeffs_.resize(static_cast<std::size_t>(prec_ - valuation_));
  }
  while (!coeffs_.empty() && sgn(coeffs_.back()) == 0) coeffs_.pop_back();
  std::size_t lead = 0;
  while (lead < coeffs_.size() && sgn(coeffs_[lead]) == 0) ++lead;
  if (lead == coeffs_.size()) {
    coeffs_.clear();
    valuation_ = prec_;
    return;
  }
  if (lead > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<std::ptrdiff_t>(lead));
    valuation_ += static_cast<Exponent>(lead);
  }
}

bool QSeries::is_integral() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(),
                     [](const BigRational& c) { return c.get_den() == 1; });
}

BigRational QSeries::coeff(Exponent n) const {
  if (n >= prec_) throw PrecisionExceeded(n, prec_);
  if (n < valuation_ || n >= end()) return BigRational(0);
  return coeffs_[static_cast<std::size_t>(n - valuation_)];
}

const BigRational& QSeries::leading_coefficient() const {
  if (coeffs_.empty()) throw ZeroLeadingTerm();
  return coeffs_.front();
}

QSeries QSeries::truncated(Exponent prec) const {
  if (prec >= prec_) return *this;
  QSeries s = *this;
  s.prec_ = prec;
  s.normalize();
  return s;
}

void QSeries::subtract_scaled(const BigRational& scale, const QSeries& s) {
  const Exponent new_prec = std::min(prec_, s.prec_);
  if (sgn(scale) == 0 || s.is_zero()) {
    if (new_prec < prec_) *this = truncated(new_prec);
    return;
  }
  const Exponent lo = std::min(valuation_, s.valuation_);
  const Exponent own_end = coeffs_.empty() ? lo : end();
  const Exponent hi = std::min(new_prec, std::max(own_end, s.end()));
  if (hi <= lo) {
    *this = QSeries::zero(new_prec);
    return;
  }
  // Re-base storage onto [lo, hi).
  if (coeffs_.empty()) valuation_ = lo;
  if (valuation_ > lo) {
    coeffs_.insert(coeffs_.begin(), static_cast<std::size_t>(valuation_ - lo), BigRational(0));
    valuation_ = lo;
  }
  coeffs_.resize(static_cast<std::size_t>(hi - lo));
  prec_ = new_prec;

  const bool integral_fast = scale.get_den() == 1 && s.is_integral();
  const auto src = s.stored();
  for (std::size_t j = 0; j < src.size(); ++j) {
    const Exponent e = s.valuation_ + static_cast<Exponent>(j);
    if (e >= hi) break;
    if (sgn(src[j]) == 0) continue;
    BigRational& dst = coeffs_[static_cast<std::size_t>(e - lo)];
    if (integral_fast && dst.get_den() == 1) {
      mpz_submul(dst.get_num_mpz_t(), scale.get_num_mpz_t(), src[j].get_num_mpz_t());
    } else {
      dst -= scale * src[j];
    }
  }
  normalize();
}

BigRational coeff(const QSeries& s, Exponent n) { return s.coeff(n); }

QSeries add(const QSeries& a, const QSeries& b) {
  QSeries r = a;
  r.subtract_scaled(BigRational(-1), b);
  return r;
}

QSeries sub(const QSeries& a, const QSeries& b) {
  QSeries r = a;
  r.subtract_scaled(BigRational(1), b);
  return r;
}

QSeries neg(const QSeries& a) { return scalar_mul(BigRational(-1), a); }

QSeries scalar_mul(const BigRational& c, const QSeries& a) {
  std::vector<BigRational> coeffs(a.stored().begin(), a.stored().end());
  for (auto& x : coeffs) x *= c;
  return QSeries::from_coefficients(a.valuation(), std::move(coeffs), a.prec());
}

QSeries mul_schoolbook(const QSeries& a, const QSeries& b) {
  const Exponent prec = product_prec(a, b);
  if (a.is_zero() || b.is_zero()) return QSeries::zero(prec);
  const Exponent val = a.valuation() + b.valuation();
  const Exponent len = std::min(prec - val, (a.end() - a.valuation()) + (b.end() - b.valuation()) - 1);
  if (len <= 0) return QSeries::zero(prec);
  std::vector<BigRational> out(static_cast<std::size_t>(len));
  const auto ca = a.stored();
  const auto cb = b.stored();
  for (std::size_t i = 0; i < ca.size(); ++i) {
    for (std::size_t j = 0; j < cb.size() && static_cast<Exponent>(i + j) < len; ++j) {
      out[i + j] += ca[i] * cb[j];
    }
  }
  return QSeries::from_coefficients(val, std::move(out), prec);
}

QSeries mul(const QSeries& a, const QSeries& b) {
  const Exponent prec = product_prec(a, b);
  if (a.is_zero() || b.is_zero()) return QSeries::zero(prec);
  const Exponent val = a.valuation() + b.valuation();
  const Exponent len = std::min(prec - val, (a.end() - a.valuation()) + (b.end() - b.valuation()) - 1);
  if (len <= 0) return QSeries::zero(prec);

  const IntegerView va = integer_view(a);
  const IntegerView vb = integer_view(b);
  std::vector<BigInt> acc(static_cast<std::size_t>(len));
  const std::size_t n_out = acc.size();
  for (std::size_t i = 0; i < va.values.size() && i < n_out; ++i) {
    mpz_srcptr x = va.values[i];
    if (mpz_sgn(x) == 0) continue;
    const std::size_t jmax = std::min(vb.values.size(), n_out - i);
    for (std::size_t j = 0; j < jmax; ++j) {
      mpz_addmul(acc[i + j].get_mpz_t(), x, vb.values[j]);
    }
  }

  const BigInt denominator = va.denominator * vb.denominator;
  std::vector<BigRational> out(n_out);
  for (std::size_t k = 0; k < n_out; ++k) {
    mpz_swap(out[k].get_num_mpz_t(), acc[k].get_mpz_t());
    if (denominator != 1) {
      mpz_set(out[k].get_den_mpz_t(), denominator.get_mpz_t());
      out[k].canonicalize();
    }
  }
  return QSeries::from_coefficients(val, std::move(out), prec);
}

QSeries reciprocal(const QSeries& a, std::optional<Exponent> cap) {
  if (a.is_zero()) throw ZeroLeadingTerm();
  const Exponent v = a.valuation();
  const auto ca = a.stored();
  Exponent prec;
  if (a.is_exact()) {
    if (ca.size() == 1) {
      return QSeries::monomial(BigRational(1) / ca[0], -v, cap.value_or(kExactPrec));
    }
    if (!cap) {
      throw std::invalid_argument("reciprocal of an exact non-monomial series needs a precision cap");
    }
    prec = *cap;
  } else {
    prec = a.prec() - 2 * v;
    if (cap) prec = std::min(prec, *cap);
  }
  const Exponent len = prec + v;  // relative length of the result
  if (len <= 0) return QSeries::zero(prec);
  const std::size_t n = static_cast<std::size_t>(len);

  const BigRational& lead = ca[0];
  const bool unit_integral = a.is_integral() && (lead == 1 || lead == -1);
  std::vector<BigRational> out(n);
  if (unit_integral) {
    // 1/lead == lead for a unit, so r_k = -lead * sum_{i>=1} a_i r_{k-i}.
    std::vector<BigInt> r(n);
    r[0] = lead.get_num();
    BigInt s;
    for (std::size_t k = 1; k < n; ++k) {
      s = 0;
      const std::size_t imax = std::min(k, ca.size() - 1);
      for (std::size_t i = 1; i <= imax; ++i) {
        mpz_addmul(s.get_mpz_t(), ca[i].get_num_mpz_t(), r[k - i].get_mpz_t());
      }
      if (lead == 1) {
        mpz_neg(r[k].get_mpz_t(), s.get_mpz_t());
      } else {
        r[k] = s;
      }
    }
    for (std::size_t k = 0; k < n; ++k) mpz_swap(out[k].get_num_mpz_t(), r[k].get_mpz_t());
  } else {
    const BigRational inv_lead = BigRational(1) / lead;
    out[0] = inv_lead;
    for (std::size_t k = 1; k < n; ++k) {
      BigRational s(0);
      const std::size_t imax = std::min(k, ca.size() - 1);
      for (std::size_t i = 1; i <= imax; ++i) s += ca[i] * out[k - i];
      out[k] = -s * inv_lead;
    }
  }
  return QSeries::from_coefficients(-v, std::move(out), prec);
}

QSeries int_pow(const QSeries& a, std::int64_t e) {
  if (e == 0) return QSeries::one();
  QSeries base = e < 0 ? reciprocal(a) : a;
  std::uint64_t k = e < 0 ? static_cast<std::uint64_t>(-e) : static_cast<std::uint64_t>(e);
  std::optional<QSeries> result;
  while (k > 0) {
    if (k & 1U) result = result ? mul(*result, base) : base;
    k >>= 1U;
    if (k > 0) base = mul(base, base);
  }
  return *result;
}

QSeries shift(const QSeries& s, Exponent by) {
  std::vector<BigRational> coeffs(s.stored().begin(), s.stored().end());
  const Exponent val = s.is_zero() ? prec_add(s.prec(), by) : s.valuation() + by;
  return QSeries::from_coefficients(val, std::move(coeffs), prec_add(s.prec(), by));
}

QSeries dilate(const QSeries& s, Exponent factor) {
  if (factor < 1) throw std::invalid_argument("dilation factor must be >= 1");
  const Exponent prec = s.is_exact() ? kExactPrec : s.prec() * factor;
  if (s.is_zero()) return QSeries::zero(prec);
  const auto c = s.stored();
  std::vector<BigRational> out((c.size() - 1) * static_cast<std::size_t>(factor) + 1);
  for (std::size_t i = 0; i < c.size(); ++i) out[i * static_cast<std::size_t>(factor)] = c[i];
  return QSeries::from_coefficients(s.valuation() * factor, std::move(out), prec);
}

std::optional<Exponent> first_difference(const QSeries& a, const QSeries& b) {
  const Exponent top = std::min(a.prec(), b.prec());
  const Exponent lo = std::min(a.valuation(), b.valuation());
  const Exponent hi = std::min(top, std::max(a.end(), b.end()));
  for (Exponent n = lo; n < hi; ++n) {
    if (a.coeff(n) != b.coeff(n)) return n;
  }
  return std::nullopt;
}

std::string format_series(const QSeries& s, std::size_t max_terms, bool big_o) {
  std::ostringstream out;
  std::size_t shown = 0;
  const auto c = s.stored();
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (sgn(c[i]) == 0) continue;
    if (max_terms != 0 && shown == max_terms) break;
    const Exponent e = s.valuation() + static_cast<Exponent>(i);
    const bool negative = sgn(c[i]) < 0;
    if (shown == 0) {
      if (negative) out << '-';
    } else {
      out << (negative ? " - " : " + ");
    }
    const BigRational mag = abs(c[i]);
    if (e == 0) {
      out << to_string(mag);
    } else {
      if (mag != 1) out << to_string(mag);
      out << 'q';
      if (e != 1) out << '^' << e;
    }
    ++shown;
  }
  if (shown == 0) out << '0';
  if (big_o && !s.is_exact()) out << " + O(q^" << s.prec() << ')';
  return out.str();
}

QSeries parse_series(std::string_view text) {
  std::string compact;
  for (const char ch : text) {
    if (ch != ' ' && ch != '\t' && ch != '\n') compact += ch;
  }
  if (compact.empty()) throw ParseError("empty series text");
  std::map<Exponent, BigRational> terms;
  Exponent prec = kExactPrec;
  std::size_t pos = 0;
  const auto fail = [&](const std::string& why) {
    throw ParseError("series '" + std::string(text) + "': " + why + " at offset " +
                     std::to_string(pos));
  };
  const auto read_int = [&]() -> Exponent {
    const std::size_t start = pos;
    if (pos < compact.size() && (compact[pos] == '-' || compact[pos] == '+')) ++pos;
    while (pos < compact.size() && std::isdigit(static_cast<unsigned char>(compact[pos]))) ++pos;
    if (pos == start || !std::isdigit(static_cast<unsigned char>(compact[pos - 1]))) {
      fail("expected integer");
    }
    return std::stoll(compact.substr(start, pos - start));
  };
  bool first = true;
  while (pos < compact.size()) {
    int sign = 1;
    if (compact[pos] == '+' || compact[pos] == '-') {
      sign = compact[pos] == '-' ? -1 : 1;
      ++pos;
    } else if (!first) {
      fail("expected + or -");
    }
    first = false;
    if (compact.compare(pos, 4, "O(q^") == 0) {
      pos += 4;
      prec = read_int();
      if (pos >= compact.size() || compact[pos] != ')') fail("expected )");
      ++pos;
      if (pos != compact.size()) fail("O-term must come last");
      break;
    }
    if (compact.compare(pos, 4, "O(q)") == 0) {
      pos += 4;
      prec = 1;
      if (pos != compact.size()) fail("O-term must come last");
      break;
    }
    const std::size_t start = pos;
    while (pos < compact.size() &&
           (std::isdigit(static_cast<unsigned char>(compact[pos])) || compact[pos] == '/')) {
      ++pos;
    }
    BigRational c(1);
    if (pos > start) c = parse_rational(compact.substr(start, pos - start));
    Exponent e = 0;
    if (pos < compact.size() && compact[pos] == 'q') {
      ++pos;
      e = 1;
      if (pos < compact.size() && compact[pos] == '^') {
        ++pos;
        e = read_int();
      }
    } else if (pos == start) {
      fail("expected coefficient or q");
    }
    terms[e] += sign * c;
  }
  if (terms.empty()) return QSeries::zero(prec);
  const Exponent lo = terms.begin()->first;
  const Exponent hi = terms.rbegin()->first;
  if (hi >= prec) throw ParseError("series '" + std::string(text) + "': term beyond O-term");
  std::vector<BigRational> coeffs(static_cast<std::size_t>(hi - lo + 1));
  for (auto& [e, c] : terms) coeffs[static_cast<std::size_t>(e - lo)] = std::move(c);
  return QSeries::from_coefficients(lo, std::move(coeffs), prec);
}

}  // namespace modbasis

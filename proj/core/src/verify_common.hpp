#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "modbasis/series.hpp"
#include "modbasis/verify.hpp"

namespace modbasis::detail {

template <class T>
std::string str(const T& v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

inline std::string join(const std::vector<std::int64_t>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(values[i]);
  }
  return out;
}

// Compares two series coefficientwise from the lower valuation up to the
// common precision. Returns false (and marks the report) when the common
// precision does not reach q^min_prec. Exponents rejected by `skip` are not
// compared.
template <class Skip>
bool compare_series(CheckReport& report, const std::string& where, const QSeries& expected,
                    const QSeries& got, Exponent min_prec, Skip skip) {
  const Exponent top = std::min(expected.prec(), got.prec());
  if (top < min_prec) {
    report.status = CheckStatus::insufficient_precision;
    report.required_precision = std::max<std::int64_t>(report.required_precision, min_prec);
    report.notes.push_back(where + ": only known below q^" + std::to_string(top) +
                           ", need q^" + std::to_string(min_prec));
    return false;
  }
  Exponent lo = std::min(expected.is_zero() ? top : expected.valuation(),
                         got.is_zero() ? top : got.valuation());
  for (Exponent n = lo; n < top; ++n) {
    if (skip(n)) continue;
    const BigRational e = expected.coeff(n);
    const BigRational g = got.coeff(n);
    if (e != g) {
      report.fail(where + " q^" + std::to_string(n), to_string(e), to_string(g));
      return true;
    }
  }
  ++report.cases;
  return true;
}

inline bool compare_series(CheckReport& report, const std::string& where,
                           const QSeries& expected, const QSeries& got, Exponent min_prec) {
  return compare_series(report, where, expected, got, min_prec, [](Exponent) { return false; });
}

inline void finish(CheckReport& report) {
  if (report.status == CheckStatus::pass && report.cases == 0) report.vacuous = true;
}

}  // namespace modbasis::detail

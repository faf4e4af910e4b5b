#include <iomanip>
#include <sstream>

#include <nlohmann/json.hpp>

#include "modbasis/error.hpp"
#include "modbasis/verify.hpp"

namespace modbasis {
namespace {

using json = nlohmann::ordered_json;

json optional_int(const std::optional<std::int64_t>& v) { return v ? json(*v) : json(nullptr); }

std::optional<std::int64_t> optional_int(const json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<std::int64_t>();
}

json to_json(const CheckReport& r) {
  json params = json::object();
  for (const auto& [k, v] : r.params) params[k] = v;
  json cex = json::array();
  for (const auto& c : r.counterexamples) {
    cex.push_back({{"where", c.where}, {"expected", c.expected}, {"got", c.got}});
  }
  return {{"name", r.name},
          {"params", std::move(params)},
          {"status", to_string(r.status)},
          {"cases", r.cases},
          {"failures", r.failures},
          {"vacuous", r.vacuous},
          {"counterexamples", std::move(cex)},
          {"precision", r.precision},
          {"required_precision", r.required_precision},
          {"notes", r.notes}};
}

CheckReport report_from(const json& j) {
  CheckReport r;
  r.name = j.at("name").get<std::string>();
  for (const auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, v.get<std::string>());
  r.status = parse_check_status(j.at("status").get<std::string>());
  r.cases = j.at("cases").get<std::int64_t>();
  r.failures = j.at("failures").get<std::int64_t>();
  r.vacuous = j.at("vacuous").get<bool>();
  for (const auto& c : j.at("counterexamples")) {
    r.counterexamples.push_back({c.at("where").get<std::string>(),
                                 c.at("expected").get<std::string>(),
                                 c.at("got").get<std::string>()});
  }
  r.precision = j.at("precision").get<Exponent>();
  r.required_precision = j.at("required_precision").get<std::int64_t>();
  r.notes = j.at("notes").get<std::vector<std::string>>();
  return r;
}

json to_json(const ValuationRow& row) {
  return {{"N", row.level},
          {"p", row.p},
          {"a", row.a},
          {"b", row.b},
          {"r", row.r},
          {"s", row.s},
          {"m", row.m},
          {"n", row.n},
          {"coeff", to_string(row.coeff)},
          {"valuation", optional_int(row.valuation)},
          {"route", to_string(row.route)},
          {"bound", optional_int(row.bound)},
          {"status", to_string(row.status)}};
}

ValuationRow row_from(const json& j) {
  ValuationRow row;
  row.level = j.at("N").get<int>();
  row.p = j.at("p").get<int>();
  row.a = j.at("a").get<int>();
  row.b = j.at("b").get<int>();
  row.r = j.at("r").get<std::int64_t>();
  row.s = j.at("s").get<std::int64_t>();
  row.m = j.at("m").get<std::int64_t>();
  row.n = j.at("n").get<std::int64_t>();
  row.coeff = parse_integer(j.at("coeff").get<std::string>());
  row.valuation = optional_int(j.at("valuation"));
  row.route = parse_route(j.at("route").get<std::string>());
  row.bound = optional_int(j.at("bound"));
  row.status = parse_row_status(j.at("status").get<std::string>());
  return row;
}

json rows_json(const std::vector<ValuationRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) out.push_back(to_json(row));
  return out;
}

template <class F>
auto parse_with(std::string_view text, F&& build) {
  try {
    return build(json::parse(text));
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed report JSON: ") + e.what());
  }
}

std::string valuation_text(const std::optional<std::int64_t>& v) {
  return v ? std::to_string(*v) : "inf";
}

}  // namespace

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::insufficient_precision: return "insufficient_precision";
  }
  return "fail";
}

CheckStatus parse_check_status(std::string_view text) {
  if (text == "pass") return CheckStatus::pass;
  if (text == "fail") return CheckStatus::fail;
  if (text == "insufficient_precision") return CheckStatus::insufficient_precision;
  throw ParseError("unknown check status '" + std::string(text) + "'");
}

std::string to_string(RowStatus s) {
  switch (s) {
    case RowStatus::pass: return "pass";
    case RowStatus::fail: return "fail";
    case RowStatus::no_claim: return "no claim";
  }
  return "fail";
}

RowStatus parse_row_status(std::string_view text) {
  if (text == "pass") return RowStatus::pass;
  if (text == "fail") return RowStatus::fail;
  if (text == "no claim") return RowStatus::no_claim;
  throw ParseError("unknown row status '" + std::string(text) + "'");
}

std::string to_string(Route r) {
  switch (r) {
    case Route::strong: return "strong";
    case Route::weak: return "weak";
    case Route::none: return "none";
  }
  return "none";
}

Route parse_route(std::string_view text) {
  if (text == "strong") return Route::strong;
  if (text == "weak") return Route::weak;
  if (text == "none") return Route::none;
  throw ParseError("unknown route '" + std::string(text) + "'");
}

std::string report_to_json(const CheckReport& report) { return to_json(report).dump(2); }

CheckReport report_from_json(std::string_view text) {
  return parse_with(text, [](const json& j) { return report_from(j); });
}

std::string report_to_text(const CheckReport& report) {
  std::ostringstream out;
  out << report.name << ": " << to_string(report.status);
  if (report.vacuous) out << " (vacuous: empty window)";
  out << '\n';
  std::size_t width = 0;
  for (const auto& [k, v] : report.params) width = std::max(width, k.size());
  for (const auto& [k, v] : report.params) {
    out << "  " << std::left << std::setw(static_cast<int>(width)) << k << "  " << v << '\n';
  }
  out << "  cases verified: " << report.cases << ", failures: " << report.failures
      << ", precision: " << report.precision << '\n';
  if (report.required_precision >= 0) {
    out << "  precision that would suffice: " << report.required_precision << '\n';
  }
  for (const auto& c : report.counterexamples) {
    out << "  counterexample " << c.where << ": expected " << c.expected << ", got " << c.got
        << '\n';
  }
  for (const auto& n : report.notes) out << "  note: " << n << '\n';
  return out.str();
}

std::string rows_to_json(const std::vector<ValuationRow>& rows) { return rows_json(rows).dump(2); }

std::vector<ValuationRow> rows_from_json(std::string_view text) {
  return parse_with(text, [](const json& j) {
    std::vector<ValuationRow> rows;
    for (const auto& r : j) rows.push_back(row_from(r));
    return rows;
  });
}

std::string rows_to_csv(const std::vector<ValuationRow>& rows) {
  std::ostringstream out;
  out << "N,p,a,b,r,s,m,n,coeff,valuation,bound,status\n";
  for (const auto& row : rows) {
    out << row.level << ',' << row.p << ',' << row.a << ',' << row.b << ',' << row.r << ','
        << row.s << ',' << row.m << ',' << row.n << ',' << to_string(row.coeff) << ','
        << valuation_text(row.valuation) << ',' << (row.bound ? std::to_string(*row.bound) : "")
        << ',' << to_string(row.status) << '\n';
  }
  return out.str();
}

std::string rows_to_text(const std::vector<ValuationRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"N", "p", "a", "b", "r", "s", "m", "n", "coeff", "nu", "route", "bound",
                   "status"});
  for (const auto& row : rows) {
    cells.push_back({std::to_string(row.level), std::to_string(row.p), std::to_string(row.a),
                     std::to_string(row.b), std::to_string(row.r), std::to_string(row.s),
                     std::to_string(row.m), std::to_string(row.n), to_string(row.coeff),
                     valuation_text(row.valuation), to_string(row.route),
                     row.bound ? std::to_string(*row.bound) : "-", to_string(row.status)});
  }
  std::vector<std::size_t> width(cells.front().size(), 0);
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  }
  std::ostringstream out;
  for (const auto& line : cells) {
    for (std::size_t i = 0; i < line.size(); ++i) {
      // Right-align numbers, left-align the trailing text columns.
      const bool text = i >= line.size() - 3 && i != line.size() - 2;
      if (i) out << "  ";
      if (i + 1 == line.size()) {
        out << line[i];  // no trailing padding
        continue;
      }
      out << (text ? std::left : std::right) << std::setw(static_cast<int>(width[i])) << line[i];
    }
    out << '\n';
  }
  return out.str();
}

std::string scan_to_json(const ScanResult& scan) {
  json sharp = json::object();
  for (const auto& [k, v] : scan.sharpness) sharp[k] = v;
  json doc = {{"report", to_json(scan.report)},
              {"rows", rows_json(scan.rows)},
              {"zero_rows", scan.zero_rows},
              {"claimed_rows", scan.claimed_rows},
              {"sharpness", std::move(sharp)}};
  return doc.dump(2);
}

ScanResult scan_from_json(std::string_view text) {
  return parse_with(text, [](const json& j) {
    ScanResult s;
    s.report = report_from(j.at("report"));
    for (const auto& r : j.at("rows")) s.rows.push_back(row_from(r));
    s.zero_rows = j.at("zero_rows").get<std::int64_t>();
    s.claimed_rows = j.at("claimed_rows").get<std::int64_t>();
    for (const auto& [k, v] : j.at("sharpness").items()) s.sharpness[k] = v.get<std::int64_t>();
    return s;
  });
}

std::string series_to_json(const QSeries& s) {
  json coeffs = json::array();
  Exponent lo = s.is_zero() ? std::min<Exponent>(0, s.prec()) : s.valuation();
  const Exponent hi = !s.is_exact() ? s.prec() : (s.is_zero() ? lo : s.end());
  for (Exponent n = lo; n < hi; ++n) coeffs.push_back(to_string(s.coeff(n)));
  json doc = {{"valuation", lo},
              {"prec", s.is_exact() ? json(nullptr) : json(s.prec())},
              {"coeffs", std::move(coeffs)}};
  return doc.dump();
}

QSeries series_from_json(std::string_view text) {
  return parse_with(text, [](const json& j) {
    std::vector<BigRational> coeffs;
    for (const auto& c : j.at("coeffs")) coeffs.push_back(parse_rational(c.get<std::string>()));
    const Exponent val = j.at("valuation").get<Exponent>();
    const Exponent prec = j.at("prec").is_null() ? kExactPrec : j.at("prec").get<Exponent>();
    return QSeries::from_coefficients(val, std::move(coeffs), prec);
  });
}

}  // namespace modbasis

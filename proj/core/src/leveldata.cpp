#include "modbasis/leveldata.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <tuple>

#include <nlohmann/json.hpp>

#include "modbasis/error.hpp"
#include "modbasis/operators.hpp"

namespace modbasis {
namespace detail {
const std::map<int, std::string_view>& embedded_level_fixtures();
}

namespace {

using nlohmann::json;

std::string string_field(const json& j, const char* key, const std::string& fallback = {}) {
  if (!j.contains(key)) return fallback;
  const json& v = j.at(key);
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<std::int64_t>());
  throw ParseError(std::string("field '") + key + "' must be a string or integer");
}

std::optional<std::string> optional_string(const json& j, const char* key) {
  if (!j.contains(key)) return std::nullopt;
  return string_field(j, key);
}

std::int64_t int_field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number_integer()) {
    throw ParseError(std::string("missing integer field '") + key + "'");
  }
  return j.at(key).get<std::int64_t>();
}

LevelData from_json(const json& doc) {
  LevelData d;
  d.level = static_cast<int>(int_field(doc, "level"));
  d.fixture_version = static_cast<int>(int_field(doc, "fixture_version"));

  const json& h = doc.at("hauptmodul");
  d.hauptmodul.quotient = parse_eta_quotient(string_field(h, "quotient"), d.level);
  d.hauptmodul.shift = parse_rational(string_field(h, "shift", "0"));
  d.hauptmodul.display = optional_string(h, "display");
  d.hauptmodul.provenance = string_field(h, "provenance");

  for (const json& w : doc.at("weight_forms")) {
    WeightForm form;
    form.weight = static_cast<int>(int_field(w, "weight"));
    form.order = int_field(w, "order");
    const std::string construction = string_field(w, "construction", "eta");
    if (construction == "eta") {
      form.combination = parse_eta_combination(string_field(w, "combination"), d.level);
    } else if (construction == "theta_over_cusp_poly") {
      form.construction = FormConstruction::theta_over_cusp_poly;
      if (form.weight != 2) throw ParseError("theta_over_cusp_poly forms have weight 2");
    } else {
      throw ParseError("unknown weight form construction '" + construction + "'");
    }
    if (w.contains("printed_combination")) {
      form.printed_combination =
          parse_eta_combination(string_field(w, "printed_combination"), d.level);
    }
    form.display = optional_string(w, "display");
    form.printed_display = optional_string(w, "printed_display");
    form.provenance = string_field(w, "provenance");
    if (w.contains("correction")) {
      const json& c = w.at("correction");
      form.correction = FixtureCorrection{static_cast<int>(int_field(c, "term")),
                                          string_field(c, "printed"), string_field(c, "used"),
                                          string_field(c, "reason")};
    }
    d.weight_forms.push_back(std::move(form));
  }
  if (d.weight_forms.empty()) throw ParseError("fixture has no weight forms");
  std::stable_sort(d.weight_forms.begin(), d.weight_forms.end(),
                   [](const WeightForm& a, const WeightForm& b) { return a.weight > b.weight; });

  for (const json& c : doc.at("cusp_poly")) {
    if (!c.is_number_integer()) throw ParseError("cusp_poly entries must be integers");
    d.cusp_poly.emplace_back(static_cast<long>(c.get<std::int64_t>()));
  }
  d.cusp_poly_provenance = string_field(doc, "cusp_poly_provenance");
  if (doc.contains("printed_cusp_poly")) {
    std::vector<BigInt> printed;
    for (const json& c : doc.at("printed_cusp_poly")) {
      printed.emplace_back(static_cast<long>(c.get<std::int64_t>()));
    }
    d.printed_cusp_poly = std::move(printed);
  }

  if (doc.contains("cusp_form")) {
    const json& c = doc.at("cusp_form");
    d.cusp_form = CuspFormFixture{static_cast<int>(int_field(c, "weight")), int_field(c, "index"),
                                  parse_eta_quotient(string_field(c, "quotient"), d.level),
                                  string_field(c, "provenance")};
  }

  for (const json& a : doc.value("aux", json::array())) {
    AuxPrime aux;
    aux.prime = static_cast<int>(int_field(a, "prime"));
    aux.alt_hauptmodul = parse_eta_quotient(string_field(a, "alt_hauptmodul"), d.level);
    aux.alt_shift = parse_rational(string_field(a, "alt_shift", "0"));
    aux.cusp_function = parse_eta_quotient(string_field(a, "cusp_function"), d.level);
    aux.scale_magnitude = int_field(a, "scale_magnitude");
    aux.sign = static_cast<int>(int_field(a, "sign"));
    if (a.contains("printed_scale_magnitude")) {
      aux.printed_scale_magnitude = int_field(a, "printed_scale_magnitude");
    }
    aux.provenance = string_field(a, "provenance");
    if (aux.sign != 1 && aux.sign != -1) throw ParseError("aux sign must be +1 or -1");
    d.aux.push_back(std::move(aux));
  }
  return d;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t result = n;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    while (n % p == 0) n /= p;
    result -= result / p;
  }
  if (n > 1) result -= result / n;
  return result;
}

BigInt evaluate_at(const std::vector<BigInt>& poly, const BigInt& x) {
  BigInt acc = 0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) acc = acc * x + *it;
  return acc;
}

}  // namespace

LevelData parse_level_fixture(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fixture is not valid JSON: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const json::exception& e) {
    throw ParseError(std::string("fixture has unexpected shape: ") + e.what());
  }
}

LevelData load_level_fixture(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fixture " + path);
  std::ostringstream text;
  text << in.rdbuf();
  return parse_level_fixture(text.str());
}

const LevelData& get_level(std::int64_t level) {
  static const std::map<int, LevelData> registry = [] {
    std::map<int, LevelData> out;
    for (const auto& [n, text] : detail::embedded_level_fixtures()) {
      out.emplace(n, parse_level_fixture(text));
    }
    return out;
  }();
  const auto it = registry.find(static_cast<int>(level));
  if (it == registry.end()) throw UnsupportedLevel(level);
  return it->second;
}

std::vector<int> supported_levels() { return {6, 10, 12, 18}; }

std::vector<BigInt> cusp_polynomial(std::int64_t level) { return get_level(level).cusp_poly; }

std::vector<FormPower> LevelData::initial_powers(int k) const {
  if (k % 2 != 0) throw std::invalid_argument("weight must be even, got " + std::to_string(k));
  std::vector<FormPower> out;
  std::int64_t rest = k;
  for (std::size_t i = 0; i < weight_forms.size(); ++i) {
    const std::int64_t w = weight_forms[i].weight;
    const bool last = i + 1 == weight_forms.size();
    const std::int64_t power = last ? rest / w : floor_div(rest, w);
    if (last && rest % w != 0) {
      throw std::invalid_argument("weight " + std::to_string(k) + " is not reachable at level " +
                                  std::to_string(level));
    }
    rest -= power * w;
    if (power != 0) out.push_back({i, power});
  }
  return out;
}

Exponent LevelData::n0(int k) const {
  Exponent n = 0;
  for (const auto& fp : initial_powers(k)) n += fp.power * weight_forms[fp.form].order;
  return n;
}

Exponent LevelData::n1(int k) const { return n0(k) - static_cast<Exponent>(cusp_degree()); }

const AuxPrime& LevelData::aux_for(int p) const {
  for (const auto& a : aux) {
    if (a.prime == p) return a;
  }
  throw UnsupportedPair("no Atkin-Lehner data for level " + std::to_string(level) + ", p = " +
                        std::to_string(p));
}

QSeries LevelData::hauptmodul_series(Exponent prec) const {
  return add(expand_series(hauptmodul.quotient, prec), QSeries::constant(hauptmodul.shift));
}

QSeries LevelData::alt_hauptmodul_series(int p, Exponent prec) const {
  const AuxPrime& a = aux_for(p);
  return add(expand_series(a.alt_hauptmodul, prec), QSeries::constant(a.alt_shift));
}

QSeries LevelData::cusp_function_series(int p, Exponent prec) const {
  return expand_series(aux_for(p).cusp_function, prec);
}

QSeries LevelData::weight_form_series(std::size_t index, Exponent prec) const {
  const WeightForm& form = weight_forms.at(index);
  if (form.construction == FormConstruction::eta) {
    return expand_combination(form.combination, prec);
  }
  // P(psi) = q^-deg + ..., so the quotient gains deg - 1 orders of precision
  // over psi; a margin of 2 covers the shift of theta.
  const QSeries psi = hauptmodul_series(prec + 2);
  const QSeries denominator = evaluate_polynomial(cusp_poly, psi);
  return mul(neg(theta(psi)), reciprocal(denominator)).truncated(prec);
}

std::vector<BigInt> integer_roots(const std::vector<BigInt>& poly) {
  std::vector<BigInt> p = poly;
  while (!p.empty() && p.back() == 0) p.pop_back();
  std::vector<BigInt> roots;
  if (p.size() < 2) return roots;
  // Divide out x while the constant term vanishes.
  while (p.size() > 1 && p.front() == 0) {
    roots.emplace_back(0);
    p.erase(p.begin());
  }
  const BigInt c0 = abs(p.front());
  std::vector<BigInt> candidates;
  for (BigInt d = 1; d * d <= c0; ++d) {
    if (c0 % d != 0) continue;
    for (const BigInt& v : {BigInt(d), BigInt(c0 / d)}) {
      candidates.push_back(v);
      candidates.push_back(-v);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  for (const BigInt& x : candidates) {
    while (p.size() > 1 && evaluate_at(p, x) == 0) {
      roots.push_back(x);
      // synthetic division by (t - x)
      std::vector<BigInt> quotient(p.size() - 1);
      BigInt carry = 0;
      for (std::size_t i = p.size(); i-- > 1;) {
        carry = p[i] + carry * x;
        quotient[i - 1] = carry;
      }
      p = std::move(quotient);
    }
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

std::int64_t cusp_count(std::int64_t level) {
  std::int64_t count = 0;
  for (std::int64_t d = 1; d <= level; ++d) {
    if (level % d == 0) count += euler_phi(std::gcd(d, level / d));
  }
  return count;
}

QSeries evaluate_polynomial(const std::vector<BigInt>& poly, const QSeries& x) {
  QSeries acc = QSeries::zero();
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    acc = add(mul(acc, x), QSeries::constant(BigRational(*it)));
  }
  return acc;
}

bool ValidationReport::passed() const {
  return !checks.empty() &&
         std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const ValidationCheck* ValidationReport::find(std::string_view name) const {
  for (const auto& c : checks) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

namespace {

class Validator {
 public:
  Validator(const LevelData& d, Exponent prec) : d_(d), prec_(prec) {}

  ValidationReport run() {
    report_.level = d_.level;
    report_.prec = prec_;
    check("hauptmodul.shape", [&] { return hauptmodul_shape(); });
    check("hauptmodul.ligozat", [&] { return hauptmodul_ligozat(); });
    for (std::size_t i = 0; i < d_.weight_forms.size(); ++i) {
      const std::string tag = "weight_form[" + std::to_string(d_.weight_forms[i].weight) + "]";
      check(tag + ".weight", [&] { return form_weight(i); });
      check(tag + ".character", [&] { return form_character(i); });
      check(tag + ".leading", [&] { return form_leading(i); });
      check(tag + ".integral", [&] { return form_integral(i); });
      if (d_.weight_forms[i].display) check(tag + ".display", [&] { return form_display(i); });
    }
    check("cusp_poly.degree", [&] { return cusp_degree(); });
    check("n1(2)", [&] { return n1_two(); });
    check("cusp_form.leading", [&] { return first_cusp_element(); });
    if (d_.cusp_form) check("cusp_form.ligozat", [&] { return cusp_form_orders(); });
    for (const auto& a : d_.aux) {
      const std::string tag = "aux[" + std::to_string(a.prime) + "]";
      check(tag + ".alt_shift", [&] { return aux_alt(a.prime); });
      check(tag + ".cusp_function", [&] { return aux_cusp(a.prime); });
    }
    return std::move(report_);
  }

 private:
  template <class F>
  void check(std::string name, F&& body) {
    ValidationCheck c{std::move(name), false, {}};
    try {
      std::tie(c.passed, c.detail) = body();
    } catch (const std::bad_alloc&) {
      throw;
    } catch (const FractionalValuation& e) {
      c.detail = std::string("FractionalValuation: ") + e.what();
    } catch (const MixedWeight& e) {
      c.detail = std::string("MixedWeight: ") + e.what();
    } catch (const std::exception& e) {
      c.detail = e.what();
    }
    report_.checks.push_back(std::move(c));
  }

  using Outcome = std::pair<bool, std::string>;

  Outcome hauptmodul_shape() {
    const QSeries psi = d_.hauptmodul_series(prec_);
    const bool ok = weight(d_.hauptmodul.quotient).twice == 0 && psi.valuation() == -1 &&
                    psi.coeff(-1) == 1 && psi.coeff(0) == 0 && psi.is_integral();
    std::string detail = format_series(psi, 6);
    if (d_.hauptmodul.display) {
      const QSeries shown = parse_series(*d_.hauptmodul.display);
      const auto diff = first_difference(psi, shown);
      if (diff) {
        return {false, "differs from displayed " + *d_.hauptmodul.display + " at q^" +
                           std::to_string(*diff)};
      }
      detail += "; matches " + *d_.hauptmodul.display;
    }
    return {ok, detail};
  }

  Outcome hauptmodul_ligozat() {
    const BigRational at_inf = ligozat_order(d_.hauptmodul.quotient, d_.level);
    const BigRational offset = expand_quotient(d_.hauptmodul.quotient, 1).offset;
    return {at_inf == offset && at_inf == -1,
            "order at infinity " + to_string(at_inf) + ", q-offset " + to_string(offset)};
  }

  Outcome form_weight(std::size_t i) {
    const auto& f = d_.weight_forms[i];
    if (f.construction == FormConstruction::theta_over_cusp_poly) {
      return {f.weight == 2, "theta of a weight-0 function"};
    }
    const HalfIntegerWeight w = weight(f.combination);
    return {w.twice == 2 * f.weight, "eta exponent sum " + std::to_string(w.twice)};
  }

  Outcome form_character(std::size_t i) {
    const auto& f = d_.weight_forms[i];
    if (f.construction != FormConstruction::eta) return {true, "not an eta combination"};
    for (const auto& t : f.combination.terms) {
      if (!has_square_eta_product(t)) return {false, "nontrivial character: " + to_string(t)};
    }
    return {true, "every term has square prod delta^r"};
  }

  Outcome form_leading(std::size_t i) {
    const auto& f = d_.weight_forms[i];
    const QSeries s = d_.weight_form_series(i, f.order + 8);
    const bool ok = s.valuation() == f.order && s.coeff(f.order) == 1;
    return {ok, format_series(s, 4)};
  }

  Outcome form_integral(std::size_t i) {
    const QSeries s = d_.weight_form_series(i, prec_);
    return {s.is_integral(), "checked below q^" + std::to_string(s.prec())};
  }

  Outcome form_display(std::size_t i) {
    const auto& f = d_.weight_forms[i];
    const QSeries shown = parse_series(*f.display);
    const QSeries s = d_.weight_form_series(i, std::max(prec_, shown.prec()));
    const auto diff = first_difference(s, shown);
    if (diff) return {false, "differs from " + *f.display + " at q^" + std::to_string(*diff)};
    return {true, "matches " + *f.display};
  }

  Outcome cusp_degree() {
    const std::int64_t cusps = cusp_count(d_.level);
    return {static_cast<std::int64_t>(d_.cusp_degree()) == cusps - 1,
            std::to_string(cusps) + " cusps, degree " + std::to_string(d_.cusp_degree())};
  }

  Outcome n1_two() {
    const Exponent n1 = d_.n1(2);
    return {n1 == -1, "n0(2) = " + std::to_string(d_.n0(2)) + ", n1(2) = " + std::to_string(n1)};
  }

  // f_{2,-n0} * P(psi) must start at q^{n1(2)} with coefficient 1.
  Outcome first_cusp_element() {
    const Exponent n0 = d_.n0(2);
    const Exponent deg = static_cast<Exponent>(d_.cusp_degree());
    QSeries f = QSeries::one();
    for (const auto& fp : d_.initial_powers(2)) {
      f = mul(f, int_pow(d_.weight_form_series(fp.form, n0 + deg + 8), fp.power));
    }
    const QSeries psi = d_.hauptmodul_series(deg + 8);
    const QSeries g = mul(f, evaluate_polynomial(d_.cusp_poly, psi));
    const Exponent n1 = d_.n1(2);
    if (g.valuation() != n1 || g.coeff(n1) != 1 || !g.is_integral()) {
      return {false, format_series(g, 4)};
    }
    // With n1(2) = -1 the first element is g_{2,1}, which must be -theta(psi).
    if (n1 == -1) {
      const auto diff = first_difference(g, neg(theta(psi)));
      if (diff) return {false, "differs from -theta(psi) at q^" + std::to_string(*diff)};
      return {true, format_series(g, 4) + " = -theta(psi)"};
    }
    return {true, format_series(g, 4)};
  }

  Outcome cusp_form_orders() {
    const auto& cf = *d_.cusp_form;
    std::ostringstream detail;
    bool ok = true;
    for (std::int64_t c = 1; c <= d_.level; ++c) {
      if (d_.level % c != 0) continue;
      const BigRational ord = ligozat_order(cf.quotient, c);
      detail << "c=" << c << ":" << to_string(ord) << ' ';
      if (c == d_.level) {
        ok = ok && ord == -cf.index;
      } else {
        ok = ok && sgn(ord) > 0;
      }
    }
    return {ok, detail.str()};
  }

  Outcome aux_alt(int p) {
    const QSeries diff = sub(d_.alt_hauptmodul_series(p, prec_), d_.hauptmodul_series(prec_));
    const bool constant = diff.is_zero() || (diff.valuation() >= 0 && diff.end() <= 1);
    const QSeries alt = d_.alt_hauptmodul_series(p, prec_);
    return {constant && alt.valuation() == -1 && alt.is_integral(),
            "alternative minus main Hauptmodul = " + format_series(diff, 3)};
  }

  Outcome aux_cusp(int p) {
    const AuxPrime& a = d_.aux_for(p);
    const BigRational offset = expand_quotient(a.cusp_function, 1).offset;
    const QSeries s = d_.cusp_function_series(p, prec_);
    // Offsets: 0 for the level-6 functions, 1 on level 10.
    const bool ok = offset.get_den() == 1 && sgn(offset) >= 0 && s.is_integral() &&
                    s.leading_coefficient() == 1 && ligozat_order(a.cusp_function, d_.level) == offset;
    return {ok, "q-offset " + to_string(offset) + ", " + format_series(s, 3)};
  }

  const LevelData& d_;
  Exponent prec_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate_level(const LevelData& data, Exponent prec) {
  return Validator(data, prec).run();
}

ValidationReport validate_level(std::int64_t level, Exponent prec) {
  return validate_level(get_level(level), prec);
}

}  // namespace modbasis

#include "modbasis/basis.hpp"

#include <algorithm>
#include <stdexcept>

#include "modbasis/error.hpp"
#include "modbasis/leveldata.hpp"

namespace modbasis {
namespace {

// Product of weight-form powers for weight k, known below q^prec.
QSeries initial_product(const LevelData& d, int k, Exponent prec) {
  const Exponent lead = d.n0(k);
  const Exponent rel = std::max<Exponent>(prec - lead, 1) + 2;
  QSeries acc = QSeries::one();
  for (const auto& fp : d.initial_powers(k)) {
    const Exponent order = d.weight_forms[fp.form].order;
    acc = mul(acc, int_pow(d.weight_form_series(fp.form, order + rel), fp.power));
  }
  return acc.truncated(prec);
}

std::vector<BigRational> to_rationals(const std::vector<BigInt>& v) {
  return {v.begin(), v.end()};
}

// x * a - sum_j c[j] * polys[j]
std::vector<BigRational> reduce_poly(const std::vector<BigRational>& prev,
                                     const std::vector<BigRational>& c,
                                     const std::vector<std::vector<BigRational>>& polys) {
  std::vector<BigRational> out(prev.size() + 1);
  for (std::size_t i = 0; i < prev.size(); ++i) out[i + 1] = prev[i];
  for (std::size_t j = 0; j < c.size(); ++j) {
    if (sgn(c[j]) == 0) continue;
    const auto& p = polys[j];
    if (p.size() > out.size()) out.resize(p.size());
    for (std::size_t i = 0; i < p.size(); ++i) out[i] -= c[j] * p[i];
  }
  while (out.size() > 1 && sgn(out.back()) == 0) out.pop_back();
  return out;
}

}  // namespace

std::string to_string(Space s) { return s == Space::M ? "M" : "S"; }

Space parse_space(std::string_view text) {
  if (text == "M" || text == "m") return Space::M;
  if (text == "S" || text == "s") return Space::S;
  throw ParseError("space must be M or S, got '" + std::string(text) + "'");
}

Exponent basis_gap(int level, int k, Space space) {
  const LevelData& d = get_level(level);
  return space == Space::M ? d.n0(k) : d.n1(k);
}

BasisElement first_element(int level, int k, Space space, Exponent prec) {
  const LevelData& d = get_level(level);
  BasisElement e;
  e.level = level;
  e.weight = k;
  e.space = space;
  e.index = -basis_gap(level, k, space);
  if (space == Space::M) {
    e.expansion = initial_product(d, k, prec);
    e.haupt_poly = {BigRational(1)};
    return e;
  }
  const Exponent deg = static_cast<Exponent>(d.cusp_degree());
  const Exponent n0 = d.n0(k);
  const QSeries base = initial_product(d, k, prec + deg);
  const QSeries psi = d.hauptmodul_series(std::max<Exponent>(prec - n0 + deg, 1) + 2);
  e.expansion = mul(base, evaluate_polynomial(d.cusp_poly, psi)).truncated(prec);
  e.haupt_poly = to_rationals(d.cusp_poly);
  return e;
}

Ladder Ladder::build(int level, int k, Space space, Exponent m_max, Exponent n_max) {
  const LevelData& d = get_level(level);
  Ladder L;
  L.level_ = level;
  L.weight_ = k;
  L.space_ = space;
  L.gap_ = basis_gap(level, k, space);
  const Exponent m_min = -L.gap_;
  m_max = std::max(m_max, m_min);
  L.n_max_ = std::max(n_max, L.gap_ + 1);

  // Each psi-multiplication costs one term of precision.
  const Exponent base = L.n_max_ + 1 + (m_max - m_min);
  const BasisElement first = first_element(level, k, space, base);
  L.first_poly_ = first.haupt_poly;
  if (!first.expansion.is_integral()) {
    throw IntegralityViolation("first element of weight " + std::to_string(k) + " on level " +
                               std::to_string(level) + " has non-integral coefficients");
  }
  if (first.expansion.valuation() != L.gap_ || first.expansion.coeff(L.gap_) != 1) {
    throw std::logic_error("first element does not start with q^" + std::to_string(L.gap_) +
                           ": " + format_series(first.expansion, 3));
  }
  const QSeries psi = d.hauptmodul_series(base + (m_min < 0 ? -m_min : m_min) + 2);

  L.elements_.reserve(static_cast<std::size_t>(m_max - m_min + 1));
  L.reductions_.reserve(L.elements_.capacity());
  L.elements_.push_back(first.expansion);
  L.reductions_.emplace_back();
  for (Exponent m = m_min + 1; m <= m_max; ++m) {
    QSeries candidate = mul(psi, L.elements_.back());
    std::vector<BigRational> c(static_cast<std::size_t>(m - m_min));
    for (Exponent t = -m + 1; t <= L.gap_; ++t) {
      const Exponent j = -t;  // index of the element led by q^t
      BigRational x = candidate.coeff(t);
      if (sgn(x) == 0) continue;
      candidate.subtract_scaled(x, L.elements_[static_cast<std::size_t>(j - m_min)]);
      c[static_cast<std::size_t>(j - m_min)] = std::move(x);
    }
    if (candidate.valuation() != -m || candidate.coeff(-m) != 1) {
      throw std::logic_error("ladder step " + std::to_string(m) + " lost its leading term");
    }
    L.elements_.push_back(std::move(candidate));
    L.reductions_.push_back(std::move(c));
  }
  return L;
}

const QSeries& Ladder::expansion(Exponent m) const {
  if (m < m_min()) {
    throw IndexBelowRange("index " + std::to_string(m) + " is below -gap = " +
                          std::to_string(m_min()) + " for weight " + std::to_string(weight_) +
                          " " + to_string(space_) + " on level " + std::to_string(level_));
  }
  if (m > m_max()) throw std::out_of_range("index beyond the built ladder");
  return elements_[static_cast<std::size_t>(m - m_min())];
}

std::vector<BigRational> Ladder::haupt_poly(Exponent m) const {
  expansion(m);  // range check
  std::vector<std::vector<BigRational>> polys;
  polys.push_back(first_poly_);
  for (Exponent i = 1; i <= m - m_min(); ++i) {
    polys.push_back(
        reduce_poly(polys.back(), reductions_[static_cast<std::size_t>(i)], polys));
  }
  return polys.back();
}

BasisElement Ladder::element(Exponent m) const {
  BasisElement e;
  e.level = level_;
  e.weight = weight_;
  e.index = m;
  e.space = space_;
  e.expansion = expansion(m);
  e.haupt_poly = haupt_poly(m);
  return e;
}

BigInt Ladder::coefficient(Exponent m, Exponent n) const {
  const BigRational c = expansion(m).coeff(n);
  if (c.get_den() != 1) {
    throw IntegralityViolation("coefficient of q^" + std::to_string(n) + " in element " +
                               std::to_string(m) + " (weight " + std::to_string(weight_) +
                               ", level " + std::to_string(level_) + ") is " + to_string(c));
  }
  return c.get_num();
}

namespace {

BasisElement cached_element(int level, int k, Space space, Exponent m, Exponent prec) {
  const Exponent gap = basis_gap(level, k, space);
  if (m < -gap) {
    throw IndexBelowRange("index " + std::to_string(m) + " is below the first index " + std::to_string(-gap) +
                          " for weight " + std::to_string(k) + " " + to_string(space) +
                          " on level " + std::to_string(level));
  }
  const auto ladder = BasisCache::global().ladder(level, k, space, m, prec - 1);
  BasisElement e = ladder->element(m);
  e.expansion = e.expansion.truncated(prec);
  return e;
}

BigInt cached_coefficient(int level, int k, Space space, Exponent m, Exponent n) {
  const Exponent gap = basis_gap(level, k, space);
  if (m < -gap) {
    throw IndexBelowRange("index " + std::to_string(m) + " is below " + std::to_string(-gap));
  }
  return BasisCache::global().ladder(level, k, space, m, n)->coefficient(m, n);
}

}  // namespace

BasisElement f_basis(int level, int k, Exponent m, Exponent prec) {
  return cached_element(level, k, Space::M, m, prec);
}

BasisElement g_basis(int level, int k, Exponent m, Exponent prec) {
  return cached_element(level, k, Space::S, m, prec);
}

BigInt a_coeff(int level, int k, Exponent m, Exponent n) {
  return cached_coefficient(level, k, Space::M, m, n);
}

BigInt b_coeff(int level, int k, Exponent m, Exponent n) {
  return cached_coefficient(level, k, Space::S, m, n);
}

BasisElement f_basis_direct(int level, int k, Space space, Exponent m, Exponent prec) {
  const LevelData& d = get_level(level);
  const Exponent gap = basis_gap(level, k, space);
  if (m < -gap) throw IndexBelowRange("index " + std::to_string(m) + " below range");
  const Exponent steps = m + gap;
  const BasisElement first = first_element(level, k, space, prec + steps + 2);
  const QSeries psi = d.hauptmodul_series(prec + steps + (gap < 0 ? -gap : gap) + 4);

  // rows[j] = first * psi^j, led by q^(gap - j)
  std::vector<QSeries> rows{first.expansion};
  std::vector<std::vector<BigRational>> polys{first.haupt_poly};
  for (Exponent j = 1; j <= steps; ++j) {
    rows.push_back(mul(rows.back(), psi));
    std::vector<BigRational> p(polys.back().size() + 1);
    for (std::size_t i = 0; i < polys.back().size(); ++i) p[i + 1] = polys.back()[i];
    polys.push_back(std::move(p));
  }
  QSeries f = rows.back();
  std::vector<BigRational> poly = polys.back();
  for (Exponent t = -m + 1; t <= gap; ++t) {
    const BigRational x = f.coeff(t);
    if (sgn(x) == 0) continue;
    const auto j = static_cast<std::size_t>(gap - t);
    f.subtract_scaled(x, rows[j]);
    for (std::size_t i = 0; i < polys[j].size(); ++i) poly[i] -= x * polys[j][i];
  }
  while (poly.size() > 1 && sgn(poly.back()) == 0) poly.pop_back();
  BasisElement e;
  e.level = level;
  e.weight = k;
  e.index = m;
  e.space = space;
  e.expansion = f.truncated(prec);
  e.haupt_poly = std::move(poly);
  return e;
}

HauptmodulDecomposition decompose_in_hauptmodul(const QSeries& F, const QSeries& psi,
                                                Exponent gap) {
  if (psi.is_zero() || psi.valuation() != -1 || psi.coeff(-1) != 1) {
    throw std::invalid_argument("decompose_in_hauptmodul needs psi = q^-1 + O(1)");
  }
  HauptmodulDecomposition out;
  const Exponent order = F.is_zero() ? -1 : -F.valuation();
  // psi^order is known below q^(psi.prec - order + 1).
  const Exponent need = gap + 1;
  const Exponent reachable = order >= 1 ? std::min(F.prec(), psi.prec() - order + 1) : F.prec();
  if (reachable < need || F.prec() <= 0) {
    throw InsufficientPrecision(
        "decomposition needs the residual through q^" + std::to_string(gap),
        std::max<Exponent>(need - reachable, 0) + psi.prec());
  }
  QSeries residual = F;
  if (order < 0) {
    out.residual = std::move(residual);
    return out;
  }
  std::vector<QSeries> powers{QSeries::one()};
  for (Exponent i = 1; i <= order; ++i) powers.push_back(mul(powers.back(), psi));
  out.coeffs.assign(static_cast<std::size_t>(order + 1), BigRational(0));
  for (Exponent i = order; i >= 0; --i) {
    const BigRational c = residual.coeff(-i);
    if (sgn(c) == 0) continue;
    residual.subtract_scaled(c, powers[static_cast<std::size_t>(i)]);
    out.coeffs[static_cast<std::size_t>(i)] = c;
  }
  out.residual = std::move(residual);
  return out;
}

}  // namespace modbasis

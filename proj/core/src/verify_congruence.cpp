#include <algorithm>
#include <numeric>

#include "modbasis/basis.hpp"
#include "modbasis/error.hpp"
#include "modbasis/verify.hpp"
#include "verify_common.hpp"

namespace modbasis {
namespace {

// Claimed exponents for one (level, p). Bounds for a > b are a - b + offset;
// for b > a a fixed exponent or no claim. When strong_divisor is set, r must
// be divisible by it for the strong case; otherwise the weak case applies.
struct Rule {
  int level;
  int p;
  std::int64_t strong_divisor;  // 0: unconditional
  std::int64_t strong_offset;
  std::optional<std::int64_t> strong_b_over_a;
  std::int64_t weak_offset;
  std::optional<std::int64_t> weak_b_over_a;
};

constexpr std::optional<std::int64_t> kNone = std::nullopt;

const std::vector<Rule>& rules() {
  static const std::vector<Rule> table = {
      {6, 2, 0, 2, 2, 0, kNone},  {6, 3, 0, 1, 1, 0, kNone},
      {10, 2, 0, 1, 1, 0, kNone}, {10, 5, 0, 0, kNone, 0, kNone},
      {12, 2, 0, 2, 2, 0, kNone}, {12, 3, 2, 1, 1, 0, kNone},
      {18, 2, 3, 2, 2, 0, kNone}, {18, 3, 0, 1, 1, 0, kNone},
  };
  return table;
}

const Rule& rule_for(int level, int p) {
  for (const auto& r : rules()) {
    if (r.level == level && r.p == p) return r;
  }
  throw UnsupportedPair("no congruence statement for level " + std::to_string(level) +
                        ", p = " + std::to_string(p));
}

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t out = 1;
  while (e-- > 0) out *= base;
  return out;
}

std::string case_label(Route route, int a, int b) {
  return to_string(route) + (a > b ? " a>b" : " b>a");
}

}  // namespace

std::vector<std::pair<int, int>> congruence_pairs() {
  std::vector<std::pair<int, int>> out;
  for (const auto& r : rules()) out.emplace_back(r.level, r.p);
  return out;
}

std::vector<std::int64_t> admissible_residues(int p, std::size_t count) {
  std::vector<std::int64_t> out;
  for (std::int64_t x = 1; out.size() < count; ++x) {
    if (std::gcd<std::int64_t>(x, p) == 1) out.push_back(x);
  }
  return out;
}

std::pair<Route, std::optional<std::int64_t>> congruence_bound(int level, int p, int a, int b,
                                                               std::int64_t r) {
  const Rule& rule = rule_for(level, p);
  if (a == b) return {Route::none, std::nullopt};
  const bool strong = rule.strong_divisor == 0 || r % rule.strong_divisor == 0;
  const Route route = strong ? Route::strong : Route::weak;
  if (a > b) return {route, (a - b) + (strong ? rule.strong_offset : rule.weak_offset)};
  const auto b_over_a = strong ? rule.strong_b_over_a : rule.weak_b_over_a;
  if (!b_over_a) return {Route::none, std::nullopt};
  return {route, b_over_a};
}

ScanResult congruence_scan(int level, int p, int a_max, int b_max,
                           const std::vector<std::int64_t>& r_set,
                           const std::vector<std::int64_t>& s_set, std::int64_t n_cap) {
  rule_for(level, p);
  for (auto v : r_set) {
    if (v <= 0 || std::gcd<std::int64_t>(v, p) != 1) {
      throw std::invalid_argument("r = " + std::to_string(v) + " must be positive and prime to p");
    }
  }
  for (auto v : s_set) {
    if (v <= 0 || std::gcd<std::int64_t>(v, p) != 1) {
      throw std::invalid_argument("s = " + std::to_string(v) + " must be positive and prime to p");
    }
  }
  ScanResult out;
  CheckReport& report = out.report;
  report.name = "scan";
  report.params = {{"level", std::to_string(level)}, {"p", std::to_string(p)},
                   {"a_max", std::to_string(a_max)}, {"b_max", std::to_string(b_max)},
                   {"r_set", detail::join(r_set)},   {"s_set", detail::join(s_set)},
                   {"n_cap", std::to_string(n_cap)}};

  std::int64_t m_top = 0;
  std::int64_t n_top = 0;
  for (int a = 0; a <= a_max; ++a) {
    for (auto r : r_set) {
      if (ipow(p, a) * r <= n_cap) m_top = std::max(m_top, ipow(p, a) * r);
    }
  }
  for (int b = 0; b <= b_max; ++b) {
    for (auto s : s_set) {
      if (ipow(p, b) * s <= n_cap) n_top = std::max(n_top, ipow(p, b) * s);
    }
  }
  report.precision = n_top + 1;
  if (m_top == 0 || n_top == 0) {
    detail::finish(report);
    return out;
  }
  const auto ladder = BasisCache::global().ladder(level, 0, Space::M, m_top, n_top);

  for (int a = 0; a <= a_max; ++a) {
    for (int b = 0; b <= b_max; ++b) {
      for (auto r : r_set) {
        for (auto s : s_set) {
          const std::int64_t m = ipow(p, a) * r;
          const std::int64_t n = ipow(p, b) * s;
          if (m > n_cap || n > n_cap) continue;
          ValuationRow row;
          row.level = level;
          row.p = p;
          row.a = a;
          row.b = b;
          row.r = r;
          row.s = s;
          row.m = m;
          row.n = n;
          row.coeff = ladder->coefficient(m, n);
          row.valuation = p_adic_valuation(row.coeff, p);
          std::tie(row.route, row.bound) = congruence_bound(level, p, a, b, r);
          if (!row.bound) {
            row.status = RowStatus::no_claim;
          } else {
            ++out.claimed_rows;
            if (!row.valuation) {
              ++out.zero_rows;
              row.status = RowStatus::pass;
            } else {
              const std::int64_t margin = *row.valuation - *row.bound;
              row.status = margin >= 0 ? RowStatus::pass : RowStatus::fail;
              const auto label = case_label(row.route, a, b);
              auto it = out.sharpness.find(label);
              if (it == out.sharpness.end()) {
                out.sharpness.emplace(label, margin);
              } else {
                it->second = std::min(it->second, margin);
              }
            }
            if (row.status == RowStatus::pass) {
              ++report.cases;
            } else {
              report.fail("a=" + std::to_string(a) + " b=" + std::to_string(b) +
                              " r=" + std::to_string(r) + " s=" + std::to_string(s),
                          "p^" + std::to_string(*row.bound) + " | coefficient",
                          to_string(row.coeff) + " (valuation " +
                              std::to_string(*row.valuation) + ")");
            }
          }
          out.rows.push_back(std::move(row));
        }
      }
    }
  }
  report.notes.push_back(std::to_string(out.rows.size()) + " rows, " +
                         std::to_string(out.claimed_rows) + " claimed, " +
                         std::to_string(out.zero_rows) + " claimed rows with coefficient 0");
  for (const auto& [label, margin] : out.sharpness) {
    report.notes.push_back("min(valuation - bound) " + label + ": " + std::to_string(margin));
  }
  detail::finish(report);
  return out;
}

}  // namespace modbasis

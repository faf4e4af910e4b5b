#include <algorithm>
#include <stdexcept>

#include "modbasis/basis.hpp"
#include "modbasis/error.hpp"
#include "modbasis/eta.hpp"
#include "modbasis/leveldata.hpp"
#include "modbasis/operators.hpp"
#include "modbasis/verify.hpp"
#include "verify_common.hpp"

namespace modbasis {

using detail::compare_series;
using detail::finish;

void CheckReport::fail(std::string where, std::string expected, std::string got) {
  status = CheckStatus::fail;
  ++failures;
  if (counterexamples.size() < kMaxCounterexamples) {
    counterexamples.push_back({std::move(where), std::move(expected), std::move(got)});
  }
}

namespace {

void require_even(int k) {
  if (k % 2 != 0) throw std::invalid_argument("weight must be even, got " + std::to_string(k));
}

// Constant term of a * b from the coefficients a[j] b[-j], -lo_a <= j <= hi.
BigRational constant_term(const QSeries& a, const QSeries& b) {
  BigRational total;
  if (a.is_zero() || b.is_zero()) return total;
  const Exponent lo = std::max(a.valuation(), -(b.end() - 1));
  const Exponent hi = std::min(a.end() - 1, -b.valuation());
  if (a.prec() <= -b.valuation() || b.prec() <= -a.valuation()) {
    throw InsufficientPrecision("constant term of a product needs more terms",
                                std::max(-a.valuation(), -b.valuation()) + 1);
  }
  for (Exponent j = lo; j <= hi; ++j) total += a.coeff(j) * b.coeff(-j);
  return total;
}

}  // namespace

CheckReport duality_check(int level, int k, Exponent m_max, Exponent n_max) {
  require_even(k);
  CheckReport report;
  report.name = "duality";
  report.params = {{"level", std::to_string(level)},
                   {"weight", std::to_string(k)},
                   {"m_max", std::to_string(m_max)},
                   {"n_max", std::to_string(n_max)}};
  const Exponent n0 = basis_gap(level, k, Space::M);
  const Exponent m_lo = -n0;
  const Exponent n_lo = n0 + 1;
  report.precision = std::max(m_max, n_max) + 1;
  if (m_max < m_lo || n_max < n_lo) {
    report.notes.push_back("window contains no valid index pair");
    finish(report);
    return report;
  }
  if (basis_gap(level, 2 - k, Space::S) != -n_lo) {
    throw std::logic_error("n1(2-k) != -n0(k)-1 on level " + std::to_string(level));
  }
  auto& cache = BasisCache::global();
  const auto f = cache.ladder(level, k, Space::M, m_max, n_max);
  const auto g = cache.ladder(level, 2 - k, Space::S, n_max, m_max);
  for (Exponent m = m_lo; m <= m_max; ++m) {
    for (Exponent n = n_lo; n <= n_max; ++n) {
      const std::string where = "m=" + std::to_string(m) + " n=" + std::to_string(n);
      const BigInt a = f->coefficient(m, n);
      const BigInt b = g->coefficient(n, m);
      if (a != -b) {
        report.fail(where + " a_k(m,n) vs -b_{2-k}(n,m)", to_string(BigInt(-b)), to_string(a));
        continue;
      }
      const BigRational ct = constant_term(f->expansion(m), g->expansion(n));
      if (ct != BigRational(a + b) || sgn(ct) != 0) {
        report.fail(where + " constant term of f*g", "0", to_string(ct));
        continue;
      }
      ++report.cases;
    }
  }
  finish(report);
  return report;
}

CheckReport genfun_check(int level, int k, Exponent m_max, Exponent z_prec) {
  require_even(k);
  CheckReport report;
  report.name = "genfun";
  report.params = {{"level", std::to_string(level)},
                   {"weight", std::to_string(k)},
                   {"m_max", std::to_string(m_max)},
                   {"z_prec", std::to_string(z_prec)}};
  report.precision = z_prec;
  const LevelData& d = get_level(level);
  const Exponent n0 = basis_gap(level, k, Space::M);
  if (m_max < -n0) {
    report.notes.push_back("m_max below the first index");
    finish(report);
    return report;
  }
  const auto ladder = BasisCache::global().ladder(level, k, Space::M, m_max, z_prec);
  // Truncate so the admissible region does not depend on how far a cached
  // ladder happens to reach.
  std::vector<QSeries> f;
  for (Exponent m = -n0; m <= m_max; ++m) f.push_back(ladder->expansion(m).truncated(z_prec));
  const QSeries psi = d.hauptmodul_series(z_prec + m_max + 2);
  const QSeries& f_first = f.front();
  const QSeries g_first = g_basis(level, 2 - k, n0 + 1, z_prec).expansion;

  // A(m, i): q_tau^i coefficient of f_{k,m}. Zero below m = -n0 exactly (the
  // sum starts there); unknown beyond m_max.
  auto row = [&](Exponent m) -> const QSeries& { return f[static_cast<std::size_t>(m + n0)]; };
  auto known = [&](Exponent m, Exponent i) {
    if (m < -n0) return true;
    if (m > m_max) return false;
    return i < row(m).prec();
  };
  auto A = [&](Exponent m, Exponent i) -> BigRational {
    if (m < -n0) return 0;
    return row(m).coeff(i);
  };

  std::int64_t cells = 0;
  std::int64_t admissible = 0;
  for (Exponent i = -m_max - 1; i < z_prec; ++i) {
    for (Exponent j = -n0 - 1; j < z_prec; ++j) {
      ++cells;
      // z-side sum: psi_t A[j-t][i], t >= -1 with j - t >= -n0.
      bool ok = j + n0 < psi.prec() && i < f_first.prec() && j < g_first.prec();
      for (Exponent t = -1; ok && j - t >= -n0; ++t) ok = known(j - t, i);
      // tau-side sum: psi_l A[j][i-l], l >= -1 with i - l >= -j.
      ok = ok && i + j < psi.prec() && known(j, i + 1);
      if (!ok) continue;
      ++admissible;
      // The constant terms of psi(z) and psi(tau) cancel.
      BigRational lhs;
      for (Exponent t = -1; j - t >= -n0; ++t) {
        if (t == 0) continue;
        lhs += psi.coeff(t) * A(j - t, i);
      }
      if (j >= -n0) {
        for (Exponent l = -1; i - l >= -j; ++l) {
          if (l == 0) continue;
          lhs -= psi.coeff(l) * A(j, i - l);
        }
      }
      const BigRational rhs = f_first.coeff(i) * g_first.coeff(j);
      if (lhs != rhs) {
        report.fail("tau^" + std::to_string(i) + " z^" + std::to_string(j), to_string(rhs),
                    to_string(lhs));
      } else {
        ++report.cases;
      }
    }
  }
  report.notes.push_back(std::to_string(admissible) + " of " + std::to_string(cells) +
                         " bidegrees admissible");
  finish(report);
  return report;
}

CheckReport theta_check(int level, Exponent m_max, Exponent min_window) {
  CheckReport report;
  report.name = "theta";
  report.params = {{"level", std::to_string(level)},
                   {"m_max", std::to_string(m_max)},
                   {"min_window", std::to_string(min_window)}};
  const Exponent prec = min_window + 8;
  report.precision = prec;
  auto& cache = BasisCache::global();
  const auto f = cache.ladder(level, 0, Space::M, m_max, prec);
  const auto g = cache.ladder(level, 2, Space::S, m_max, prec);
  for (Exponent m = 1; m <= m_max; ++m) {
    const QSeries lhs = theta(f->expansion(m));
    const QSeries rhs = scalar_mul(BigRational(-m), g->expansion(m));
    compare_series(report, "m=" + std::to_string(m), rhs, lhs, min_window);
  }
  const LevelData& d = get_level(level);
  if (d.cusp_form) {
    const auto& cf = *d.cusp_form;
    const auto ladder = cache.ladder(level, cf.weight, Space::S, cf.index, prec);
    compare_series(report, "eta quotient " + to_string(cf.quotient),
                   expand_series(cf.quotient, prec), ladder->expansion(cf.index), min_window);
  }
  finish(report);
  return report;
}

CheckReport up_lemma_check(int level, Exponent m_max, Exponent min_window) {
  int p = 0;
  if (level == 12) p = 2;
  if (level == 18) p = 3;
  if (p == 0) {
    throw UnsupportedPair("the U_p level-lowering relation is checked for levels 12 and 18");
  }
  CheckReport report;
  report.name = "uplemma";
  report.params = {{"level", std::to_string(level)},
                   {"p", std::to_string(p)},
                   {"m_max", std::to_string(m_max)},
                   {"min_window", std::to_string(min_window)}};
  const Exponent target_prec = min_window + 8;
  report.precision = p * target_prec;
  auto& cache = BasisCache::global();
  const auto high = cache.ladder(level, 0, Space::M, m_max, p * target_prec);
  const auto low = cache.ladder(6, 0, Space::M, std::max<Exponent>(m_max / p, 0), target_prec);
  for (Exponent m = 1; m <= m_max; ++m) {
    const QSeries image = u_p(high->expansion(m), p);
    const std::string where = "m=" + std::to_string(m);
    if (m % p == 0) {
      compare_series(report, where, low->expansion(m / p), image, min_window);
    } else {
      compare_series(report, where + " (vanishing)", QSeries::zero(image.prec()), image,
                     min_window);
    }
  }
  finish(report);
  return report;
}

}  // namespace modbasis

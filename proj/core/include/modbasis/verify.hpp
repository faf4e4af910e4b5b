#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "modbasis/rational.hpp"
#include "modbasis/series.hpp"

namespace modbasis {

enum class CheckStatus { pass, fail, insufficient_precision };

std::string to_string(CheckStatus s);
CheckStatus parse_check_status(std::string_view text);

struct Counterexample {
  std::string where;  // e.g. "m=3 n=7"
  std::string expected;
  std::string got;
  friend bool operator==(const Counterexample&, const Counterexample&) = default;
};

struct CheckReport {
  std::string name;
  // Ordered description of the window that was examined.
  std::vector<std::pair<std::string, std::string>> params;
  CheckStatus status = CheckStatus::pass;
  std::int64_t cases = 0;     // individual identities/coefficients confirmed
  std::int64_t failures = 0;  // may exceed counterexamples.size()
  bool vacuous = false;    // pass with nothing to check
  std::vector<Counterexample> counterexamples;
  Exponent precision = 0;            // working precision (terms) used
  std::int64_t required_precision = -1;  // set with insufficient_precision
  std::vector<std::string> notes;   // diagnostics that do not affect status

  bool passed() const noexcept { return status == CheckStatus::pass; }
  void fail(std::string where, std::string expected, std::string got);
  friend bool operator==(const CheckReport&, const CheckReport&) = default;
};

// Counterexamples kept per report; the count of failures is still exact.
inline constexpr std::size_t kMaxCounterexamples = 25;

// a_k(m, n) = -b_{2-k}(n, m) for -n0(k) <= m <= m_max and n0(k) < n <= n_max,
// together with the constant term of f_{k,m} g_{2-k,n} being that sum and zero.
CheckReport duality_check(int level, int k, Exponent m_max, Exponent n_max);

// (psi(z) - psi(tau)) sum_{m=-n0}^{m_max} f_{k,m}(tau) q_z^m
//   = f_{k,-n0}(tau) g_{2-k,n0+1}(z)
// on every (tau, z) bidegree fully determined by the truncations. All
// one-variable expansions are carried to z_prec terms.
CheckReport genfun_check(int level, int k, Exponent m_max, Exponent z_prec);

// theta f_{0,m} = -m g_{2,m} for 1 <= m <= m_max; for levels with a stored
// cusp-form eta quotient also its equality with the matching g element.
CheckReport theta_check(int level, Exponent m_max, Exponent min_window = 40);

// Levels 12 and 18 against level 6 through U_2 resp. U_3: the image of
// f_{0,m} is f_{0,m/p} on level 6 when p | m and zero otherwise.
CheckReport up_lemma_check(int level, Exponent m_max, Exponent min_window = 40);

struct AlOutcome {
  CheckReport report;
  int sign = 0;               // the sign that made every identity hold
  bool sign_unique = false;   // the opposite sign fails somewhere
  // Divisibility of the q^n (n >= 1) coefficients of U_p f_{0,r} by lambda/p
  // read off the base identity (integral c_i and cusp function) ...
  std::int64_t derived_divisor = 0;
  bool divisibility_derived = false;
  // ... and checked on the coefficients themselves.
  bool divisibility_observed = false;
};

// Atkin-Lehner expansion identities for (6,2), (6,3), (10,2):
//   p U_p f_{0,r}                          = sum c_i (s lambda)^i h^i,
//     with -f_{0,r} = sum c_i psi_alt^i;
//   p (U_p f_{0,p^a r} - f_{0,p^{a-1} r}) = sum c_i (s lambda)^i h^i,
//     with (p-1) f_{0,p^a r} = sum c_i psi_alt^i, 1 <= a <= a_max;
// all modulo constants (compared on q^n, n != 0), h the cusp function.
// Tries both signs unless `sign` is given. Throws NoConsistentSign if no
// single sign works for every r and a, UnsupportedPair for other pairs.
AlOutcome al_identity_check(int level, int p, const std::vector<std::int64_t>& r_set,
                            int a_max, std::optional<int> sign = std::nullopt,
                            Exponent window = 30);

// Atkin-Lehner identities with an explicit scale magnitude instead of the
// stored one (used to test alternatives). Same contract as above.
AlOutcome al_identity_check_with_scale(int level, int p, std::int64_t scale_magnitude,
                                       const std::vector<std::int64_t>& r_set, int a_max,
                                       std::optional<int> sign = std::nullopt,
                                       Exponent window = 30);

enum class RowStatus { pass, fail, no_claim };
enum class Route { strong, weak, none };

std::string to_string(RowStatus s);
std::string to_string(Route r);
RowStatus parse_row_status(std::string_view text);
Route parse_route(std::string_view text);

struct ValuationRow {
  int level = 0;
  int p = 0;
  int a = 0;
  int b = 0;
  std::int64_t r = 0;
  std::int64_t s = 0;
  std::int64_t m = 0;  // p^a r
  std::int64_t n = 0;  // p^b s
  BigInt coeff;
  std::optional<std::int64_t> valuation;  // nullopt: coefficient is 0
  Route route = Route::none;
  std::optional<std::int64_t> bound;      // claimed exponent of p
  RowStatus status = RowStatus::no_claim;
  friend bool operator==(const ValuationRow&, const ValuationRow&) = default;
};

// Claimed exponent of p dividing a_0(p^a r, p^b s) on the given level, and
// which case of the congruence theorems supplies it.
std::pair<Route, std::optional<std::int64_t>> congruence_bound(int level, int p, int a, int b,
                                                               std::int64_t r);

// Supported (level, p) pairs for congruence_scan.
std::vector<std::pair<int, int>> congruence_pairs();

// The first `count` positive integers coprime to p.
std::vector<std::int64_t> admissible_residues(int p, std::size_t count = 3);

struct ScanResult {
  std::vector<ValuationRow> rows;
  CheckReport report;
  std::int64_t zero_rows = 0;     // claimed rows passing only because coeff = 0
  std::int64_t claimed_rows = 0;  // rows with a bound
  // Minimum of valuation - bound over nonzero claimed rows, per case label
  // ("strong a>b", "strong b>a", "weak a>b").
  std::map<std::string, std::int64_t> sharpness;
  friend bool operator==(const ScanResult&, const ScanResult&) = default;
};

// a_0(p^a r, p^b s) on the level for 0 <= a <= a_max, 0 <= b <= b_max with
// both indices at most n_cap. Throws UnsupportedPair.
ScanResult congruence_scan(int level, int p, int a_max, int b_max,
                           const std::vector<std::int64_t>& r_set,
                           const std::vector<std::int64_t>& s_set, std::int64_t n_cap);

// Serialization. JSON round-trips exactly; text is aligned for reading.
std::string report_to_json(const CheckReport& report);
CheckReport report_from_json(std::string_view text);
std::string report_to_text(const CheckReport& report);

std::string rows_to_json(const std::vector<ValuationRow>& rows);
std::vector<ValuationRow> rows_from_json(std::string_view text);
std::string rows_to_csv(const std::vector<ValuationRow>& rows);
std::string rows_to_text(const std::vector<ValuationRow>& rows);

std::string scan_to_json(const ScanResult& scan);
ScanResult scan_from_json(std::string_view text);

// {valuation, prec, coeffs[]} with exact strings; prec is null for exact series.
std::string series_to_json(const QSeries& s);
QSeries series_from_json(std::string_view text);

}  // namespace modbasis

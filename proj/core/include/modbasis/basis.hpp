#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "modbasis/rational.hpp"
#include "modbasis/series.hpp"

namespace modbasis {

// M: poles only at infinity. S: additionally vanishing at every other cusp.
enum class Space { M, S };

std::string to_string(Space s);
Space parse_space(std::string_view text);  // "M" / "S"; throws ParseError

struct BasisElement {
  int level = 0;
  int weight = 0;
  Exponent index = 0;  // the pole order m: expansion = q^-m + ...
  Space space = Space::M;
  QSeries expansion;
  // element = (initial weight-form product) * sum_i haupt_poly[i] psi^i.
  // For S the cusp polynomial factor is folded in.
  std::vector<BigRational> haupt_poly;
};

// Gap of the canonical basis: n0(k) for M, n1(k) for S.
Exponent basis_gap(int level, int k, Space space);

// The element of largest vanishing order (index -gap), known below q^prec.
// Throws std::invalid_argument for odd k, UnsupportedLevel.
BasisElement first_element(int level, int k, Space space, Exponent prec);

/// All elements of one (level, weight, space) from index m_min = -gap up to
/// m_max, each known at least below q^(n_max + 1).
///
/// Built by the recursive procedure: element m is psi * element(m-1) with
/// the coefficients of q^t, -m < t <= gap, cleared against earlier elements.
/// The clearing coefficients are recorded so the psi-polynomials can be
/// rebuilt on demand without carrying them through the ladder.
class Ladder {
 public:
  static Ladder build(int level, int k, Space space, Exponent m_max, Exponent n_max);

  int level() const noexcept { return level_; }
  int weight() const noexcept { return weight_; }
  Space space() const noexcept { return space_; }
  Exponent gap() const noexcept { return gap_; }
  Exponent m_min() const noexcept { return -gap_; }
  Exponent m_max() const noexcept { return m_min() + static_cast<Exponent>(elements_.size()) - 1; }
  Exponent n_max() const noexcept { return n_max_; }
  bool covers(Exponent m, Exponent n) const noexcept { return m <= m_max() && n <= n_max_; }

  // Throws IndexBelowRange / std::out_of_range.
  const QSeries& expansion(Exponent m) const;
  std::vector<BigRational> haupt_poly(Exponent m) const;
  BasisElement element(Exponent m) const;

  // Integer coefficient of q^n in element m. Throws IntegralityViolation on
  // a non-integral value and PrecisionExceeded past the known range.
  BigInt coefficient(Exponent m, Exponent n) const;

 private:
  friend class BasisCache;
  friend Ladder ladder_from_json(std::string_view text);
  friend std::string ladder_to_json(const Ladder& ladder);
  int level_ = 0;
  int weight_ = 0;
  Space space_ = Space::M;
  Exponent gap_ = 0;
  Exponent n_max_ = 0;
  std::vector<QSeries> elements_;
  // reductions_[i][j]: multiple of element (m_min + j) subtracted at step
  // m = m_min + i (empty for the first element).
  std::vector<std::vector<BigRational>> reductions_;
  std::vector<BigRational> first_poly_;
};

struct LadderKey {
  int level = 0;
  int weight = 0;
  Space space = Space::M;
  auto operator<=>(const LadderKey&) const = default;
};

/// Thread-safe memo of ladders. A request beyond the stored range rebuilds
/// the ladder with larger bounds (never smaller); readers keep the snapshot
/// they obtained. Optional persistence to a directory of versioned JSON files.
class BasisCache {
 public:
  BasisCache() = default;
  explicit BasisCache(std::filesystem::path dir);

  // Ladder covering indices up to m_max and coefficients up to q^n_max.
  std::shared_ptr<const Ladder> ladder(int level, int k, Space space, Exponent m_max,
                                       Exponent n_max);

  // Writes ladders built or extended since the last load/save to the cache
  // directory (no-op without one).
  void save();
  // Loads matching files from the cache directory; returns how many ladders
  // were loaded. Files with another format or fixture version are skipped.
  std::size_t load();
  void clear();
  std::vector<LadderKey> keys() const;
  const std::optional<std::filesystem::path>& directory() const noexcept { return dir_; }
  // Not synchronized with concurrent save()/load(); set it up front.
  void set_directory(std::optional<std::filesystem::path> dir) { dir_ = std::move(dir); }

  static BasisCache& global();

 private:
  struct Slot {
    std::mutex build;
    std::shared_ptr<const Ladder> ladder;
    bool dirty = false;  // not yet persisted
  };
  Slot& slot(const LadderKey& key);

  std::optional<std::filesystem::path> dir_;
  mutable std::mutex mutex_;
  std::map<LadderKey, std::unique_ptr<Slot>> slots_;
};

// Serialization of a ladder as a JSON document (exact coefficient strings).
std::string ladder_to_json(const Ladder& ladder);
Ladder ladder_from_json(std::string_view text);

// Canonical basis elements through the global cache, known below q^prec.
// Throws IndexBelowRange if m < -gap.
BasisElement f_basis(int level, int k, Exponent m, Exponent prec);
BasisElement g_basis(int level, int k, Exponent m, Exponent prec);
BigInt a_coeff(int level, int k, Exponent m, Exponent n);
BigInt b_coeff(int level, int k, Exponent m, Exponent n);

// Same element by eliminating against first_element * psi^j instead of the
// earlier basis elements. Used to cross-check the ladder.
BasisElement f_basis_direct(int level, int k, Space space, Exponent m, Exponent prec);

struct HauptmodulDecomposition {
  std::vector<BigRational> coeffs;  // F = sum coeffs[i] psi^i + residual
  QSeries residual;                 // valuation > gap for a genuine polynomial
};

// Peels the pole of F against powers of psi = q^-1 + O(1). Throws
// InsufficientPrecision if F or psi is not known far enough to fix every
// coefficient and to check the residual through q^gap.
HauptmodulDecomposition decompose_in_hauptmodul(const QSeries& F, const QSeries& psi,
                                                Exponent gap = 0);

}  // namespace modbasis

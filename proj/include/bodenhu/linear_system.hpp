#pragma once

// Exact feasibility of small linear systems with equalities, strict and
// non-strict inequalities over the rationals. Rows are scaled to integer data;
// equalities are brought to reduced echelon form and substituted, the remaining
// inequalities go through Fourier-Motzkin with per-row strictness. A witness is
// rebuilt by back-substitution, taking midpoints of the final intervals.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <type_traits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bodenhu/error.hpp"
#include "bodenhu/rational.hpp"

namespace bodenhu {

using Int = std::int64_t;

enum class Relation { equal, less, less_equal };

struct LinearConstraint {
  std::vector<Rational> coeffs;
  Relation relation;
  Rational rhs;
};

/// Conjunction of constraints coeffs . x (=|<|<=) rhs over n_vars unknowns.
class LinearSystem {
 public:
  explicit LinearSystem(std::size_t n_vars) : n_vars_(n_vars) {}

  std::size_t n_vars() const noexcept { return n_vars_; }
  const std::vector<LinearConstraint>& constraints() const noexcept { return constraints_; }

  void add(std::vector<Rational> coeffs, Relation rel, Rational rhs) {
    if (coeffs.size() != n_vars_)
      throw DimensionMismatch("constraint has " + std::to_string(coeffs.size()) + " coefficients, system has " +
                              std::to_string(n_vars_) + " variables");
    constraints_.push_back({std::move(coeffs), rel, std::move(rhs)});
  }
  void add_equality(std::vector<Rational> coeffs, Rational rhs) { add(std::move(coeffs), Relation::equal, std::move(rhs)); }
  void add_strict(std::vector<Rational> coeffs, Rational rhs) { add(std::move(coeffs), Relation::less, std::move(rhs)); }
  void add_non_strict(std::vector<Rational> coeffs, Rational rhs) {
    add(std::move(coeffs), Relation::less_equal, std::move(rhs));
  }

  bool satisfied_by(std::span<const Rational> x) const {
    if (x.size() != n_vars_) return false;
    for (const auto& c : constraints_) {
      Rational lhs = 0;
      for (std::size_t j = 0; j < n_vars_; ++j)
        if (!c.coeffs[j].is_zero()) lhs += c.coeffs[j] * x[j];
      switch (c.relation) {
        case Relation::equal:
          if (lhs != c.rhs) return false;
          break;
        case Relation::less:
          if (!(lhs < c.rhs)) return false;
          break;
        case Relation::less_equal:
          if (!(lhs <= c.rhs)) return false;
          break;
      }
    }
    return true;
  }

 private:
  std::size_t n_vars_;
  std::vector<LinearConstraint> constraints_;
};

using WitnessPoint = std::vector<Rational>;

namespace detail {

struct Overflow {};

inline Int checked_mul(Int a, Int b) {
  Int r;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline Int checked_add(Int a, Int b) {
  Int r;
  if (__builtin_add_overflow(a, b, &r)) throw Overflow{};
  return r;
}
inline BigInt checked_mul(const BigInt& a, const BigInt& b) { return a * b; }
inline BigInt checked_add(const BigInt& a, const BigInt& b) { return a + b; }

inline Int gcd_abs(Int a, Int b) {
  if (a == std::numeric_limits<Int>::min() || b == std::numeric_limits<Int>::min()) throw Overflow{};
  return std::gcd(a, b);
}

inline BigInt gcd_abs(BigInt a, BigInt b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    BigInt t = a % b;
    a = std::move(b);
    b = std::move(t);
  }
  return a;
}

inline int sign_of(Int v) { return (v > 0) - (v < 0); }
inline int sign_of(const BigInt& v) { return v.sign(); }
inline Rational to_rational(Int v) { return Rational(v); }
inline Rational to_rational(const BigInt& v) { return Rational(v); }

// coeffs . x (< | <=) rhs, or = rhs for equalities; integer data.
template <class T>
struct IntRow {
  std::vector<T> coeffs;
  T rhs;
  bool strict;
};

template <class T>
bool is_zero_row(const IntRow<T>& row) {
  return std::all_of(row.coeffs.begin(), row.coeffs.end(), [](const T& c) { return c == 0; });
}

// Divides by the gcd of the coefficients (positive scaling). For inequalities the
// rhs becomes floor(rhs / g) when non-strict; a strict row with integer data
// keeps its exact quotient only when divisible, otherwise it stays unscaled.
template <class T>
void normalize(IntRow<T>& row) {
  T g = 0;
  for (const auto& c : row.coeffs)
    if (c != 0) g = gcd_abs(g, c);
  if (g == 0 || g == 1) return;
  if (row.rhs % g != 0) return;
  for (auto& c : row.coeffs) c /= g;
  row.rhs /= g;
}

// row += factor * other  (factor applied to every entry).
template <class T>
void add_scaled(IntRow<T>& row, const T& scale_row, const IntRow<T>& other, const T& factor) {
  for (std::size_t j = 0; j < row.coeffs.size(); ++j)
    row.coeffs[j] = checked_add(checked_mul(row.coeffs[j], scale_row), checked_mul(other.coeffs[j], factor));
  row.rhs = checked_add(checked_mul(row.rhs, scale_row), checked_mul(other.rhs, factor));
}

// Keeps the tightest row per coefficient vector; false when a constant row is violated.
template <class T>
bool reduce(std::vector<IntRow<T>>& rows) {
  std::map<std::vector<T>, std::size_t> best;
  std::vector<IntRow<T>> out;
  out.reserve(rows.size());
  for (auto& row : rows) {
    if (is_zero_row(row)) {
      if (row.strict ? !(0 < row.rhs) : !(0 <= row.rhs)) return false;
      continue;
    }
    normalize(row);
    auto [it, inserted] = best.try_emplace(row.coeffs, out.size());
    if (inserted) {
      out.push_back(std::move(row));
      continue;
    }
    auto& kept = out[it->second];
    if (row.rhs < kept.rhs || (row.rhs == kept.rhs && row.strict && !kept.strict)) {
      kept.rhs = row.rhs;
      kept.strict = row.strict;
    }
  }
  rows = std::move(out);
  return true;
}

template <class T>
struct EliminationStage {
  std::size_t var;
  std::vector<IntRow<T>> bounding;  // rows with a nonzero coefficient on var
};

template <class T>
std::optional<WitnessPoint> fourier_motzkin(std::vector<IntRow<T>> eqs, std::vector<IntRow<T>> rows, std::size_t n) {
  // Reduced row echelon form of the equalities, fraction-free, positive pivots.
  std::vector<std::pair<std::size_t, IntRow<T>>> pivots;
  for (auto& eq : eqs) {
    for (const auto& [var, prow] : pivots) {
      const T c = eq.coeffs[var];
      if (c != 0) add_scaled(eq, prow.coeffs[var], prow, T(-c));
    }
    normalize(eq);
    std::size_t pivot = n;
    for (std::size_t j = n; j-- > 0;)
      if (eq.coeffs[j] != 0) {
        pivot = j;
        break;
      }
    if (pivot == n) {
      if (eq.rhs != 0) return std::nullopt;
      continue;
    }
    if (eq.coeffs[pivot] < 0) {
      for (auto& c : eq.coeffs) c = -c;
      eq.rhs = -eq.rhs;
    }
    for (auto& [var, prow] : pivots) {
      const T c = prow.coeffs[pivot];
      if (c != 0) {
        add_scaled(prow, eq.coeffs[pivot], eq, T(-c));
        normalize(prow);
      }
    }
    pivots.emplace_back(pivot, std::move(eq));
  }

  std::vector<bool> eliminated(n, false);
  for (auto& row : rows)
    for (const auto& [var, prow] : pivots) {
      const T c = row.coeffs[var];
      if (c != 0) add_scaled(row, prow.coeffs[var], prow, T(-c));  // pivot coefficient is positive
    }
  for (const auto& [var, prow] : pivots) eliminated[var] = true;
  if (!reduce(rows)) return std::nullopt;

  std::vector<EliminationStage<T>> stages;
  for (std::size_t left = static_cast<std::size_t>(std::count(eliminated.begin(), eliminated.end(), false)); left > 0;
       --left) {
    std::size_t var = n;
    long best_cost = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (eliminated[j]) continue;
      long pos = 0, neg = 0;
      for (const auto& r : rows) {
        const int sg = sign_of(r.coeffs[j]);
        pos += sg > 0;
        neg += sg < 0;
      }
      const long cost = pos * neg - pos - neg;
      if (var == n || cost < best_cost) {
        var = j;
        best_cost = cost;
      }
    }
    eliminated[var] = true;

    std::vector<IntRow<T>> pos, neg, next;
    EliminationStage<T> stage{var, {}};
    for (auto& r : rows) {
      const int sg = sign_of(r.coeffs[var]);
      if (sg == 0) {
        next.push_back(std::move(r));
        continue;
      }
      stage.bounding.push_back(r);
      (sg > 0 ? pos : neg).push_back(std::move(r));
    }
    for (const auto& p : pos)
      for (const auto& q : neg) {
        IntRow<T> combined = p;
        combined.strict = p.strict || q.strict;
        add_scaled(combined, T(-q.coeffs[var]), q, p.coeffs[var]);
        next.push_back(std::move(combined));
      }
    rows = std::move(next);
    if (!reduce(rows)) return std::nullopt;
    stages.push_back(std::move(stage));
  }

  WitnessPoint x(n, Rational(0));
  for (auto it = stages.rbegin(); it != stages.rend(); ++it) {
    const std::size_t var = it->var;
    std::optional<Rational> lo, hi;
    for (const auto& r : it->bounding) {
      Rational rest = to_rational(r.rhs);
      for (std::size_t j = 0; j < n; ++j)
        if (j != var && r.coeffs[j] != 0) rest -= to_rational(r.coeffs[j]) * x[j];
      const Rational bound = rest / to_rational(r.coeffs[var]);
      if (sign_of(r.coeffs[var]) > 0) {
        if (!hi || bound < *hi) hi = bound;
      } else if (!lo || bound > *lo) {
        lo = bound;
      }
    }
    if (lo && hi)
      x[var] = (*lo == *hi) ? *lo : (*lo + *hi) / Rational(2);
    else if (lo)
      x[var] = *lo + Rational(1);
    else if (hi)
      x[var] = *hi - Rational(1);
  }
  for (const auto& [var, prow] : pivots) {
    Rational v = to_rational(prow.rhs);
    for (std::size_t j = 0; j < n; ++j)
      if (j != var && prow.coeffs[j] != 0) v -= to_rational(prow.coeffs[j]) * x[j];
    x[var] = v / to_rational(prow.coeffs[var]);
  }
  return x;
}

// Scales a rational constraint to coprime integer data.
inline std::pair<std::vector<BigInt>, BigInt> integral_row(const LinearConstraint& c) {
  BigInt lcm = c.rhs.denominator();
  for (const auto& v : c.coeffs) {
    const BigInt d = v.denominator();
    lcm = lcm / gcd_abs(lcm, d) * d;
  }
  std::vector<BigInt> coeffs;
  coeffs.reserve(c.coeffs.size());
  for (const auto& v : c.coeffs) coeffs.push_back(v.numerator() * (lcm / v.denominator()));
  return {std::move(coeffs), c.rhs.numerator() * (lcm / c.rhs.denominator())};
}

template <class T>
void split_rows(const LinearSystem& sys, std::vector<IntRow<T>>& eqs, std::vector<IntRow<T>>& rows) {
  const BigInt lim = std::numeric_limits<Int>::max() / 4;
  for (const auto& c : sys.constraints()) {
    auto [coeffs, rhs] = integral_row(c);
    IntRow<T> row;
    if constexpr (std::is_same_v<T, Int>) {
      auto narrow = [&](const BigInt& v) {
        if (v > lim || v < -lim) throw Overflow{};
        return v.convert_to<Int>();
      };
      for (const auto& v : coeffs) row.coeffs.push_back(narrow(v));
      row.rhs = narrow(rhs);
    } else {
      row.coeffs = std::move(coeffs);
      row.rhs = std::move(rhs);
    }
    row.strict = c.relation == Relation::less;
    (c.relation == Relation::equal ? eqs : rows).push_back(std::move(row));
  }
}

template <class T>
std::optional<WitnessPoint> solve_as(const LinearSystem& sys) {
  std::vector<IntRow<T>> eqs, rows;
  split_rows(sys, eqs, rows);
  return fourier_motzkin(std::move(eqs), std::move(rows), sys.n_vars());
}

}  // namespace detail

/// Returns a rational point satisfying every constraint of `sys`, or nullopt when none exists.
/// Deterministic: the same system always yields the same witness. Runs in 64-bit
/// integers and repeats in arbitrary precision if an intermediate overflows.
inline std::optional<WitnessPoint> feasible(const LinearSystem& sys) {
  std::optional<WitnessPoint> x;
  try {
    x = detail::solve_as<Int>(sys);
  } catch (const detail::Overflow&) {
    x = detail::solve_as<BigInt>(sys);
  }
  if (x && !sys.satisfied_by(*x)) throw std::logic_error("Fourier-Motzkin witness fails its own system");
  return x;
}

}  // namespace bodenhu

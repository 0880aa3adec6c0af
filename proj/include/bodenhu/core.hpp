#pragma once

// Value types for weights and multiplicity vectors, and the closed-form
// integer and rational forms built on them (parabolic degree, the
// antisymmetric form Delta, Hom degrees, H^1 dimensions).

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "bodenhu/error.hpp"
#include "bodenhu/rational.hpp"

namespace bodenhu {

using Int = std::int64_t;

/// Bit n-1 of a support mask stands for weight index n.
using SupportMask = std::uint32_t;

inline int popcount(SupportMask mask) { return __builtin_popcount(mask); }

/// 1-based indices of the set bits of `mask`.
inline std::vector<int> mask_indices(SupportMask mask) {
  std::vector<int> out;
  for (int i = 0; mask != 0; ++i, mask >>= 1)
    if (mask & 1u) out.push_back(i + 1);
  return out;
}

inline SupportMask full_mask(int n) { return n >= 32 ? ~SupportMask{0} : (SupportMask{1} << n) - 1; }

/// (r, d, m_1, ..., m_N): rank, underlying degree, multiplicities.
/// The rank is not stored independently; it is always the multiplicity sum.
class MultiplicityVector {
 public:
  MultiplicityVector(Int degree, std::vector<Int> mults) : degree_(degree), mults_(std::move(mults)) {
    rank_ = 0;
    for (Int m : mults_) {
      if (m < 0) throw InvalidArgument("multiplicities must be nonnegative");
      rank_ += m;
    }
    if (rank_ <= 0) throw InvalidArgument("multiplicity vector must have positive rank");
  }

  /// 0/1 multiplicity vector with ones exactly on `support`.
  static MultiplicityVector from_support(int n, Int degree, SupportMask support) {
    if (n <= 0 || n > 31) throw InvalidArgument("N out of range for a support mask");
    if ((support & ~full_mask(n)) != 0) throw InvalidArgument("support mask exceeds N");
    std::vector<Int> m(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i)
      if (support & (SupportMask{1} << i)) m[static_cast<std::size_t>(i)] = 1;
    return MultiplicityVector(degree, std::move(m));
  }

  static MultiplicityVector from_indices(int n, Int degree, std::initializer_list<int> one_based) {
    SupportMask mask = 0;
    for (int i : one_based) {
      if (i < 1 || i > n) throw InvalidArgument("support index out of range");
      mask |= SupportMask{1} << (i - 1);
    }
    return from_support(n, degree, mask);
  }

  Int rank() const noexcept { return rank_; }
  Int degree() const noexcept { return degree_; }
  int size() const noexcept { return static_cast<int>(mults_.size()); }
  const std::vector<Int>& mults() const noexcept { return mults_; }
  Int operator[](int n) const { return mults_.at(static_cast<std::size_t>(n)); }

  bool is_zero_one() const {
    return std::all_of(mults_.begin(), mults_.end(), [](Int m) { return m == 0 || m == 1; });
  }

  SupportMask support_mask() const {
    if (!is_zero_one()) throw InvalidArgument("support mask requires 0/1 multiplicities");
    SupportMask mask = 0;
    for (int i = 0; i < size(); ++i)
      if (mults_[static_cast<std::size_t>(i)] == 1) mask |= SupportMask{1} << i;
    return mask;
  }

  std::vector<int> support() const {
    std::vector<int> out;
    for (int i = 0; i < size(); ++i)
      if (mults_[static_cast<std::size_t>(i)] != 0) out.push_back(i + 1);
    return out;
  }

  friend MultiplicityVector operator+(const MultiplicityVector& a, const MultiplicityVector& b) {
    check_same_size(a, b);
    std::vector<Int> m(a.mults_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] += b.mults_[i];
    return MultiplicityVector(a.degree_ + b.degree_, std::move(m));
  }

  /// Componentwise difference; throws if a multiplicity turns negative or the rank vanishes.
  friend MultiplicityVector operator-(const MultiplicityVector& a, const MultiplicityVector& b) {
    check_same_size(a, b);
    std::vector<Int> m(a.mults_);
    for (std::size_t i = 0; i < m.size(); ++i) m[i] -= b.mults_[i];
    return MultiplicityVector(a.degree_ - b.degree_, std::move(m));
  }

  friend bool operator==(const MultiplicityVector&, const MultiplicityVector&) = default;
  friend auto operator<=>(const MultiplicityVector&, const MultiplicityVector&) = default;

  std::string str() const {
    std::ostringstream os;
    os << "(" << rank_ << ", " << degree_;
    for (Int m : mults_) os << ", " << m;
    os << ")";
    return os.str();
  }

  static void check_same_size(const MultiplicityVector& a, const MultiplicityVector& b) {
    if (a.size() != b.size())
      throw DimensionMismatch("multiplicity vectors of lengths " + std::to_string(a.size()) + " and " +
                              std::to_string(b.size()));
  }

 private:
  Int rank_ = 0;
  Int degree_ = 0;
  std::vector<Int> mults_;
};

/// True iff 0 < x_1 < ... < x_N < 1 and the entries sum to `s`.
inline bool in_weight_space(std::span<const Rational> x, Int s) {
  if (x.empty()) return false;
  if (x.front() <= Rational(0) || x.back() >= Rational(1)) return false;
  for (std::size_t i = 1; i < x.size(); ++i)
    if (!(x[i - 1] < x[i])) return false;
  Rational sum = 0;
  for (const auto& v : x) sum += v;
  return sum == Rational(s);
}

/// A point of the open weight space W(N, s): strictly increasing rationals in (0, 1) with integer sum s, 0 < s < N.
class WeightVector {
 public:
  /// The weight sum is derived and must be an integer.
  explicit WeightVector(std::vector<Rational> entries) : entries_(std::move(entries)) {
    Rational sum = 0;
    for (const auto& v : entries_) sum += v;
    if (!sum.is_integer()) throw InvalidArgument("weight sum " + sum.str() + " is not an integer");
    s_ = sum.to_int64();
    validate();
  }

  WeightVector(std::vector<Rational> entries, Int s) : entries_(std::move(entries)), s_(s) { validate(); }

  /// Comma-separated rationals, whitespace around entries allowed.
  static WeightVector parse(std::string_view text) { return WeightVector(parse_entries(text)); }
  static WeightVector parse(std::string_view text, Int s) { return WeightVector(parse_entries(text), s); }

  static std::vector<Rational> parse_entries(std::string_view text) {
    std::vector<Rational> out;
    std::size_t pos = 0;
    while (true) {
      auto comma = text.find(',', pos);
      auto item = text.substr(pos, comma == std::string_view::npos ? std::string_view::npos : comma - pos);
      while (!item.empty() && std::isspace(static_cast<unsigned char>(item.front()))) item.remove_prefix(1);
      while (!item.empty() && std::isspace(static_cast<unsigned char>(item.back()))) item.remove_suffix(1);
      out.push_back(Rational::parse(item));
      if (comma == std::string_view::npos) break;
      pos = comma + 1;
    }
    return out;
  }

  int size() const noexcept { return static_cast<int>(entries_.size()); }
  Int weight_sum() const noexcept { return s_; }
  const Rational& operator[](int n) const { return entries_.at(static_cast<std::size_t>(n)); }
  std::span<const Rational> entries() const noexcept { return entries_; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;

  std::string str() const {
    std::string out;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
      if (i) out += ",";
      out += entries_[i].str();
    }
    return out;
  }

 private:
  void validate() const {
    const Int n = static_cast<Int>(entries_.size());
    if (n == 0) throw InvalidArgument("empty weight vector");
    if (s_ <= 0 || s_ >= n)
      throw InvalidArgument("weight sum s = " + std::to_string(s_) + " must satisfy 0 < s < N = " + std::to_string(n));
    if (!in_weight_space(entries_, s_))
      throw InvalidArgument("weights " + str() + " are not strictly increasing in (0,1) with sum " +
                            std::to_string(s_));
  }

  std::vector<Rational> entries_;
  Int s_ = 0;
};

/// Global data (N, s, g); fixes the distinguished vector (N, -s, 1, ..., 1).
struct ModuliContext {
  int n;
  Int s;
  Int genus = 2;

  ModuliContext(int n_, Int s_, Int genus_ = 2) : n(n_), s(s_), genus(genus_) {
    if (n <= 0) throw InvalidArgument("N must be positive");
    if (n > 31) throw InvalidArgument("N above 31 is not representable");
    if (s <= 0 || s >= n) throw InvalidArgument("s must satisfy 0 < s < N");
    if (genus < 2) throw InvalidArgument("genus must be at least 2");
  }

  MultiplicityVector one_vector() const { return MultiplicityVector::from_support(n, -s, full_mask(n)); }
};

inline void check_same_size(const MultiplicityVector& m, const WeightVector& alpha) {
  if (m.size() != alpha.size())
    throw DimensionMismatch("multiplicity vector of length " + std::to_string(m.size()) +
                            " against weight vector of length " + std::to_string(alpha.size()));
}

/// Parabolic degree d + sum m_n alpha_n.
inline Rational deg_alpha(const MultiplicityVector& m, const WeightVector& alpha) {
  check_same_size(m, alpha);
  Rational out = m.degree();
  for (int n = 0; n < m.size(); ++n)
    if (m[n] != 0) out += Rational(m[n]) * alpha[n];
  return out;
}

namespace detail {

// sum_{a<b} x_a y_b, in O(N).
inline Int ordered_cross(const std::vector<Int>& x, const std::vector<Int>& y) {
  Int prefix = 0, out = 0;
  for (std::size_t b = 0; b < x.size(); ++b) {
    out += prefix * y[b];
    prefix += x[b];
  }
  return out;
}

}  // namespace detail

/// Delta(m, m') = 2 r d' + sum_{a<b} m_a m'_b - 2 r' d - sum_{b<a} m_a m'_b.
inline Int delta(const MultiplicityVector& m, const MultiplicityVector& mp) {
  MultiplicityVector::check_same_size(m, mp);
  return 2 * m.rank() * mp.degree() + detail::ordered_cross(m.mults(), mp.mults()) - 2 * mp.rank() * m.degree() -
         detail::ordered_cross(mp.mults(), m.mults());
}

/// Sum of Delta over index pairs l1 < l2.
inline Int delta_seq(std::span<const MultiplicityVector> ms) {
  if (ms.size() < 2) throw InvalidArgument("delta_seq needs at least two multiplicity vectors");
  Int out = 0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) out += delta(ms[i], ms[j]);
  return out;
}

/// (r, -r - d, m_N, ..., m_1).
inline MultiplicityVector dual_mult(const MultiplicityVector& m) {
  std::vector<Int> rev(m.mults().rbegin(), m.mults().rend());
  return MultiplicityVector(-m.rank() - m.degree(), std::move(rev));
}

/// (1 - alpha_N, ..., 1 - alpha_1), a point of W(N, N - s).
inline WeightVector dual_weight(const WeightVector& alpha) {
  std::vector<Rational> out;
  out.reserve(static_cast<std::size_t>(alpha.size()));
  for (int n = alpha.size() - 1; n >= 0; --n) out.push_back(Rational(1) - alpha[n]);
  return WeightVector(std::move(out), alpha.size() - alpha.weight_sum());
}

/// Degree of the sheaf of morphisms: r d' - r' d - sum_{b<a} m_a m'_b.
inline Int hom_degree(const MultiplicityVector& m, const MultiplicityVector& mp) {
  MultiplicityVector::check_same_size(m, mp);
  return m.rank() * mp.degree() - mp.rank() * m.degree() - detail::ordered_cross(mp.mults(), m.mults());
}

inline Int pointwise_product(const MultiplicityVector& m, const MultiplicityVector& mp) {
  MultiplicityVector::check_same_size(m, mp);
  return std::inner_product(m.mults().begin(), m.mults().end(), mp.mults().begin(), Int{0});
}

inline void require_genus(Int g) {
  if (g < 2) throw InvalidArgument("genus must be at least 2, got " + std::to_string(g));
}

/// dim H^1 of Hom(E, E') under Hom-vanishing: (g - 1/2) r r' - sum m_n m'_n / 2 - Delta / 2.
inline Rational h1_dim(const MultiplicityVector& m, const MultiplicityVector& mp, Int g) {
  require_genus(g);
  const Int twice = (2 * g - 1) * m.rank() * mp.rank() - pointwise_product(m, mp) - delta(m, mp);
  return Rational(BigInt(twice), BigInt(2));
}

}  // namespace bodenhu

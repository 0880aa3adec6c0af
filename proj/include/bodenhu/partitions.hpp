#pragma once

// Decompositions of the distinguished vector (N, -s, 1, ..., 1) into
// degree-zero 0/1 summands, and stability of their orderings.
//
// Enumeration order is canonical throughout: blocks inside a partition are
// sorted by support mask (for disjoint supports this is the order of their
// largest elements), partitions are ordered lexicographically by that mask
// tuple, and degree assignments lexicographically for a fixed tuple.

#include <algorithm>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bodenhu/core.hpp"
#include "bodenhu/linear_system.hpp"
#include "bodenhu/weightspace.hpp"

namespace bodenhu {

/// Unordered decomposition into 0/1 blocks of rank >= 2 with -r < d < 0, stored in mask order.
class Partition {
 public:
  explicit Partition(std::vector<MultiplicityVector> blocks) : blocks_(std::move(blocks)) {
    if (blocks_.empty()) throw InvalidArgument("partition without blocks");
    const int n = blocks_.front().size();
    SupportMask covered = 0;
    for (const auto& b : blocks_) {
      if (b.size() != n) throw DimensionMismatch("partition blocks of different lengths");
      if (!b.is_zero_one()) throw InvalidArgument("partition block " + b.str() + " is not 0/1");
      if (b.rank() < 2) throw InvalidArgument("partition block " + b.str() + " has rank below 2");
      if (!(-b.rank() < b.degree() && b.degree() < 0))
        throw InvalidArgument("partition block " + b.str() + " needs -r < d < 0");
      const SupportMask mask = b.support_mask();
      if (covered & mask) throw InvalidArgument("partition blocks overlap");
      covered |= mask;
    }
    if (covered != full_mask(n)) throw InvalidArgument("partition blocks do not cover every index");
    std::sort(blocks_.begin(), blocks_.end(),
              [](const auto& a, const auto& b) { return a.support_mask() < b.support_mask(); });
  }

  const std::vector<MultiplicityVector>& blocks() const noexcept { return blocks_; }
  const MultiplicityVector& operator[](std::size_t i) const { return blocks_.at(i); }
  std::size_t length() const noexcept { return blocks_.size(); }
  int n() const noexcept { return blocks_.front().size(); }

  Int weight_sum() const {
    Int s = 0;
    for (const auto& b : blocks_) s -= b.degree();
    return s;
  }

  std::vector<SupportMask> supports() const {
    std::vector<SupportMask> out;
    for (const auto& b : blocks_) out.push_back(b.support_mask());
    return out;
  }

  friend bool operator==(const Partition&, const Partition&) = default;

 private:
  std::vector<MultiplicityVector> blocks_;
};

/// A partition together with an order of its blocks.
class OrderedPartition {
 public:
  explicit OrderedPartition(std::vector<MultiplicityVector> seq) : seq_(std::move(seq)) { (void)Partition(seq_); }

  OrderedPartition(const Partition& p, std::span<const std::size_t> order) {
    if (order.size() != p.length()) throw InvalidArgument("order length differs from partition length");
    std::vector<bool> seen(order.size(), false);
    for (std::size_t i : order) {
      if (i >= order.size() || seen[i]) throw InvalidArgument("order is not a permutation");
      seen[i] = true;
      seq_.push_back(p[i]);
    }
  }

  const std::vector<MultiplicityVector>& seq() const noexcept { return seq_; }
  const MultiplicityVector& operator[](std::size_t i) const { return seq_.at(i); }
  std::size_t length() const noexcept { return seq_.size(); }
  Partition partition() const { return Partition(seq_); }

  std::string str() const {
    std::string out;
    for (const auto& m : seq_) out += (out.empty() ? "" : " ") + m.str();
    return out;
  }

  /// (m^{l+1}, ..., m^L, m^1, ..., m^l).
  OrderedPartition rotated(std::size_t l) const {
    std::vector<MultiplicityVector> out(seq_);
    std::rotate(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(l % out.size()), out.end());
    return OrderedPartition(std::move(out));
  }

  friend bool operator==(const OrderedPartition&, const OrderedPartition&) = default;

 private:
  std::vector<MultiplicityVector> seq_;
};

namespace detail {

// Next subset of `set` above `sub` in increasing numeric order; 0 after the last.
inline SupportMask next_subset(SupportMask sub, SupportMask set) { return ((sub | ~set) + 1) & set; }

inline SupportMask highest_bit(SupportMask m) { return SupportMask{1} << (31 - __builtin_clz(m)); }

template <class BlockOk, class Fn>
bool support_partitions_rec(SupportMask remaining, SupportMask prev, std::size_t min_len,
                            std::vector<SupportMask>& blocks, BlockOk& block_ok, Fn& fn) {
  if (remaining == 0) return blocks.size() >= min_len ? fn(std::span<const SupportMask>(blocks)) : true;
  if (blocks.size() + static_cast<std::size_t>(popcount(remaining)) / 2 < min_len) return true;
  for (SupportMask sub = next_subset(0, remaining); sub != 0; sub = next_subset(sub, remaining)) {
    if (sub < prev || popcount(sub) < 2) continue;
    const SupportMask rest = remaining & ~sub;
    // Later blocks need a larger mask, so the rest must reach above sub's top element.
    if (rest != 0 && (popcount(rest) < 2 || rest < (highest_bit(sub) << 1))) continue;
    if (!block_ok(sub)) continue;
    blocks.push_back(sub);
    const bool go_on = support_partitions_rec(rest, sub, min_len, blocks, block_ok, fn);
    blocks.pop_back();
    if (!go_on) return false;
  }
  return true;
}

}  // namespace detail

/// Visits every set partition of {1..N} into blocks of size >= 2 with at least
/// `min_len` blocks, as a mask-sorted tuple. `block_ok` prunes candidate blocks;
/// `fn` returns false to stop. Returns false iff stopped early.
template <class Fn, class BlockOk>
bool for_each_support_partition(int n, std::size_t min_len, Fn&& fn, BlockOk&& block_ok) {
  std::vector<SupportMask> blocks;
  return detail::support_partitions_rec(full_mask(n), SupportMask{0}, min_len, blocks, block_ok, fn);
}

template <class Fn>
bool for_each_support_partition(int n, std::size_t min_len, Fn&& fn) {
  return for_each_support_partition(n, min_len, std::forward<Fn>(fn), [](SupportMask) { return true; });
}

/// Visits degree tuples d_i in [-(r_i - 1), -1] with sum -s, lexicographically ascending.
template <class Fn>
bool for_each_degree_assignment(std::span<const Int> ranks, Int s, Fn&& fn) {
  const std::size_t len = ranks.size();
  std::vector<Int> deg(len);
  // suffix bounds on the achievable degree sum of blocks i..L-1
  std::vector<Int> lo(len + 1, 0), hi(len + 1, 0);
  for (std::size_t i = len; i-- > 0;) {
    lo[i] = lo[i + 1] - (ranks[i] - 1);
    hi[i] = hi[i + 1] - 1;
  }
  std::function<bool(std::size_t, Int)> rec = [&](std::size_t i, Int target) -> bool {
    if (i == len) return target == 0 ? fn(std::span<const Int>(deg)) : true;
    for (Int d = -(ranks[i] - 1); d <= -1; ++d) {
      const Int rest = target - d;
      if (rest < lo[i + 1] || rest > hi[i + 1]) continue;
      deg[i] = d;
      if (!rec(i + 1, rest)) return false;
    }
    return true;
  };
  return rec(0, -s);
}

inline std::vector<MultiplicityVector> blocks_from_shape(int n, std::span<const SupportMask> supports,
                                                         std::span<const Int> degrees) {
  std::vector<MultiplicityVector> out;
  for (std::size_t i = 0; i < supports.size(); ++i)
    out.push_back(MultiplicityVector::from_support(n, degrees[i], supports[i]));
  return out;
}

/// W(N, s) intersected with the block-sum hyperplanes of a partition shape.
inline LinearSystem shape_system(int n, Int s, std::span<const SupportMask> supports, std::span<const Int> degrees) {
  auto sys = weight_space_system(n, s);
  for (std::size_t i = 0; i < supports.size(); ++i) add_block_sum(sys, supports[i], -degrees[i]);
  return sys;
}

/// Visits every partition shape (supports + degrees) of length >= min_len, feasible or not.
template <class Fn>
bool for_each_partition_shape(const ModuliContext& ctx, std::size_t min_len, Fn&& fn, int cap = kDefaultCap) {
  require_within_cap(ctx.n, cap);
  return for_each_support_partition(ctx.n, min_len, [&](std::span<const SupportMask> supports) {
    std::vector<Int> ranks;
    for (auto m : supports) ranks.push_back(popcount(m));
    return for_each_degree_assignment(ranks, ctx.s, [&](std::span<const Int> degrees) { return fn(supports, degrees); });
  });
}

/// All alpha-partitions of length >= min_len, in canonical order.
inline std::vector<Partition> alpha_partitions(const WeightVector& alpha, std::size_t min_len, int cap = kDefaultCap) {
  const int n = alpha.size();
  require_within_cap(n, cap);
  const auto sums = detail::subset_sums(alpha.entries());
  std::vector<Partition> out;
  for_each_support_partition(
      n, min_len,
      [&](std::span<const SupportMask> supports) {
        std::vector<MultiplicityVector> blocks;
        for (auto m : supports) blocks.push_back(MultiplicityVector::from_support(n, -sums[m].to_int64(), m));
        out.emplace_back(std::move(blocks));
        return true;
      },
      [&](SupportMask m) { return sums[m].is_integer(); });
  return out;
}

/// Whether `p` is an alpha-partition: every block has alpha-degree zero.
inline bool is_alpha_partition(const Partition& p, const WeightVector& alpha) {
  return std::all_of(p.blocks().begin(), p.blocks().end(),
                     [&](const auto& b) { return deg_alpha(b, alpha).is_zero(); });
}

struct FeasiblePartition {
  Partition partition;
  WitnessPoint witness;  // some alpha in W(N, s) making `partition` an alpha-partition
};

/// Streams every partition shape of length >= min_len that is an alpha-partition
/// for some alpha in W(N, s), with a witness alpha. `fn` returns false to stop.
template <class Fn>
bool for_each_feasible_partition(const ModuliContext& ctx, std::size_t min_len, Fn&& fn, int cap = kDefaultCap) {
  return for_each_partition_shape(
      ctx, min_len,
      [&](std::span<const SupportMask> supports, std::span<const Int> degrees) {
        auto witness = feasible(shape_system(ctx.n, ctx.s, supports, degrees));
        if (!witness) return true;
        return fn(FeasiblePartition{Partition(blocks_from_shape(ctx.n, supports, degrees)), std::move(*witness)});
      },
      cap);
}

inline std::vector<FeasiblePartition> feasible_partitions(const ModuliContext& ctx, std::size_t min_len,
                                                          int cap = kDefaultCap) {
  std::vector<FeasiblePartition> out;
  for_each_feasible_partition(
      ctx, min_len,
      [&](FeasiblePartition fp) {
        out.push_back(std::move(fp));
        return true;
      },
      cap);
  return out;
}

namespace detail {

inline MultiplicityVector sum_of(std::span<const MultiplicityVector> seq) {
  if (seq.empty()) throw InvalidArgument("empty sequence");
  MultiplicityVector total = seq.front();
  for (std::size_t i = 1; i < seq.size(); ++i) total = total + seq[i];
  return total;
}

// deg_alpha(m^1 + ... + m^l) for l = 0..L-1.
inline std::vector<Rational> prefix_degrees(std::span<const MultiplicityVector> seq, const WeightVector& alpha) {
  std::vector<Rational> d{Rational(0)};
  for (std::size_t l = 0; l + 1 < seq.size(); ++l) d.push_back(d.back() + deg_alpha(seq[l], alpha));
  return d;
}

}  // namespace detail

/// Every proper prefix sum has strictly negative alpha-degree. Requires total alpha-degree zero.
inline bool is_alpha_stable_seq(std::span<const MultiplicityVector> seq, const WeightVector& alpha) {
  if (!deg_alpha(detail::sum_of(seq), alpha).is_zero())
    throw InvalidArgument("sequence has nonzero total alpha-degree");
  const auto d = detail::prefix_degrees(seq, alpha);
  return std::all_of(d.begin() + 1, d.end(), [](const Rational& x) { return x.sign() < 0; });
}

inline bool is_alpha_stable_seq(const OrderedPartition& seq, const WeightVector& alpha) {
  return is_alpha_stable_seq(std::span<const MultiplicityVector>(seq.seq()), alpha);
}

/// The unique l such that the rotation starting after m^l is beta-stable: the argmax of the prefix degrees.
inline std::size_t stable_rotation(std::span<const MultiplicityVector> seq, const WeightVector& beta) {
  const auto g = is_generic(beta);
  if (!g.generic) throw NotGeneric("weight vector lies on the wall of " + g.wall->str());
  const auto total = detail::sum_of(seq);
  const ModuliContext ctx(beta.size(), beta.weight_sum());
  if (total != ctx.one_vector()) throw InvalidArgument("sequence does not sum to the distinguished vector");
  const auto d = detail::prefix_degrees(seq, beta);
  return static_cast<std::size_t>(std::max_element(d.begin(), d.end()) - d.begin());
}

inline std::size_t stable_rotation(const OrderedPartition& seq, const WeightVector& beta) {
  return stable_rotation(std::span<const MultiplicityVector>(seq.seq()), beta);
}

}  // namespace bodenhu

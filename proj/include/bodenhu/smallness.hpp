#pragma once

// The combinatorial smallness criterion: a weight vector admits a small
// (semismall) resolution iff every ordered alpha-partition of length L >= 3
// has a cyclic rotation with Delta < L - 1 (<= L - 1).

#include <algorithm>
#include <numeric>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "bodenhu/core.hpp"
#include "bodenhu/partitions.hpp"
#include "bodenhu/weightspace.hpp"

namespace bodenhu {

enum class Mode { small, semismall };

inline std::string_view to_string(Mode mode) { return mode == Mode::small ? "small" : "semismall"; }

inline Mode parse_mode(std::string_view text) {
  if (text == "small") return Mode::small;
  if (text == "semismall") return Mode::semismall;
  throw ParseError("unknown mode '" + std::string(text) + "' (expected small or semismall)");
}

/// Delta of each cyclic rotation (m^{l+1}, ..., m^l), l = 0..L-1.
inline std::vector<Int> rotation_deltas(std::span<const MultiplicityVector> seq) {
  std::vector<Int> out;
  std::vector<MultiplicityVector> rot(seq.begin(), seq.end());
  for (std::size_t l = 0; l < seq.size(); ++l) {
    out.push_back(delta_seq(rot));
    std::rotate(rot.begin(), rot.begin() + 1, rot.end());
  }
  return out;
}

/// Some rotation has Delta < L - 1 (small) or <= L - 1 (semismall).
inline bool rotation_condition_holds(std::span<const Int> deltas, Mode mode) {
  const Int bound = static_cast<Int>(deltas.size()) - 1;
  return std::any_of(deltas.begin(), deltas.end(),
                     [&](Int d) { return mode == Mode::small ? d < bound : d <= bound; });
}

/// Orderings up to cyclic rotation: block 0 first, the rest in lexicographic permutation order.
template <class Fn>
bool for_each_necklace_order(std::size_t length, Fn&& fn) {
  std::vector<std::size_t> order(length);
  std::iota(order.begin(), order.end(), std::size_t{0});
  do {
    if (!fn(std::span<const std::size_t>(order))) return false;
  } while (length > 1 && std::next_permutation(order.begin() + 1, order.end()));
  return true;
}

struct OrderingAudit {
  std::vector<std::size_t> order;  // indices into the partition's blocks
  std::vector<Int> rotation_deltas;
  bool passes;
};

namespace detail {

// Pairwise Delta between the blocks of a partition.
class DeltaTable {
 public:
  explicit DeltaTable(std::span<const MultiplicityVector> blocks) : len_(blocks.size()), table_(len_ * len_) {
    for (std::size_t i = 0; i < len_; ++i)
      for (std::size_t j = 0; j < len_; ++j) table_[i * len_ + j] = delta(blocks[i], blocks[j]);
  }

  Int operator()(std::size_t i, std::size_t j) const { return table_[i * len_ + j]; }

  std::vector<Int> rotation_deltas(std::span<const std::size_t> order) const {
    std::vector<Int> out(len_, 0);
    for (std::size_t l = 0; l < len_; ++l)
      for (std::size_t p = 0; p < len_; ++p)
        for (std::size_t q = p + 1; q < len_; ++q) out[l] += (*this)(order[(l + p) % len_], order[(l + q) % len_]);
    return out;
  }

 private:
  std::size_t len_;
  std::vector<Int> table_;
};

}  // namespace detail

/// Every cyclic class of orderings of `p`, with its rotation Deltas.
inline std::vector<OrderingAudit> audit_orderings(const Partition& p, Mode mode) {
  detail::DeltaTable table(p.blocks());
  std::vector<OrderingAudit> out;
  for_each_necklace_order(p.length(), [&](std::span<const std::size_t> order) {
    auto deltas = table.rotation_deltas(order);
    const bool ok = rotation_condition_holds(deltas, mode);
    out.push_back({{order.begin(), order.end()}, std::move(deltas), ok});
    return true;
  });
  return out;
}

/// First ordering (canonical order) violating the rotation condition, if any.
inline std::optional<OrderingAudit> first_failing_ordering(std::span<const MultiplicityVector> blocks, Mode mode) {
  if (blocks.size() < 3) return std::nullopt;
  detail::DeltaTable table(blocks);
  std::optional<OrderingAudit> out;
  for_each_necklace_order(blocks.size(), [&](std::span<const std::size_t> order) {
    auto deltas = table.rotation_deltas(order);
    if (rotation_condition_holds(deltas, mode)) return true;
    out = OrderingAudit{{order.begin(), order.end()}, std::move(deltas), false};
    return false;
  });
  return out;
}

struct Witness {
  OrderedPartition ordering;
  std::vector<Int> rotation_deltas;
  std::optional<WeightVector> alpha;
};

/// holds == false exactly when a witness is present.
struct Verdict {
  bool holds;
  Mode mode;
  std::optional<Witness> witness;
};

struct PartitionAudit {
  Partition partition;
  std::vector<OrderingAudit> orderings;

  bool passes() const {
    return std::all_of(orderings.begin(), orderings.end(), [](const auto& o) { return o.passes; });
  }
};

struct CriterionReport {
  Verdict verdict;
  std::vector<PartitionAudit> partitions;  // every alpha-partition of length >= 3
};

/// Audits every alpha-partition of length >= 3; the witness is the first failing ordering.
inline CriterionReport audit_criterion(const WeightVector& alpha, Mode mode, int cap = kDefaultCap) {
  CriterionReport report{{true, mode, std::nullopt}, {}};
  for (auto& p : alpha_partitions(alpha, 3, cap)) {
    auto orderings = audit_orderings(p, mode);
    if (report.verdict.holds) {
      for (const auto& o : orderings)
        if (!o.passes) {
          report.verdict.holds = false;
          report.verdict.witness = Witness{OrderedPartition(p, o.order), o.rotation_deltas, alpha};
          break;
        }
    }
    report.partitions.push_back({std::move(p), std::move(orderings)});
  }
  return report;
}

inline Verdict check_criterion(const WeightVector& alpha, Mode mode, int cap = kDefaultCap) {
  for (auto& p : alpha_partitions(alpha, 3, cap)) {
    if (auto bad = first_failing_ordering(p.blocks(), mode))
      return {false, mode, Witness{OrderedPartition(p, bad->order), std::move(bad->rotation_deltas), alpha}};
  }
  return {true, mode, std::nullopt};
}

struct VerificationStats {
  std::size_t shapes = 0;          // partition shapes of length >= 3
  std::size_t failing_shapes = 0;  // shapes with an ordering violating the rotation condition
  std::size_t feasible_failing = 0;
};

/// Decides the criterion for every alpha in W(N, s) at once. A shape that fails
/// the rotation condition refutes the statement iff some alpha realises it, so
/// only failing shapes go to the feasibility solver. The reported witness is the
/// first failing feasible shape in canonical order, with its feasibility point.
inline Verdict verify_conjecture(const ModuliContext& ctx, Mode mode, int cap = kDefaultCap,
                                 VerificationStats* stats = nullptr) {
  VerificationStats local;
  std::optional<Witness> witness;
  for_each_partition_shape(
      ctx, 3,
      [&](std::span<const SupportMask> supports, std::span<const Int> degrees) {
        ++local.shapes;
        const auto blocks = blocks_from_shape(ctx.n, supports, degrees);
        auto bad = first_failing_ordering(blocks, mode);
        if (!bad) return true;
        ++local.failing_shapes;
        auto point = feasible(shape_system(ctx.n, ctx.s, supports, degrees));
        if (!point) return true;
        ++local.feasible_failing;
        Partition p(blocks);
        witness = Witness{OrderedPartition(p, bad->order), std::move(bad->rotation_deltas),
                          WeightVector(std::move(*point), ctx.s)};
        return false;
      },
      cap);
  if (stats) *stats = local;
  if (witness) return {false, mode, std::move(witness)};
  return {true, mode, std::nullopt};
}

enum class Classification { holds, fails };

inline std::string_view to_string(Classification c) { return c == Classification::holds ? "holds" : "fails"; }

/// Known answer for (N, s): holds for s in {1, 2, N-2, N-1}, for N <= 8, and for
/// N <= 10 with s in {3, N-3}; fails otherwise. Independent of the mode.
inline Classification classify(int n, Int s) {
  if (s <= 0 || s >= n) throw InvalidArgument("s must satisfy 0 < s < N");
  if (s <= 2 || s >= n - 2) return Classification::holds;
  if (n <= 8) return Classification::holds;
  if (n <= 10 && (s == 3 || s == n - 3)) return Classification::holds;
  return Classification::fails;
}

inline Classification classify(const ModuliContext& ctx) { return classify(ctx.n, ctx.s); }

// ---------------------------------------------------------------------------
// Explicit counterexamples.

struct Counterexample {
  int n;
  Int s;
  int construction;  // 1: three blocks near 0,1/3,2/3,1; 2: the s = 3 pattern
  Int t;             // block scale for construction 1
  bool dualized;     // built for N - s and transported by duality
  bool reference;    // hard-coded reference vector
  WeightVector alpha;
  OrderedPartition triple;
  std::vector<Int> rotation_deltas;
  std::vector<Int> expected_rotation_deltas;
};

namespace detail {

inline WeightVector reference_vector_9_4() {
  return WeightVector({Rational(BigInt(1), BigInt(15)), Rational(BigInt(2), BigInt(15)), Rational(BigInt(1), BigInt(7)),
                       Rational(BigInt(2), BigInt(7)), Rational(BigInt(4), BigInt(7)), Rational(BigInt(7), BigInt(12)),
                       Rational(BigInt(2), BigInt(3)), Rational(BigInt(3), BigInt(4)), Rational(BigInt(4), BigInt(5))},
                      4);
}

inline WeightVector reference_vector_11_3() {
  return WeightVector({Rational(BigInt(1), BigInt(26)), Rational(BigInt(1), BigInt(20)), Rational(BigInt(1), BigInt(15)),
                       Rational(BigInt(1), BigInt(12)), Rational(BigInt(2), BigInt(11)), Rational(BigInt(1), BigInt(5)),
                       Rational(BigInt(4), BigInt(11)), Rational(BigInt(5), BigInt(11)), Rational(BigInt(6), BigInt(13)),
                       Rational(BigInt(1), BigInt(2)), Rational(BigInt(3), BigInt(5))},
                      3);
}

inline SupportMask range_mask(int first, int last) {  // 1-based, inclusive
  SupportMask m = 0;
  for (int i = first; i <= last; ++i) m |= SupportMask{1} << (i - 1);
  return m;
}

inline SupportMask index_mask(std::initializer_list<int> one_based) {
  SupportMask m = 0;
  for (int i : one_based) m |= SupportMask{1} << (i - 1);
  return m;
}

// Offsets 2k - (len + 1), k = 1..len: strictly increasing, summing to zero.
inline Rational centered(int k, int len) { return Rational(2 * k - (len + 1)); }

inline OrderedPartition triple_blocks_three_groups(int n, Int s, Int t) {
  const int a = static_cast<int>(n - s - 3 * t);
  const int b = static_cast<int>(3 * t);
  return OrderedPartition({
      MultiplicityVector::from_support(n, 3 * t - s, range_mask(1, a) | range_mask(a + 2 * b + 1, n)),
      MultiplicityVector::from_support(n, -t, range_mask(a + 1, a + b)),
      MultiplicityVector::from_support(n, -2 * t, range_mask(a + b + 1, a + 2 * b)),
  });
}

// Groups: a weights near 0 (sum eps), 3t near 1/3 (sum t), 3t near 2/3 (sum 2t), rest near 1 (sum s - 3t - eps).
inline std::vector<Rational> three_groups_weights(int n, Int s, Int t, const Rational& eta) {
  const int a = static_cast<int>(n - s - 3 * t);
  const int b = static_cast<int>(3 * t);
  const int d = static_cast<int>(s - 3 * t);
  std::vector<Rational> x;
  Rational eps = 0;
  for (int k = 1; k <= a; ++k) {
    x.push_back(Rational(k) * eta);
    eps += x.back();
  }
  const Rational third(BigInt(1), BigInt(3));
  for (int k = 1; k <= b; ++k) x.push_back(third + centered(k, b) * eta);
  for (int k = 1; k <= b; ++k) x.push_back(Rational(2) * third + centered(k, b) * eta);
  for (int k = 1; k <= d; ++k)
    x.push_back(Rational(1) - eps / Rational(d) + centered(k, d) * eps / Rational(2 * d * d));
  return x;
}

inline OrderedPartition triple_blocks_s3(int n) {
  return OrderedPartition({
      MultiplicityVector::from_support(n, -1, range_mask(2, n - 7) | index_mask({n - 5, n})),
      MultiplicityVector::from_support(n, -1, index_mask({n - 6, n - 4, n - 3})),
      MultiplicityVector::from_support(n, -1, index_mask({1, n - 2, n - 1})),
  });
}

// s = 3: tiny weights 1..N-7, four near 1/3 with x_{N-6} + x_{N-4} + x_{N-3} = 1,
// two near 1/2 with sum 1 - x_1, and x_N = 1 - x_{N-5} - eps.
inline std::vector<Rational> s3_weights(int n, const Rational& eta) {
  std::vector<Rational> x;
  Rational eps = 0;
  for (int k = 1; k <= n - 7; ++k) {
    x.push_back(Rational(k) * eta);
    if (k >= 2) eps += x.back();
  }
  const Rational third(BigInt(1), BigInt(3));
  for (int c : {-3, -1, 1, 2}) x.push_back(third + Rational(c) * eta);
  const Rational half_rest = (Rational(1) - x[0]) / Rational(2);
  x.push_back(half_rest - eta);
  x.push_back(half_rest + eta);
  x.push_back(Rational(1) - x[static_cast<std::size_t>(n - 6)] - eps);
  return x;
}

template <class Build>
WeightVector shrink_until_valid(int n, Int s, const OrderedPartition& triple, Build build) {
  Rational eta(BigInt(1), BigInt(4 * n));
  for (int attempt = 0; attempt < 200; ++attempt, eta /= Rational(2)) {
    auto x = build(eta);
    if (!in_weight_space(x, s)) continue;
    WeightVector alpha(std::move(x), s);
    if (std::all_of(triple.seq().begin(), triple.seq().end(),
                    [&](const auto& m) { return deg_alpha(m, alpha).is_zero(); }))
      return alpha;
  }
  throw std::logic_error("counterexample construction did not converge");
}

inline OrderedPartition dual_reversed(const OrderedPartition& seq) {
  std::vector<MultiplicityVector> out;
  for (auto it = seq.seq().rbegin(); it != seq.seq().rend(); ++it) out.push_back(dual_mult(*it));
  return OrderedPartition(std::move(out));
}

}  // namespace detail

/// A weight vector in W(N, s) with an ordered alpha-partition of length 3 whose every
/// rotation has Delta > 2, for N >= 9 and 4 <= s <= N - 4 (three-group pattern, scale t)
/// or N >= 11 and s in {3, N - 3} (the s = 3 pattern, dualized for N - 3).
inline Counterexample construct_counterexample(const ModuliContext& ctx, Int t = 1) {
  const int n = ctx.n;
  const Int s = ctx.s;
  if (n >= 9 && 4 <= s && s <= n - 4) {
    if (t < 1 || 9 * t > n || !(3 * t < s && s < n - 3 * t))
      throw OutsideCoveredRange("block scale t = " + std::to_string(t) + " needs 9t <= N and 3t < s < N - 3t");
    auto triple = detail::triple_blocks_three_groups(n, s, t);
    const bool reference = n == 9 && s == 4 && t == 1;
    auto alpha = reference ? detail::reference_vector_9_4()
                           : detail::shrink_until_valid(n, s, triple, [&](const Rational& eta) {
                               return detail::three_groups_weights(n, s, t, eta);
                             });
    auto deltas = rotation_deltas(triple.seq());
    return {n, s, 1, t, false, reference, std::move(alpha), std::move(triple), std::move(deltas),
            {3 * t * t, 3 * t * t, t * (2 * n - 15 * t)}};
  }
  if (n >= 11 && (s == 3 || s == n - 3)) {
    auto triple = detail::triple_blocks_s3(n);
    const bool reference = n == 11;
    auto alpha = reference ? detail::reference_vector_11_3()
                           : detail::shrink_until_valid(n, 3, triple,
                                                        [&](const Rational& eta) { return detail::s3_weights(n, eta); });
    std::vector<Int> expected{3, 3, 2 * Int{n} - 19};
    const bool dualize = s != 3;
    if (dualize) {
      alpha = dual_weight(alpha);
      triple = detail::dual_reversed(triple);
      // Reversing the order maps rotation l to rotation L - l.
      expected = {expected[0], expected[2], expected[1]};
    }
    auto deltas = rotation_deltas(triple.seq());
    return {n, s, 2, 1, dualize, reference, std::move(alpha), std::move(triple), std::move(deltas),
            std::move(expected)};
  }
  throw OutsideCoveredRange("no counterexample construction covers (N, s) = (" + std::to_string(n) + ", " +
                            std::to_string(s) + ")");
}

}  // namespace bodenhu

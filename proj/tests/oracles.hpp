#pragma once

// Slow, direct re-implementations used as references in the unit tests.
// None of them share code paths with the library beyond the value types.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <vector>

#include "bodenhu/bodenhu.hpp"

namespace oracle {

using bodenhu::Int;
using bodenhu::MultiplicityVector;
using bodenhu::Rational;
using bodenhu::SupportMask;
using bodenhu::WeightVector;

// Delta(m, m') as the literal double sum.
inline Int delta(const MultiplicityVector& m, const MultiplicityVector& mp) {
  Int total = 2 * m.rank() * mp.degree() - 2 * mp.rank() * m.degree();
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < m.size(); ++b) {
      if (a < b) total += m[a] * mp[b];
      if (b < a) total -= m[a] * mp[b];
    }
  return total;
}

inline Int delta_seq(const std::vector<MultiplicityVector>& ms) {
  Int total = 0;
  for (std::size_t i = 0; i < ms.size(); ++i)
    for (std::size_t j = i + 1; j < ms.size(); ++j) total += oracle::delta(ms[i], ms[j]);
  return total;
}

inline Int hom_degree(const MultiplicityVector& m, const MultiplicityVector& mp) {
  Int total = m.rank() * mp.degree() - mp.rank() * m.degree();
  for (int a = 0; a < m.size(); ++a)
    for (int b = 0; b < a; ++b) total -= m[a] * mp[b];
  return total;
}

inline std::vector<Int> rotation_deltas(std::vector<MultiplicityVector> seq) {
  std::vector<Int> out;
  for (std::size_t l = 0; l < seq.size(); ++l) {
    out.push_back(oracle::delta_seq(seq));
    std::rotate(seq.begin(), seq.begin() + 1, seq.end());
  }
  return out;
}

// Every set partition of {0..n-1} via restricted growth strings.
inline void for_each_set_partition(int n, const std::function<void(const std::vector<SupportMask>&)>& fn) {
  std::vector<int> label(static_cast<std::size_t>(n), 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      std::vector<SupportMask> blocks(static_cast<std::size_t>(used), 0);
      for (int k = 0; k < n; ++k) blocks[static_cast<std::size_t>(label[static_cast<std::size_t>(k)])] |= SupportMask{1} << k;
      fn(blocks);
      return;
    }
    for (int b = 0; b <= used && b < n; ++b) {
      label[static_cast<std::size_t>(i)] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

// Alpha-partitions by brute force: every set partition whose block sums are integers, sorted by mask.
inline std::set<std::vector<std::pair<SupportMask, Int>>> alpha_partitions(const WeightVector& alpha,
                                                                           std::size_t min_len) {
  std::set<std::vector<std::pair<SupportMask, Int>>> out;
  for_each_set_partition(alpha.size(), [&](const std::vector<SupportMask>& blocks) {
    if (blocks.size() < min_len) return;
    std::vector<std::pair<SupportMask, Int>> shape;
    for (SupportMask b : blocks) {
      Rational sum = 0;
      for (int i = 0; i < alpha.size(); ++i)
        if (b & (SupportMask{1} << i)) sum += alpha[i];
      if (!sum.is_integer()) return;
      shape.emplace_back(b, -sum.to_int64());
    }
    std::sort(shape.begin(), shape.end());
    out.insert(shape);
  });
  return out;
}

// Criterion by trying every permutation (not just necklace representatives).
inline bool criterion_holds(const WeightVector& alpha, bool semismall) {
  for (const auto& shape : oracle::alpha_partitions(alpha, 3)) {
    std::vector<MultiplicityVector> blocks;
    for (auto [mask, d] : shape) blocks.push_back(MultiplicityVector::from_support(alpha.size(), d, mask));
    std::vector<std::size_t> order(blocks.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    do {
      std::vector<MultiplicityVector> seq;
      for (auto i : order) seq.push_back(blocks[i]);
      const auto deltas = oracle::rotation_deltas(seq);
      const Int bound = static_cast<Int>(seq.size()) - 1;
      const bool ok = std::any_of(deltas.begin(), deltas.end(),
                                  [&](Int d) { return semismall ? d <= bound : d < bound; });
      if (!ok) return false;
    } while (std::next_permutation(order.begin(), order.end()));
  }
  return true;
}

// Increasing grid points k_1/den < ... < k_n/den in (0,1) with sum s.
inline void for_each_grid_weight(int n, Int s, Int den, const std::function<bool(const std::vector<Int>&)>& fn) {
  std::vector<Int> k(static_cast<std::size_t>(n));
  std::function<bool(int, Int, Int)> rec = [&](int i, Int lo, Int sum) {
    if (i == n) return sum == s * den ? fn(k) : true;
    for (Int x = lo; x < den; ++x) {
      k[static_cast<std::size_t>(i)] = x;
      if (!rec(i + 1, x + 1, sum + x)) return false;
    }
    return true;
  };
  rec(0, 1, 0);
}

}  // namespace oracle

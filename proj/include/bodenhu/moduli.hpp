#pragma once

// Dimension bookkeeping for the Jordan-Hoelder strata and the fibres of the
// resolution over them.

#include <algorithm>
#include <numeric>
#include <vector>

#include "bodenhu/core.hpp"
#include "bodenhu/partitions.hpp"
#include "bodenhu/smallness.hpp"

namespace bodenhu {

/// dim M(m)^stab = (g - 1/2) r^2 - (sum m_n^2) / 2 + 1.
inline Rational moduli_dim(const MultiplicityVector& m, Int g) {
  require_genus(g);
  const Int twice = (2 * g - 1) * m.rank() * m.rank() - pointwise_product(m, m) + 2;
  return Rational(BigInt(twice), BigInt(2));
}

/// codim of the stratum: 1 - L + (2g - 1) sum_{l1 < l2} r^{l1} r^{l2}.
inline Int stratum_codim(std::span<const MultiplicityVector> blocks, Int g) {
  require_genus(g);
  Int pairs = 0;
  for (std::size_t i = 0; i < blocks.size(); ++i)
    for (std::size_t j = i + 1; j < blocks.size(); ++j) pairs += blocks[i].rank() * blocks[j].rank();
  return 1 - static_cast<Int>(blocks.size()) + (2 * g - 1) * pairs;
}

inline Int stratum_codim(const Partition& xi, Int g) { return stratum_codim(std::span(xi.blocks()), g); }

/// dim F_sigma = 1 - L + sum_{l1 < l2} h1(m^{l2}, m^{l1}) for an ordering with disjoint supports.
inline Int fiber_component_dim(std::span<const MultiplicityVector> sigma, Int g) {
  require_genus(g);
  for (std::size_t i = 0; i < sigma.size(); ++i)
    for (std::size_t j = i + 1; j < sigma.size(); ++j)
      if (pointwise_product(sigma[i], sigma[j]) != 0) throw InvalidArgument("fibre components need disjoint supports");
  Rational total = 1 - static_cast<Int>(sigma.size());
  for (std::size_t l1 = 0; l1 < sigma.size(); ++l1)
    for (std::size_t l2 = l1 + 1; l2 < sigma.size(); ++l2) total += h1_dim(sigma[l2], sigma[l1], g);
  if (!total.is_integer()) throw std::logic_error("non-integral fibre dimension " + total.str());
  return total.to_int64();
}

inline Int fiber_component_dim(const OrderedPartition& sigma, Int g) {
  return fiber_component_dim(std::span(sigma.seq()), g);
}

struct FiberComponent {
  OrderedPartition ordering;
  Int dim;
};

/// Fibre over the stratum of `partition`: one component per beta-stable ordering.
struct FiberReport {
  Partition partition;
  Int genus;
  std::vector<FiberComponent> components;
  Int stratum_codim;
  std::vector<Int> margins;  // codim - 2 dim per component, equal to L - 1 - Delta
};

inline FiberReport fiber_report(const Partition& xi, const WeightVector& beta, Int g) {
  require_genus(g);
  if (xi.n() != beta.size()) throw DimensionMismatch("partition and weight vector of different lengths");
  if (xi.weight_sum() != beta.weight_sum()) throw InvalidArgument("partition and weight vector from different weight spaces");
  if (const auto gen = is_generic(beta); !gen.generic)
    throw NotGeneric("weight vector lies on the wall of " + gen.wall->str());
  FiberReport report{xi, g, {}, stratum_codim(xi, g), {}};
  std::vector<std::size_t> order(xi.length());
  std::iota(order.begin(), order.end(), std::size_t{0});
  do {
    OrderedPartition sigma(xi, order);
    if (!is_alpha_stable_seq(sigma, beta)) continue;
    const Int dim = fiber_component_dim(sigma, g);
    report.margins.push_back(report.stratum_codim - 2 * dim);
    report.components.push_back({std::move(sigma), dim});
  } while (std::next_permutation(order.begin(), order.end()));
  return report;
}

}  // namespace bodenhu

#pragma once

// Walls and chambers of the open weight space W(N, s).

#include <algorithm>
#include <optional>
#include <random>
#include <vector>

#include "bodenhu/core.hpp"
#include "bodenhu/linear_system.hpp"

namespace bodenhu {

/// The hyperplane deg_alpha(m) = 0 for a proper 0/1 summand m of the distinguished vector.
/// Canonical representative: the one of m, 1 - m whose support contains index 1.
struct Wall {
  MultiplicityVector m;

  friend bool operator==(const Wall&, const Wall&) = default;
};

/// Open weight space: 0 < x_1 < ... < x_N < 1, sum x_n = s.
inline LinearSystem weight_space_system(int n, Int s) {
  LinearSystem sys(static_cast<std::size_t>(n));
  auto unit = [n](int i, Rational v) {
    std::vector<Rational> c(static_cast<std::size_t>(n));
    c[static_cast<std::size_t>(i)] = v;
    return c;
  };
  sys.add_strict(unit(0, -1), 0);
  for (int i = 0; i + 1 < n; ++i) {
    auto c = unit(i, 1);
    c[static_cast<std::size_t>(i + 1)] = -1;
    sys.add_strict(std::move(c), 0);
  }
  sys.add_strict(unit(n - 1, 1), 1);
  sys.add_equality(std::vector<Rational>(static_cast<std::size_t>(n), Rational(1)), s);
  return sys;
}

/// Adds sum_{n in block} x_n = block_sum.
inline void add_block_sum(LinearSystem& sys, SupportMask block, Int block_sum) {
  std::vector<Rational> c(sys.n_vars());
  for (std::size_t i = 0; i < c.size(); ++i)
    if (block & (SupportMask{1} << i)) c[i] = 1;
  sys.add_equality(std::move(c), block_sum);
}

/// Whether some alpha in W(N, s) has deg_alpha(m) = 0; returns such an alpha.
inline std::optional<WitnessPoint> wall_witness(int n, Int s, const MultiplicityVector& m) {
  auto sys = weight_space_system(n, s);
  add_block_sum(sys, m.support_mask(), -m.degree());
  return feasible(sys);
}

/// All nonempty walls of W(N, s) in canonical form, ordered by support mask then degree.
inline std::vector<Wall> enumerate_walls(const ModuliContext& ctx, int cap = kDefaultCap) {
  require_within_cap(ctx.n, cap);
  const int n = ctx.n;
  std::vector<Wall> out;
  for (SupportMask mask = 1; mask < full_mask(n); mask += 2) {  // odd masks contain index 1
    const Int r = popcount(mask);
    const Int rc = n - r;
    for (Int d = -(r - 1); d <= -1; ++d) {
      const Int dc = -ctx.s - d;
      if (!(-rc < dc && dc < 0)) continue;
      auto m = MultiplicityVector::from_support(n, d, mask);
      if (!wall_witness(n, ctx.s, m)) continue;
      if (r < 2 || rc < 2) throw std::logic_error("wall with a rank-1 side: " + m.str());
      out.push_back({std::move(m)});
    }
  }
  return out;
}

namespace detail {

// sums[mask] = sum of alpha over the support mask.
inline std::vector<Rational> subset_sums(std::span<const Rational> x) {
  const std::size_t n = x.size();
  std::vector<Rational> sums(std::size_t{1} << n);
  for (std::size_t mask = 1; mask < sums.size(); ++mask) {
    const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(mask));
    sums[mask] = sums[mask & (mask - 1)] + x[low];
  }
  return sums;
}

}  // namespace detail

struct GenericityResult {
  bool generic;
  std::optional<MultiplicityVector> wall;  // first wall through alpha, by support mask
};

/// alpha is generic iff no proper weight subset has an integer sum.
inline GenericityResult is_generic(const WeightVector& alpha) {
  const int n = alpha.size();
  if (n > 31) throw InvalidArgument("N too large");
  const auto sums = detail::subset_sums(alpha.entries());
  for (SupportMask mask = 1; mask < full_mask(n); mask += 2) {
    if (sums[mask].is_integer()) {
      auto m = MultiplicityVector::from_support(n, -sums[mask].to_int64(), mask);
      return {false, std::move(m)};
    }
  }
  return {true, std::nullopt};
}

struct NearnessResult {
  bool near;
  std::optional<MultiplicityVector> violating;  // m with deg_alpha(m) < 0 <= deg_beta(m)
};

/// beta is near alpha iff deg_alpha(m) < 0 implies deg_beta(m) < 0 for every proper 0/1 summand m.
inline NearnessResult is_near(const WeightVector& alpha, const WeightVector& beta) {
  if (alpha.size() != beta.size()) throw DimensionMismatch("weight vectors of different lengths");
  if (alpha.weight_sum() != beta.weight_sum()) throw InvalidArgument("weight vectors from different weight spaces");
  const int n = alpha.size();
  const auto a = detail::subset_sums(alpha.entries());
  const auto b = detail::subset_sums(beta.entries());
  for (SupportMask mask = 1; mask < full_mask(n); ++mask) {
    // An integer d in [-b, -a) gives d + a < 0 <= d + b.
    BigInt d = (-b[mask]).ceil();
    if (Rational(d) < -a[mask]) {
      return {false, MultiplicityVector::from_support(n, d.convert_to<Int>(), mask)};
    }
  }
  return {true, std::nullopt};
}

/// v_n = 2N alpha_n - 2s + N - 2n + 1 (n 1-based); sums to zero.
inline std::vector<Rational> perturbation_direction(const WeightVector& alpha) {
  const Int n = alpha.size();
  const Int s = alpha.weight_sum();
  std::vector<Rational> v;
  v.reserve(static_cast<std::size_t>(n));
  for (Int i = 1; i <= n; ++i) v.push_back(Rational(2 * n) * alpha[static_cast<int>(i - 1)] - 2 * s + n - 2 * i + 1);
  return v;
}

namespace detail {

inline std::vector<Rational> axpy(std::span<const Rational> x, const Rational& a, std::span<const Rational> y) {
  std::vector<Rational> out(x.begin(), x.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += a * y[i];
  return out;
}

inline Int next_prime(Int p) {
  for (Int q = p + 1;; ++q) {
    bool prime = q >= 2;
    for (Int d = 2; d * d <= q && prime; ++d) prime = q % d != 0;
    if (prime) return q;
  }
}

// w_n = theta^n - mean, scaled to max |w_n| = 1.
inline std::vector<Rational> moment_direction(int n, Int theta) {
  std::vector<Rational> w;
  Rational power = 1, total = 0;
  for (int i = 0; i < n; ++i) {
    power *= Rational(theta);
    w.push_back(power);
    total += power;
  }
  Rational mean = total / Rational(n);
  Rational scale = 0;
  for (auto& x : w) {
    x -= mean;
    scale = std::max(scale, x.abs());
  }
  for (auto& x : w) x /= scale;
  return w;
}

}  // namespace detail

/// A generic beta near alpha and near alpha + eps v, with v the perturbation direction.
/// Returns alpha itself when alpha is already generic.
inline WeightVector find_generic_near(const WeightVector& alpha) {
  if (is_generic(alpha).generic) return alpha;
  const int n = alpha.size();
  const Int s = alpha.weight_sum();
  const auto v = perturbation_direction(alpha);

  BigInt max_den = 1;
  for (const auto& a : alpha.entries()) max_den = std::max(max_den, a.denominator());
  Rational eps(BigInt(1), BigInt(4 * n) * max_den);

  std::optional<WeightVector> shifted;
  while (true) {
    auto point = detail::axpy(alpha.entries(), eps, v);
    if (in_weight_space(point, s)) {
      WeightVector candidate(std::move(point), s);
      if (is_near(alpha, candidate).near) {
        shifted = std::move(candidate);
        break;
      }
    }
    eps /= Rational(2);
  }

  Rational step = eps;
  Int theta = 2;
  while (true) {
    auto point = detail::axpy(shifted->entries(), step, detail::moment_direction(n, theta));
    if (in_weight_space(point, s)) {
      WeightVector beta(std::move(point), s);
      if (is_generic(beta).generic && is_near(*shifted, beta).near && is_near(alpha, beta).near) return beta;
    }
    step /= Rational(2);
    theta = detail::next_prime(theta);
  }
}

namespace detail {

// Random transfers x_i += t, x_j -= t with t on the grid 1/grid_den, each
// keeping x inside W(N, s). `same_class(i, j)` restricts which pairs may trade.
template <class Rng, class Pred>
void random_transfers(std::vector<Rational>& x, Rng& rng, int moves, const BigInt& grid_den, Pred same_class) {
  const int n = static_cast<int>(x.size());
  std::uniform_int_distribution<int> pick(0, n - 1);
  const Rational grid(BigInt(1), grid_den);
  for (int k = 0; k < moves; ++k) {
    const int i = pick(rng), j = pick(rng);
    if (i == j || !same_class(i, j)) continue;
    // Gap g_k = x_{k+1} - x_k for k = -1..n-1 with x_{-1} = 0, x_n = 1; each must stay positive.
    std::optional<Rational> lo, hi;
    for (int g = -1; g < n; ++g) {
      const Rational left = g < 0 ? Rational(0) : x[static_cast<std::size_t>(g)];
      const Rational right = g + 1 >= n ? Rational(1) : x[static_cast<std::size_t>(g + 1)];
      const int c = (g + 1 == i) - (g == i) - (g + 1 == j) + (g == j);
      if (c == 0) continue;
      const Rational limit = (left - right) / Rational(c);  // gap + c t > 0
      if (c > 0) {
        if (!lo || limit > *lo) lo = limit;
      } else if (!hi || limit < *hi) {
        hi = limit;
      }
    }
    const BigInt kmin = (*lo / grid).floor() + 1;
    const BigInt kmax = (*hi / grid).ceil() - 1;
    if (kmin > kmax) continue;
    const BigInt span = kmax - kmin + 1;
    const long long choices = span > 1000000 ? 1000000 : span.convert_to<long long>();
    std::uniform_int_distribution<long long> offset(0, choices - 1);
    const BigInt kk = kmin + (span / choices) * BigInt(offset(rng));
    const Rational t = Rational(kk) * grid;
    x[static_cast<std::size_t>(i)] += t;
    x[static_cast<std::size_t>(j)] -= t;
  }
}

inline BigInt common_denominator(std::span<const Rational> x) {
  BigInt out = 1;
  for (const auto& v : x) out = out / gcd_abs(out, v.denominator()) * v.denominator();
  return out;
}

}  // namespace detail

/// Random rational point of W(N, s): the deterministic feasibility witness
/// moved by random pairwise transfers on a fixed rational grid.
template <class Rng>
WeightVector sample_weight_vector(int n, Int s, Rng& rng, int moves = 0) {
  auto start = feasible(weight_space_system(n, s));
  if (!start) throw InvalidArgument("empty weight space");
  std::vector<Rational> x = std::move(*start);
  detail::random_transfers(x, rng, moves > 0 ? moves : 6 * n, detail::common_denominator(x) * 1000,
                           [](int, int) { return true; });
  return WeightVector(std::move(x), s);
}

/// Random point of the face {sum over each block = fixed} through `start`:
/// transfers only happen between indices sharing a block.
template <class Rng>
WeightVector sample_on_face(const WeightVector& start, std::span<const SupportMask> blocks, Rng& rng, int moves = 0) {
  std::vector<Rational> x(start.entries().begin(), start.entries().end());
  auto block_of = [&](int i) {
    for (std::size_t b = 0; b < blocks.size(); ++b)
      if (blocks[b] & (SupportMask{1} << i)) return static_cast<int>(b);
    return -1 - i;
  };
  detail::random_transfers(x, rng, moves > 0 ? moves : 6 * start.size(), detail::common_denominator(x) * 1000,
                           [&](int i, int j) { return block_of(i) == block_of(j); });
  return WeightVector(std::move(x), start.weight_sum());
}

}  // namespace bodenhu

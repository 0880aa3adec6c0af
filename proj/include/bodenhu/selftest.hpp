#pragma once

// Property suites for the identities and inequalities that the smallness
// classification rests on. Every suite is deterministic for a given seed.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "bodenhu/core.hpp"
#include "bodenhu/partitions.hpp"
#include "bodenhu/weightspace.hpp"

namespace bodenhu {

struct SuiteResult {
  std::string name;
  std::size_t checked = 0;
  std::size_t failed = 0;
  std::optional<std::string> first_failure;

  explicit SuiteResult(std::string name_) : name(std::move(name_)) {}

  bool passed() const { return failed == 0 && checked > 0; }

  void record(bool ok, const std::string& what) {
    ++checked;
    if (ok) return;
    ++failed;
    if (!first_failure) first_failure = what;
  }
};

struct SelftestOptions {
  std::uint64_t seed = 20061;
  std::size_t random_trials = 10000;
  int parity_max_n = 6;
  int bound_max_n = 6;
  Int bound_max_rank = 4;
  int rank_two_max_n = 8;
  int rank_two_degree_max_n = 10;
};

namespace detail {

using SelftestRng = std::mt19937_64;

inline Int uniform(SelftestRng& rng, Int lo, Int hi) { return std::uniform_int_distribution<Int>(lo, hi)(rng); }

// Arbitrary multiplicity vector of length n: entries in [0, max_mult], degree in [-10, 10].
inline MultiplicityVector random_mult(SelftestRng& rng, int n, Int max_mult = 3) {
  std::vector<Int> mults(static_cast<std::size_t>(n));
  do {
    for (auto& x : mults) x = uniform(rng, 0, max_mult);
  } while (std::all_of(mults.begin(), mults.end(), [](Int x) { return x == 0; }));
  return MultiplicityVector(uniform(rng, -10, 10), std::move(mults));
}

// Every multiplicity vector of length n with rank in [1, max_rank], in a fixed order.
inline std::vector<MultiplicityVector> all_mults(int n, Int max_rank) {
  std::vector<MultiplicityVector> out;
  std::vector<Int> mults(static_cast<std::size_t>(n), 0);
  auto rec = [&](auto& self, std::size_t i, Int left) -> void {
    if (i == mults.size()) {
      const Int r = max_rank - left;
      if (r > 0) out.emplace_back(static_cast<Int>(out.size() % 5) - 2, mults);
      return;
    }
    for (Int x = 0; x <= left; ++x) {
      mults[i] = x;
      self(self, i + 1, left - x);
    }
    mults[i] = 0;
  };
  rec(rec, 0, max_rank);
  return out;
}

inline std::string describe(std::initializer_list<const MultiplicityVector*> ms) {
  std::string out;
  for (const auto* m : ms) out += (out.empty() ? "" : " ") + m->str();
  return out;
}

// Delta(m,m')/rr' + Delta(m',m'')/r'r'' + Delta(m'',m)/r''r <= 1, cleared of denominators.
inline bool cyclic_bound_holds(Int d01, Int d12, Int d20, Int r0, Int r1, Int r2) {
  return d01 * r2 + d12 * r0 + d20 * r1 <= r0 * r1 * r2;
}

}  // namespace detail

/// Delta(m, m') has the parity of r r' whenever m_n + m'_n <= 1.
inline SuiteResult parity_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"parity"};
  for (int n = 1; n <= opt.parity_max_n; ++n) {
    const SupportMask full = full_mask(n);
    for (SupportMask a = 1; a <= full; ++a)
      for (SupportMask b = 1; b <= full; ++b) {
        if (a & b) continue;
        for (Int d = -5; d <= 4; ++d)
          for (Int dp = -5; dp <= 4; ++dp) {
            const auto m = MultiplicityVector::from_support(n, d, a);
            const auto mp = MultiplicityVector::from_support(n, dp, b);
            const Int diff = delta(m, mp) - m.rank() * mp.rank();
            res.record(diff % 2 == 0, detail::describe({&m, &mp}));
          }
      }
  }
  return res;
}

/// Cyclic bound on Delta over rank products, for every triple of small multiplicity vectors.
inline SuiteResult bound_exhaustive_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"cyclic bound (exhaustive)"};
  for (int n = 1; n <= opt.bound_max_n; ++n) {
    const auto ms = detail::all_mults(n, opt.bound_max_rank);
    const std::size_t k = ms.size();
    std::vector<Int> table(k * k);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j) table[i * k + j] = delta(ms[i], ms[j]);
    for (std::size_t i = 0; i < k; ++i)
      for (std::size_t j = 0; j < k; ++j)
        for (std::size_t l = 0; l < k; ++l) {
          const bool ok = detail::cyclic_bound_holds(table[i * k + j], table[j * k + l], table[l * k + i], ms[i].rank(),
                                                     ms[j].rank(), ms[l].rank());
          if (ok) {
            ++res.checked;
            continue;
          }
          res.record(false, detail::describe({&ms[i], &ms[j], &ms[l]}));
        }
  }
  return res;
}

/// Cyclic bound on random triples, checked with exact rationals.
inline SuiteResult bound_random_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"cyclic bound (random)"};
  detail::SelftestRng rng(opt.seed ^ 0x6101);
  for (std::size_t trial = 0; trial < opt.random_trials; ++trial) {
    const int n = static_cast<int>(detail::uniform(rng, 1, 9));
    const auto m = detail::random_mult(rng, n), mp = detail::random_mult(rng, n), mpp = detail::random_mult(rng, n);
    const Rational lhs = Rational(BigInt(delta(m, mp)), BigInt(m.rank() * mp.rank())) +
                         Rational(BigInt(delta(mp, mpp)), BigInt(mp.rank() * mpp.rank())) +
                         Rational(BigInt(delta(mpp, m)), BigInt(mpp.rank() * m.rank()));
    res.record(lhs <= Rational(1), detail::describe({&m, &mp, &mpp}));
  }
  return res;
}

/// Unless some slope difference is 1/3, one of the three Deltas is below a third of its rank product.
inline SuiteResult bound_strict_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"cyclic bound (strict)"};
  detail::SelftestRng rng(opt.seed ^ 0x6102);
  const Rational third(BigInt(1), BigInt(3));
  while (res.checked < opt.random_trials) {
    const int n = static_cast<int>(detail::uniform(rng, 1, 9));
    const auto m = detail::random_mult(rng, n), mp = detail::random_mult(rng, n), mpp = detail::random_mult(rng, n);
    auto slope = [](const MultiplicityVector& x) { return Rational(BigInt(x.degree()), BigInt(x.rank())); };
    const Rational mu = slope(m), mup = slope(mp), mupp = slope(mpp);
    if (mu - mup == third || mup - mupp == third || mupp - mu == third) continue;
    const bool ok = 3 * delta(m, mp) < m.rank() * mp.rank() || 3 * delta(mp, mpp) < mp.rank() * mpp.rank() ||
                    3 * delta(mpp, m) < mpp.rank() * m.rank();
    res.record(ok, detail::describe({&m, &mp, &mpp}));
  }
  return res;
}

/// Two rank-2 blocks of a realisable partition have Delta zero.
inline SuiteResult rank_two_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"rank-two blocks"};
  for (int n = 4; n <= opt.rank_two_max_n; ++n)
    for (Int s = 1; s < n; ++s) {
      const ModuliContext ctx(n, s);
      for_each_partition_shape(
          ctx, 2,
          [&](std::span<const SupportMask> supports, std::span<const Int> degrees) {
            if (std::count_if(supports.begin(), supports.end(), [](SupportMask b) { return popcount(b) == 2; }) < 2)
              return true;
            if (!feasible(shape_system(n, s, supports, degrees))) return true;
            const auto blocks = blocks_from_shape(n, supports, degrees);
            for (const auto& a : blocks)
              for (const auto& b : blocks)
                if (&a != &b && a.rank() == 2 && b.rank() == 2) res.record(delta(a, b) == 0, detail::describe({&a, &b}));
            return true;
          },
          kDefaultCap);
    }
  return res;
}

/// Realisable partitions with all degrees -1 and a rank-2 block m'':
/// Delta(m,m') <= (r-4)(r'-2) - 2 or Delta(m',m'') <= 0 or Delta(m'',m) <= 0.
inline SuiteResult rank_two_degree_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"rank-two, degree -1"};
  for (int n = 6; n <= opt.rank_two_degree_max_n; ++n)
    for (Int s = 3; 2 * s <= n; ++s) {
      const ModuliContext ctx(n, s);
      for_each_partition_shape(
          ctx, 3,
          [&](std::span<const SupportMask> supports, std::span<const Int> degrees) {
            if (std::any_of(degrees.begin(), degrees.end(), [](Int d) { return d != -1; })) return true;
            if (std::none_of(supports.begin(), supports.end(), [](SupportMask b) { return popcount(b) == 2; }))
              return true;
            if (!feasible(shape_system(n, s, supports, degrees))) return true;
            const auto blocks = blocks_from_shape(n, supports, degrees);
            for (const auto& m : blocks)
              for (const auto& mp : blocks)
                for (const auto& mpp : blocks) {
                  if (&m == &mp || &mp == &mpp || &mpp == &m || mpp.rank() != 2) continue;
                  const bool ok = delta(m, mp) <= (m.rank() - 4) * (mp.rank() - 2) - 2 || delta(mp, mpp) <= 0 ||
                                  delta(mpp, m) <= 0;
                  res.record(ok, detail::describe({&m, &mp, &mpp}));
                }
            return true;
          },
          kDefaultCap);
    }
  return res;
}

inline SuiteResult antisymmetry_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"antisymmetry"};
  detail::SelftestRng rng(opt.seed ^ 0x4101);
  for (std::size_t trial = 0; trial < opt.random_trials; ++trial) {
    const int n = static_cast<int>(detail::uniform(rng, 1, 12));
    const auto m = detail::random_mult(rng, n), mp = detail::random_mult(rng, n);
    res.record(delta(m, mp) + delta(mp, m) == 0 && delta(m, m) == 0, detail::describe({&m, &mp}));
  }
  return res;
}

inline SuiteResult bilinearity_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"bilinearity"};
  detail::SelftestRng rng(opt.seed ^ 0x4102);
  for (std::size_t trial = 0; trial < opt.random_trials; ++trial) {
    const int n = static_cast<int>(detail::uniform(rng, 1, 12));
    const auto m = detail::random_mult(rng, n), mp = detail::random_mult(rng, n), mpp = detail::random_mult(rng, n);
    const bool ok = delta(m + mpp, mp) == delta(m, mp) + delta(mpp, mp) &&
                    delta(mp, m + mpp) == delta(mp, m) + delta(mp, mpp);
    res.record(ok, detail::describe({&m, &mp, &mpp}));
  }
  return res;
}

/// deg Hom(m, m') <= r deg_alpha(m') - r' deg_alpha(m), and 2 deg Hom = -rr' + sum m_n m'_n + Delta.
inline SuiteResult hom_estimate_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"hom estimate"};
  detail::SelftestRng rng(opt.seed ^ 0x0102);
  for (std::size_t trial = 0; trial < opt.random_trials; ++trial) {
    const int n = static_cast<int>(detail::uniform(rng, 2, 8));
    const Int s = detail::uniform(rng, 1, n - 1);
    const auto alpha = sample_weight_vector(n, s, rng, 2 * n);
    const auto m = detail::random_mult(rng, n), mp = detail::random_mult(rng, n);
    const Int h = hom_degree(m, mp);
    const Rational bound = Rational(m.rank()) * deg_alpha(mp, alpha) - Rational(mp.rank()) * deg_alpha(m, alpha);
    const bool identity = 2 * h == -m.rank() * mp.rank() + pointwise_product(m, mp) + delta(m, mp);
    res.record(Rational(h) <= bound && identity, detail::describe({&m, &mp}) + " at " + alpha.str());
  }
  return res;
}

/// Delta(seq) - Delta(seq rotated by l) = 2 Delta(prefix_l, total) when the sequence sums to the distinguished vector.
inline SuiteResult rotation_identity_suite(const SelftestOptions& opt = {}) {
  SuiteResult res{"rotation identity"};
  detail::SelftestRng rng(opt.seed ^ 0x0406);
  for (std::size_t trial = 0; trial < opt.random_trials; ++trial) {
    const int n = static_cast<int>(detail::uniform(rng, 2, 12));
    const Int s = detail::uniform(rng, 1, n - 1);
    const int len = static_cast<int>(detail::uniform(rng, 2, std::min(n, 6)));
    std::vector<int> owner(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) owner[static_cast<std::size_t>(i)] = i < len ? i : static_cast<int>(detail::uniform(rng, 0, len - 1));
    std::shuffle(owner.begin(), owner.end(), rng);
    std::vector<Int> degrees(static_cast<std::size_t>(len));
    Int left = -s;
    for (int b = 0; b + 1 < len; ++b) {
      degrees[static_cast<std::size_t>(b)] = detail::uniform(rng, -4, 2);
      left -= degrees[static_cast<std::size_t>(b)];
    }
    degrees.back() = left;
    std::vector<MultiplicityVector> seq;
    for (int b = 0; b < len; ++b) {
      SupportMask mask = 0;
      for (int i = 0; i < n; ++i)
        if (owner[static_cast<std::size_t>(i)] == b) mask |= SupportMask{1} << i;
      seq.push_back(MultiplicityVector::from_support(n, degrees[static_cast<std::size_t>(b)], mask));
    }
    const auto one = ModuliContext(n, s).one_vector();
    const Int full = delta_seq(seq);
    MultiplicityVector prefix = seq.front();
    for (int l = 1; l < len; ++l) {
      if (l > 1) prefix = prefix + seq[static_cast<std::size_t>(l - 1)];
      std::vector<MultiplicityVector> rot(seq.begin() + l, seq.end());
      rot.insert(rot.end(), seq.begin(), seq.begin() + l);
      res.record(full - delta_seq(rot) == 2 * delta(prefix, one), "rotation " + std::to_string(l) + " of " +
                                                                      std::to_string(len) + " blocks, N = " +
                                                                      std::to_string(n));
    }
  }
  return res;
}

/// Every suite, in a fixed order.
inline std::vector<SuiteResult> run_selftest(const SelftestOptions& opt = {}) {
  return {parity_suite(opt),          bound_exhaustive_suite(opt), bound_random_suite(opt),
          bound_strict_suite(opt),    rank_two_suite(opt),         rank_two_degree_suite(opt),
          antisymmetry_suite(opt),    bilinearity_suite(opt),      hom_estimate_suite(opt),
          rotation_identity_suite(opt)};
}

}  // namespace bodenhu

#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bodenhu/bodenhu.hpp"
#include "oracles.hpp"

using namespace bodenhu;

namespace {

WeightVector alpha_9_4() { return WeightVector::parse("1/15,2/15,1/7,2/7,4/7,7/12,2/3,3/4,4/5"); }

std::set<std::pair<SupportMask, Int>> wall_keys(const std::vector<Wall>& walls) {
  std::set<std::pair<SupportMask, Int>> out;
  for (const auto& w : walls) out.emplace(w.m.support_mask(), w.m.degree());
  return out;
}

}  // namespace

TEST(Walls, SmallCases) {
  EXPECT_TRUE(enumerate_walls(ModuliContext(2, 1)).empty());
  const auto walls = enumerate_walls(ModuliContext(4, 2));
  ASSERT_EQ(walls.size(), 1u);
  EXPECT_EQ(walls[0].m, MultiplicityVector::from_indices(4, -1, {1, 4}));
  EXPECT_TRUE(enumerate_walls(ModuliContext(7, 1)).empty());
}

TEST(Walls, CanonicalFormRankAndOrder) {
  for (int n = 4; n <= 8; ++n)
    for (Int s = 1; s < n; ++s) {
      const auto walls = enumerate_walls(ModuliContext(n, s));
      for (std::size_t i = 0; i < walls.size(); ++i) {
        const auto& m = walls[i].m;
        EXPECT_EQ(m[0], 1);
        EXPECT_GE(m.rank(), 2);
        EXPECT_LE(m.rank(), n - 2);
        EXPECT_TRUE(wall_witness(n, s, m));
        if (i) {
          const auto& p = walls[i - 1].m;
          EXPECT_TRUE(p.support_mask() < m.support_mask() ||
                      (p.support_mask() == m.support_mask() && p.degree() < m.degree()));
        }
      }
    }
}

TEST(Walls, MatchGridSearch) {
  for (int n = 2; n <= 6; ++n)
    for (Int s = 1; s < n; ++s) {
      std::set<std::pair<SupportMask, Int>> grid;
      for (Int den : {12, 20, 30})
        oracle::for_each_grid_weight(n, s, den, [&](const std::vector<Int>& k) {
          for (SupportMask mask = 1; mask < full_mask(n); mask += 2) {
            Int sum = 0;
            for (int i = 0; i < n; ++i)
              if (mask & (SupportMask{1} << i)) sum += k[static_cast<std::size_t>(i)];
            if (sum % den == 0) grid.emplace(mask, -sum / den);
          }
          return true;
        });
      EXPECT_EQ(wall_keys(enumerate_walls(ModuliContext(n, s))), grid) << "N = " << n << ", s = " << s;
    }
}

TEST(Walls, ComplementHasOppositeDegree) {
  std::mt19937_64 rng(3);
  const ModuliContext ctx(7, 3);
  const auto one = ctx.one_vector();
  for (int trial = 0; trial < 20; ++trial) {
    const auto alpha = sample_weight_vector(7, 3, rng);
    for (const auto& w : enumerate_walls(ctx)) EXPECT_EQ(deg_alpha(w.m, alpha), -deg_alpha(one - w.m, alpha));
  }
}

TEST(Walls, CapIsEnforced) {
  EXPECT_THROW(enumerate_walls(ModuliContext(6, 3), 5), CapExceeded);
  EXPECT_THROW(enumerate_walls(ModuliContext(15, 3)), CapExceeded);
}

TEST(Genericity, ReferenceVectorLiesOnWall) {
  const auto res = is_generic(alpha_9_4());
  EXPECT_FALSE(res.generic);
  ASSERT_TRUE(res.wall);
  EXPECT_EQ(*res.wall, MultiplicityVector::from_indices(9, -1, {1, 2, 9}));
  EXPECT_TRUE(is_generic(WeightVector::parse("1/7,2/7,4/7")).generic);
}

TEST(Genericity, AgreesWithEnumeratedWalls) {
  std::mt19937_64 rng(4);
  for (int n = 4; n <= 7; ++n)
    for (Int s = 2; s <= n - 2; ++s) {
      const auto walls = enumerate_walls(ModuliContext(n, s));
      for (int trial = 0; trial < 10; ++trial) {
        const auto alpha = sample_weight_vector(n, s, rng);
        const bool on_wall =
            std::any_of(walls.begin(), walls.end(), [&](const Wall& w) { return deg_alpha(w.m, alpha).is_zero(); });
        EXPECT_EQ(is_generic(alpha).generic, !on_wall) << alpha.str();
      }
    }
}

TEST(Nearness, ReflexiveAndViolationWitness) {
  const auto alpha = WeightVector::parse("1/10,1/2,3/5,4/5");
  EXPECT_TRUE(is_near(alpha, alpha).near);
  const auto beta = WeightVector::parse("1/5,3/10,3/5,9/10");
  const auto res = is_near(alpha, beta);
  EXPECT_FALSE(res.near);
  ASSERT_TRUE(res.violating);
  EXPECT_LT(deg_alpha(*res.violating, alpha), Rational(0));
  EXPECT_GE(deg_alpha(*res.violating, beta), Rational(0));
  EXPECT_THROW(is_near(alpha, WeightVector::parse("1/7,2/7,4/7")), DimensionMismatch);
}

TEST(Perturbation, DirectionSumsToZeroAndMatchesDelta) {
  const auto alpha = alpha_9_4();
  const auto v = perturbation_direction(alpha);
  EXPECT_EQ(v[0], Rational(BigInt(6), BigInt(5)));
  Rational sum = 0;
  for (const auto& x : v) sum += x;
  EXPECT_TRUE(sum.is_zero());

  const auto one = ModuliContext(9, 4).one_vector();
  int walls_through = 0;
  for (SupportMask mask = 1; mask < full_mask(9); ++mask) {
    Rational block = 0;
    for (int i = 0; i < 9; ++i)
      if (mask & (SupportMask{1} << i)) block += alpha[i];
    if (!block.is_integer()) continue;
    const auto m = MultiplicityVector::from_support(9, -block.to_int64(), mask);
    Rational mv = 0;
    for (int i = 0; i < 9; ++i) mv += Rational(m[i]) * v[static_cast<std::size_t>(i)];
    EXPECT_EQ(mv, Rational(delta(m, one))) << m.str();
    ++walls_through;
  }
  EXPECT_GE(walls_through, 6);
}

TEST(GenericNear, ReturnsGenericInputUnchanged) {
  const auto alpha = WeightVector::parse("1/7,2/7,4/7");
  EXPECT_EQ(find_generic_near(alpha), alpha);
}

TEST(GenericNear, ContractOnReferenceVector) {
  const auto alpha = alpha_9_4();
  const auto beta = find_generic_near(alpha);
  EXPECT_TRUE(is_generic(beta).generic);
  EXPECT_TRUE(is_near(alpha, beta).near);
  EXPECT_EQ(beta.weight_sum(), 4);
  EXPECT_EQ(find_generic_near(beta), beta);
  EXPECT_EQ(find_generic_near(alpha), beta);
  // beta-semistable directions stay alpha-semistable.
  for (SupportMask mask = 1; mask < full_mask(9); ++mask)
    for (Int d = -8; d <= 0; ++d) {
      const auto m = MultiplicityVector::from_support(9, d, mask);
      if (deg_alpha(m, beta) <= Rational(0)) {
        ASSERT_LE(deg_alpha(m, alpha), Rational(0)) << m.str();
      }
    }
}

TEST(GenericNear, WallCrossingFollowsDeltaSign) {
  // A wall m through alpha with Delta(m, 1) > 0 cannot be crossed to the negative side.
  const auto alpha = alpha_9_4();
  const auto beta = find_generic_near(alpha);
  const auto one = ModuliContext(9, 4).one_vector();
  for (SupportMask mask = 1; mask < full_mask(9); ++mask) {
    Rational block = 0;
    for (int i = 0; i < 9; ++i)
      if (mask & (SupportMask{1} << i)) block += alpha[i];
    if (!block.is_integer()) continue;
    const auto m = MultiplicityVector::from_support(9, -block.to_int64(), mask);
    const Int d = delta(m, one);
    if (d > 0) {
      EXPECT_GT(deg_alpha(m, beta), Rational(0)) << m.str();
    }
    if (d < 0) {
      EXPECT_LT(deg_alpha(m, beta), Rational(0)) << m.str();
    }
  }
}

TEST(Sampling, PointsStayInsideAndOnFace) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto alpha = sample_weight_vector(9, 4, rng);
    EXPECT_TRUE(in_weight_space(alpha.entries(), 4));
  }
  const auto alpha = alpha_9_4();
  const std::vector<SupportMask> blocks{0b100000011, 0b000011100, 0b011100000};
  for (int trial = 0; trial < 50; ++trial) {
    const auto x = sample_on_face(alpha, blocks, rng);
    for (auto b : blocks) EXPECT_TRUE(deg_alpha(MultiplicityVector::from_support(9, 0, b), x).is_integer());
    EXPECT_TRUE(deg_alpha(MultiplicityVector::from_indices(9, -1, {1, 2, 9}), x).is_zero());
  }
}

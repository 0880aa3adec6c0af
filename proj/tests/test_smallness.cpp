#include <gtest/gtest.h>

#include <random>

#include "bodenhu/bodenhu.hpp"
#include "oracles.hpp"

using namespace bodenhu;

namespace {

WeightVector alpha_9_4() { return WeightVector::parse("1/15,2/15,1/7,2/7,4/7,7/12,2/3,3/4,4/5"); }
WeightVector alpha_11_3() { return WeightVector::parse("1/26,1/20,1/15,1/12,2/11,1/5,4/11,5/11,6/13,1/2,3/5"); }

std::vector<MultiplicityVector> triple_9_4() {
  return {MultiplicityVector::from_indices(9, -1, {1, 2, 9}), MultiplicityVector::from_indices(9, -1, {3, 4, 5}),
          MultiplicityVector::from_indices(9, -2, {6, 7, 8})};
}

std::size_t factorial(std::size_t k) { return k <= 1 ? 1 : k * factorial(k - 1); }

}  // namespace

TEST(Mode, ParseAndPrint) {
  EXPECT_EQ(parse_mode("small"), Mode::small);
  EXPECT_EQ(parse_mode("semismall"), Mode::semismall);
  EXPECT_EQ(to_string(Mode::semismall), "semismall");
  EXPECT_THROW(parse_mode("tiny"), ParseError);
}

TEST(RotationDeltas, ReferenceTripleAndOracle) {
  const auto t = triple_9_4();
  EXPECT_EQ(rotation_deltas(t), (std::vector<Int>{3, 3, 3}));
  EXPECT_EQ(rotation_deltas(t), oracle::rotation_deltas(t));
  const std::vector<Int> tight{2, 5, 7};
  EXPECT_FALSE(rotation_condition_holds(tight, Mode::small));
  EXPECT_TRUE(rotation_condition_holds(tight, Mode::semismall));
}

TEST(Necklaces, OneRepresentativePerCyclicClass) {
  for (std::size_t len = 1; len <= 6; ++len) {
    std::size_t count = 0;
    for_each_necklace_order(len, [&](std::span<const std::size_t> order) {
      EXPECT_EQ(order[0], 0u);
      ++count;
      return true;
    });
    EXPECT_EQ(count, factorial(len - 1));
  }
}

TEST(CheckCriterion, ReferenceVectorFailsSemismall) {
  const auto v = check_criterion(alpha_9_4(), Mode::semismall);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->rotation_deltas, (std::vector<Int>{3, 3, 3}));
  EXPECT_EQ(v.witness->ordering.partition(), Partition(triple_9_4()));
  EXPECT_EQ(v.witness->alpha, alpha_9_4());
  EXPECT_FALSE(check_criterion(alpha_9_4(), Mode::small).holds);
}

TEST(CheckCriterion, SecondReferenceVectorFailsSemismall) {
  const auto v = check_criterion(alpha_11_3(), Mode::semismall);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness);
  EXPECT_EQ(v.witness->rotation_deltas, (std::vector<Int>{3, 3, 3}));
  const auto expected = Partition({MultiplicityVector::from_indices(11, -1, {2, 3, 4, 6, 11}),
                                   MultiplicityVector::from_indices(11, -1, {5, 7, 8}),
                                   MultiplicityVector::from_indices(11, -1, {1, 9, 10})});
  EXPECT_EQ(v.witness->ordering.partition(), expected);
}

TEST(CheckCriterion, GenericWeightsHoldVacuously) {
  for (Mode mode : {Mode::small, Mode::semismall}) {
    EXPECT_TRUE(check_criterion(WeightVector::parse("1/7,2/7,4/7"), mode).holds);
    EXPECT_TRUE(check_criterion(find_generic_near(alpha_9_4()), mode).holds);
  }
}

TEST(CheckCriterion, AgreesWithPermutationOracle) {
  std::mt19937_64 rng(31);
  int failing = 0;
  for (int n = 7; n <= 10; ++n)
    for (Int s = 3; s <= n - 3; ++s) {
      const ModuliContext ctx(n, s);
      std::vector<WeightVector> samples;
      const auto fps = feasible_partitions(ctx, 3);
      for (std::size_t k = 0; k < fps.size(); k += std::max<std::size_t>(1, fps.size() / 8))
        samples.push_back(sample_on_face(WeightVector(fps[k].witness, s), fps[k].partition.supports(), rng));
      if (const auto v = verify_conjecture(ctx, Mode::semismall); v.witness) {
        const auto supports = v.witness->ordering.partition().supports();
        for (int k = 0; k < 3; ++k) samples.push_back(sample_on_face(*v.witness->alpha, supports, rng));
      }
      for (const auto& alpha : samples) {
        for (Mode mode : {Mode::small, Mode::semismall}) {
          const bool mine = check_criterion(alpha, mode).holds;
          ASSERT_EQ(mine, oracle::criterion_holds(alpha, mode == Mode::semismall)) << alpha.str();
          failing += !mine;
        }
      }
    }
  EXPECT_GT(failing, 0);
}

TEST(CheckCriterion, AuditListsEveryOrdering) {
  const auto report = audit_criterion(alpha_9_4(), Mode::semismall);
  ASSERT_EQ(report.partitions.size(), 1u);
  const auto& pa = report.partitions[0];
  ASSERT_EQ(pa.orderings.size(), 2u);
  EXPECT_FALSE(pa.passes());
  EXPECT_EQ(pa.orderings[1].rotation_deltas, (std::vector<Int>{-3, -3, -3}));
  EXPECT_EQ(report.verdict.holds, check_criterion(alpha_9_4(), Mode::semismall).holds);
}

TEST(TwoBlockOrderings, AlwaysPass) {
  for (int n = 4; n <= 9; ++n)
    for (Int s = 1; s < n; ++s)
      for (const auto& fp : feasible_partitions(ModuliContext(n, s), 2)) {
        if (fp.partition.length() != 2) continue;
        const auto d = rotation_deltas(fp.partition.blocks());
        ASSERT_LE(std::min(d[0], d[1]), 0);
        ASSERT_TRUE(rotation_condition_holds(d, Mode::small));
      }
}

TEST(FourBlockPartitions, AllRankTwoWithZeroDeltaAtEight) {
  std::size_t seen = 0;
  for (Int s = 1; s < 8; ++s)
    for (const auto& fp : feasible_partitions(ModuliContext(8, s), 4)) {
      ++seen;
      for (const auto& b : fp.partition.blocks()) ASSERT_EQ(b.rank(), 2);
      for (const auto& o : audit_orderings(fp.partition, Mode::small))
        for (Int d : o.rotation_deltas) ASSERT_EQ(d, 0);
    }
  EXPECT_GT(seen, 0u);
}

TEST(VerifyConjecture, KnownRows) {
  EXPECT_TRUE(verify_conjecture(ModuliContext(8, 3), Mode::small).holds);
  EXPECT_TRUE(verify_conjecture(ModuliContext(10, 3), Mode::small).holds);
  const auto v = verify_conjecture(ModuliContext(9, 4), Mode::semismall);
  EXPECT_FALSE(v.holds);
  ASSERT_TRUE(v.witness && v.witness->alpha);
  // The witness alpha must itself violate the pointwise criterion.
  EXPECT_FALSE(check_criterion(*v.witness->alpha, Mode::semismall).holds);
  EXPECT_TRUE(is_alpha_partition(v.witness->ordering.partition(), *v.witness->alpha));
  // The reference shape is among the failing feasible shapes.
  const auto t = triple_9_4();
  EXPECT_TRUE(first_failing_ordering(t, Mode::semismall));
}

TEST(VerifyConjecture, AgreesWithClassificationBothModes) {
  for (int n = 2; n <= 10; ++n)
    for (Int s = 1; s < n; ++s)
      for (Mode mode : {Mode::small, Mode::semismall}) {
        VerificationStats stats;
        const auto v = verify_conjecture(ModuliContext(n, s), mode, kDefaultCap, &stats);
        EXPECT_EQ(v.holds, classify(n, s) == Classification::holds) << n << " " << s << " " << to_string(mode);
        if (!v.holds) {
          ASSERT_TRUE(v.witness && v.witness->alpha);
          EXPECT_FALSE(check_criterion(*v.witness->alpha, mode).holds);
          EXPECT_EQ(stats.feasible_failing, 1u);
        }
        if (s <= 2 || s >= n - 2) {
          EXPECT_EQ(stats.shapes, 0u);
        }
      }
}

TEST(Classify, Examples) {
  EXPECT_EQ(classify(7, 3), Classification::holds);
  EXPECT_EQ(classify(11, 3), Classification::fails);
  EXPECT_EQ(classify(100, 2), Classification::holds);
  EXPECT_EQ(classify(10, 7), Classification::holds);
  EXPECT_EQ(classify(10, 5), Classification::fails);
  EXPECT_EQ(classify(9, 8), Classification::holds);
  EXPECT_THROW(classify(5, 5), InvalidArgument);
}

TEST(Counterexample, ReferenceVectorsReproduced) {
  const auto a = construct_counterexample(ModuliContext(9, 4));
  EXPECT_TRUE(a.reference);
  EXPECT_EQ(a.alpha.str(), "1/15,2/15,1/7,2/7,4/7,7/12,2/3,3/4,4/5");
  EXPECT_EQ(a.triple.seq(), triple_9_4());
  EXPECT_EQ(a.rotation_deltas, (std::vector<Int>{3, 3, 3}));
  const auto b = construct_counterexample(ModuliContext(11, 3));
  EXPECT_EQ(b.alpha, alpha_11_3());
  EXPECT_EQ(b.rotation_deltas, (std::vector<Int>{3, 3, 3}));
  EXPECT_EQ(b.expected_rotation_deltas, (std::vector<Int>{3, 3, 3}));
}

TEST(Counterexample, ConstructedCasesVerifyExactly) {
  struct Case {
    int n;
    Int s;
    Int t;
  };
  for (const auto& c : {Case{9, 5, 1}, Case{10, 4, 1}, Case{10, 6, 1}, Case{12, 4, 1}, Case{12, 8, 1}, Case{11, 8, 1},
                        Case{12, 3, 1}, Case{13, 10, 1}, Case{14, 7, 1}, Case{18, 7, 2}}) {
    const auto ce = construct_counterexample(ModuliContext(c.n, c.s), c.t);
    EXPECT_TRUE(in_weight_space(ce.alpha.entries(), c.s));
    for (const auto& m : ce.triple.seq()) EXPECT_TRUE(deg_alpha(m, ce.alpha).is_zero()) << m.str();
    EXPECT_EQ(ce.rotation_deltas, ce.expected_rotation_deltas) << c.n << " " << c.s;
    EXPECT_EQ(ce.rotation_deltas, oracle::rotation_deltas(ce.triple.seq()));
    for (Int d : ce.rotation_deltas) EXPECT_GT(d, 2);
    if (c.n <= 12) {
      EXPECT_FALSE(check_criterion(ce.alpha, Mode::semismall).holds);
    }
  }
  EXPECT_EQ(construct_counterexample(ModuliContext(12, 4)).rotation_deltas, (std::vector<Int>{3, 3, 9}));
  // The third value is t(2N - 15t); it reduces to 2N - 15 only at t = 1.
  EXPECT_EQ(construct_counterexample(ModuliContext(18, 7), 2).rotation_deltas, (std::vector<Int>{12, 12, 12}));
  EXPECT_EQ(construct_counterexample(ModuliContext(20, 8), 2).rotation_deltas, (std::vector<Int>{12, 12, 20}));
  EXPECT_EQ(construct_counterexample(ModuliContext(27, 10), 3).rotation_deltas, (std::vector<Int>{27, 27, 27}));
  EXPECT_TRUE(construct_counterexample(ModuliContext(11, 8)).dualized);
}

TEST(Counterexample, OutsideCoveredRange) {
  EXPECT_THROW(construct_counterexample(ModuliContext(10, 3)), OutsideCoveredRange);
  EXPECT_THROW(construct_counterexample(ModuliContext(8, 4)), OutsideCoveredRange);
  EXPECT_THROW(construct_counterexample(ModuliContext(12, 2)), OutsideCoveredRange);
  EXPECT_THROW(construct_counterexample(ModuliContext(12, 5), 2), OutsideCoveredRange);
}

TEST(Duality, CriterionInvariantOnFaces) {
  std::mt19937_64 rng(33);
  for (int n = 8; n <= 10; ++n)
    for (Int s = 3; s <= n - 3; ++s) {
      const auto fps = feasible_partitions(ModuliContext(n, s), 3);
      for (std::size_t k = 0; k < fps.size(); k += std::max<std::size_t>(1, fps.size() / 5)) {
        const auto alpha = sample_on_face(WeightVector(fps[k].witness, s), fps[k].partition.supports(), rng);
        for (Mode mode : {Mode::small, Mode::semismall}) {
          const auto v = check_criterion(alpha, mode);
          const auto w = check_criterion(dual_weight(alpha), mode);
          ASSERT_EQ(v.holds, w.holds) << alpha.str();
        }
      }
    }
}

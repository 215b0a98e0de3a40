#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "argelicit/correction.hpp"
#include "test_support.hpp"

namespace argelicit {
namespace {

using testing::chain_caf;

Caf chain_instance() { return chain_caf({0.9, 1.0}, {0.6, 1.0}); }

TEST(LoweredCaf, ZeroShiftIsIdentity) {
  const Caf caf = chain_instance();
  EXPECT_EQ(lowered_caf(caf, CostMap{1.0, 1.0}, {0, 1}, 0.0), caf);
}

TEST(LoweredCaf, SaturatesAtZero) {
  const Caf caf = chain_caf({0.9, 1.0}, {0.6, 1.0}, CostMap{3.0, 2.0});
  const CostMap costs = caf.cost_map();
  const double t = std::max(3.0 * 0.9, 2.0 * 0.6);
  const Caf low = lowered_caf(caf, costs, {0, 1}, t);
  EXPECT_EQ(low.interval(0).lo, 0.0);
  EXPECT_EQ(low.interval(1).lo, 0.0);
  EXPECT_EQ(low.interval(0).hi, 1.0);
}

TEST(LoweredCaf, ChainParametrization) {
  const Caf low = lowered_caf(chain_instance(), CostMap{1.0, 1.0}, {0, 1}, 0.0573);
  EXPECT_NEAR(low.interval(0).lo, 0.8427, 1e-12);
  EXPECT_NEAR(low.interval(1).lo, 0.5427, 1e-12);
  // Arguments outside the subset are untouched.
  const Caf only_b = lowered_caf(chain_instance(), CostMap{1.0, 1.0}, {1}, 0.1);
  EXPECT_EQ(only_b.interval(0), chain_instance().interval(0));
}

TEST(CorrectStrategy1, ChainClosedForms) {
  const Caf caf = chain_instance();
  const CostMap unit{1.0, 1.0};
  const double eps = 1e-9;

  const double t_both = testing::chain_s1_both(0.9, 0.6);
  EXPECT_NEAR(t_both, (2.5 - std::sqrt(5.69)) / 2.0, 1e-12);
  const CorrectionResult both = correct_strategy1(caf, Semantics::kHbs, unit, eps);
  EXPECT_NEAR(both.parameter_t, t_both, 1e-8);
  EXPECT_NEAR(both.total_cost, 2 * t_both, 1e-8);
  EXPECT_NEAR(both.total_cost, 0.1146, 1e-4);
  EXPECT_NEAR(both.corrected.interval(0).lo, 0.9 - t_both, 1e-8);
  EXPECT_NEAR(both.corrected.interval(1).lo, 0.6 - t_both, 1e-8);
  EXPECT_EQ(both.modified, (std::vector<ArgumentId>{"a", "b"}));

  const CorrectionResult only_b = correct_strategy1(caf, Semantics::kHbs, unit, eps, ArgumentSubset{1});
  EXPECT_NEAR(only_b.total_cost, testing::chain_s1_only_b(0.9, 0.6), 1e-8);
  EXPECT_NEAR(only_b.total_cost, 0.0737, 1e-4);

  const CorrectionResult only_a = correct_strategy1(caf, Semantics::kHbs, unit, eps, ArgumentSubset{0});
  EXPECT_NEAR(only_a.total_cost, testing::chain_s1_only_a(0.9, 0.6), 1e-8);
  EXPECT_NEAR(only_a.total_cost, 0.2333, 1e-4);
}

TEST(CorrectStrategy1, Errors) {
  const CostMap unit{1.0, 1.0};
  try {
    correct_strategy1(chain_caf({0.8, 1.0}, {0.5, 0.6}), Semantics::kHbs, unit, 1e-6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kAlreadyRational);
  }
  // Three mutually attacking arguments pinned high: moving one alone cannot help.
  const Caf tri(AttackGraph({"a", "b", "c"}, {{"a", "b"}, {"b", "a"}, {"b", "c"}, {"c", "b"}}),
                {{0.95, 1.0}, {0.95, 1.0}, {0.95, 1.0}});
  ASSERT_FALSE(is_rational(tri, Semantics::kHbs));
  try {
    correct_strategy1(tri, Semantics::kHbs, CostMap(3, 1.0), 1e-6, ArgumentSubset{0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasible);
  }
  EXPECT_THROW(correct_strategy1(chain_instance(), Semantics::kHbs, CostMap{1.0, 0.0}, 1e-6), Error);
}

TEST(CorrectStrategy2, ChainPicksCheapestSubset) {
  const CorrectionResult r = correct_strategy2(chain_instance(), Semantics::kHbs, CostMap{1.0, 1.0}, 1e-9);
  ASSERT_TRUE(r.subset.has_value());
  EXPECT_EQ(*r.subset, std::vector<ArgumentId>{"b"});
  EXPECT_NEAR(r.total_cost, std::min({2 * testing::chain_s1_both(0.9, 0.6), testing::chain_s1_only_a(0.9, 0.6),
                                      testing::chain_s1_only_b(0.9, 0.6)}),
              1e-8);
  EXPECT_EQ(r.strategy, Strategy::kS2);
  EXPECT_EQ(r.corrected.interval(0), chain_instance().interval(0));
}

TEST(CorrectStrategy2, SingleArgumentEqualsStrategy1) {
  const Caf one(AttackGraph({"a"}, {{"a", "a"}}), {{0.9, 1.0}});
  ASSERT_FALSE(is_rational(one, Semantics::kHbs));  // 0.9 * 1.9 > 1
  const CorrectionResult s1 = correct_strategy1(one, Semantics::kHbs, CostMap{2.0}, 1e-9);
  const CorrectionResult s2 = correct_strategy2(one, Semantics::kHbs, CostMap{2.0}, 1e-9);
  EXPECT_EQ(s1.total_cost, s2.total_cost);
  EXPECT_EQ(s1.corrected, s2.corrected);
}

TEST(CorrectStrategy2, ArgumentLimit) {
  std::vector<ArgumentId> ids;
  for (int i = 0; i < 21; ++i) ids.push_back("a" + std::to_string(i));
  const Caf big(AttackGraph(ids, {{"a0", "a1"}}), std::vector<Interval>(21, Interval{0.9, 1.0}));
  try {
    correct_strategy2(big, Semantics::kHbs, CostMap(21, 1.0), 1e-6);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kLimitExceeded);
  }
  // Capped at one argument per subset: 21 candidates, only a0 or a1 can help
  // and moving the attacked one is cheaper.
  const CorrectionResult capped = correct_strategy2(big, Semantics::kHbs, CostMap(21, 1.0), 1e-6, 1);
  EXPECT_TRUE(is_rational(capped.corrected, Semantics::kHbs));
  EXPECT_EQ(*capped.subset, std::vector<ArgumentId>{"a1"});
}

TEST(CostPresets, Kinds) {
  const Caf caf = chain_caf({0.9, 1.0}, {0.6, 1.0}, CostMap{4.0, 7.0});
  EXPECT_EQ(cost_presets(CostPreset::kUnit, caf), (CostMap{1.0, 1.0}));
  const CostMap origin = cost_presets(CostPreset::kOriginLine, caf);
  EXPECT_DOUBLE_EQ(origin[0], 1.0 / 0.9);
  EXPECT_DOUBLE_EQ(origin[1], 1.0 / 0.6);
  EXPECT_EQ(cost_presets(CostPreset::kCustom, caf), (CostMap{4.0, 7.0}));
  EXPECT_THROW(cost_presets(CostPreset::kOriginLine, chain_caf({0.0, 1.0}, {0.0, 1.0})), Error);
}

TEST(CostPresets, OriginLineMovesTowardsOrigin) {
  const Caf caf = chain_instance();
  const CostMap costs = cost_presets(CostPreset::kOriginLine, caf);
  const CorrectionResult r = correct_strategy1(caf, Semantics::kHbs, costs, 1e-9);
  // Both minima shrink by the same factor (1 - t).
  EXPECT_NEAR(r.corrected.interval(0).lo / 0.9, r.corrected.interval(1).lo / 0.6, 1e-7);
}

TEST(CorrectionProperties, RandomIrrationalInstances) {
  SplitMix64 rng(555);
  const double eps = 1e-6;
  int checked = 0;
  while (checked < 120) {
    const std::size_t n = 1 + rng.uniform_int(0, 6);
    AttackGraph g = testing::random_graph(rng, n, 0.5);
    std::vector<Interval> iv;
    CostMap costs(n);
    for (std::size_t i = 0; i < n; ++i) {
      iv.push_back({0.5 + 0.5 * rng.uniform(), 1.0});
      costs[i] = static_cast<double>(rng.uniform_int(1, 11));
    }
    const Caf caf(std::move(g), std::move(iv), costs);
    for (Semantics s : kAllSemantics) {
      if (is_rational(caf, s)) continue;
      ++checked;
      const CorrectionResult s1 = correct_strategy1(caf, s, costs, eps);
      const CorrectionResult s2 = correct_strategy2(caf, s, costs, eps);
      ASSERT_TRUE(is_rational(s1.corrected, s));
      ASSERT_TRUE(is_rational(s2.corrected, s));
      const double slack = eps * std::accumulate(costs.begin(), costs.end(), 0.0);
      ASSERT_LE(s2.total_cost, s1.total_cost + slack);

      // Upper bounds and unmoved minima are bit-identical.
      for (std::size_t a = 0; a < n; ++a) {
        ASSERT_EQ(s1.corrected.interval(a).hi, caf.interval(a).hi);
        ASSERT_EQ(s2.corrected.interval(a).hi, caf.interval(a).hi);
        const bool moved = std::find(s2.modified.begin(), s2.modified.end(), caf.graph().id(a)) != s2.modified.end();
        if (!moved) { ASSERT_EQ(s2.corrected.interval(a).lo, caf.interval(a).lo); }
        ASSERT_GE(s1.corrected.interval(a).lo, 0.0);
        ASSERT_LE(s1.corrected.interval(a).lo, caf.interval(a).lo);
      }

      // Cost accounting charges actual displacement.
      double cost = 0.0;
      for (std::size_t a = 0; a < n; ++a) cost += costs[a] * (caf.interval(a).lo - s1.corrected.interval(a).lo);
      ASSERT_NEAR(cost, s1.total_cost, 1e-12);

      // t* accuracy and monotonicity along the line.
      const ArgumentSubset all = all_arguments(caf);
      const double t = s1.parameter_t;
      if (t > 2 * eps) { ASSERT_FALSE(is_rational(lowered_caf(caf, costs, all, t - 2 * eps), s)); }
      for (double extra : {0.01, 0.1, 1.0}) ASSERT_TRUE(is_rational(lowered_caf(caf, costs, all, t + extra), s));
    }
  }
}

}  // namespace
}  // namespace argelicit

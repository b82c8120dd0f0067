#include "brt/oracle.hpp"
#include "brt/solvers.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

using brt::ComponentCap;
using brt::MunicipalityCaps;
using brt::Rational;
using brt::ResponseKind;
using brt::SolverKind;
using fixtures::set_of;

namespace {

brt::Instance single_block(brt::Instance inst) {
  inst.municipalities = {brt::Municipality{"all", 1, inst.segments.size(), 1}};
  return inst;
}

brt::Instance unit_line(std::size_t m) {
  brt::Instance inst;
  inst.station_count = m + 1;
  for (std::size_t i = 1; i <= m; ++i) inst.segments.push_back(brt::Segment{i, 1, 1, true});
  inst.municipalities = {brt::Municipality{"all", 1, m, 1}};
  return inst;
}

brt::EffectiveWeights weights_of(std::initializer_list<int> w) {
  brt::EffectiveWeights out;
  for (int x : w) out.per_segment.push_back(x);
  return out;
}

}  // namespace

TEST(Caps, FloorOfShareTimesBudget) {
  const auto two = fixtures::three_station_line();
  EXPECT_EQ(brt::caps_for_budget(two, 3).per_municipality, (std::vector<std::int64_t>{2, 1}));
  EXPECT_EQ(brt::caps_for_budget(two, Rational(3, 2)).per_municipality, (std::vector<std::int64_t>{1, 0}));
  EXPECT_THROW(brt::caps_for_budget(two, -1), std::invalid_argument);
}

TEST(Caps, ComponentLimitNormalisation) {
  EXPECT_FALSE(brt::effective_component_limit(6, ComponentCap::at_most(3)).has_value());
  EXPECT_EQ(brt::effective_component_limit(6, ComponentCap::at_most(2)), 2);
  EXPECT_EQ(brt::effective_component_limit(6, ComponentCap::at_most(3), false), 3);
  EXPECT_FALSE(brt::effective_component_limit(6, ComponentCap::unbounded()).has_value());
}

TEST(SingleObjective, ThreeStationMinImprov) {
  const auto two = fixtures::three_station_line();
  auto r = brt::solve_single_objective(two, ResponseKind::MinImprov, 3);
  EXPECT_EQ(r.objective, 3);
  // {e1} alone already serves both pairs; it is the smallest optimal set
  EXPECT_EQ(r.best, set_of(2, {1}));
  EXPECT_EQ(brt::attracted(two, set_of(2, {1, 2}), ResponseKind::MinImprov), 3);
  r = brt::solve_single_objective(two, ResponseKind::MinImprov, Rational(3, 2));
  EXPECT_EQ(r.objective, 0);
  EXPECT_TRUE(r.best.empty());
  for (auto kind : {ResponseKind::Linear, ResponseKind::MinImprov}) {
    r = brt::solve_single_objective(fixtures::five_station_line(), kind, 0);
    EXPECT_EQ(r.objective, 0);
    EXPECT_TRUE(r.best.empty());
  }
}

TEST(SingleObjective, DispatchChoosesExpectedSolver) {
  auto one = fixtures::five_station_line();
  EXPECT_EQ(brt::solve_single_objective(one, ResponseKind::Linear, 10).solver_used, SolverKind::LinearDP);
  EXPECT_EQ(brt::solve_single_objective(one, ResponseKind::MinImprov, 10).solver_used, SolverKind::BranchBound);
  auto six = unit_line(6);
  six.component_cap = ComponentCap::at_most(2);
  six.od_pairs = {brt::ODPair{1, 7, 5, 3}};
  EXPECT_EQ(brt::solve_single_objective(six, ResponseKind::MinImprov, 3).solver_used, SolverKind::IntervalEnum);
  EXPECT_EQ(brt::solve_single_objective(six, ResponseKind::Linear, 3).solver_used, SolverKind::LinearDP);
  six.component_cap = ComponentCap::unbounded();
  EXPECT_EQ(brt::solve_single_objective(six, ResponseKind::Linear, 3).solver_used, SolverKind::PrefixFastPath);
}

TEST(LinearDp, UnitCostsTakeLargestWeights) {
  const auto inst = unit_line(5);
  const auto w = weights_of({3, 9, 1, 7, 5});
  auto r = brt::solve_linear_dp(inst, w, MunicipalityCaps{{2}}, std::nullopt);
  EXPECT_EQ(r.best, set_of(5, {2, 4}));
  EXPECT_EQ(r.objective, 16);
  r = brt::solve_linear_dp(inst, w, MunicipalityCaps{{100}}, std::nullopt);
  EXPECT_EQ(r.best, brt::UpgradeSet::full(5));
}

TEST(LinearDp, ComponentCapAgnosticWhenOptimumIsConnected) {
  const auto inst = unit_line(4);
  const auto w = weights_of({1, 10, 10, 1});
  for (auto z : {std::optional<std::int64_t>{1}, std::optional<std::int64_t>{}}) {
    const auto r = brt::solve_linear_dp(inst, w, MunicipalityCaps{{2}}, z);
    EXPECT_EQ(r.best, set_of(4, {2, 3}));
    EXPECT_EQ(r.objective, 20);
  }
}

TEST(LinearDp, ComponentCapBinds) {
  const auto inst = unit_line(5);
  const auto w = weights_of({9, 1, 9, 1, 9});
  EXPECT_EQ(brt::solve_linear_dp(inst, w, MunicipalityCaps{{3}}, std::nullopt).objective, 27);
  EXPECT_EQ(brt::solve_linear_dp(inst, w, MunicipalityCaps{{3}}, 1).objective, 19);
  EXPECT_EQ(brt::solve_linear_dp(inst, w, MunicipalityCaps{{3}}, 2).objective, 19);
}

TEST(LinearDp, TiesPreferEarlierSegments) {
  const auto inst = unit_line(4);
  const auto r = brt::solve_linear_dp(inst, weights_of({5, 5, 5, 5}), MunicipalityCaps{{2}}, std::nullopt);
  EXPECT_EQ(r.best, set_of(4, {1, 2}));
}

TEST(IntervalEnum, FiveStationSingleBlock) {
  const auto inst = single_block(fixtures::five_station_line());
  const auto r = brt::solve_interval_enum(inst, ResponseKind::MinImprov, MunicipalityCaps{{16}}, 1);
  ASSERT_TRUE(r.has_value());
  EXPECT_EQ(r->best, set_of(4, {2, 3}));
  EXPECT_EQ(r->objective, 300);
  const auto oracle = brt::brute_force_single([&] {
    auto c = inst;
    c.component_cap = ComponentCap::at_most(1);
    return c;
  }(), ResponseKind::MinImprov, 16);
  EXPECT_EQ(oracle.objective, 300);
  EXPECT_EQ(oracle.best, r->best);
}

TEST(IntervalEnum, ZeroCaps) {
  const auto r = brt::solve_interval_enum(fixtures::five_station_line(), ResponseKind::MinImprov,
                                          MunicipalityCaps{{0, 0}}, 1);
  ASSERT_TRUE(r.has_value());
  EXPECT_TRUE(r->best.empty());
  EXPECT_EQ(r->objective, 0);
}

TEST(IntervalEnum, DeclinesPastEnumerationCap) {
  brt::SolverOptions opt;
  opt.enumeration_cap = 10;
  EXPECT_FALSE(brt::solve_interval_enum(unit_line(8), ResponseKind::MinImprov, MunicipalityCaps{{3}}, 2, opt));
}

TEST(IntervalEnum, RedundantCapMatchesBranchAndBound) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const auto inst = fixtures::random_small(seed, {8, 2});
    const std::int64_t z = brt::max_components(8);
    for (const Rational& budget : {Rational(5), Rational(12), Rational(40)}) {
      const auto caps = brt::caps_for_budget(inst, budget);
      for (auto kind : {ResponseKind::Linear, ResponseKind::MinImprov}) {
        const auto ie = brt::solve_interval_enum(inst, kind, caps, z);
        ASSERT_TRUE(ie.has_value());
        const auto bb = brt::solve_branch_bound(inst, kind, caps, std::nullopt);
        EXPECT_EQ(ie->objective, bb.objective) << "seed " << seed;
        EXPECT_EQ(ie->best, bb.best) << "seed " << seed;
      }
    }
  }
}

TEST(BranchAndBound, ThreeStationLine) {
  const auto two = fixtures::three_station_line();
  EXPECT_EQ(brt::solve_branch_bound(two, ResponseKind::MinImprov, MunicipalityCaps{{2, 1}}, std::nullopt).objective, 3);
  const auto none = brt::solve_branch_bound(two, ResponseKind::MinImprov, MunicipalityCaps{{0, 0}}, std::nullopt);
  EXPECT_TRUE(none.best.empty());
  EXPECT_EQ(none.objective, 0);
}

TEST(BranchAndBound, MatchesOracleOnRandomTenSegmentLines) {
  for (std::uint64_t seed = 100; seed < 200; ++seed) {
    const std::size_t M = 1 + seed % 3;
    const ComponentCap z = seed % 4 == 0 ? ComponentCap::unbounded() : ComponentCap::at_most(1 + static_cast<std::int64_t>(seed % 3));
    const auto inst = fixtures::random_small(seed, {10, M, z, seed % 5 == 0});
    brt::Prng rng(seed);
    const Rational budget(rng.uniform(0, 60), rng.uniform(1, 3));
    const auto caps = brt::caps_for_budget(inst, budget);
    const auto zl = brt::effective_component_limit(10, z);
    const auto oracle = brt::brute_force_single(inst, ResponseKind::MinImprov, budget);
    const auto bb = brt::solve_branch_bound(inst, ResponseKind::MinImprov, caps, zl);
    EXPECT_EQ(bb.objective, oracle.objective) << "seed " << seed;
    EXPECT_EQ(bb.best, oracle.best) << "seed " << seed;
  }
}

TEST(BranchAndBound, NodeLimitRaisesWithIncumbent) {
  const auto inst = fixtures::random_small(5, {12, 1});
  brt::SolverOptions opt;
  opt.node_limit = 5;
  opt.use_relaxation_bound = false;
  try {
    brt::solve_branch_bound(inst, ResponseKind::MinImprov, brt::caps_for_budget(inst, 20), std::nullopt, opt);
    FAIL() << "expected a resource limit";
  } catch (const brt::ResourceLimitError& e) {
    EXPECT_GT(e.nodes(), 5u);
    EXPECT_GE(e.bound(), e.incumbent_value());
    EXPECT_EQ(e.incumbent().size(), 12u);
  }
}

TEST(RelaxationBound, Examples) {
  const auto one = fixtures::five_station_line();
  const auto bound = brt::linear_relaxation_bound(one, MunicipalityCaps{{100, 100}});
  ASSERT_TRUE(bound.has_value());
  EXPECT_GE(*bound, brt::brute_force_single(one, ResponseKind::MinImprov, 1000).objective);

  auto empty = one;
  empty.od_pairs.clear();
  EXPECT_EQ(brt::linear_relaxation_bound(empty, MunicipalityCaps{{100, 100}}), Rational(0));

  brt::Instance tight;
  tight.station_count = 2;
  tight.segments = {brt::Segment{1, 1, 3, true}};
  tight.municipalities = {brt::Municipality{"m", 1, 1, 1}};
  tight.od_pairs = {brt::ODPair{1, 2, 10, 3}};
  EXPECT_EQ(brt::linear_relaxation_bound(tight, MunicipalityCaps{{1}}), Rational(10));

  auto zero = one;
  zero.od_pairs[0].threshold = 0;
  EXPECT_FALSE(brt::linear_relaxation_bound(zero, MunicipalityCaps{{1, 1}}).has_value());
}

TEST(RelaxationBound, DominatesOracleOnRandomLines) {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    const auto inst = fixtures::random_small(seed, {9, 1 + seed % 3});
    const Rational budget(static_cast<std::int64_t>(seed % 25));
    const auto bound = brt::linear_relaxation_bound(inst, brt::caps_for_budget(inst, budget));
    ASSERT_TRUE(bound.has_value());
    EXPECT_GE(*bound, brt::brute_force_single(inst, ResponseKind::MinImprov, budget).objective);
  }
}

TEST(Agreement, AllSolversMatchOracle) {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    const std::size_t m = 5 + seed % 8;
    const ComponentCap z = seed % 3 == 0 ? ComponentCap::unbounded() : ComponentCap::at_most(1 + static_cast<std::int64_t>(seed % 3));
    const auto inst = fixtures::random_small(seed * 7919, {m, 1 + seed % 3, z, seed % 4 == 0});
    const auto zl = brt::effective_component_limit(m, z);
    for (const Rational& budget : {Rational(0), Rational(3), Rational(17, 2), Rational(20), Rational(100)}) {
      const auto caps = brt::caps_for_budget(inst, budget);
      for (auto kind : {ResponseKind::Linear, ResponseKind::MinImprov}) {
        const auto oracle = brt::brute_force_single(inst, kind, budget);
        const auto dispatched = brt::solve_single_objective(inst, kind, budget);
        EXPECT_EQ(dispatched.objective, oracle.objective) << seed;
        EXPECT_EQ(dispatched.best, oracle.best) << seed;
        const auto bb = brt::solve_branch_bound(inst, kind, caps, zl);
        EXPECT_EQ(bb.objective, oracle.objective) << seed;
        if (zl) {
          const auto ie = brt::solve_interval_enum(inst, kind, caps, *zl);
          ASSERT_TRUE(ie.has_value());
          EXPECT_EQ(ie->objective, oracle.objective) << seed;
        }
        if (kind == ResponseKind::Linear) {
          EXPECT_EQ(brt::solve_linear_dp(inst, brt::effective_weights(inst), caps, zl).objective, oracle.objective);
        }
      }
    }
  }
}

TEST(LinearDpProperties, MonotoneInBudgetAndComponents) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = fixtures::random_small(seed, {11, 3});
    const auto w = brt::effective_weights(inst);
    Rational previous = 0;
    for (std::int64_t b = 0; b <= 70; b += 3) {
      const auto caps = brt::caps_for_budget(inst, b);
      const auto v = brt::solve_linear_dp(inst, w, caps, std::nullopt).objective;
      EXPECT_GE(v, previous);
      previous = v;
      Rational by_z = 0;
      for (std::int64_t z = 1; z <= 6; ++z) {
        const auto vz = brt::solve_linear_dp(inst, w, caps, z).objective;
        EXPECT_GE(vz, by_z);
        EXPECT_LE(vz, v);
        by_z = vz;
      }
    }
  }
}

TEST(LinearDpProperties, ComponentSandwich) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = single_block(fixtures::random_small(seed * 31, {11, 1}));
    const auto w = brt::effective_weights(inst);
    for (std::int64_t b = 1; b <= 40; b += 2) {
      const brt::MunicipalityCaps caps{{b}};
      const auto full = brt::solve_linear_dp(inst, w, caps, std::nullopt);
      const auto K = brt::count_components(inst, full.best);
      for (std::int64_t k = 1; k < K; ++k) {
        const auto fk = brt::solve_linear_dp(inst, w, caps, k).objective;
        EXPECT_LE(fk, full.objective);
        EXPECT_GE(fk, Rational(k, K) * full.objective);
      }
    }
  }
}

TEST(PrefixFastPath, MatchesDpAndSortedWeights) {
  const auto inst = brt::generate_prefix_special(9, brt::PrefixVariant::UnimodalWeights);
  const auto w = brt::effective_weights(inst);
  auto sorted = w.per_segment;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  Rational prefix = 0;
  for (std::int64_t v = 0; v <= 8; ++v) {
    if (v > 0) prefix += sorted[static_cast<std::size_t>(v - 1)];
    const brt::MunicipalityCaps caps{{v}};
    const auto fast = brt::solve_prefix_fast_path(inst, w, caps, std::nullopt);
    ASSERT_TRUE(fast.has_value());
    const auto dp = brt::solve_linear_dp(inst, w, caps, std::nullopt);
    EXPECT_EQ(dp.objective, prefix);
    EXPECT_EQ(fast->objective, prefix);
    EXPECT_EQ(fast->best, dp.best);
  }
}

TEST(PrefixFastPath, DeclinesOutsideItsCase) {
  const auto one = fixtures::five_station_line();
  EXPECT_FALSE(brt::solve_prefix_fast_path(one, brt::effective_weights(one), MunicipalityCaps{{1, 1}}, std::nullopt));
  const auto unit = unit_line(4);
  EXPECT_FALSE(brt::solve_prefix_fast_path(unit, weights_of({1, 2, 3, 4}), MunicipalityCaps{{2}}, 1));
}

TEST(PrefixSpecial, CheapestCostsPerUnitWeight) {
  const auto inst = brt::generate_prefix_special(8, brt::PrefixVariant::UnimodalCosts);
  const auto w = brt::effective_weights(inst);
  for (const auto& x : w.per_segment) EXPECT_EQ(x, 1);
  std::vector<std::int64_t> costs;
  for (const auto& s : inst.segments) costs.push_back(s.cost);
  std::sort(costs.begin(), costs.end());
  std::int64_t budget = 0;
  for (std::size_t k = 1; k <= costs.size(); ++k) {
    budget += costs[k - 1];
    const auto r = brt::solve_linear_dp(inst, w, MunicipalityCaps{{budget}}, std::nullopt);
    EXPECT_EQ(r.objective, static_cast<std::int64_t>(k));
  }
}

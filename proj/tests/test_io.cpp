#include "brt/io.hpp"
#include "brt/report.hpp"
#include "fixtures.hpp"

#include <gtest/gtest.h>

#include <regex>

using brt::Rational;
using brt::ResponseKind;

TEST(InstanceJson, RoundTripKeepsExactValues) {
  auto inst = fixtures::random_small(9, {9, 3, brt::ComponentCap::at_most(2), true});
  inst.meta["note"] = "x";
  const auto back = brt::instance_from_json(brt::Json::parse(brt::instance_to_json(inst).dump()));
  EXPECT_EQ(brt::instance_to_json(back).dump(), brt::instance_to_json(inst).dump());
  EXPECT_EQ(back.segments[3].improvement, inst.segments[3].improvement);
  EXPECT_EQ(back.component_cap.value(), 2);
  EXPECT_EQ(back.meta.at("note"), "x");
}

TEST(InstanceJson, DefaultsAndAlternateSpellings) {
  const auto j = brt::Json::parse(R"({
    "stations": 3,
    "segments": [{"cost": 2, "improvement": 1}, {"cost": 1, "improvement": "3/2", "upgradable": false}],
    "municipalities": [{"id": "a", "firstSegment": 1, "lastSegment": 2, "share": 1}],
    "odPairs": [{"origin": 3, "destination": 1, "potential": 4, "threshold": "1/2"}]
  })");
  const auto inst = brt::instance_from_json(j);
  EXPECT_TRUE(inst.component_cap.is_unbounded());
  EXPECT_TRUE(inst.segments[0].upgradable);
  EXPECT_FALSE(inst.segments[1].upgradable);
  EXPECT_EQ(inst.segments[1].improvement, Rational(3, 2));
  EXPECT_EQ(inst.od_pairs[0].threshold, Rational(1, 2));
  EXPECT_TRUE(brt::validate_instance(inst).empty());
}

TEST(InstanceJson, RejectsMalformedInput) {
  EXPECT_THROW(brt::instance_from_json(brt::Json::parse(R"({"segments": []})")), brt::FormatError);
  EXPECT_THROW(brt::instance_from_json(brt::Json::parse(
                   R"({"stations": 2, "segments": [{"cost": 1, "improvement": "1/0"}], "municipalities": [], "odPairs": []})")),
               brt::FormatError);
  EXPECT_THROW(brt::instance_from_json(brt::Json::parse(
                   R"({"stations": 2, "segments": [], "municipalities": [], "odPairs": [], "componentCap": 0})")),
               brt::FormatError);
  EXPECT_THROW(brt::parse_component_cap("two"), std::invalid_argument);
  EXPECT_TRUE(brt::parse_component_cap("inf").is_unbounded());
}

TEST(FrontCsv, RoundTripIsExact) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const auto inst = fixtures::random_small(seed, {10, 1 + seed % 3});
    for (auto kind : {ResponseKind::Linear, ResponseKind::MinImprov}) {
      const auto trace = brt::enumerate_pareto(inst, kind);
      const auto file = brt::front_from_csv(10, brt::front_to_csv(inst, trace.front));
      EXPECT_FALSE(file.incomplete);
      const auto back = file.front();
      ASSERT_EQ(back.size(), trace.front.size());
      for (std::size_t i = 0; i < back.size(); ++i) {
        EXPECT_EQ(back.points[i].passengers, trace.front.points[i].passengers);
        EXPECT_EQ(back.points[i].budget, trace.front.points[i].budget);
        EXPECT_EQ(back.points[i].witness, trace.front.points[i].witness);
        EXPECT_EQ(file.rows[i].cost, brt::investment_cost(inst, trace.front.points[i].witness));
        EXPECT_EQ(file.rows[i].components, brt::count_components(inst, trace.front.points[i].witness));
      }
    }
  }
}

TEST(FrontCsv, HeaderAndIncompleteFlag) {
  const auto two = fixtures::three_station_line();
  const auto trace = brt::enumerate_pareto(two, ResponseKind::MinImprov);
  const auto text = brt::front_to_csv(two, trace.front, false);
  EXPECT_EQ(text, "# incomplete\n"
                  "budget_num,budget_den,passengers_num,passengers_den,cost,components,witness_bitmask\n"
                  "3,1,3,1,2,1,1\n"
                  "0,1,0,1,0,0,0\n");
  EXPECT_TRUE(brt::front_from_csv(2, text).incomplete);
  EXPECT_THROW(brt::front_from_csv(2, "a,b\n"), brt::FormatError);
  EXPECT_THROW(brt::front_from_csv(2, std::string(brt::kFrontHeader) + "\n1,1,1,1,1,1,8\n"), brt::FormatError);
}

TEST(FrontCsv, WideLinesUseHex) {
  brt::UpgradeSet f(70);
  f.insert(0);
  f.insert(69);
  EXPECT_EQ(brt::witness_field(f), "0x200000000000000001");
  EXPECT_EQ(brt::parse_witness_field(70, brt::witness_field(f)), f);
  EXPECT_EQ(brt::witness_field(fixtures::set_of(4, {1, 3})), "5");
}

TEST(TraceJson, CarriesIterationsAndCostEvaluation) {
  const auto two = fixtures::three_station_line();
  const auto trace = brt::enumerate_pareto(two, ResponseKind::Linear);
  const auto j = brt::trace_to_json(two, trace, ResponseKind::Linear, 0.5);
  EXPECT_EQ(j.at("front").size(), 2u);
  EXPECT_EQ(j.at("iterations").size(), trace.iterations.size());
  EXPECT_EQ(j.at("iterations")[0].at("step"), "3/2");
  EXPECT_EQ(j.at("iterations")[0].at("tight"), brt::Json::array({"m1", "m2"}));
  EXPECT_EQ(j.at("costEvaluation")[0].at("cost"), 3);
  EXPECT_EQ(j.at("complete"), true);
}

TEST(Svg, PercentagesWithFourDecimals) {
  const auto one = fixtures::five_station_line();
  const auto trace = brt::enumerate_pareto(one, ResponseKind::MinImprov);
  const auto svg = brt::front_to_svg(one, trace, ResponseKind::MinImprov, "test <plot>");
  EXPECT_NE(svg.find("test &lt;plot&gt;"), std::string::npos);
  EXPECT_NE(svg.find("passengers 100.0000%"), std::string::npos);
  std::regex pct(R"(\d+\.\d{4}%)");
  const auto n = std::distance(std::sregex_iterator(svg.begin(), svg.end(), pct), std::sregex_iterator());
  EXPECT_EQ(static_cast<std::size_t>(n), 2 * (trace.front.size() + trace.front.size()));
  // the plot must not change the front
  EXPECT_EQ(brt::enumerate_pareto(one, ResponseKind::MinImprov).front.size(), trace.front.size());
}

TEST(Verify, CaseAgreesAndFlagsCostDivergence) {
  const auto two = fixtures::three_station_line();
  const auto v = brt::verify_case(two, ResponseKind::MinImprov, brt::ComponentCap::unbounded());
  EXPECT_TRUE(v.pass());
  EXPECT_TRUE(brt::budget_and_cost_fronts_differ(v));
  const auto one = fixtures::five_station_line();
  for (auto kind : {ResponseKind::Linear, ResponseKind::MinImprov}) {
    for (auto cap : {brt::ComponentCap::at_most(1), brt::ComponentCap::unbounded()}) {
      EXPECT_TRUE(brt::verify_case(one, kind, cap).pass());
    }
  }
}

TEST(Verify, FirstMismatchReportsPosition) {
  brt::ParetoFront a, b;
  a.points = {brt::ParetoPoint{3, 3, {}}, brt::ParetoPoint{0, 0, {}}};
  b.points = {brt::ParetoPoint{3, 3, {}}};
  const auto m = brt::first_mismatch(a, b);
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->index, 1u);
  EXPECT_TRUE(m->expected.has_value());
  EXPECT_FALSE(m->actual.has_value());
  EXPECT_FALSE(brt::first_mismatch(a, a).has_value());
}

TEST(Bench, ThreadCapFromEnvironment) {
  ::setenv("BRT_PARETO_THREADS", "2", 1);
  EXPECT_EQ(brt::bench_threads(8), 2u);
  EXPECT_EQ(brt::bench_threads(1), 1u);
  ::setenv("BRT_PARETO_THREADS", "zero", 1);
  EXPECT_EQ(brt::bench_threads(8), 8u);
  ::unsetenv("BRT_PARETO_THREADS");
}

TEST(Bench, SmallGridIsConsistentAndDeterministic) {
  brt::BenchConfig cfg;
  cfg.stations = 10;
  cfg.threads = 2;
  const auto keys = brt::bench_grid();
  EXPECT_EQ(keys.size(), 288u);
  const auto cells = brt::run_bench(keys, cfg);
  ASSERT_EQ(cells.size(), 288u);
  for (const auto& c : cells) {
    EXPECT_TRUE(c.ok()) << c.key.label() << ": " << c.error;
    EXPECT_LE(brt::BigInt(c.trace.front.size()), c.size_bound);
    if (c.key.cost == brt::CostPattern::Unit && !c.key.split && c.key.response == ResponseKind::Linear) {
      EXPECT_LE(c.trace.front.size(), 10u);
    }
  }
  EXPECT_TRUE(brt::bench_violations(cells).empty());
  cfg.threads = 1;
  const auto again = brt::run_bench(keys, cfg);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    EXPECT_TRUE(brt::same_values(cells[i].trace.front, again[i].trace.front));
  }
  const auto csv = brt::bench_cells_csv(cells);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 289);
}

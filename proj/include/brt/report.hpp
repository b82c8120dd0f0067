#pragma once

// Bench grid over generated scenarios and the oracle cross-check used by the
// command-line tool.

#include "brt/generator.hpp"
#include "brt/io.hpp"
#include "brt/oracle.hpp"
#include "brt/pareto.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdlib>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace brt {

// ---------------------------------------------------------------- bench

struct BenchKey {
  CostPattern cost = CostPattern::Unit;
  DemandPattern demand = DemandPattern::Even;
  ComponentCap cap = ComponentCap::unbounded();
  std::optional<BudgetSplit> split;  // empty: a single municipality
  ResponseKind response = ResponseKind::Linear;

  std::string split_label() const { return split ? std::string(to_string(*split)) : "single"; }
  std::int64_t cap_rank() const { return cap.is_unbounded() ? std::numeric_limits<std::int64_t>::max() : cap.value(); }
  auto tie() const {
    return std::make_tuple(static_cast<int>(cost), static_cast<int>(demand), split ? static_cast<int>(*split) + 1 : 0,
                           cap_rank(), static_cast<int>(response));
  }
  friend bool operator<(const BenchKey& a, const BenchKey& b) { return a.tie() < b.tie(); }
  std::string label() const {
    return std::string(to_string(cost)) + "/" + std::string(to_string(demand)) + "/Z=" + cap.to_string() + "/" +
           split_label() + "/" + std::string(to_string(response));
  }
};

struct BenchCell {
  BenchKey key;
  EnumerationTrace trace;
  Rational total_potential = 0;
  std::int64_t full_cost = 0;
  BigInt size_bound = 0;
  double seconds = 0.0;
  std::string error;  // empty when the front is complete
  bool ok() const { return error.empty(); }
};

struct BenchConfig {
  std::size_t stations = 25;
  std::uint64_t seed = 1;
  std::size_t threads = 0;  // 0: hardware concurrency
  SolverOptions solver;
};

/// Width of the worker pool: the requested width (or the hardware's), capped
/// by BRT_PARETO_THREADS when that holds a positive integer.
inline std::size_t bench_threads(std::size_t requested) {
  std::size_t n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("BRT_PARETO_THREADS")) {
    char* end = nullptr;
    const unsigned long long cap = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && cap > 0) n = std::min<std::size_t>(n, cap);
  }
  return n;
}

inline std::vector<BenchKey> bench_grid() {
  std::vector<BenchKey> keys;
  for (auto c : {CostPattern::Unit, CostPattern::Middle, CostPattern::Ends}) {
    for (auto d : {DemandPattern::Even, DemandPattern::Hubs, DemandPattern::Termini}) {
      for (auto z : {ComponentCap::at_most(1), ComponentCap::at_most(2), ComponentCap::at_most(3), ComponentCap::unbounded()}) {
        for (std::optional<BudgetSplit> s : {std::optional<BudgetSplit>{}, std::optional<BudgetSplit>{BudgetSplit::Equal},
                                             std::optional<BudgetSplit>{BudgetSplit::Cost},
                                             std::optional<BudgetSplit>{BudgetSplit::Pass}}) {
          for (auto r : {ResponseKind::Linear, ResponseKind::MinImprov}) keys.push_back(BenchKey{c, d, z, s, r});
        }
      }
    }
  }
  return keys;
}

inline ScenarioSpec spec_for(const BenchKey& key, const BenchConfig& cfg) {
  ScenarioSpec spec;
  spec.station_count = cfg.stations;
  spec.cost = key.cost;
  spec.demand = key.demand;
  spec.component_cap = key.cap;
  spec.municipality_count = key.split ? std::min<std::size_t>(5, cfg.stations - 1) : 1;
  spec.split = key.split.value_or(BudgetSplit::Equal);
  spec.response = std::string(to_string(key.response));
  spec.seed = cfg.seed;
  return spec;
}

inline BenchCell run_cell(const BenchKey& key, const BenchConfig& cfg) {
  BenchCell cell;
  cell.key = key;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    const Instance inst = generate(spec_for(key, cfg));
    cell.total_potential = total_potential(inst);
    cell.full_cost = investment_cost(inst, upgradable_segments(inst));
    cell.size_bound = front_size_bound(inst);
    cell.trace = enumerate_pareto(inst, key.response, cfg.solver);
    if (auto v = front_invariant_violation(cell.trace.front); !v.empty()) cell.error = "front invariant: " + v;
  } catch (const EnumerationError& e) {
    cell.trace = e.partial();
    cell.error = e.what();
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cell;
}

/// Runs the given cells in a pool; results come back sorted by scenario key.
inline std::vector<BenchCell> run_bench(const std::vector<BenchKey>& keys, const BenchConfig& cfg) {
  std::vector<BenchCell> cells(keys.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < keys.size(); i = next++) cells[i] = run_cell(keys[i], cfg);
  };
  const std::size_t width = std::min(bench_threads(cfg.threads), std::max<std::size_t>(1, keys.size()));
  std::vector<std::thread> pool;
  for (std::size_t t = 1; t < width; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  std::sort(cells.begin(), cells.end(), [](const BenchCell& a, const BenchCell& b) { return a.key < b.key; });
  return cells;
}

/// Largest gap, over all breakpoints, of passengers_at(lower) - passengers_at(upper).
/// Positive means `lower` beats `upper` somewhere.
inline Rational max_excess(const ParetoFront& lower, const ParetoFront& upper) {
  Rational worst = 0;
  bool first = true;
  for (const auto* f : {&lower, &upper}) {
    for (const auto& p : f->points) {
      const Rational d = passengers_at(lower, p.budget) - passengers_at(upper, p.budget);
      if (first || d > worst) worst = d;
      first = false;
    }
  }
  return worst;
}

/// Cross-cell consistency: fronts grow with Z, and splitting the budget over
/// five municipalities never beats a single one.
inline std::vector<std::string> bench_violations(const std::vector<BenchCell>& cells) {
  std::map<BenchKey, const BenchCell*> by_key;
  for (const auto& c : cells) by_key[c.key] = &c;
  std::vector<std::string> out;
  for (const auto& c : cells) {
    if (!c.ok()) continue;
    if (!c.key.cap.is_unbounded()) {
      BenchKey up = c.key;
      up.cap = c.key.cap.value() >= 3 ? ComponentCap::unbounded() : ComponentCap::at_most(c.key.cap.value() + 1);
      auto it = by_key.find(up);
      if (it != by_key.end() && it->second->ok() && max_excess(c.trace.front, it->second->trace.front) > 0) {
        out.push_back(c.key.label() + " exceeds " + up.label());
      }
    }
    if (c.key.split) {
      BenchKey single = c.key;
      single.split.reset();
      auto it = by_key.find(single);
      if (it != by_key.end() && it->second->ok() && max_excess(c.trace.front, it->second->trace.front) > 0) {
        out.push_back(c.key.label() + " exceeds " + single.label());
      }
    }
    if (BigInt(c.trace.front.size()) > c.size_bound) out.push_back(c.key.label() + " exceeds its size bound");
  }
  return out;
}

inline std::string bench_cells_csv(const std::vector<BenchCell>& cells) {
  std::ostringstream out;
  out << "cost,demand,components,split,response,status,front_seconds,points,seconds_per_point,iterations,size_bound,"
         "total_potential,full_cost\n";
  for (const auto& c : cells) {
    const auto pts = c.trace.front.size();
    out << to_string(c.key.cost) << ',' << to_string(c.key.demand) << ',' << c.key.cap.to_string() << ','
        << c.key.split_label() << ',' << to_string(c.key.response) << ',' << (c.ok() ? "ok" : "incomplete") << ','
        << c.seconds << ',' << pts << ',' << (pts ? c.seconds / static_cast<double>(pts) : 0.0) << ','
        << c.trace.iterations.size() << ',' << c.size_bound << ',' << to_string(c.total_potential) << ','
        << c.full_cost << "\n";
  }
  return out.str();
}

/// Averages per (response, single/split, Z), in the spirit of a runtime table.
inline std::string bench_summary_csv(const std::vector<BenchCell>& cells) {
  struct Acc {
    double seconds = 0, points = 0, per_point = 0;
    std::size_t n = 0, max_points = 0, failed = 0;
  };
  std::map<std::tuple<int, int, std::int64_t>, std::pair<BenchKey, Acc>> groups;
  for (const auto& c : cells) {
    auto& [key, acc] = groups[{static_cast<int>(c.key.response), c.key.split ? 1 : 0, c.key.cap_rank()}];
    key = c.key;
    const auto pts = c.trace.front.size();
    acc.seconds += c.seconds;
    acc.points += static_cast<double>(pts);
    acc.per_point += pts ? c.seconds / static_cast<double>(pts) : 0.0;
    acc.max_points = std::max(acc.max_points, pts);
    acc.failed += c.ok() ? 0 : 1;
    ++acc.n;
  }
  std::ostringstream out;
  out << "response,municipalities,components,cells,mean_front_seconds,mean_points,max_points,mean_seconds_per_point,"
         "incomplete\n";
  for (const auto& [_, entry] : groups) {
    const auto& [key, acc] = entry;
    const double n = static_cast<double>(acc.n);
    out << to_string(key.response) << ',' << (key.split ? 5 : 1) << ',' << key.cap.to_string() << ',' << acc.n << ','
        << acc.seconds / n << ',' << acc.points / n << ',' << acc.max_points << ',' << acc.per_point / n << ','
        << acc.failed << "\n";
  }
  return out.str();
}

inline Json bench_json(const std::vector<BenchCell>& cells, const BenchConfig& cfg,
                       const std::vector<std::string>& violations) {
  Json j;
  j["stations"] = cfg.stations;
  j["seed"] = cfg.seed;
  j["threads"] = bench_threads(cfg.threads);
  Json arr = Json::array();
  for (const auto& c : cells) {
    Json pts = Json::array();
    for (const auto& p : c.trace.front.points) pts.push_back({to_string(p.budget), to_string(p.passengers)});
    arr.push_back({{"scenario", c.key.label()},
                   {"complete", c.ok()},
                   {"error", c.error},
                   {"seconds", c.seconds},
                   {"points", c.trace.front.size()},
                   {"sizeBound", to_string(c.size_bound)},
                   {"totalPotential", to_string(c.total_potential)},
                   {"fullCost", c.full_cost},
                   {"front", pts}});
  }
  j["cells"] = arr;
  j["violations"] = violations;
  return j;
}

// ---------------------------------------------------------------- verify

struct FrontMismatch {
  std::size_t index = 0;  // first divergent position
  std::optional<ParetoPoint> expected;
  std::optional<ParetoPoint> actual;
};

inline std::optional<FrontMismatch> first_mismatch(const ParetoFront& expected, const ParetoFront& actual) {
  const std::size_t n = std::max(expected.size(), actual.size());
  for (std::size_t i = 0; i < n; ++i) {
    const bool has_e = i < expected.size();
    const bool has_a = i < actual.size();
    if (has_e && has_a && expected.points[i].passengers == actual.points[i].passengers &&
        expected.points[i].budget == actual.points[i].budget) {
      continue;
    }
    FrontMismatch m;
    m.index = i;
    if (has_e) m.expected = expected.points[i];
    if (has_a) m.actual = actual.points[i];
    return m;
  }
  return std::nullopt;
}

inline std::string describe_point(const std::optional<ParetoPoint>& p) {
  if (!p) return "(none)";
  return "(passengers " + to_string(p->passengers) + ", budget " + to_string(p->budget) + ", witness 0x" +
         p->witness.to_hex() + ")";
}

struct VerifyCase {
  ResponseKind response = ResponseKind::Linear;
  ComponentCap cap;
  ParetoFront enumerated;
  ParetoFront oracle;
  ParetoFront cost_front;
  std::vector<std::pair<Rational, std::int64_t>> cost_evaluation;
  std::optional<FrontMismatch> mismatch;
  std::string error;
  bool pass() const { return error.empty() && !mismatch; }
};

inline VerifyCase verify_case(Instance inst, ResponseKind kind, const ComponentCap& cap, const SolverOptions& opt = {}) {
  inst.component_cap = cap;
  VerifyCase v;
  v.response = kind;
  v.cap = cap;
  try {
    const auto trace = enumerate_pareto(inst, kind, opt);
    v.enumerated = trace.front;
    v.cost_evaluation = evaluate_front_by_cost(inst, trace, kind);
    v.oracle = brute_force_front(inst, kind);
    v.cost_front = brute_force_cost_front(inst, kind);
    v.mismatch = first_mismatch(v.oracle, v.enumerated);
  } catch (const std::exception& e) {
    v.error = e.what();
  }
  return v;
}

/// True when the cost evaluation of the budget front differs from the
/// cost-objective front.
inline bool budget_and_cost_fronts_differ(const VerifyCase& v) {
  if (v.cost_evaluation.size() != v.cost_front.size()) return true;
  for (std::size_t i = 0; i < v.cost_front.size(); ++i) {
    if (v.cost_evaluation[i].first != v.cost_front.points[i].passengers ||
        Rational(v.cost_evaluation[i].second) != v.cost_front.points[i].budget) {
      return true;
    }
  }
  return false;
}

}  // namespace brt

#pragma once

// Seeded generators for artificial lines and for the structured families used
// to exercise special cases (exponential fronts, sorted-prefix optima).

#include "brt/instance.hpp"

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brt {

enum class CostPattern { Unit, Middle, Ends };
enum class DemandPattern { Even, Hubs, Termini };
enum class BudgetSplit { Equal, Cost, Pass };

inline std::string_view to_string(CostPattern p) {
  switch (p) {
    case CostPattern::Unit: return "unit";
    case CostPattern::Middle: return "middle";
    case CostPattern::Ends: return "ends";
  }
  return "?";
}
inline std::string_view to_string(DemandPattern p) {
  switch (p) {
    case DemandPattern::Even: return "even";
    case DemandPattern::Hubs: return "hubs";
    case DemandPattern::Termini: return "termini";
  }
  return "?";
}
inline std::string_view to_string(BudgetSplit p) {
  switch (p) {
    case BudgetSplit::Equal: return "equal";
    case BudgetSplit::Cost: return "cost";
    case BudgetSplit::Pass: return "pass";
  }
  return "?";
}

inline CostPattern parse_cost_pattern(std::string_view s) {
  if (s == "unit") return CostPattern::Unit;
  if (s == "middle") return CostPattern::Middle;
  if (s == "ends") return CostPattern::Ends;
  throw std::invalid_argument("unknown cost pattern '" + std::string(s) + "'");
}
inline DemandPattern parse_demand_pattern(std::string_view s) {
  if (s == "even") return DemandPattern::Even;
  if (s == "hubs") return DemandPattern::Hubs;
  if (s == "termini") return DemandPattern::Termini;
  throw std::invalid_argument("unknown demand pattern '" + std::string(s) + "'");
}
inline BudgetSplit parse_budget_split(std::string_view s) {
  if (s == "equal") return BudgetSplit::Equal;
  if (s == "cost") return BudgetSplit::Cost;
  if (s == "pass") return BudgetSplit::Pass;
  throw std::invalid_argument("unknown budget split '" + std::string(s) + "'");
}

struct ScenarioSpec {
  std::size_t station_count = 25;
  CostPattern cost = CostPattern::Unit;
  DemandPattern demand = DemandPattern::Even;
  BudgetSplit split = BudgetSplit::Equal;
  std::size_t municipality_count = 5;
  ComponentCap component_cap = ComponentCap::unbounded();
  std::string response = "linear";  // recorded in meta only; thresholds are always emitted
  Rational threshold_fraction = Rational(3, 4);
  std::uint64_t seed = 1;

  std::int64_t cost_amplitude = 9;       // MIDDLE/ENDS costs span 1..1+amplitude
  std::int64_t improvement_max = 10;     // u_e uniform on 1..improvement_max
  std::int64_t even_potential = 10;      // a_d per pair for EVEN and the TERMINI base
  Rational termini_share = Rational(7, 50);  // end-to-end share of all passengers
  std::int64_t hub_attractiveness = 10;
  std::int64_t base_attractiveness_max = 3;
};

inline std::vector<std::string> validate_spec(const ScenarioSpec& s) {
  std::vector<std::string> out;
  if (s.station_count < 2) out.push_back("station count must be >= 2");
  if (s.municipality_count < 1) out.push_back("municipality count must be >= 1");
  if (s.station_count >= 2 && s.municipality_count > s.station_count - 1) {
    out.push_back("municipality count exceeds the number of segments");
  }
  if (s.threshold_fraction <= 0 || s.threshold_fraction > 1) out.push_back("threshold fraction must lie in (0, 1]");
  if (!s.component_cap.is_unbounded() && s.component_cap.value() < 1) out.push_back("component cap must be >= 1");
  if (s.cost_amplitude < 0) out.push_back("cost amplitude must be >= 0");
  if (s.improvement_max < 1) out.push_back("improvement_max must be >= 1");
  if (s.even_potential < 1) out.push_back("even potential must be >= 1");
  if (s.termini_share <= 0 || s.termini_share >= 1) out.push_back("termini share must lie in (0, 1)");
  if (s.hub_attractiveness < 1 || s.base_attractiveness_max < 1) out.push_back("attractiveness must be >= 1");
  return out;
}

/// Portable seeded source: std::mt19937_64 (its output sequence is fixed by
/// the C++ standard) with rejection sampling for bounded integers, so the
/// same seed gives the same instance on every platform.
class Prng {
 public:
  explicit Prng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [lo, hi].
  std::int64_t uniform(std::int64_t lo, std::int64_t hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<std::int64_t>(engine_());
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % span;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return lo + static_cast<std::int64_t>(x % span);
  }

 private:
  std::mt19937_64 engine_;
};

namespace gen_detail {

/// Consecutive groups as even as possible; larger groups at both ends.
inline std::vector<std::pair<std::size_t, std::size_t>> split_segments(std::size_t m, std::size_t groups) {
  const std::size_t base = m / groups;
  const std::size_t extra = m % groups;
  const std::size_t front = (extra + 1) / 2;
  const std::size_t back = extra / 2;
  std::vector<std::pair<std::size_t, std::size_t>> out;
  std::size_t next = 1;
  for (std::size_t g = 0; g < groups; ++g) {
    const std::size_t size = base + ((g < front || g >= groups - back) ? 1 : 0);
    out.emplace_back(next, next + size - 1);
    next += size;
  }
  return out;
}

/// 1 at the ends, rising linearly toward the middle (symmetric).
inline Rational triangle(std::size_t i, std::size_t m) {
  if (m <= 1) return 1;
  const auto dist = static_cast<std::int64_t>(2 * i) - 1 - static_cast<std::int64_t>(m);
  return Rational(1) - Rational(dist < 0 ? -dist : dist, static_cast<std::int64_t>(m) - 1);
}

inline std::string describe(const Rational& r) { return to_string(r); }

}  // namespace gen_detail

/// Municipality each station counts toward for passenger volumes: the owner
/// of the segment leaving it, and the last municipality for the terminus.
inline std::vector<std::size_t> station_owners(const Instance& inst) {
  const auto seg_owner = segment_owners(inst);
  std::vector<std::size_t> out(inst.station_count, 0);
  for (std::size_t s = 1; s <= inst.station_count; ++s) {
    out[s - 1] = s <= seg_owner.size() ? seg_owner[s - 1] : (seg_owner.empty() ? 0 : seg_owner.back());
  }
  return out;
}

inline Instance generate(const ScenarioSpec& spec) {
  if (auto errs = validate_spec(spec); !errs.empty()) {
    std::string msg = "invalid scenario:";
    for (const auto& e : errs) msg += " " + e + ";";
    throw std::invalid_argument(msg);
  }
  Prng rng(spec.seed);
  Instance inst;
  const std::size_t n = spec.station_count;
  const std::size_t m = n - 1;
  inst.station_count = n;
  inst.component_cap = spec.component_cap;

  // Improvements come first so every pattern sees the same draws.
  for (std::size_t i = 1; i <= m; ++i) {
    Segment s;
    s.index = i;
    s.improvement = Rational(rng.uniform(1, spec.improvement_max));
    const Rational tri = gen_detail::triangle(i, m);
    // Lines of one or two segments have no distinct middle and ends: keep them flat.
    switch (m <= 2 ? CostPattern::Unit : spec.cost) {
      case CostPattern::Unit: s.cost = 1; break;
      case CostPattern::Middle: s.cost = 1 + to_int64(round_of(spec.cost_amplitude * tri)); break;
      case CostPattern::Ends: s.cost = 1 + to_int64(round_of(spec.cost_amplitude * (1 - tri))); break;
    }
    inst.segments.push_back(s);
  }

  const std::size_t M = spec.municipality_count;
  const auto groups = gen_detail::split_segments(m, M);
  for (std::size_t g = 0; g < M; ++g) {
    inst.municipalities.push_back(Municipality{"m" + std::to_string(g + 1), groups[g].first, groups[g].second, 1});
  }

  // Demand over all unordered station pairs.
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = i + 1; j <= n; ++j) pairs.emplace_back(i, j);
  }
  std::vector<std::int64_t> potential(pairs.size(), spec.even_potential);
  if (spec.demand == DemandPattern::Hubs) {
    const std::size_t hubs = std::max<std::size_t>(1, (n + 4) / 8);
    std::vector<std::int64_t> attract(n + 1, 0);
    std::vector<std::size_t> hub_ids;
    while (hub_ids.size() < std::min(hubs, n)) {
      const auto s = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(n)));
      if (std::find(hub_ids.begin(), hub_ids.end(), s) == hub_ids.end()) hub_ids.push_back(s);
    }
    std::sort(hub_ids.begin(), hub_ids.end());
    for (std::size_t s = 1; s <= n; ++s) attract[s] = rng.uniform(1, spec.base_attractiveness_max);
    for (auto h : hub_ids) attract[h] = spec.hub_attractiveness;
    std::vector<Rational> raw;
    Rational raw_total = 0;
    for (const auto& [i, j] : pairs) {
      raw.push_back(Rational(attract[i] * attract[j], static_cast<std::int64_t>(j - i)));
      raw_total += raw.back();
    }
    const Rational target = Rational(spec.even_potential * static_cast<std::int64_t>(pairs.size()));
    const Rational g = target / raw_total;
    for (std::size_t k = 0; k < pairs.size(); ++k) potential[k] = std::max<std::int64_t>(1, to_int64(round_of(g * raw[k])));
    std::string hub_list;
    for (auto h : hub_ids) hub_list += (hub_list.empty() ? "" : ",") + std::to_string(h);
    std::string attract_list;
    for (std::size_t s = 1; s <= n; ++s) attract_list += (s > 1 ? "," : "") + std::to_string(attract[s]);
    inst.meta["gravity.form"] = "a_ij = max(1, round(g * A_i * A_j / (j - i)))";
    inst.meta["gravity.g"] = to_string(g);
    inst.meta["gravity.target_total"] = to_string(target);
    inst.meta["gravity.hubs"] = hub_list;
    inst.meta["gravity.attractiveness"] = attract_list;
  } else if (spec.demand == DemandPattern::Termini) {
    // Set the end-to-end pair so it carries termini_share of all passengers.
    const std::int64_t rest = spec.even_potential * (static_cast<std::int64_t>(pairs.size()) - 1);
    const std::int64_t ends =
        std::max<std::int64_t>(spec.even_potential, to_int64(round_of(spec.termini_share / (1 - spec.termini_share) * rest)));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (pairs[k].first == 1 && pairs[k].second == n) potential[k] = ends;
    }
    inst.meta["termini.end_to_end_potential"] = std::to_string(ends);
  }

  for (std::size_t k = 0; k < pairs.size(); ++k) {
    ODPair od;
    od.origin = pairs[k].first;
    od.destination = pairs[k].second;
    od.potential = potential[k];
    const Rational path = path_improvement(inst, od);
    // floor(fraction * path), kept at least 1 so the empty upgrade attracts nobody.
    od.threshold = Rational(std::max(BigInt(1), floor_of(spec.threshold_fraction * path)));
    if (od.threshold > path) od.threshold = path;
    inst.od_pairs.push_back(od);
  }

  // Budget shares.
  if (M == 1) {
    inst.municipalities[0].share = 1;
  } else {
    std::vector<Rational> weight(M, Rational(0));
    switch (spec.split) {
      case BudgetSplit::Equal:
        for (auto& w : weight) w = 1;
        break;
      case BudgetSplit::Cost:
        for (std::size_t g = 0; g < M; ++g) {
          for (std::size_t i = groups[g].first; i <= groups[g].second; ++i) weight[g] += inst.segments[i - 1].cost;
        }
        break;
      case BudgetSplit::Pass: {
        const auto owner = station_owners(inst);
        for (const auto& od : inst.od_pairs) {
          weight[owner[od.origin - 1]] += od.potential;
          weight[owner[od.destination - 1]] += od.potential;
        }
        break;
      }
    }
    Rational total = 0;
    for (const auto& w : weight) total += w;
    for (std::size_t g = 0; g < M; ++g) inst.municipalities[g].share = weight[g] / total;
  }

  inst.meta["generator"] = "scenario";
  inst.meta["seed"] = std::to_string(spec.seed);
  inst.meta["cost_pattern"] = std::string(to_string(spec.cost));
  inst.meta["demand_pattern"] = std::string(to_string(spec.demand));
  inst.meta["budget_split"] = M == 1 ? "single" : std::string(to_string(spec.split));
  inst.meta["municipality_count"] = std::to_string(M);
  inst.meta["response"] = spec.response;
  inst.meta["threshold_fraction"] = to_string(spec.threshold_fraction);
  inst.meta["cost_amplitude"] = std::to_string(spec.cost_amplitude);
  inst.meta["improvement_range"] = "1.." + std::to_string(spec.improvement_max);
  inst.meta["even_potential"] = std::to_string(spec.even_potential);
  inst.meta["termini_share"] = to_string(spec.termini_share);
  inst.meta["prng"] = "mt19937_64 + rejection sampling";
  return inst;
}

/// Adjacent-station demand with potentials and costs 2^(i-1), unit
/// improvements, threshold 1, one municipality, no component cap. Every
/// subset has a distinct (k, k) objective, so the front has 2^(n-1) points.
inline Instance generate_intractable(std::size_t n) {
  if (n < 2) throw std::invalid_argument("intractable family needs n >= 2");
  if (n - 1 > 62) throw std::overflow_error("2^(n-1) exceeds 64-bit range");
  Instance inst;
  inst.station_count = n;
  inst.component_cap = ComponentCap::unbounded();
  for (std::size_t i = 1; i < n; ++i) {
    const std::int64_t w = std::int64_t{1} << (i - 1);
    inst.segments.push_back(Segment{i, w, 1, true});
    inst.od_pairs.push_back(ODPair{i, i + 1, w, 1});
  }
  inst.municipalities.push_back(Municipality{"m1", 1, n - 1, 1});
  inst.meta["generator"] = "intractable";
  return inst;
}

enum class PrefixVariant { UnimodalWeights, UnimodalCosts };

/// Single-municipality Linear instances whose optimum per budget is a sorted
/// prefix. UnimodalWeights: unit costs, effective weights rising to a peak and
/// falling. UnimodalCosts: unit effective weights, costs falling to a valley
/// and rising.
inline Instance generate_prefix_special(std::size_t n, PrefixVariant variant) {
  if (n < 3) throw std::invalid_argument("prefix family needs n >= 3");
  Instance inst;
  inst.station_count = n;
  inst.component_cap = ComponentCap::unbounded();
  const std::size_t m = n - 1;
  for (std::size_t i = 1; i <= m; ++i) {
    Segment s;
    s.index = i;
    s.improvement = Rational(static_cast<std::int64_t>(1 + i % 3));
    ODPair od{i, i + 1, 1, 1};
    if (variant == PrefixVariant::UnimodalWeights) {
      s.cost = 1;
      od.potential = 1 + static_cast<std::int64_t>(std::min(i - 1, m - i));
    } else {
      const auto dist = static_cast<std::int64_t>(2 * i) - 1 - static_cast<std::int64_t>(m);
      s.cost = 1 + (dist < 0 ? -dist : dist) / 2;
      od.potential = 1;
    }
    inst.segments.push_back(s);
    inst.od_pairs.push_back(od);
  }
  inst.municipalities.push_back(Municipality{"m1", 1, m, 1});
  inst.meta["generator"] = variant == PrefixVariant::UnimodalWeights ? "prefix-unimodal-weights" : "prefix-unimodal-costs";
  return inst;
}

}  // namespace brt

#pragma once

// Exhaustive ground truth for small lines. Shares nothing with the solvers
// beyond the instance model: objectives are recomputed per subset straight
// from the response definitions (on a common integer scale for speed).

#include "brt/instance.hpp"
#include "brt/pareto.hpp"
#include "brt/passenger_response.hpp"
#include "brt/solvers.hpp"

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace brt {

namespace oracle_detail {

/// p(F) for every F is numerator(F) / denominator.
struct SubsetEvaluator {
  const Instance& inst;
  ResponseKind kind;
  std::vector<BigInt> u;          // improvements on a common scale
  std::vector<BigInt> threshold;  // same scale
  std::vector<BigInt> path_total;
  std::vector<BigInt> factor;     // denominator / path_total (Linear)
  BigInt denominator = 1;

  SubsetEvaluator(const Instance& in, ResponseKind k) : inst(in), kind(k) {
    BigInt den = 1;
    for (const auto& s : inst.segments) den = lcm_of(den, denominator_of(s.improvement));
    for (const auto& od : inst.od_pairs) den = lcm_of(den, denominator_of(od.threshold));
    for (const auto& s : inst.segments) u.push_back(numerator_of(s.improvement * den));
    for (const auto& od : inst.od_pairs) {
      threshold.push_back(numerator_of(od.threshold * den));
      BigInt total = 0;
      for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) total += u[i - 1];
      path_total.push_back(total);
    }
    if (kind == ResponseKind::Linear) {
      for (const auto& t : path_total) denominator = lcm_of(denominator, t);
      for (const auto& t : path_total) factor.push_back(denominator / t);
    }
  }

  BigInt numerator(const UpgradeSet& f) const {
    BigInt sum = 0;
    for (std::size_t d = 0; d < inst.od_pairs.size(); ++d) {
      const auto& od = inst.od_pairs[d];
      BigInt realized = 0;
      for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) {
        if (f.contains(i - 1)) realized += u[i - 1];
      }
      if (kind == ResponseKind::Linear) {
        sum += realized * od.potential * factor[d];
      } else if (threshold[d] <= realized) {
        sum += od.potential;
      }
    }
    return sum;
  }

  Rational value(const UpgradeSet& f) const { return Rational(numerator(f), denominator); }
};

inline void check_size(const Instance& inst, std::size_t limit, const char* what) {
  if (inst.segments.size() > limit) {
    throw std::length_error(std::string(what) + ": " + std::to_string(inst.segments.size()) +
                            " segments exceed the oracle limit of " + std::to_string(limit));
  }
}

/// Every admissible subset within the component cap, by increasing bitmask.
template <class Fn>
void for_each_subset(const Instance& inst, Fn&& fn) {
  const std::size_t m = inst.segments.size();
  std::uint64_t fixed = 0;
  for (std::size_t i = 0; i < m; ++i) {
    if (!inst.segments[i].upgradable) fixed |= std::uint64_t{1} << i;
  }
  const std::uint64_t end = std::uint64_t{1} << m;
  for (std::uint64_t mask = 0; mask < end; ++mask) {
    if (mask & fixed) continue;
    const UpgradeSet f = UpgradeSet::from_mask(m, mask);
    if (!inst.component_cap.admits(count_components(inst, f))) continue;
    fn(f);
  }
}

/// Keeps, for each passenger level, the cheapest point, then drops dominated
/// ones. Input order must be by increasing bitmask for canonical witnesses.
inline ParetoFront non_dominated(std::vector<ParetoPoint> pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    if (a.budget != b.budget) return a.budget < b.budget;
    return a.passengers > b.passengers;
  });
  ParetoFront front;
  for (auto& p : pts) {
    if (front.points.empty() || p.passengers > front.points.back().passengers) front.points.push_back(std::move(p));
  }
  std::reverse(front.points.begin(), front.points.end());
  return front;
}

}  // namespace oracle_detail

inline SubproblemResult brute_force_single(const Instance& inst, ResponseKind kind, const Rational& budget) {
  oracle_detail::check_size(inst, 24, "brute_force_single");
  const auto caps = caps_for_budget(inst, budget);
  const oracle_detail::SubsetEvaluator ev(inst, kind);
  SubproblemResult best;
  best.solver_used = SolverKind::BruteForce;
  best.best = UpgradeSet(inst.segments.size());
  BigInt best_num = ev.numerator(best.best);
  oracle_detail::for_each_subset(inst, [&](const UpgradeSet& f) {
    ++best.nodes_explored;
    const auto spend = municipality_spend(inst, f);
    for (std::size_t m = 0; m < spend.size(); ++m) {
      if (spend[m] > caps.per_municipality[m]) return;
    }
    const BigInt num = ev.numerator(f);
    if (num > best_num) {  // increasing mask order: first optimum is canonical
      best_num = num;
      best.best = f;
    }
  });
  best.objective = Rational(best_num, ev.denominator);
  return best;
}

inline ParetoFront brute_force_front(const Instance& inst, ResponseKind kind) {
  oracle_detail::check_size(inst, 20, "brute_force_front");
  const oracle_detail::SubsetEvaluator ev(inst, kind);
  std::vector<ParetoPoint> pts;
  oracle_detail::for_each_subset(inst, [&](const UpgradeSet& f) {
    pts.push_back(ParetoPoint{ev.value(f), min_investment_budget(inst, f), f});
  });
  return oracle_detail::non_dominated(std::move(pts));
}

/// Front of (passengers, investment cost); budget shares play no role here.
/// The `budget` field of each point holds the cost.
inline ParetoFront brute_force_cost_front(const Instance& inst, ResponseKind kind) {
  oracle_detail::check_size(inst, 20, "brute_force_cost_front");
  const oracle_detail::SubsetEvaluator ev(inst, kind);
  std::vector<ParetoPoint> pts;
  oracle_detail::for_each_subset(inst, [&](const UpgradeSet& f) {
    pts.push_back(ParetoPoint{ev.value(f), Rational(investment_cost(inst, f)), f});
  });
  return oracle_detail::non_dominated(std::move(pts));
}

}  // namespace brt

#pragma once

// Budget-stepping epsilon-constraint enumeration of the complete Pareto front
// between attracted passengers (max) and investment budget (min).
//
// Each iteration solves the single-objective problem at budget B, computes the
// minimum budget v of the optimal set, the municipalities for which v is tight
// and a step width delta such that no feasible set with a smaller minimum
// budget is skipped, then continues at B = v - delta. Integer costs make every
// step at least min_m 1/b_m or the distance to the next integer spend level.

#include "brt/instance.hpp"
#include "brt/passenger_response.hpp"
#include "brt/solvers.hpp"

#include <chrono>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace brt {

struct ParetoPoint {
  Rational passengers = 0;
  Rational budget = 0;
  UpgradeSet witness;
};

/// Points by strictly decreasing budget and strictly decreasing passengers.
struct ParetoFront {
  std::vector<ParetoPoint> points;

  std::size_t size() const { return points.size(); }
  bool empty() const { return points.empty(); }
};

inline bool same_values(const ParetoFront& a, const ParetoFront& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a.points[i].passengers != b.points[i].passengers || a.points[i].budget != b.points[i].budget) return false;
  }
  return true;
}

/// Empty string when the strict-monotonicity invariant holds, else the first
/// offending position.
inline std::string front_invariant_violation(const ParetoFront& f) {
  for (std::size_t i = 1; i < f.size(); ++i) {
    const auto& hi = f.points[i - 1];
    const auto& lo = f.points[i];
    if (!(lo.budget < hi.budget)) return "budget not strictly decreasing at point " + std::to_string(i);
    if (!(lo.passengers < hi.passengers)) return "passengers not strictly decreasing at point " + std::to_string(i);
  }
  return {};
}

/// Best passenger value available at the given budget (step-function view).
inline Rational passengers_at(const ParetoFront& f, const Rational& budget) {
  for (const auto& p : f.points) {
    if (p.budget <= budget) return p.passengers;
  }
  return 0;
}

struct IterationRecord {
  Rational budget;      // B
  Rational objective;   // optimal attracted passengers at B
  Rational min_budget;  // minimum budget of the optimal set
  std::vector<std::size_t> tight;  // municipality positions
  Rational step;        // delta
  UpgradeSet witness;
  SolverKind solver = SolverKind::LinearDP;
  std::uint64_t nodes = 0;
  double seconds = 0.0;
};

struct EnumerationTrace {
  std::vector<IterationRecord> iterations;
  ParetoFront front;
  bool complete = true;
};

/// Raised when a subproblem solve hits a resource limit; carries the trace
/// gathered so far (marked incomplete).
class EnumerationError : public std::runtime_error {
 public:
  EnumerationError(const std::string& what, EnumerationTrace partial)
      : std::runtime_error(what), partial_(std::move(partial)) {}
  const EnumerationTrace& partial() const { return partial_; }

 private:
  EnumerationTrace partial_;
};

/// Budget at which every upgradable segment is affordable.
inline Rational initial_budget(const Instance& inst) {
  return min_investment_budget(inst, upgradable_segments(inst));
}

/// Municipalities whose spend equals b_m * vbar exactly.
inline std::vector<std::size_t> tight_municipalities(const Instance& inst, const UpgradeSet& f,
                                                     const Rational& vbar) {
  const auto spend = municipality_spend(inst, f);
  std::vector<std::size_t> out;
  for (std::size_t m = 0; m < spend.size(); ++m) {
    if (Rational(spend[m]) == inst.municipalities[m].share * vbar) out.push_back(m);
  }
  return out;
}

/// delta = min( min_{tight} 1/b_m, min_{non-tight} (b_m v - ceil(b_m v - 1)) / b_m ),
/// where the minimum over an empty non-tight set is +infinity.
inline Rational step_width(const Instance& inst, const Rational& vbar, const std::vector<std::size_t>& tight) {
  if (tight.empty()) throw std::invalid_argument("step width needs at least one tight municipality");
  std::vector<char> is_tight(inst.municipalities.size(), 0);
  for (auto m : tight) is_tight.at(m) = 1;
  std::optional<Rational> delta;
  for (std::size_t m = 0; m < inst.municipalities.size(); ++m) {
    const Rational& b = inst.municipalities[m].share;
    Rational cand;
    if (is_tight[m]) {
      cand = Rational(1) / b;
    } else {
      const Rational level = b * vbar;
      cand = (level - Rational(ceil_of(level - 1))) / b;
    }
    if (!delta || cand < *delta) delta = cand;
  }
  return *delta;
}

/// Upper bound on the number of non-dominated points:
/// 1 + sum_m floor(b_m * initial_budget).
inline BigInt front_size_bound(const Instance& inst) {
  const Rational b0 = initial_budget(inst);
  BigInt total = 1;
  for (const auto& m : inst.municipalities) total += floor_of(m.share * b0);
  return total;
}

inline EnumerationTrace enumerate_pareto(const Instance& inst, ResponseKind kind, const SolverOptions& opt = {}) {
  EnumerationTrace trace;
  Rational budget = initial_budget(inst);
  std::optional<ParetoPoint> pending;  // (p*, v*) with its witness

  while (budget >= 0) {
    IterationRecord rec;
    rec.budget = budget;
    const auto t0 = std::chrono::steady_clock::now();
    SubproblemResult res;
    try {
      res = solve_single_objective(inst, kind, budget, opt);
    } catch (const ResourceLimitError& e) {
      if (pending) trace.front.points.push_back(*pending);
      trace.complete = false;
      throw EnumerationError(std::string(e.what()) + " at budget " + to_string(budget), std::move(trace));
    }
    rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    rec.objective = res.objective;
    rec.min_budget = min_investment_budget(inst, res.best);
    rec.tight = tight_municipalities(inst, res.best, rec.min_budget);
    rec.step = step_width(inst, rec.min_budget, rec.tight);
    rec.witness = res.best;
    rec.solver = res.solver_used;
    rec.nodes = res.nodes_explored;

    if (!pending) {
      // The first optimum is the anchor; with every segment upgradable it is
      // the full potential at the initial budget.
      pending = ParetoPoint{rec.objective, rec.min_budget, res.best};
    } else {
      if (rec.objective > pending->passengers) {
        throw std::logic_error("subproblem optimum increased while the budget decreased");
      }
      if (rec.objective < pending->passengers) {
        trace.front.points.push_back(*pending);
        pending->passengers = rec.objective;
      }
      pending->budget = rec.min_budget;
      pending->witness = res.best;
    }
    budget = rec.min_budget - rec.step;
    trace.iterations.push_back(std::move(rec));
  }
  if (pending) trace.front.points.push_back(*pending);
  return trace;
}

/// (passengers, investment cost) of each budget-front witness, in front
/// order. Not re-filtered for dominance.
inline std::vector<std::pair<Rational, std::int64_t>> evaluate_front_by_cost(const Instance& inst,
                                                                             const EnumerationTrace& trace,
                                                                             ResponseKind kind) {
  std::vector<std::pair<Rational, std::int64_t>> out;
  for (const auto& p : trace.front.points) {
    out.emplace_back(attracted(inst, p.witness, kind), investment_cost(inst, p.witness));
  }
  if (out.empty()) out.emplace_back(Rational(0), 0);
  return out;
}

}  // namespace brt

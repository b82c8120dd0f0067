#pragma once

// Exact solvers for the single-objective subproblem: maximize attracted
// passengers subject to per-municipality spend caps floor(b_m * B) and at
// most Z upgraded components.
//
// All solvers return the optimum with the smallest membership bitmask among
// equally good sets, so fronts and witnesses are reproducible across solvers.
// Hot loops run on scaled integers; 64-bit arithmetic is used when the scaled
// totals provably fit and arbitrary precision otherwise.

#include "brt/instance.hpp"
#include "brt/passenger_response.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brt {

enum class SolverKind { LinearDP, IntervalEnum, BranchBound, PrefixFastPath, BruteForce };

inline std::string_view to_string(SolverKind k) {
  switch (k) {
    case SolverKind::LinearDP: return "linear-dp";
    case SolverKind::IntervalEnum: return "interval-enum";
    case SolverKind::BranchBound: return "branch-bound";
    case SolverKind::PrefixFastPath: return "prefix-fast-path";
    case SolverKind::BruteForce: return "brute-force";
  }
  return "?";
}

struct MunicipalityCaps {
  std::vector<std::int64_t> per_municipality;  // saturates at INT64_MAX
};

struct SubproblemResult {
  UpgradeSet best;
  Rational objective = 0;
  SolverKind solver_used = SolverKind::LinearDP;
  std::uint64_t nodes_explored = 0;
};

struct SolverOptions {
  std::uint64_t node_limit = 100'000'000;
  std::uint64_t enumeration_cap = 10'000'000;
  std::int64_t interval_enum_max_z = 3;
  std::size_t interval_enum_max_segments = 63;
  /// Replace Z by min(Z, ceil(|E|/2)); above that the cap cannot bind.
  bool normalize_components = true;
  bool allow_prefix_fast_path = true;
  /// Tighten the branch-and-bound root bound with the Linear relaxation.
  bool use_relaxation_bound = true;
};

/// An exact solve was abandoned. Carries what was known at that point.
class ResourceLimitError : public std::runtime_error {
 public:
  ResourceLimitError(const std::string& what, UpgradeSet incumbent, Rational incumbent_value, Rational bound,
                     std::uint64_t nodes)
      : std::runtime_error(what),
        incumbent_(std::move(incumbent)),
        incumbent_value_(std::move(incumbent_value)),
        bound_(std::move(bound)),
        nodes_(nodes) {}
  const UpgradeSet& incumbent() const { return incumbent_; }
  const Rational& incumbent_value() const { return incumbent_value_; }
  const Rational& bound() const { return bound_; }
  std::uint64_t nodes() const { return nodes_; }

 private:
  UpgradeSet incumbent_;
  Rational incumbent_value_;
  Rational bound_;
  std::uint64_t nodes_;
};

/// cap_m = floor(b_m * B). Costs are integers, so flooring loses nothing.
inline MunicipalityCaps caps_for_budget(const Instance& inst, const Rational& budget) {
  if (budget < 0) throw std::invalid_argument("budget must be nonnegative, got " + to_string(budget));
  MunicipalityCaps caps;
  for (const auto& m : inst.municipalities) {
    const BigInt c = floor_of(m.share * budget);
    caps.per_municipality.push_back(c > std::numeric_limits<std::int64_t>::max()
                                        ? std::numeric_limits<std::int64_t>::max()
                                        : c.convert_to<std::int64_t>());
  }
  return caps;
}

/// Component cap actually enforced by the solvers; empty when it cannot bind.
inline std::optional<std::int64_t> effective_component_limit(std::size_t segment_count, const ComponentCap& z,
                                                             bool normalize = true) {
  if (z.is_unbounded()) return std::nullopt;
  if (normalize && z.value() >= max_components(segment_count)) return std::nullopt;
  return z.value();
}

namespace detail {

/// Line structure shared by all solvers, with caps clamped to what a
/// municipality could spend at all.
struct LineModel {
  std::size_t m = 0;
  std::vector<std::int64_t> cost;
  std::vector<char> upgradable;
  std::vector<std::size_t> owner;
  std::vector<std::int64_t> cap;  // indexed by municipality
  std::optional<std::int64_t> z;  // empty: no component constraint

  bool starts_municipality(std::size_t i) const { return i == 0 || owner[i] != owner[i - 1]; }
};

inline LineModel make_line_model(const Instance& inst, const MunicipalityCaps& caps,
                                 std::optional<std::int64_t> z) {
  if (caps.per_municipality.size() != inst.municipalities.size()) {
    throw std::invalid_argument("caps must list one entry per municipality");
  }
  LineModel lm;
  lm.m = inst.segments.size();
  lm.owner = segment_owners(inst);
  lm.z = z;
  std::vector<std::int64_t> total(inst.municipalities.size(), 0);
  for (const auto& s : inst.segments) {
    lm.cost.push_back(s.cost);
    lm.upgradable.push_back(s.upgradable ? 1 : 0);
  }
  for (std::size_t i = 0; i < lm.m; ++i) {
    if (lm.upgradable[i]) total[lm.owner[i]] += lm.cost[i];
  }
  for (std::size_t k = 0; k < total.size(); ++k) {
    if (caps.per_municipality[k] < 0) throw std::invalid_argument("caps must be nonnegative");
    lm.cap.push_back(std::min(caps.per_municipality[k], total[k]));
  }
  return lm;
}

/// Integer weights W with W_i / scale = weights_i exactly.
struct ScaledWeights {
  std::vector<BigInt> w;
  BigInt scale = 1;
  BigInt positive_total = 0;
};

inline ScaledWeights scale_weights(const std::vector<Rational>& weights) {
  ScaledWeights s;
  for (const auto& r : weights) s.scale = lcm_of(s.scale, denominator_of(r));
  for (const auto& r : weights) {
    s.w.push_back(numerator_of(r) * (s.scale / denominator_of(r)));
    if (s.w.back() > 0) s.positive_total += s.w.back();
  }
  return s;
}

inline bool fits_fast(const BigInt& magnitude) { return magnitude < (BigInt(1) << 62); }

template <class V>
std::vector<V> narrow(const std::vector<BigInt>& in) {
  std::vector<V> out;
  out.reserve(in.size());
  for (const auto& x : in) out.push_back(static_cast<V>(x));
  return out;
}

template <>
inline std::vector<std::int64_t> narrow<std::int64_t>(const std::vector<BigInt>& in) {
  std::vector<std::int64_t> out;
  out.reserve(in.size());
  for (const auto& x : in) out.push_back(x.convert_to<std::int64_t>());
  return out;
}

template <class V>
BigInt widen(const V& v) {
  return BigInt(v);
}

/// Forward DP over segments in line order; state (spend in current
/// municipality, components opened, previous segment upgraded). The witness
/// is reconstructed backwards preferring "not upgraded" at each position,
/// which yields the smallest bitmask among all optimal sets.
template <class V>
UpgradeSet linear_dp_core(const LineModel& lm, const std::vector<V>& w, std::uint64_t& cells) {
  const std::size_t m = lm.m;
  if (m == 0) return UpgradeSet(0);
  const bool track = lm.z.has_value();
  const std::size_t K = track ? static_cast<std::size_t>(*lm.z) + 1 : 1;
  const std::size_t P = track ? 2 : 1;

  struct Layer {
    std::size_t spend_dim = 1;
    std::vector<V> value;
    std::vector<char> reach;
  };
  std::vector<Layer> layers(m);
  auto index = [&](std::size_t spend, std::size_t k, std::size_t prev) { return (spend * K + k) * P + prev; };
  auto decode = [&](std::size_t idx, std::size_t& spend, std::size_t& k, std::size_t& prev) {
    prev = idx % P;
    k = (idx / P) % K;
    spend = idx / (P * K);
  };
  // Successor of state idx at layer i-1 (or the empty start when i == 0)
  // when segment i is set to x. Returns SIZE_MAX if infeasible.
  constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
  auto successor = [&](std::size_t i, std::size_t prev_idx, bool x) -> std::size_t {
    std::size_t spend = 0, k = 0, prev = 0;
    if (i > 0) decode(prev_idx, spend, k, prev);
    if (lm.starts_municipality(i)) spend = 0;
    if (x) {
      if (!lm.upgradable[i]) return kNone;
      const auto c = static_cast<std::size_t>(lm.cost[i]);
      if (spend + c > static_cast<std::size_t>(lm.cap[lm.owner[i]])) return kNone;
      spend += c;
      if (track) {
        if (!prev) ++k;
        if (k >= K) return kNone;
      }
      return index(spend, k, track ? 1 : 0);
    }
    return index(spend, k, 0);
  };

  for (std::size_t i = 0; i < m; ++i) {
    Layer& L = layers[i];
    L.spend_dim = static_cast<std::size_t>(lm.cap[lm.owner[i]]) + 1;
    const std::size_t size = L.spend_dim * K * P;
    L.value.assign(size, V{});
    L.reach.assign(size, 0);
    const std::size_t prev_size = i == 0 ? 1 : layers[i - 1].value.size();
    for (std::size_t s = 0; s < prev_size; ++s) {
      if (i > 0 && !layers[i - 1].reach[s]) continue;
      const V base = i == 0 ? V{} : layers[i - 1].value[s];
      for (int x = 0; x <= 1; ++x) {
        const std::size_t t = successor(i, s, x == 1);
        if (t == kNone) continue;
        ++cells;
        V cand = base;
        if (x) cand += w[i];
        if (!L.reach[t] || cand > L.value[t]) {
          L.value[t] = cand;
          L.reach[t] = 1;
        }
      }
    }
  }

  // Backward reconstruction over sets of consistent states.
  const Layer& last = layers[m - 1];
  V opt{};
  bool any = false;
  for (std::size_t s = 0; s < last.value.size(); ++s) {
    if (last.reach[s] && (!any || last.value[s] > opt)) {
      opt = last.value[s];
      any = true;
    }
  }
  std::vector<char> marked(last.value.size(), 0);
  for (std::size_t s = 0; s < last.value.size(); ++s) marked[s] = last.reach[s] && last.value[s] == opt;

  UpgradeSet best(m);
  for (std::size_t i = m; i-- > 0;) {
    const Layer& cur = layers[i];
    const std::size_t prev_size = i == 0 ? 1 : layers[i - 1].value.size();
    for (int x = 0; x <= 1; ++x) {
      std::vector<char> next(prev_size, 0);
      bool found = false;
      for (std::size_t s = 0; s < prev_size; ++s) {
        if (i > 0 && !layers[i - 1].reach[s]) continue;
        const std::size_t t = successor(i, s, x == 1);
        if (t == kNone || !marked[t]) continue;
        V cand = i == 0 ? V{} : layers[i - 1].value[s];
        if (x) cand += w[i];
        if (cand == cur.value[t]) {
          next[s] = 1;
          found = true;
        }
      }
      if (found) {
        if (x) best.insert(i);
        marked = std::move(next);
        break;
      }
    }
  }
  return best;
}

/// Incremental objective for MinImprov: realized improvement per OD pair,
/// plus the improvement still obtainable from undecided segments.
template <class Imp>
struct MinImprovEval {
  std::vector<std::vector<std::uint32_t>> cover;  // OD pairs using each segment
  std::vector<Imp> u;
  std::vector<Imp> threshold;
  std::vector<std::int64_t> potential;
  std::vector<Imp> achieved;
  std::vector<Imp> open;  // improvement of undecided upgradable path segments
  std::int64_t value = 0;
  std::int64_t bound = 0;
  BigInt scale = 1;  // objective values are integers

  void include(std::size_t i) {
    for (auto d : cover[i]) {
      const bool was = achieved[d] >= threshold[d];
      achieved[d] += u[i];
      open[d] -= u[i];
      if (!was && achieved[d] >= threshold[d]) value += potential[d];
    }
  }
  void uninclude(std::size_t i) {
    for (auto d : cover[i]) {
      const bool was = achieved[d] >= threshold[d];
      achieved[d] -= u[i];
      open[d] += u[i];
      if (was && achieved[d] < threshold[d]) value -= potential[d];
    }
  }
  void exclude(std::size_t i) {
    for (auto d : cover[i]) {
      const bool reachable = achieved[d] + open[d] >= threshold[d];
      open[d] -= u[i];
      if (reachable && achieved[d] + open[d] < threshold[d]) bound -= potential[d];
    }
  }
  void unexclude(std::size_t i) {
    for (auto d : cover[i]) {
      const bool reachable = achieved[d] + open[d] >= threshold[d];
      open[d] += u[i];
      if (!reachable && achieved[d] + open[d] >= threshold[d]) bound += potential[d];
    }
  }
  Rational value_rational() const { return Rational(value); }
  Rational bound_rational() const { return Rational(bound); }
};

template <class Imp>
MinImprovEval<Imp> make_minimprov_eval(const Instance& inst, const std::vector<BigInt>& u_scaled,
                                       const std::vector<BigInt>& l_scaled) {
  MinImprovEval<Imp> ev;
  const std::size_t m = inst.segments.size();
  ev.cover.assign(m, {});
  ev.u = narrow<Imp>(u_scaled);
  ev.threshold = narrow<Imp>(l_scaled);
  for (std::size_t d = 0; d < inst.od_pairs.size(); ++d) {
    const auto& od = inst.od_pairs[d];
    ev.potential.push_back(od.potential);
    Imp open{};
    for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) {
      ev.cover[i - 1].push_back(static_cast<std::uint32_t>(d));
      if (inst.segments[i - 1].upgradable) open += ev.u[i - 1];
    }
    ev.achieved.push_back(Imp{});
    ev.open.push_back(open);
    if (ev.threshold[d] <= Imp{}) ev.value += od.potential;
    if (open >= ev.threshold[d]) ev.bound += od.potential;
  }
  return ev;
}

/// Incremental objective for Linear on scaled weights.
template <class V>
struct LinearEval {
  std::vector<V> w;
  V value{};
  V bound{};
  BigInt scale = 1;

  void include(std::size_t i) { value += w[i]; }
  void uninclude(std::size_t i) { value -= w[i]; }
  void exclude(std::size_t i) {
    if (w[i] > V{}) bound -= w[i];
  }
  void unexclude(std::size_t i) {
    if (w[i] > V{}) bound += w[i];
  }
  Rational value_rational() const { return Rational(widen(value), scale); }
  Rational bound_rational() const { return Rational(widen(bound), scale); }
};

/// Scaled integer improvements and thresholds for MinImprov.
struct ScaledImprovements {
  std::vector<BigInt> u;
  std::vector<BigInt> threshold;
  BigInt total = 0;
};

inline ScaledImprovements scale_improvements(const Instance& inst) {
  BigInt den = 1;
  for (const auto& s : inst.segments) den = lcm_of(den, denominator_of(s.improvement));
  for (const auto& od : inst.od_pairs) den = lcm_of(den, denominator_of(od.threshold));
  ScaledImprovements out;
  for (const auto& s : inst.segments) {
    out.u.push_back(numerator_of(s.improvement) * (den / denominator_of(s.improvement)));
    out.total += out.u.back();
  }
  for (const auto& od : inst.od_pairs) {
    out.threshold.push_back(numerator_of(od.threshold) * (den / denominator_of(od.threshold)));
  }
  return out;
}

/// Words of a bitset under construction, compared like UpgradeSet.
struct MaskWords {
  std::vector<std::uint64_t> words;
  explicit MaskWords(std::size_t m) : words((m + 63) / 64, 0) {}
  void set(std::size_t i) { words[i / 64] |= std::uint64_t{1} << (i % 64); }
  void clear(std::size_t i) { words[i / 64] &= ~(std::uint64_t{1} << (i % 64)); }
  bool less_than(const MaskWords& o) const {
    for (std::size_t w = words.size(); w-- > 0;) {
      if (words[w] != o.words[w]) return words[w] < o.words[w];
    }
    return false;
  }
  UpgradeSet to_set(std::size_t m) const {
    UpgradeSet s(m);
    for (std::size_t i = 0; i < m; ++i) {
      if ((words[i / 64] >> (i % 64)) & 1U) s.insert(i);
    }
    return s;
  }
};

/// Enumerates every union of at most z pairwise non-adjacent intervals of
/// upgradable segments that respects the caps.
template <class Eval>
struct IntervalEnumerator {
  const LineModel& lm;
  Eval& ev;
  std::int64_t z;
  std::vector<std::int64_t> spend;
  MaskWords cur;
  MaskWords best;
  decltype(Eval::value) best_value{};
  bool have_best = false;
  std::uint64_t nodes = 0;

  IntervalEnumerator(const LineModel& l, Eval& e, std::int64_t zz)
      : lm(l), ev(e), z(zz), spend(l.cap.size(), 0), cur(l.m), best(l.m) {}

  void consider() {
    ++nodes;
    if (!have_best || ev.value > best_value || (ev.value == best_value && cur.less_than(best))) {
      best_value = ev.value;
      best = cur;
      have_best = true;
    }
  }

  void run(std::size_t from, std::int64_t used) {
    consider();
    if (used == z) return;
    for (std::size_t s = from; s < lm.m; ++s) {
      if (!lm.upgradable[s]) continue;
      std::size_t t = s;
      for (; t < lm.m; ++t) {
        if (!lm.upgradable[t]) break;
        const std::size_t mu = lm.owner[t];
        if (spend[mu] + lm.cost[t] > lm.cap[mu]) break;
        spend[mu] += lm.cost[t];
        ev.include(t);
        cur.set(t);
        run(t + 2, used + 1);
      }
      for (std::size_t r = t; r-- > s;) {
        spend[lm.owner[r]] -= lm.cost[r];
        ev.uninclude(r);
        cur.clear(r);
      }
    }
  }
};

/// Depth-first branch and bound in line order, "upgrade" branch first.
/// Prunes on caps, on the component cap, and on the bound
/// value-so-far + potential of pairs that can still be served.
template <class Eval>
struct BranchAndBound {
  const LineModel& lm;
  Eval& ev;
  std::uint64_t node_limit;
  std::optional<decltype(Eval::value)> global_bound;
  std::vector<std::int64_t> spend;
  MaskWords cur;
  MaskWords best;
  decltype(Eval::value) best_value{};
  std::uint64_t nodes = 0;

  BranchAndBound(const LineModel& l, Eval& e, std::uint64_t limit)
      : lm(l), ev(e), node_limit(limit), spend(l.cap.size(), 0), cur(l.m), best(l.m) {
    best_value = ev.value;  // the empty set
  }

  // The smallest mask below a node is cur itself (undecided positions are
  // zero), so an equal-valued set can only win the tie-break if cur < best.
  bool tie_can_improve() const { return cur.less_than(best); }

  void offer() {
    if (ev.value > best_value || (ev.value == best_value && cur.less_than(best))) {
      best_value = ev.value;
      best = cur;
    }
  }

  bool prune() const {
    auto bound = ev.bound;
    if (global_bound && *global_bound < bound) bound = *global_bound;
    if (bound < best_value) return true;
    if (bound == best_value) return !tie_can_improve();
    return false;
  }

  void run(std::size_t i, std::int64_t components, bool prev) {
    if (++nodes > node_limit) {
      throw ResourceLimitError("branch-and-bound node limit exceeded", best.to_set(lm.m),
                               Rational(0), Rational(0), nodes);
    }
    // The current partial set, with the rest left out, is feasible.
    offer();
    if (i == lm.m || prune()) return;
    const std::size_t mu = lm.owner[i];
    if (lm.upgradable[i]) {
      const std::int64_t next_comp = components + (prev ? 0 : 1);
      const bool comp_ok = !lm.z || next_comp <= *lm.z;
      if (comp_ok && spend[mu] + lm.cost[i] <= lm.cap[mu]) {
        spend[mu] += lm.cost[i];
        ev.include(i);
        cur.set(i);
        run(i + 1, next_comp, true);
        cur.clear(i);
        ev.uninclude(i);
        spend[mu] -= lm.cost[i];
      }
      ev.exclude(i);
      run(i + 1, components, false);
      ev.unexclude(i);
    } else {
      run(i + 1, components, false);
    }
  }
};

inline std::uint64_t interval_candidate_count(std::size_t m, std::int64_t z) {
  // Sum over j <= z of C(m + 1, 2j); saturating.
  auto choose = [](std::uint64_t n, std::uint64_t k) -> long double {
    if (k > n) return 0.0L;
    long double r = 1.0L;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * static_cast<long double>(n - k + i) / static_cast<long double>(i);
    return r;
  };
  long double total = 0.0L;
  for (std::int64_t j = 0; j <= z; ++j) total += choose(m + 1, static_cast<std::uint64_t>(2 * j));
  if (total >= static_cast<long double>(std::numeric_limits<std::uint64_t>::max() / 2)) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(total + 0.5L);
}

inline Rational objective_of(const Instance& inst, const UpgradeSet& f, ResponseKind kind) {
  return attracted(inst, f, kind);
}

}  // namespace detail

/// Linear objective with arbitrary per-segment weights, solved by the
/// municipality-by-municipality DP described above.
inline SubproblemResult solve_linear_dp(const Instance& inst, const EffectiveWeights& weights,
                                        const MunicipalityCaps& caps, std::optional<std::int64_t> z) {
  if (weights.per_segment.size() != inst.segments.size()) {
    throw std::invalid_argument("one weight per segment required");
  }
  const auto lm = detail::make_line_model(inst, caps, z);
  const auto sw = detail::scale_weights(weights.per_segment);
  SubproblemResult r;
  r.solver_used = SolverKind::LinearDP;
  if (detail::fits_fast(sw.positive_total)) {
    r.best = detail::linear_dp_core(lm, detail::narrow<std::int64_t>(sw.w), r.nodes_explored);
  } else {
    r.best = detail::linear_dp_core(lm, sw.w, r.nodes_explored);
  }
  if (r.best.size() != inst.segments.size()) r.best = UpgradeSet(inst.segments.size());
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    if (r.best.contains(i)) r.objective += weights.per_segment[i];
  }
  return r;
}

/// Interval enumeration for a finite component cap. Returns nothing when the
/// number of candidate placements exceeds the configured cap, in which case
/// the caller falls back to branch and bound.
inline std::optional<SubproblemResult> solve_interval_enum(const Instance& inst, ResponseKind kind,
                                                           const MunicipalityCaps& caps, std::int64_t z,
                                                           const SolverOptions& opt = {}) {
  if (z < 1) throw std::invalid_argument("interval enumeration needs a finite component cap >= 1");
  const std::size_t m = inst.segments.size();
  if (detail::interval_candidate_count(m, z) > opt.enumeration_cap) return std::nullopt;
  const auto lm = detail::make_line_model(inst, caps, z);
  SubproblemResult r;
  r.solver_used = SolverKind::IntervalEnum;
  auto finish = [&](auto& ev) {
    detail::IntervalEnumerator<std::remove_reference_t<decltype(ev)>> en(lm, ev, z);
    en.run(0, 0);
    r.best = en.best.to_set(m);
    r.nodes_explored = en.nodes;
  };
  if (kind == ResponseKind::MinImprov) {
    const auto si = detail::scale_improvements(inst);
    if (detail::fits_fast(si.total)) {
      auto ev = detail::make_minimprov_eval<std::int64_t>(inst, si.u, si.threshold);
      finish(ev);
    } else {
      auto ev = detail::make_minimprov_eval<BigInt>(inst, si.u, si.threshold);
      finish(ev);
    }
  } else {
    const auto sw = detail::scale_weights(effective_weights(inst).per_segment);
    if (detail::fits_fast(sw.positive_total)) {
      detail::LinearEval<std::int64_t> ev{detail::narrow<std::int64_t>(sw.w), 0, 0, sw.scale};
      finish(ev);
    } else {
      detail::LinearEval<BigInt> ev{sw.w, 0, 0, sw.scale};
      finish(ev);
    }
  }
  r.objective = detail::objective_of(inst, r.best, kind);
  return r;
}

/// Upper bound on any MinImprov objective under the given caps, from
/// a_d [L_d <= s] <= a_d s / L_d. Empty when some threshold is zero.
inline std::optional<Rational> linear_relaxation_bound(const Instance& inst, const MunicipalityCaps& caps) {
  std::vector<Rational> load(inst.segments.size(), Rational(0));
  for (const auto& od : inst.od_pairs) {
    if (od.threshold <= 0) return std::nullopt;
    const Rational per_unit = Rational(od.potential) / od.threshold;
    for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) load[i - 1] += per_unit;
  }
  EffectiveWeights w;
  for (std::size_t i = 0; i < inst.segments.size(); ++i) w.per_segment.push_back(inst.segments[i].improvement * load[i]);
  return solve_linear_dp(inst, w, caps, std::nullopt).objective;
}

/// Exact branch and bound. Throws ResourceLimitError past the node limit.
inline SubproblemResult solve_branch_bound(const Instance& inst, ResponseKind kind, const MunicipalityCaps& caps,
                                           std::optional<std::int64_t> z, const SolverOptions& opt = {}) {
  const std::size_t m = inst.segments.size();
  const auto lm = detail::make_line_model(inst, caps, z);
  SubproblemResult r;
  r.solver_used = SolverKind::BranchBound;
  auto finish = [&](auto& ev, auto global) {
    using EvalT = std::remove_reference_t<decltype(ev)>;
    detail::BranchAndBound<EvalT> bb(lm, ev, opt.node_limit);
    bb.global_bound = global;
    Rational root_bound = ev.bound_rational();
    if (global && Rational(detail::widen(*global), ev.scale) < root_bound) root_bound = Rational(detail::widen(*global), ev.scale);
    try {
      bb.run(0, 0, false);
    } catch (const ResourceLimitError& e) {
      const UpgradeSet incumbent = bb.best.to_set(m);
      throw ResourceLimitError(e.what(), incumbent, detail::objective_of(inst, incumbent, kind), root_bound,
                               e.nodes());
    }
    r.best = bb.best.to_set(m);
    r.nodes_explored = bb.nodes;
  };
  if (kind == ResponseKind::MinImprov) {
    const auto si = detail::scale_improvements(inst);
    std::optional<Rational> relax;
    if (opt.use_relaxation_bound) relax = linear_relaxation_bound(inst, caps);
    if (detail::fits_fast(si.total)) {
      auto ev = detail::make_minimprov_eval<std::int64_t>(inst, si.u, si.threshold);
      std::optional<std::int64_t> g;
      if (relax) g = floor_of(*relax).convert_to<std::int64_t>();
      finish(ev, g);
    } else {
      auto ev = detail::make_minimprov_eval<BigInt>(inst, si.u, si.threshold);
      std::optional<std::int64_t> g;
      if (relax) g = floor_of(*relax).convert_to<std::int64_t>();
      finish(ev, g);
    }
  } else {
    const auto sw = detail::scale_weights(effective_weights(inst).per_segment);
    if (detail::fits_fast(sw.positive_total)) {
      detail::LinearEval<std::int64_t> ev{detail::narrow<std::int64_t>(sw.w), 0, 0, sw.scale};
      for (std::size_t i = 0; i < m; ++i) {
        if (lm.upgradable[i] && ev.w[i] > 0) ev.bound += ev.w[i];
      }
      finish(ev, std::optional<std::int64_t>{});
    } else {
      detail::LinearEval<BigInt> ev{sw.w, 0, 0, sw.scale};
      for (std::size_t i = 0; i < m; ++i) {
        if (lm.upgradable[i] && ev.w[i] > 0) ev.bound += ev.w[i];
      }
      finish(ev, std::optional<BigInt>{});
    }
  }
  r.objective = detail::objective_of(inst, r.best, kind);
  return r;
}

/// Closed form for Linear with one municipality, unit costs and no binding
/// component cap: the cap-many largest positive weights.
inline std::optional<SubproblemResult> solve_prefix_fast_path(const Instance& inst, const EffectiveWeights& weights,
                                                              const MunicipalityCaps& caps,
                                                              std::optional<std::int64_t> z) {
  if (inst.municipalities.size() != 1 || z.has_value()) return std::nullopt;
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    if (!inst.segments[i].upgradable) continue;
    if (inst.segments[i].cost != 1) return std::nullopt;
    if (weights.per_segment[i] > 0) order.push_back(i);
  }
  // Largest weight first; among equal weights the earliest position.
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return weights.per_segment[a] > weights.per_segment[b]; });
  const auto take = static_cast<std::size_t>(std::min<std::int64_t>(caps.per_municipality[0],
                                                                     static_cast<std::int64_t>(order.size())));
  SubproblemResult r;
  r.solver_used = SolverKind::PrefixFastPath;
  r.best = UpgradeSet(inst.segments.size());
  for (std::size_t k = 0; k < take; ++k) {
    r.best.insert(order[k]);
    r.objective += weights.per_segment[order[k]];
  }
  r.nodes_explored = order.size();
  return r;
}

/// Dispatches to the cheapest exact solver for the case at hand.
inline SubproblemResult solve_single_objective(const Instance& inst, ResponseKind kind, const Rational& budget,
                                               const SolverOptions& opt = {}) {
  const auto caps = caps_for_budget(inst, budget);
  const auto z = effective_component_limit(inst.segments.size(), inst.component_cap, opt.normalize_components);
  if (kind == ResponseKind::Linear) {
    const auto w = effective_weights(inst);
    if (opt.allow_prefix_fast_path) {
      if (auto r = solve_prefix_fast_path(inst, w, caps, z)) return *r;
    }
    auto r = solve_linear_dp(inst, w, caps, z);
    return r;
  }
  if (z && *z <= opt.interval_enum_max_z && inst.segments.size() <= opt.interval_enum_max_segments) {
    if (auto r = solve_interval_enum(inst, kind, caps, *z, opt)) return *r;
  }
  return solve_branch_bound(inst, kind, caps, z, opt);
}

}  // namespace brt

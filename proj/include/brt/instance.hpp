#pragma once

// Instance data model for upgrading segments of a single bus line, plus the
// derived quantities every solver shares: investment cost, number of
// upgraded components and the minimum investment budget.

#include "brt/rational.hpp"
#include "brt/upgrade_set.hpp"

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace brt {

struct Segment {
  std::size_t index = 0;  // 1-based, connects stations index and index + 1
  std::int64_t cost = 1;
  Rational improvement = 1;
  bool upgradable = true;
};

struct Municipality {
  std::string id;
  std::size_t first_segment = 1;  // 1-based, inclusive
  std::size_t last_segment = 1;   // 1-based, inclusive
  Rational share = 1;

  std::size_t size() const { return last_segment - first_segment + 1; }
  bool owns(std::size_t segment_index) const {
    return segment_index >= first_segment && segment_index <= last_segment;
  }
};

/// Demand between two stations. Direction is irrelevant on a line, so the
/// path is always the segment interval between the smaller and the larger
/// station.
struct ODPair {
  std::size_t origin = 1;
  std::size_t destination = 2;
  std::int64_t potential = 1;
  Rational threshold = 0;

  std::size_t first_segment() const { return std::min(origin, destination); }
  std::size_t last_segment() const { return std::max(origin, destination) - 1; }
  bool uses(std::size_t segment_index) const {
    return segment_index >= first_segment() && segment_index <= last_segment();
  }
};

/// Upper bound Z on the number of upgraded components; empty means unbounded.
class ComponentCap {
 public:
  ComponentCap() = default;
  static ComponentCap unbounded() { return ComponentCap(); }
  static ComponentCap at_most(std::int64_t z) { return ComponentCap(z); }

  bool is_unbounded() const { return !limit_.has_value(); }
  std::int64_t value() const { return *limit_; }

  bool admits(std::int64_t components) const { return is_unbounded() || components <= *limit_; }

  std::string to_string() const { return is_unbounded() ? "inf" : std::to_string(*limit_); }

  friend bool operator==(const ComponentCap&, const ComponentCap&) = default;

 private:
  explicit ComponentCap(std::int64_t z) : limit_(z) {}
  std::optional<std::int64_t> limit_;
};

struct Instance {
  std::size_t station_count = 2;
  std::vector<Segment> segments;
  std::vector<Municipality> municipalities;
  std::vector<ODPair> od_pairs;
  ComponentCap component_cap;
  std::map<std::string, std::string> meta;  // provenance, e.g. generator constants

  std::size_t segment_count() const { return segments.size(); }
};

/// Improvement summed over segment positions [first, last] (1-based, inclusive).
inline Rational path_improvement(const Instance& inst, const ODPair& od) {
  Rational total = 0;
  for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) total += inst.segments[i - 1].improvement;
  return total;
}

/// Every violated invariant, one human-readable line each. Empty means valid.
inline std::vector<std::string> validate_instance(const Instance& inst) {
  std::vector<std::string> out;
  const std::size_t n = inst.station_count;
  if (n < 2) out.push_back("station count " + std::to_string(n) + " < 2");
  if (inst.segments.size() + 1 != n) {
    out.push_back("expected " + std::to_string(n > 0 ? n - 1 : 0) + " segments, found " +
                  std::to_string(inst.segments.size()));
  }
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    const Segment& s = inst.segments[i];
    const std::string tag = "segment e" + std::to_string(i + 1);
    if (s.index != i + 1) out.push_back(tag + ": index " + std::to_string(s.index) + " out of order");
    if (s.cost < 1) out.push_back(tag + ": cost " + std::to_string(s.cost) + " < 1");
    if (s.improvement <= 0) out.push_back(tag + ": improvement " + to_string(s.improvement) + " must be > 0");
  }

  if (inst.municipalities.empty()) out.push_back("no municipalities");
  Rational share_sum = 0;
  std::vector<int> owners(inst.segments.size(), 0);
  for (const Municipality& m : inst.municipalities) {
    const std::string tag = "municipality " + m.id;
    if (m.share <= 0) out.push_back(tag + ": budget share " + to_string(m.share) + " must be > 0");
    share_sum += m.share;
    if (m.first_segment < 1 || m.last_segment < m.first_segment || m.last_segment > inst.segments.size()) {
      out.push_back(tag + ": segment range [" + std::to_string(m.first_segment) + ", " +
                    std::to_string(m.last_segment) + "] is invalid");
      continue;
    }
    for (std::size_t i = m.first_segment; i <= m.last_segment; ++i) ++owners[i - 1];
  }
  if (!inst.municipalities.empty() && share_sum != 1) {
    out.push_back("budget shares sum to " + to_string(share_sum) + " != 1");
  }
  for (std::size_t i = 0; i < owners.size(); ++i) {
    if (owners[i] == 0) out.push_back("segment e" + std::to_string(i + 1) + " belongs to no municipality");
    if (owners[i] > 1) out.push_back("segment e" + std::to_string(i + 1) + " belongs to several municipalities");
  }

  for (std::size_t k = 0; k < inst.od_pairs.size(); ++k) {
    const ODPair& od = inst.od_pairs[k];
    const std::string tag = "OD pair d" + std::to_string(k + 1);
    if (od.origin == od.destination) {
      out.push_back(tag + ": origin equals destination");
      continue;
    }
    if (od.origin < 1 || od.origin > n || od.destination < 1 || od.destination > n) {
      out.push_back(tag + ": station outside 1.." + std::to_string(n));
      continue;
    }
    if (od.potential < 1) out.push_back(tag + ": potential " + std::to_string(od.potential) + " < 1");
    if (od.threshold < 0) out.push_back(tag + ": threshold " + to_string(od.threshold) + " < 0");
    if (od.last_segment() <= inst.segments.size()) {
      const Rational total = path_improvement(inst, od);
      if (od.threshold > total) {
        out.push_back(tag + ": threshold exceeds path improvement (" + to_string(od.threshold) + " > " +
                      to_string(total) + ")");
      }
    }
  }

  if (!inst.component_cap.is_unbounded() && inst.component_cap.value() < 1) {
    out.push_back("component cap " + inst.component_cap.to_string() + " < 1");
  }
  return out;
}

/// Non-fatal remarks on valid instances, e.g. thresholds that fixed segments
/// make unreachable.
inline std::vector<std::string> instance_warnings(const Instance& inst) {
  std::vector<std::string> out;
  for (std::size_t k = 0; k < inst.od_pairs.size(); ++k) {
    const ODPair& od = inst.od_pairs[k];
    if (od.last_segment() > inst.segments.size()) continue;
    Rational reachable = 0;
    for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) {
      if (inst.segments[i - 1].upgradable) reachable += inst.segments[i - 1].improvement;
    }
    if (od.threshold > reachable) {
      out.push_back("OD pair d" + std::to_string(k + 1) + ": threshold " + to_string(od.threshold) +
                    " is unreachable with upgradable segments only (max " + to_string(reachable) + ")");
    }
  }
  return out;
}

/// Municipality position owning each 0-based segment position.
inline std::vector<std::size_t> segment_owners(const Instance& inst) {
  std::vector<std::size_t> owner(inst.segments.size(), 0);
  for (std::size_t m = 0; m < inst.municipalities.size(); ++m) {
    const Municipality& mu = inst.municipalities[m];
    for (std::size_t i = mu.first_segment; i <= mu.last_segment && i <= owner.size(); ++i) owner[i - 1] = m;
  }
  return owner;
}

/// True iff f only contains upgradable segments of this line.
inline bool is_admissible(const Instance& inst, const UpgradeSet& f) {
  if (f.size() != inst.segments.size()) return false;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (f.contains(i) && !inst.segments[i].upgradable) return false;
  }
  return true;
}

inline std::int64_t investment_cost(const Instance& inst, const UpgradeSet& f) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    if (f.contains(i)) total += inst.segments[i].cost;
  }
  return total;
}

/// Spend of f inside each municipality, in municipality order.
inline std::vector<std::int64_t> municipality_spend(const Instance& inst, const UpgradeSet& f) {
  std::vector<std::int64_t> spend(inst.municipalities.size(), 0);
  for (std::size_t m = 0; m < inst.municipalities.size(); ++m) {
    const Municipality& mu = inst.municipalities[m];
    for (std::size_t i = mu.first_segment; i <= mu.last_segment; ++i) {
      if (f.contains(i - 1)) spend[m] += inst.segments[i - 1].cost;
    }
  }
  return spend;
}

/// Smallest budget v with spend_m(f) <= b_m * v for every municipality.
inline Rational min_investment_budget(const Instance& inst, const UpgradeSet& f) {
  const auto spend = municipality_spend(inst, f);
  Rational best = 0;
  for (std::size_t m = 0; m < spend.size(); ++m) {
    const Rational need = Rational(spend[m]) / inst.municipalities[m].share;
    if (need > best) best = need;
  }
  return best;
}

/// Number of maximal runs of consecutive upgraded segments.
inline std::int64_t count_components(const Instance& inst, const UpgradeSet& f) {
  std::int64_t runs = 0;
  bool prev = false;
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    const bool cur = f.contains(i);
    if (cur && !prev) ++runs;
    prev = cur;
  }
  return runs;
}

/// Largest number of components any subset of the line can have.
inline std::int64_t max_components(std::size_t segment_count) {
  return static_cast<std::int64_t>((segment_count + 1) / 2);
}

/// All upgradable segments.
inline UpgradeSet upgradable_segments(const Instance& inst) {
  UpgradeSet f(inst.segments.size());
  for (std::size_t i = 0; i < inst.segments.size(); ++i) {
    if (inst.segments[i].upgradable) f.insert(i);
  }
  return f;
}

inline std::int64_t total_potential(const Instance& inst) {
  std::int64_t total = 0;
  for (const auto& od : inst.od_pairs) total += od.potential;
  return total;
}

}  // namespace brt

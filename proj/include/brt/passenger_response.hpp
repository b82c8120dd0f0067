#pragma once

#include "brt/instance.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace brt {

/// How newly attracted passengers respond to realized path improvement.
///  - Linear: a share of the potential proportional to the realized share of
///    the path improvement.
///  - MinImprov: the whole potential once the realized improvement reaches the
///    pair's threshold, nothing before.
enum class ResponseKind { Linear, MinImprov };

inline std::string_view to_string(ResponseKind k) { return k == ResponseKind::Linear ? "linear" : "minimprov"; }

inline ResponseKind parse_response(std::string_view s) {
  if (s == "linear") return ResponseKind::Linear;
  if (s == "minimprov") return ResponseKind::MinImprov;
  throw std::invalid_argument("unknown response '" + std::string(s) + "' (expected linear|minimprov)");
}

/// Per-segment passenger gain under the Linear response. Linear attraction
/// is the dot product of these weights with the membership vector.
struct EffectiveWeights {
  std::vector<Rational> per_segment;
};

inline EffectiveWeights effective_weights(const Instance& inst) {
  EffectiveWeights w{std::vector<Rational>(inst.segments.size(), Rational(0))};
  // Accumulate a_d / U_d per segment, then scale by u_e once.
  std::vector<Rational> load(inst.segments.size(), Rational(0));
  for (const ODPair& od : inst.od_pairs) {
    const Rational per_unit = Rational(od.potential) / path_improvement(inst, od);
    for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) load[i - 1] += per_unit;
  }
  for (std::size_t i = 0; i < inst.segments.size(); ++i) w.per_segment[i] = inst.segments[i].improvement * load[i];
  return w;
}

inline std::vector<Rational> attracted_per_od(const Instance& inst, const UpgradeSet& f, ResponseKind kind) {
  std::vector<Rational> out;
  out.reserve(inst.od_pairs.size());
  for (const ODPair& od : inst.od_pairs) {
    Rational realized = 0;
    Rational total = 0;
    for (std::size_t i = od.first_segment(); i <= od.last_segment(); ++i) {
      const Rational& u = inst.segments[i - 1].improvement;
      total += u;
      if (f.contains(i - 1)) realized += u;
    }
    if (kind == ResponseKind::Linear) {
      out.push_back(realized / total * od.potential);
    } else {
      out.push_back(od.threshold <= realized ? Rational(od.potential) : Rational(0));
    }
  }
  return out;
}

inline Rational attracted(const Instance& inst, const UpgradeSet& f, ResponseKind kind) {
  Rational sum = 0;
  for (const auto& p : attracted_per_od(inst, f, kind)) sum += p;
  return sum;
}

}  // namespace brt

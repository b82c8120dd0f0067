#pragma once

#include "brt/instance.hpp"

#include <ostream>

namespace brt {
inline void PrintTo(const UpgradeSet& f, std::ostream* os) { *os << "0x" << f.to_hex(); }
}  // namespace brt

namespace fixtures {

// Five stations, two municipalities of two segments each, three trips.
inline brt::Instance five_station_line() {
  brt::Instance inst;
  inst.station_count = 5;
  const std::int64_t cost[] = {5, 12, 4, 6};
  const std::int64_t gain[] = {4, 11, 4, 5};
  for (std::size_t i = 0; i < 4; ++i) inst.segments.push_back(brt::Segment{i + 1, cost[i], gain[i], true});
  inst.municipalities.push_back(brt::Municipality{"m1", 1, 2, brt::Rational(1, 2)});
  inst.municipalities.push_back(brt::Municipality{"m2", 3, 4, brt::Rational(1, 2)});
  inst.od_pairs.push_back(brt::ODPair{3, 4, 100, 3});
  inst.od_pairs.push_back(brt::ODPair{2, 5, 200, 15});
  inst.od_pairs.push_back(brt::ODPair{1, 5, 200, 18});
  return inst;
}

// Three stations with an unequal budget split.
inline brt::Instance three_station_line() {
  brt::Instance inst;
  inst.station_count = 3;
  inst.segments.push_back(brt::Segment{1, 2, 1, true});
  inst.segments.push_back(brt::Segment{2, 1, 1, true});
  inst.municipalities.push_back(brt::Municipality{"m1", 1, 1, brt::Rational(2, 3)});
  inst.municipalities.push_back(brt::Municipality{"m2", 2, 2, brt::Rational(1, 3)});
  inst.od_pairs.push_back(brt::ODPair{1, 2, 1, 1});
  inst.od_pairs.push_back(brt::ODPair{1, 3, 2, 1});
  return inst;
}

inline brt::UpgradeSet set_of(std::size_t m, std::initializer_list<std::size_t> one_based) {
  brt::UpgradeSet f(m);
  for (auto i : one_based) f.insert(i - 1);
  return f;
}

}  // namespace fixtures

#include "brt/generator.hpp"

namespace fixtures {

struct RandomShape {
  std::size_t segments = 8;
  std::size_t municipalities = 1;
  brt::ComponentCap cap = brt::ComponentCap::unbounded();
  bool fixed_segments = false;  // sprinkle a few non-upgradable segments
};

// Small irregular lines for oracle comparisons: rational improvements,
// uneven shares, thresholds anywhere in (0, path improvement].
inline brt::Instance random_small(std::uint64_t seed, const RandomShape& shape) {
  brt::Prng rng(seed);
  brt::Instance inst;
  const std::size_t m = shape.segments;
  inst.station_count = m + 1;
  inst.component_cap = shape.cap;
  for (std::size_t i = 1; i <= m; ++i) {
    brt::Segment s{i, rng.uniform(1, 6), brt::Rational(rng.uniform(1, 9), rng.uniform(1, 3)), true};
    if (shape.fixed_segments && rng.uniform(1, 8) == 1) s.upgradable = false;
    inst.segments.push_back(s);
  }
  // Consecutive blocks with random cut points.
  std::vector<std::size_t> cuts{0};
  while (cuts.size() < shape.municipalities) {
    const auto c = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(m) - 1));
    if (std::find(cuts.begin(), cuts.end(), c) == cuts.end()) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.push_back(m);
  std::vector<std::int64_t> weight;
  std::int64_t total = 0;
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    weight.push_back(rng.uniform(1, 5));
    total += weight.back();
  }
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    inst.municipalities.push_back(
        brt::Municipality{"m" + std::to_string(k + 1), cuts[k] + 1, cuts[k + 1], brt::Rational(weight[k], total)});
  }
  const auto pairs = rng.uniform(3, 9);
  for (std::int64_t k = 0; k < pairs; ++k) {
    auto a = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(m) + 1));
    auto b = static_cast<std::size_t>(rng.uniform(1, static_cast<std::int64_t>(m) + 1));
    if (a == b) b = a == 1 ? 2 : a - 1;
    brt::ODPair od{a, b, rng.uniform(1, 40), 0};
    od.threshold = brt::path_improvement(inst, od) * brt::Rational(rng.uniform(1, 8), 8);
    inst.od_pairs.push_back(od);
  }
  return inst;
}

}  // namespace fixtures

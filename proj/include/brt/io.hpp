#pragma once

// File formats: instance JSON, front CSV (exact rationals), a JSON mirror of
// the enumeration trace and an SVG plot of a front in percentage axes.

#include "brt/instance.hpp"
#include "brt/pareto.hpp"
#include "brt/passenger_response.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace brt {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace io_detail {

inline Rational rational_field(const Json& j, const std::string& where) {
  if (j.is_number_integer()) return Rational(BigInt(j.get<std::int64_t>()));
  if (j.is_string()) {
    try {
      return parse_rational(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw FormatError(where + ": " + e.what());
    }
  }
  throw FormatError(where + ": expected an integer or a \"p/q\" string");
}

template <class T>
T integer_field(const Json& obj, const char* key, const std::string& where) {
  if (!obj.contains(key)) throw FormatError(where + ": missing '" + key + "'");
  const Json& j = obj.at(key);
  if (!j.is_number_integer()) throw FormatError(where + "." + key + ": expected an integer");
  const auto v = j.get<std::int64_t>();
  if constexpr (std::is_unsigned_v<T>) {
    if (v < 0) throw FormatError(where + "." + key + ": must be nonnegative");
  }
  return static_cast<T>(v);
}

inline Json rational_json(const Rational& r) { return to_string(r); }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void spit(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot write '" + path + "'");
  out << text;
  if (!out) throw FormatError("write failed for '" + path + "'");
}

}  // namespace io_detail

// ---------------------------------------------------------------- instance

inline Json instance_to_json(const Instance& inst) {
  Json j;
  j["stations"] = inst.station_count;
  Json segs = Json::array();
  for (const auto& s : inst.segments) {
    segs.push_back({{"cost", s.cost}, {"improvement", io_detail::rational_json(s.improvement)}, {"upgradable", s.upgradable}});
  }
  j["segments"] = segs;
  Json munis = Json::array();
  for (const auto& m : inst.municipalities) {
    munis.push_back({{"id", m.id},
                     {"firstSegment", m.first_segment},
                     {"lastSegment", m.last_segment},
                     {"share", io_detail::rational_json(m.share)}});
  }
  j["municipalities"] = munis;
  Json ods = Json::array();
  for (const auto& od : inst.od_pairs) {
    ods.push_back({{"origin", od.origin},
                   {"destination", od.destination},
                   {"potential", od.potential},
                   {"threshold", io_detail::rational_json(od.threshold)}});
  }
  j["odPairs"] = ods;
  if (inst.component_cap.is_unbounded()) {
    j["componentCap"] = "inf";
  } else {
    j["componentCap"] = inst.component_cap.value();
  }
  if (!inst.meta.empty()) {
    Json meta = Json::object();
    for (const auto& [k, v] : inst.meta) meta[k] = v;
    j["meta"] = meta;
  }
  return j;
}

inline ComponentCap parse_component_cap(const std::string& text) {
  if (text == "inf") return ComponentCap::unbounded();
  std::size_t used = 0;
  long long z = 0;
  try {
    z = std::stoll(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty() || z < 1) {
    throw std::invalid_argument("component cap must be a positive integer or 'inf', got '" + text + "'");
  }
  return ComponentCap::at_most(z);
}

inline Instance instance_from_json(const Json& j) {
  if (!j.is_object()) throw FormatError("instance: expected a JSON object");
  Instance inst;
  inst.station_count = io_detail::integer_field<std::size_t>(j, "stations", "instance");
  for (const char* key : {"segments", "municipalities", "odPairs"}) {
    if (!j.contains(key) || !j.at(key).is_array()) throw FormatError(std::string("instance: '") + key + "' must be an array");
  }
  std::size_t k = 0;
  for (const auto& s : j.at("segments")) {
    const std::string where = "segments[" + std::to_string(k) + "]";
    Segment seg;
    seg.index = ++k;
    seg.cost = io_detail::integer_field<std::int64_t>(s, "cost", where);
    if (!s.contains("improvement")) throw FormatError(where + ": missing 'improvement'");
    seg.improvement = io_detail::rational_field(s.at("improvement"), where + ".improvement");
    if (s.contains("upgradable")) {
      if (!s.at("upgradable").is_boolean()) throw FormatError(where + ".upgradable: expected a boolean");
      seg.upgradable = s.at("upgradable").get<bool>();
    }
    inst.segments.push_back(seg);
  }
  k = 0;
  for (const auto& m : j.at("municipalities")) {
    const std::string where = "municipalities[" + std::to_string(k++) + "]";
    Municipality muni;
    if (m.contains("id")) {
      muni.id = m.at("id").is_string() ? m.at("id").get<std::string>() : m.at("id").dump();
    } else {
      muni.id = "m" + std::to_string(k);
    }
    muni.first_segment = io_detail::integer_field<std::size_t>(m, "firstSegment", where);
    muni.last_segment = io_detail::integer_field<std::size_t>(m, "lastSegment", where);
    if (!m.contains("share")) throw FormatError(where + ": missing 'share'");
    muni.share = io_detail::rational_field(m.at("share"), where + ".share");
    inst.municipalities.push_back(muni);
  }
  k = 0;
  for (const auto& o : j.at("odPairs")) {
    const std::string where = "odPairs[" + std::to_string(k++) + "]";
    ODPair od;
    od.origin = io_detail::integer_field<std::size_t>(o, "origin", where);
    od.destination = io_detail::integer_field<std::size_t>(o, "destination", where);
    od.potential = io_detail::integer_field<std::int64_t>(o, "potential", where);
    od.threshold = o.contains("threshold") ? io_detail::rational_field(o.at("threshold"), where + ".threshold") : Rational(0);
    inst.od_pairs.push_back(od);
  }
  if (j.contains("componentCap")) {
    const Json& z = j.at("componentCap");
    try {
      inst.component_cap = z.is_string() ? parse_component_cap(z.get<std::string>())
                                         : parse_component_cap(std::to_string(z.get<std::int64_t>()));
    } catch (const std::exception& e) {
      throw FormatError(std::string("componentCap: ") + e.what());
    }
  }
  if (j.contains("meta") && j.at("meta").is_object()) {
    for (const auto& [key, v] : j.at("meta").items()) inst.meta[key] = v.is_string() ? v.get<std::string>() : v.dump();
  }
  return inst;
}

inline Instance read_instance(const std::string& path) {
  Json j;
  try {
    j = Json::parse(io_detail::slurp(path));
  } catch (const Json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  try {
    return instance_from_json(j);
  } catch (const Json::exception& e) {
    throw FormatError(path + ": " + e.what());
  }
}

inline void write_instance(const std::string& path, const Instance& inst) {
  io_detail::spit(path, instance_to_json(inst).dump(2) + "\n");
}

// ---------------------------------------------------------------- front CSV

inline constexpr const char* kFrontHeader =
    "budget_num,budget_den,passengers_num,passengers_den,cost,components,witness_bitmask";

/// Bit i marks segment e_(i+1): decimal for lines of up to 64 segments,
/// 0x-prefixed hex beyond.
inline std::string witness_field(const UpgradeSet& f) {
  if (f.size() <= 64) return std::to_string(f.low_word());
  return "0x" + f.to_hex();
}

inline UpgradeSet parse_witness_field(std::size_t segment_count, const std::string& text) {
  if (text.rfind("0x", 0) == 0 || text.rfind("0X", 0) == 0) return UpgradeSet::from_hex(segment_count, text);
  if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos) {
    throw FormatError("bad witness bitmask '" + text + "'");
  }
  std::uint64_t mask = 0;
  try {
    mask = std::stoull(text);
  } catch (const std::exception&) {
    throw FormatError("bad witness bitmask '" + text + "'");
  }
  if (segment_count < 64 && (mask >> segment_count) != 0) throw FormatError("witness bitmask exceeds the line: " + text);
  return UpgradeSet::from_mask(segment_count, mask);
}

struct FrontRow {
  Rational budget;
  Rational passengers;
  std::int64_t cost = 0;
  std::int64_t components = 0;
  UpgradeSet witness;
};

struct FrontFile {
  std::vector<FrontRow> rows;
  bool incomplete = false;

  ParetoFront front() const {
    ParetoFront f;
    for (const auto& r : rows) f.points.push_back(ParetoPoint{r.passengers, r.budget, r.witness});
    return f;
  }
};

inline std::string front_to_csv(const Instance& inst, const ParetoFront& front, bool complete = true) {
  std::ostringstream out;
  if (!complete) out << "# incomplete\n";
  out << kFrontHeader << "\n";
  for (const auto& p : front.points) {
    out << numerator_of(p.budget) << ',' << denominator_of(p.budget) << ',' << numerator_of(p.passengers) << ','
        << denominator_of(p.passengers) << ',' << investment_cost(inst, p.witness) << ','
        << count_components(inst, p.witness) << ',' << witness_field(p.witness) << "\n";
  }
  return out.str();
}

inline FrontFile front_from_csv(std::size_t segment_count, const std::string& text) {
  FrontFile file;
  std::istringstream in(text);
  std::string line;
  bool header_seen = false;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.find("incomplete") != std::string::npos) file.incomplete = true;
      continue;
    }
    if (!header_seen) {
      if (line != kFrontHeader) throw FormatError("line " + std::to_string(line_no) + ": unexpected header");
      header_seen = true;
      continue;
    }
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw FormatError("line " + std::to_string(line_no) + ": expected 7 fields");
    try {
      FrontRow row;
      row.budget = parse_rational(cells[0] + "/" + cells[1]);
      row.passengers = parse_rational(cells[2] + "/" + cells[3]);
      row.cost = std::stoll(cells[4]);
      row.components = std::stoll(cells[5]);
      row.witness = parse_witness_field(segment_count, cells[6]);
      file.rows.push_back(std::move(row));
    } catch (const FormatError&) {
      throw;
    } catch (const std::exception& e) {
      throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (!header_seen) throw FormatError("missing header");
  return file;
}

// ---------------------------------------------------------------- trace JSON

inline Json trace_to_json(const Instance& inst, const EnumerationTrace& trace, ResponseKind kind, double seconds) {
  auto positions = [](const UpgradeSet& f) {
    Json a = Json::array();
    for (auto p : f.positions()) a.push_back(p + 1);
    return a;
  };
  Json j;
  j["response"] = std::string(to_string(kind));
  j["componentCap"] = inst.component_cap.to_string();
  j["complete"] = trace.complete;
  j["incomplete"] = !trace.complete;
  j["seconds"] = seconds;
  j["totalPotential"] = total_potential(inst);
  j["fullUpgradeCost"] = investment_cost(inst, upgradable_segments(inst));
  j["initialBudget"] = to_string(initial_budget(inst));
  j["frontSizeBound"] = to_string(front_size_bound(inst));
  Json pts = Json::array();
  for (const auto& p : trace.front.points) {
    pts.push_back({{"passengers", to_string(p.passengers)},
                   {"budget", to_string(p.budget)},
                   {"cost", investment_cost(inst, p.witness)},
                   {"components", count_components(inst, p.witness)},
                   {"witness", positions(p.witness)},
                   {"witnessBitmask", witness_field(p.witness)}});
  }
  j["front"] = pts;
  Json by_cost = Json::array();
  for (const auto& [p, c] : evaluate_front_by_cost(inst, trace, kind)) {
    by_cost.push_back({{"passengers", to_string(p)}, {"cost", c}});
  }
  j["costEvaluation"] = by_cost;
  Json its = Json::array();
  for (const auto& it : trace.iterations) {
    Json tight = Json::array();
    for (auto m : it.tight) tight.push_back(inst.municipalities[m].id);
    its.push_back({{"budget", to_string(it.budget)},
                   {"objective", to_string(it.objective)},
                   {"minBudget", to_string(it.min_budget)},
                   {"tight", tight},
                   {"step", to_string(it.step)},
                   {"witness", positions(it.witness)},
                   {"solver", std::string(to_string(it.solver))},
                   {"nodes", it.nodes},
                   {"seconds", it.seconds}});
  }
  j["iterations"] = its;
  return j;
}

// ---------------------------------------------------------------- SVG

namespace svg_detail {

inline Rational percent(const Rational& part, const Rational& whole) {
  if (whole == 0) return 0;
  return part * 100 / whole;
}

inline std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace svg_detail

/// Budget front as a step line and the cost evaluation of its witnesses as
/// dots. x: budget or cost over the full-upgrade cost, y: passengers over the
/// total potential, both in percent with four decimals.
inline std::string front_to_svg(const Instance& inst, const EnumerationTrace& trace, ResponseKind kind,
                                const std::string& title) {
  const Rational total_p = total_potential(inst);
  const Rational total_c = investment_cost(inst, upgradable_segments(inst));
  const auto by_cost = evaluate_front_by_cost(inst, trace, kind);

  struct Pt {
    Rational x, y;
  };
  std::vector<Pt> budget_pts, cost_pts;
  Rational x_max = 100;
  for (const auto& p : trace.front.points) {
    budget_pts.push_back({svg_detail::percent(p.budget, total_c), svg_detail::percent(p.passengers, total_p)});
    if (budget_pts.back().x > x_max) x_max = budget_pts.back().x;
  }
  for (const auto& [p, c] : by_cost) cost_pts.push_back({svg_detail::percent(Rational(c), total_c), svg_detail::percent(p, total_p)});
  x_max = Rational(ceil_of(x_max / 20) * 20);

  const int W = 640, H = 480, L = 70, R = 20, T = 40, B = 60;
  const Rational pw = W - L - R, ph = H - T - B;
  auto sx = [&](const Rational& x) { return to_decimal(L + x / x_max * pw, 4); };
  auto sy = [&](const Rational& y) { return to_decimal(T + ph - y / 100 * ph, 4); };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" << svg_detail::escape(title)
      << "</text>\n";
  for (int k = 0; k <= 5; ++k) {
    const Rational gy = Rational(k * 20);
    out << "<line x1=\"" << L << "\" x2=\"" << W - R << "\" y1=\"" << sy(gy) << "\" y2=\"" << sy(gy)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << L - 6 << "\" y=\"" << sy(gy) << "\" text-anchor=\"end\" dominant-baseline=\"middle\">"
        << to_decimal(gy, 4) << "</text>\n";
  }
  const BigInt steps = BigInt(x_max / 20);
  for (BigInt k = 0; k <= steps; ++k) {
    const Rational gx = Rational(k * 20);
    out << "<line x1=\"" << sx(gx) << "\" x2=\"" << sx(gx) << "\" y1=\"" << T << "\" y2=\"" << H - B
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << sx(gx) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << to_decimal(gx, 4)
        << "</text>\n";
  }
  out << "<text x=\"" << L + (W - L - R) / 2 << "\" y=\"" << H - 18
      << "\" text-anchor=\"middle\">budget / cost [% of full-upgrade cost]</text>\n";
  out << "<text transform=\"translate(18," << T + (H - T - B) / 2
      << ") rotate(-90)\" text-anchor=\"middle\">attracted passengers [% of total potential]</text>\n";

  // Step function: passengers available at each budget.
  if (!budget_pts.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"2\" points=\"";
    for (std::size_t i = budget_pts.size(); i-- > 0;) {
      const auto& p = budget_pts[i];
      if (i + 1 < budget_pts.size()) out << sx(p.x) << ',' << sy(budget_pts[i + 1].y) << ' ';
      out << sx(p.x) << ',' << sy(p.y) << ' ';
    }
    out << sx(x_max) << ',' << sy(budget_pts.front().y) << "\"/>\n";
  }
  for (const auto& p : budget_pts) {
    out << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"3\" fill=\"#1f77b4\"><title>budget "
        << to_decimal(p.x, 4) << "%, passengers " << to_decimal(p.y, 4) << "%</title></circle>\n";
  }
  for (const auto& p : cost_pts) {
    out << "<rect x=\"" << to_decimal(L + p.x / x_max * pw - 3, 4) << "\" y=\"" << to_decimal(T + ph - p.y / 100 * ph - 3, 4)
        << "\" width=\"6\" height=\"6\" fill=\"none\" stroke=\"#d62728\"><title>cost " << to_decimal(p.x, 4)
        << "%, passengers " << to_decimal(p.y, 4) << "%</title></rect>\n";
  }
  out << "<text x=\"" << W - R - 4 << "\" y=\"" << H - B - 24
      << "\" text-anchor=\"end\" fill=\"#1f77b4\">budget front</text>\n";
  out << "<text x=\"" << W - R - 4 << "\" y=\"" << H - B - 8
      << "\" text-anchor=\"end\" fill=\"#d62728\">witness cost</text>\n";
  if (!trace.complete) {
    out << "<text x=\"" << L + 6 << "\" y=\"" << T + 14 << "\" fill=\"#d62728\">incomplete</text>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace brt

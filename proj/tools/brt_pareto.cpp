// brt_pareto: generate instances, enumerate exact Pareto fronts, cross-check
// them against exhaustive search and run the scenario grid.
//
// Exit codes: 0 success, 1 verification mismatch (or bench consistency
// violation), 2 invalid flags or input, 3 resource limit hit (partial output
// is written and flagged incomplete).

#include "brt/generator.hpp"
#include "brt/io.hpp"
#include "brt/oracle.hpp"
#include "brt/pareto.hpp"
#include "brt/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

namespace {

constexpr int kExitMismatch = 1;
constexpr int kExitUsage = 2;
constexpr int kExitResource = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

brt::Instance load_valid(const std::string& path) {
  brt::Instance inst;
  try {
    inst = brt::read_instance(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  const auto problems = brt::validate_instance(inst);
  if (!problems.empty()) {
    std::string msg = path + " is not a valid instance:";
    for (const auto& p : problems) msg += "\n  - " + p;
    throw UsageError(msg);
  }
  for (const auto& w : brt::instance_warnings(inst)) std::cerr << "warning: " << w << "\n";
  return inst;
}

brt::ComponentCap cap_flag(const std::string& text) {
  try {
    return brt::parse_component_cap(text);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string family = "scenario";
  std::size_t stations = 25;
  std::string cost = "unit", demand = "even", split = "equal";
  std::size_t municipalities = 5;
  std::string components = "inf";
  std::string response = "linear";
  std::string threshold_fraction = "3/4";
  std::uint64_t seed = 1;
  std::string output;
};

int run_generate(const GenerateArgs& a) {
  brt::Instance inst;
  try {
    if (a.family == "intractable") {
      inst = brt::generate_intractable(a.stations);
    } else if (a.family == "prefix-weights") {
      inst = brt::generate_prefix_special(a.stations, brt::PrefixVariant::UnimodalWeights);
    } else if (a.family == "prefix-costs") {
      inst = brt::generate_prefix_special(a.stations, brt::PrefixVariant::UnimodalCosts);
    } else {
      brt::ScenarioSpec spec;
      spec.station_count = a.stations;
      spec.cost = brt::parse_cost_pattern(a.cost);
      spec.demand = brt::parse_demand_pattern(a.demand);
      spec.split = brt::parse_budget_split(a.split);
      spec.municipality_count = a.municipalities;
      spec.component_cap = cap_flag(a.components);
      spec.response = std::string(brt::to_string(brt::parse_response(a.response)));
      spec.threshold_fraction = brt::parse_rational(a.threshold_fraction);
      spec.seed = a.seed;
      inst = brt::generate(spec);
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  brt::write_instance(a.output, inst);
  std::cout << a.output << "\n";
  return 0;
}

// ---------------------------------------------------------------- solve

struct SolveArgs {
  std::string instance;
  std::string response;
  std::string components;
  std::string out;
  bool svg = false;
  std::uint64_t node_limit = brt::SolverOptions{}.node_limit;
  std::uint64_t enumeration_cap = brt::SolverOptions{}.enumeration_cap;
};

std::string default_prefix(const std::string& instance_path) {
  std::filesystem::path p(instance_path);
  return (p.parent_path() / p.stem()).string() + ".front";
}

int run_solve(const SolveArgs& a) {
  brt::Instance inst = load_valid(a.instance);
  if (!a.components.empty()) inst.component_cap = cap_flag(a.components);
  const auto kind = brt::parse_response(a.response);
  brt::SolverOptions opt;
  opt.node_limit = a.node_limit;
  opt.enumeration_cap = a.enumeration_cap;
  const std::string prefix = a.out.empty() ? default_prefix(a.instance) : a.out;
  for (const char* ext : {".csv", ".cost.csv", ".json", ".svg"}) {
    std::error_code ec;
    if (std::filesystem::equivalent(prefix + ext, a.instance, ec)) throw UsageError("output would overwrite the instance file");
  }

  const auto t0 = std::chrono::steady_clock::now();
  brt::EnumerationTrace trace;
  std::string failure;
  try {
    trace = brt::enumerate_pareto(inst, kind, opt);
  } catch (const brt::EnumerationError& e) {
    trace = e.partial();
    failure = e.what();
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  std::ostringstream cost_csv;
  cost_csv << "passengers_num,passengers_den,cost\n";
  for (const auto& [p, c] : brt::evaluate_front_by_cost(inst, trace, kind)) {
    cost_csv << brt::numerator_of(p) << ',' << brt::denominator_of(p) << ',' << c << "\n";
  }
  auto json = brt::trace_to_json(inst, trace, kind, seconds);
  if (!failure.empty()) json["error"] = failure;
  brt::io_detail::spit(prefix + ".csv", brt::front_to_csv(inst, trace.front, trace.complete));
  brt::io_detail::spit(prefix + ".cost.csv", cost_csv.str());
  brt::io_detail::spit(prefix + ".json", json.dump(2) + "\n");
  if (a.svg) {
    const std::string title = std::string(brt::to_string(kind)) + ", Z = " + inst.component_cap.to_string();
    brt::io_detail::spit(prefix + ".svg", brt::front_to_svg(inst, trace, kind, title));
  }

  std::cout << "response " << brt::to_string(kind) << ", Z = " << inst.component_cap.to_string() << ": "
            << trace.front.size() << " points, " << trace.iterations.size() << " iterations, " << seconds << " s\n";
  for (const auto& p : trace.front.points) {
    std::cout << "  passengers " << brt::to_string(p.passengers) << "  budget " << brt::to_string(p.budget) << "\n";
  }
  std::cout << "wrote " << prefix << ".csv, " << prefix << ".cost.csv, " << prefix << ".json"
            << (a.svg ? ", " + prefix + ".svg" : "") << "\n";
  if (!failure.empty()) {
    std::cerr << "incomplete: " << failure << "\n";
    return kExitResource;
  }
  return 0;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string instance;
  std::string response = "both";
  std::vector<std::string> components;
  std::string check_file;
};

int run_verify(const VerifyArgs& a) {
  const brt::Instance inst = load_valid(a.instance);
  if (inst.segments.size() > 20) throw UsageError("verify supports lines of at most 20 segments");
  std::vector<brt::ResponseKind> kinds;
  if (a.response == "both") {
    kinds = {brt::ResponseKind::Linear, brt::ResponseKind::MinImprov};
  } else {
    kinds = {brt::parse_response(a.response)};
  }
  std::vector<brt::ComponentCap> caps;
  for (const auto& z : a.components) caps.push_back(cap_flag(z));
  if (caps.empty()) caps.push_back(inst.component_cap);

  if (!a.check_file.empty()) {
    if (kinds.size() != 1 || caps.size() != 1) throw UsageError("--check-file needs one --response and at most one --components");
    brt::FrontFile file;
    try {
      file = brt::front_from_csv(inst.segments.size(), brt::io_detail::slurp(a.check_file));
    } catch (const std::exception& e) {
      throw UsageError(e.what());
    }
    brt::Instance capped = inst;
    capped.component_cap = caps[0];
    const auto oracle = brt::brute_force_front(capped, kinds[0]);
    const auto m = brt::first_mismatch(oracle, file.front());
    if (m) {
      std::cout << "FAIL " << a.check_file << ": first divergent point at index " << m->index << "\n"
                << "  expected " << brt::describe_point(m->expected) << "\n"
                << "  found    " << brt::describe_point(m->actual) << "\n";
      return kExitMismatch;
    }
    std::cout << "PASS " << a.check_file << " matches exhaustive search (" << oracle.size() << " points)\n";
    return 0;
  }

  bool all = true;
  for (auto kind : kinds) {
    for (const auto& cap : caps) {
      const auto v = brt::verify_case(inst, kind, cap);
      const std::string tag = std::string(brt::to_string(kind)) + ", Z = " + cap.to_string();
      if (!v.error.empty()) {
        std::cout << "FAIL " << tag << ": " << v.error << "\n";
        all = false;
        continue;
      }
      if (v.mismatch) {
        std::cout << "FAIL " << tag << ": first divergent point at index " << v.mismatch->index << "\n"
                  << "  exhaustive  " << brt::describe_point(v.mismatch->expected) << "\n"
                  << "  enumerated  " << brt::describe_point(v.mismatch->actual) << "\n";
        all = false;
        continue;
      }
      std::cout << "PASS " << tag << ": " << v.enumerated.size() << " points\n";
      std::cout << "  budget front:";
      for (const auto& p : v.enumerated.points) std::cout << " (" << brt::to_string(p.passengers) << "," << brt::to_string(p.budget) << ")";
      std::cout << "\n  cost front:  ";
      for (const auto& p : v.cost_front.points) std::cout << " (" << brt::to_string(p.passengers) << "," << brt::to_string(p.budget) << ")";
      std::cout << "\n  budget front evaluated by cost "
                << (brt::budget_and_cost_fronts_differ(v) ? "differs from" : "coincides with") << " the cost front\n";
    }
  }
  return all ? 0 : kExitMismatch;
}

// ---------------------------------------------------------------- bench

struct BenchArgs {
  std::size_t stations = 25;
  std::uint64_t seed = 1;
  std::size_t threads = 0;
  std::string out = "bench_out";
  std::uint64_t node_limit = brt::SolverOptions{}.node_limit;
};

int run_bench_cmd(const BenchArgs& a) {
  if (a.stations < 6) throw UsageError("bench needs at least 6 stations (five municipalities)");
  brt::BenchConfig cfg;
  cfg.stations = a.stations;
  cfg.seed = a.seed;
  cfg.threads = a.threads;
  cfg.solver.node_limit = a.node_limit;
  const auto t0 = std::chrono::steady_clock::now();
  const auto cells = brt::run_bench(brt::bench_grid(), cfg);
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const auto violations = brt::bench_violations(cells);

  std::filesystem::create_directories(a.out);
  const std::string dir = a.out + "/";
  brt::io_detail::spit(dir + "cells.csv", brt::bench_cells_csv(cells));
  brt::io_detail::spit(dir + "summary.csv", brt::bench_summary_csv(cells));
  brt::io_detail::spit(dir + "report.json", brt::bench_json(cells, cfg, violations).dump(2) + "\n");

  std::size_t failed = 0;
  for (const auto& c : cells) {
    if (!c.ok()) {
      ++failed;
      std::cerr << "incomplete: " << c.key.label() << ": " << c.error << "\n";
    }
  }
  std::cout << cells.size() << " fronts in " << seconds << " s with " << brt::bench_threads(a.threads)
            << " worker(s); " << failed << " incomplete; " << violations.size() << " consistency violation(s)\n";
  std::cout << brt::bench_summary_csv(cells);
  for (const auto& v : violations) std::cout << "violation: " << v << "\n";
  std::cout << "wrote " << dir << "cells.csv, " << dir << "summary.csv, " << dir << "report.json\n";
  if (failed) return kExitResource;
  return violations.empty() ? 0 : kExitMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact Pareto fronts for upgrading bus-line segments"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "write a generated instance as JSON");
  g->add_option("--family", gen.family, "scenario | intractable | prefix-weights | prefix-costs")
      ->check(CLI::IsMember({"scenario", "intractable", "prefix-weights", "prefix-costs"}));
  g->add_option("--stations", gen.stations, "number of stations")->check(CLI::Range(2, 100000));
  g->add_option("--cost", gen.cost, "unit | middle | ends")->check(CLI::IsMember({"unit", "middle", "ends"}));
  g->add_option("--demand", gen.demand, "even | hubs | termini")->check(CLI::IsMember({"even", "hubs", "termini"}));
  g->add_option("--split", gen.split, "equal | cost | pass")->check(CLI::IsMember({"equal", "cost", "pass"}));
  g->add_option("--municipalities", gen.municipalities, "number of municipalities")->check(CLI::PositiveNumber);
  g->add_option("--components", gen.components, "component cap Z (integer or inf)");
  g->add_option("--response", gen.response, "linear | minimprov (recorded in meta)")
      ->check(CLI::IsMember({"linear", "minimprov"}));
  g->add_option("--threshold-fraction", gen.threshold_fraction, "threshold as a fraction of path improvement");
  g->add_option("--seed", gen.seed, "generator seed");
  g->add_option("-o,--output", gen.output, "output file")->required();

  SolveArgs sol;
  auto* s = app.add_subcommand("solve", "enumerate the exact front of an instance");
  s->add_option("instance", sol.instance, "instance JSON")->required()->check(CLI::ExistingFile);
  s->add_option("--response", sol.response, "linear | minimprov")->required()->check(CLI::IsMember({"linear", "minimprov"}));
  s->add_option("--components", sol.components, "override the instance's component cap (integer or inf)");
  s->add_option("--out", sol.out, "output prefix (default: <instance stem>.front)");
  s->add_flag("--svg", sol.svg, "also write an SVG plot");
  s->add_option("--node-limit", sol.node_limit, "branch-and-bound node limit per solve")->check(CLI::PositiveNumber);
  s->add_option("--enumeration-cap", sol.enumeration_cap, "interval-enumeration candidate cap");

  VerifyArgs ver;
  auto* v = app.add_subcommand("verify", "compare enumerated fronts with exhaustive search");
  v->add_option("instance", ver.instance, "instance JSON")->required()->check(CLI::ExistingFile);
  v->add_option("--response", ver.response, "linear | minimprov | both")
      ->check(CLI::IsMember({"linear", "minimprov", "both"}));
  v->add_option("--components", ver.components, "component caps to check (repeatable or comma separated)")
      ->delimiter(',');
  v->add_option("--check-file", ver.check_file, "front CSV to check instead of enumerating")->check(CLI::ExistingFile);

  BenchArgs ben;
  auto* b = app.add_subcommand("bench", "run the full scenario grid (BRT_PARETO_THREADS caps the pool)");
  b->add_option("--stations", ben.stations, "stations per line");
  b->add_option("--seed", ben.seed, "generator seed");
  b->add_option("--threads", ben.threads, "worker threads (0: hardware)");
  b->add_option("--out", ben.out, "output directory");
  b->add_option("--node-limit", ben.node_limit, "branch-and-bound node limit per solve")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return run_generate(gen);
    if (*s) return run_solve(sol);
    if (*v) return run_verify(ver);
    if (*b) return run_bench_cmd(ben);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}

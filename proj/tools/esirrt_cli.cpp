// esirrt: command-line front end for planning, benchmarking and skeleton
// inspection on PGM occupancy maps.
//
//   esirrt plan     --map m.pgm --start x,y --goal x,y --planner esirrt --iters N --seed S
//   esirrt bench    --map m.pgm --start x,y --goal x,y --planners irrt,sirrt,esirrt
//                   --trials T --iters N --seed-base S --out-dir DIR
//   esirrt skeleton --map m.pgm --out skel.svg
//
// Exit codes: 0 success, 1 invalid input, 2 planning failure, 3 I/O error.

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "esirrt/bench.hpp"
#include "esirrt/error.hpp"
#include "esirrt/gridmap.hpp"
#include "esirrt/planner.hpp"
#include "esirrt/skeleton.hpp"
#include "esirrt/svg.hpp"

namespace {

enum ExitCode { kOk = 0, kInvalidInput = 1, kPlanningFailure = 2, kIoError = 3 };

struct MapOptions {
  std::string map;
  int free_threshold = esirrt::kDefaultFreeThreshold;
  int inflate = 0;
};

struct Endpoints {
  std::vector<double> start;
  std::vector<double> goal;
};

void add_map_options(CLI::App* app, MapOptions& opts) {
  app->add_option("--map", opts.map, "Binary PGM (P5) occupancy map")->required();
  app->add_option("--free-threshold", opts.free_threshold, "Grey level at or above which a cell is free")
      ->check(CLI::Range(0, 255));
  app->add_option("--inflate", opts.inflate, "Grow obstacles by this many cells")
      ->check(CLI::NonNegativeNumber);
}

void add_endpoint_options(CLI::App* app, Endpoints& ep) {
  app->add_option("--start", ep.start, "Start point x,y (pixels)")
      ->required()->expected(2)->delimiter(',');
  app->add_option("--goal", ep.goal, "Goal point x,y (pixels)")
      ->required()->expected(2)->delimiter(',');
}

void add_param_options(CLI::App* app, esirrt::PlannerParams& p) {
  app->add_option("--eta", p.eta, "Steer step (pixels)")->capture_default_str();
  app->add_option("--gamma", p.gamma, "Shrinking-ball constant (0 derives it from the free area)");
  app->add_option("--goal-bias", p.goal_bias, "IRRT* goal sampling probability")->capture_default_str();
  app->add_option("--goal-radius", p.goal_radius, "IRRT* goal connection radius (0 means eta)");
  app->add_option("--rewire-radius", p.rewire_radius,
                  "Bidirectional rewiring radius (0 means twice the subsample distance)");
  app->add_option("--subsample-d", p.subsample_d, "Path subsampling interval (pixels)")
      ->capture_default_str();
  app->add_option("--spline-n", p.spline_n, "Spline evaluation intervals")->capture_default_str();
  app->add_option("--harris-k", p.harris.k, "Harris k")->capture_default_str();
  app->add_option("--harris-threshold", p.harris.threshold, "Harris threshold (fraction of max)")
      ->capture_default_str();
  app->add_option("--harris-block", p.harris.block_size, "Harris window size (odd)")
      ->capture_default_str();
  app->add_option("--nms-radius", p.harris.nms_radius, "Corner suppression radius (pixels)")
      ->capture_default_str();
  app->add_option("--max-initial-iters", p.max_initial_iters,
                  "IRRT* iteration cap while searching for a first solution")
      ->capture_default_str();
}

esirrt::OccupancyGrid load_map(const MapOptions& opts) {
  auto grid = esirrt::load_pgm_file(opts.map, opts.free_threshold);
  return opts.inflate > 0 ? esirrt::inflate(grid, opts.inflate) : grid;
}

esirrt::Point to_point(const std::vector<double>& v) { return {v.at(0), v.at(1)}; }

void write_trace_csv(const std::vector<double>& trace, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw esirrt::IoError("cannot write " + path);
  out << "iteration,best_cost\n";
  for (std::size_t i = 0; i < trace.size(); ++i)
    out << (i + 1) << ',' << esirrt::format_number(trace[i]) << '\n';
  out.flush();
  if (!out) throw esirrt::IoError("write failed for " + path);
}

std::string stats_cell(const esirrt::MetricStats& m) {
  return esirrt::format_number(m.mean) + " +- " + esirrt::format_number(m.std) + " (" +
         esirrt::format_number(m.min) + "-" + esirrt::format_number(m.max) + ")";
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Expands "--config FILE" into ordinary flags. Subcommand options are marked
// required, so the file is merged before parsing rather than through CLI11's
// own config support. Flags given on the command line win over the file.
std::vector<std::string> expand_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  const auto it = std::find(args.begin(), args.end(), "--config");
  if (it == args.end() || it + 1 == args.end()) return args;
  const std::string path = *(it + 1);
  args.erase(it, it + 2);
  std::ifstream in(path);
  if (!in) throw esirrt::IoError("cannot read config " + path);
  const auto given = [&](const std::string& flag) {
    return std::any_of(args.begin(), args.end(),
                       [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
  };
  for (std::string line; std::getline(in, line);) {
    line = trim(line);
    if (line.empty() || line[0] == '#' || line[0] == ';' || line[0] == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw esirrt::InvalidInput("config line without '=': " + line);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    std::replace(key.begin(), key.end(), '_', '-');
    if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') && value.back() == value.front())
      value = value.substr(1, value.size() - 2);
    const std::string flag = "--" + key;
    if (given(flag)) continue;
    if (key == "wall-time") {
      if (value == "true" || value == "1") args.push_back(flag);
      continue;
    }
    args.push_back(flag);
    args.push_back(value);
  }
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Skeleton-initialised informed RRT* planners on occupancy grids"};
  app.require_subcommand(1);

  MapOptions map_opts;
  Endpoints ep;
  esirrt::PlannerParams params;

  // plan
  auto* plan_cmd = app.add_subcommand("plan", "Run one planner once");
  std::string planner_str = "esirrt";
  std::size_t iters = 2000;
  std::uint64_t seed = 0;
  std::string svg_out;
  std::string csv_out;
  add_map_options(plan_cmd, map_opts);
  add_endpoint_options(plan_cmd, ep);
  add_param_options(plan_cmd, params);
  plan_cmd->add_option("--planner", planner_str, "irrt | sirrt | esirrt")
      ->check(CLI::IsMember({"irrt", "sirrt", "esirrt"}));
  plan_cmd->add_option("--iters", iters, "Informed iterations after the initial solution");
  plan_cmd->add_option("--seed", seed, "RNG seed");
  plan_cmd->add_option("--svg", svg_out, "Write a rendering of the result");
  plan_cmd->add_option("--csv", csv_out, "Write the best-cost trace");
  plan_cmd->add_option("--config", "key=value parameter file (keys are flag names)");

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Run repeated seeded trials and aggregate");
  std::vector<std::string> planner_list{"irrt", "sirrt", "esirrt"};
  std::size_t trials = 100;
  std::size_t bench_iters = 2000;
  std::uint64_t seed_base = 0;
  std::string out_dir = "bench_out";
  unsigned threads = 0;
  bool wall_time = false;
  add_map_options(bench_cmd, map_opts);
  add_endpoint_options(bench_cmd, ep);
  add_param_options(bench_cmd, params);
  bench_cmd->add_option("--planners", planner_list, "Comma-separated planner list")
      ->delimiter(',')
      ->check(CLI::IsMember({"irrt", "sirrt", "esirrt"}));
  bench_cmd->add_option("--trials", trials, "Trials per planner")->check(CLI::PositiveNumber);
  bench_cmd->add_option("--iters", bench_iters, "Informed iterations after the initial solution");
  bench_cmd->add_option("--seed-base,--seed", seed_base, "Trial i uses seed-base + i");
  bench_cmd->add_option("--out-dir", out_dir, "Output directory for CSV files");
  bench_cmd->add_option("--threads", threads, "Worker threads (0 = all cores)");
  bench_cmd->add_flag("--wall-time", wall_time,
                      "Record per-trial wall time in trials.csv (otherwise 0, keeping output reproducible)");
  bench_cmd->add_option("--config", "key=value parameter file (keys are flag names)");

  // skeleton
  auto* skel_cmd = app.add_subcommand("skeleton", "Render the free-space skeleton and its nodes");
  std::string skel_out;
  add_map_options(skel_cmd, map_opts);
  skel_cmd->add_option("--out", skel_out, "SVG output path")->required();
  skel_cmd->add_option("--harris-k", params.harris.k, "Harris k");
  skel_cmd->add_option("--harris-threshold", params.harris.threshold, "Harris threshold");
  skel_cmd->add_option("--harris-block", params.harris.block_size, "Harris window size");
  skel_cmd->add_option("--nms-radius", params.harris.nms_radius, "Corner suppression radius");

  try {
    auto args = expand_config(argc, argv);
    std::vector<char*> raw;
    for (auto& a : args) raw.push_back(a.data());
    app.parse(static_cast<int>(raw.size()), raw.data());
  } catch (const esirrt::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const esirrt::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInvalidInput;
  }

  try {
    const auto grid = load_map(map_opts);

    if (*skel_cmd) {
      const auto skel = esirrt::thin(grid);
      const auto nodes = esirrt::structural_nodes(skel, params.harris);
      esirrt::SvgScene scene;
      scene.grid = &grid;
      scene.skeleton = &skel;
      scene.corners = &nodes;
      esirrt::export_svg(scene, skel_out);
      std::cout << "skeleton pixels: " << skel.count() << "\nstructural nodes: " << nodes.corners.size()
                << '\n';
      return kOk;
    }

    const auto start = to_point(ep.start);
    const auto goal = to_point(ep.goal);

    if (*plan_cmd) {
      const auto kind = *esirrt::parse_planner(planner_str);
      auto res = esirrt::plan(kind, grid, start, goal, iters, seed, params);
      std::cout << "planner: " << esirrt::planner_name(kind) << '\n'
                << "solved: " << (res.solved() ? "yes" : "no") << '\n'
                << "initial_iteration: " << res.initial_iteration << '\n'
                << "initial_cost: " << esirrt::format_number(res.initial_cost) << '\n'
                << "final_cost: " << esirrt::format_number(res.final_cost()) << '\n'
                << "tree_nodes: " << res.tree.size() << '\n';
      if (!svg_out.empty()) {
        esirrt::SvgScene scene;
        scene.grid = &grid;
        scene.tree = &res.tree;
        scene.corners = res.nodes.corners.empty() ? nullptr : &res.nodes;
        scene.initial_path = res.init_path;
        scene.spline_path = res.spline_path;
        scene.refined_path = res.refined_path;
        scene.final_path = res.path;
        if (res.solved())
          scene.region = esirrt::InformedRegion::between(
              start, goal, std::max(res.final_cost(), esirrt::distance(start, goal)));
        scene.start = start;
        scene.goal = goal;
        esirrt::export_svg(scene, svg_out);
      }
      if (!csv_out.empty()) write_trace_csv(res.cost_trace, csv_out);
      return res.solved() ? kOk : kPlanningFailure;
    }

    if (*bench_cmd) {
      esirrt::BenchConfig cfg;
      cfg.start = start;
      cfg.goal = goal;
      for (const auto& name : planner_list) cfg.planners.push_back(*esirrt::parse_planner(name));
      cfg.trials = trials;
      cfg.iters = bench_iters;
      cfg.seed_base = seed_base;
      cfg.params = params;
      cfg.threads = threads;
      cfg.record_wall_time = wall_time;
      // Validate parameters and endpoints once up front so bad input is not
      // reported as a per-trial failure.
      (void)esirrt::resolve(params, grid);
      if (!esirrt::is_free(grid, start) || !esirrt::is_free(grid, goal))
        throw esirrt::InvalidEndpoint("start and goal must lie in free space");

      const auto records = esirrt::run_trials(grid, cfg);
      const auto stats = esirrt::aggregate(records);
      esirrt::export_csv(records, stats, out_dir);
      for (const auto& s : stats) {
        std::cout << esirrt::planner_name(s.planner) << ": trials " << s.trials << ", failures "
                  << s.failures << '\n'
                  << "  initial_iteration " << stats_cell(s.initial_iteration) << '\n'
                  << "  initial_cost      " << stats_cell(s.initial_cost) << '\n'
                  << "  final_cost        " << stats_cell(s.final_cost) << '\n';
      }
      return kOk;
    }
  } catch (const esirrt::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kIoError;
  } catch (const esirrt::DisconnectedGraph& e) {
    std::cerr << "planning failed: " << e.what() << '\n';
    return kPlanningFailure;
  } catch (const esirrt::EmptyFreeSpace& e) {
    std::cerr << "planning failed: " << e.what() << '\n';
    return kPlanningFailure;
  } catch (const esirrt::Error& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kInvalidInput;
  }
  return kOk;
}

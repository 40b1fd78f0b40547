#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "esirrt/gridmap.hpp"
#include "esirrt/planner.hpp"

namespace esirrt {

struct TrialRecord {
  PlannerKind planner = PlannerKind::Esirrt;
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::size_t initial_iteration = 0;
  double initial_cost = 0.0;
  double final_cost = 0.0;
  double wall_time_ms = 0.0;
  std::vector<double> cost_trace;

  bool failed = false;
  std::string diagnostics;  // failure reason or audit findings
  bool audit_ok = true;     // full-tree audit after the run
};

struct BenchConfig {
  Point start;
  Point goal;
  std::vector<PlannerKind> planners;
  std::size_t trials = 1;
  std::size_t iters = 2000;
  std::uint64_t seed_base = 0;
  PlannerParams params;
  unsigned threads = 0;           // 0: hardware concurrency
  bool record_wall_time = false;  // otherwise wall_time_ms stays 0
  bool audit_trees = true;
};

/// Runs every planner for `trials` trials. Trial i uses seed seed_base + i.
/// Records come back grouped by planner (in config order), then by trial,
/// regardless of how the worker pool scheduled them.
std::vector<TrialRecord> run_trials(const OccupancyGrid& grid, const BenchConfig& config);

struct MetricStats {
  std::size_t n = 0;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation, 0 when n == 1
  double min = 0.0;
  double max = 0.0;
};

/// Welford accumulation. Throws InvalidInput on an empty sequence.
MetricStats summarize(std::span<const double> values);

struct PlannerStats {
  PlannerKind planner;
  std::size_t trials = 0;
  std::size_t failures = 0;
  MetricStats initial_iteration;
  MetricStats initial_cost;
  MetricStats final_cost;
};

/// Per-planner statistics over the successful trials, in first-seen order.
/// A planner whose trials all failed gets n = 0 and NaN metrics.
/// Throws InvalidInput if there are no records.
std::vector<PlannerStats> aggregate(std::span<const TrialRecord> records);

/// Six significant digits; infinities as `inf`.
std::string format_number(double v);

/// Writes trials.csv, stats.csv and trace_<planner>_<trial>.csv into `dir`
/// (created if missing). Failures are listed in failures.txt when present.
void export_csv(std::span<const TrialRecord> records, std::span<const PlannerStats> stats,
                const std::filesystem::path& dir);

/// Parses trials.csv plus the matching trace files back into records.
std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& dir);

}  // namespace esirrt

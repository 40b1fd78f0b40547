#include "esirrt/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

#include "esirrt/error.hpp"

namespace esirrt {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

TrialRecord run_one(const OccupancyGrid& grid, const BenchConfig& config, PlannerKind kind,
                    std::size_t trial) {
  TrialRecord rec;
  rec.planner = kind;
  rec.trial = trial;
  rec.seed = config.seed_base + trial;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    PlanResult res = plan(kind, grid, config.start, config.goal, config.iters, rec.seed, config.params);
    rec.initial_iteration = res.initial_iteration;
    rec.initial_cost = res.initial_cost;
    rec.final_cost = res.final_cost();
    rec.cost_trace = std::move(res.cost_trace);
    if (!res.solved()) {
      rec.failed = true;
      rec.diagnostics = "no solution within " + std::to_string(res.initial_iteration) + " iterations";
    }
    if (config.audit_trees) {
      const TreeAudit audit = audit_tree(res.tree, &grid);
      rec.audit_ok = audit.ok();
      if (!audit.ok()) rec.diagnostics += "tree audit failed: " + audit.detail;
    }
  } catch (const Error& e) {
    rec.failed = true;
    rec.initial_cost = std::numeric_limits<double>::infinity();
    rec.final_cost = rec.initial_cost;
    rec.diagnostics = e.what();
  }
  if (config.record_wall_time) {
    rec.wall_time_ms =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  }
  return rec;
}

std::ofstream open_for_write(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void check_written(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

std::string trace_file_name(PlannerKind kind, std::size_t trial) {
  return "trace_" + std::string(planner_name(kind)) + "_" + std::to_string(trial) + ".csv";
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::stringstream ss(line);
  std::string field;
  while (std::getline(ss, field, ',')) fields.push_back(field);
  return fields;
}

double parse_number(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return kNaN;
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw ParseError("trailing characters in number: " + s);
    return v;
  } catch (const std::logic_error&) {
    throw ParseError("not a number: " + s);
  }
}

}  // namespace

std::vector<TrialRecord> run_trials(const OccupancyGrid& grid, const BenchConfig& config) {
  if (config.trials < 1) throw InvalidInput("trial count must be at least 1");
  if (config.planners.empty()) throw InvalidInput("no planners selected");

  const std::size_t jobs = config.planners.size() * config.trials;
  std::vector<TrialRecord> records(jobs);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t job = next++; job < jobs; job = next++) {
      records[job] = run_one(grid, config, config.planners[job / config.trials], job % config.trials);
    }
  };
  unsigned n_threads = config.threads != 0 ? config.threads : std::thread::hardware_concurrency();
  n_threads = std::clamp<unsigned>(n_threads, 1, static_cast<unsigned>(std::min<std::size_t>(jobs, 64)));
  std::vector<std::jthread> pool;
  for (unsigned t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  pool.clear();
  return records;
}

MetricStats summarize(std::span<const double> values) {
  if (values.empty()) throw InvalidInput("cannot summarize an empty sequence");
  MetricStats s;
  s.min = values.front();
  s.max = values.front();
  double m2 = 0.0;
  for (double v : values) {
    ++s.n;
    const double delta = v - s.mean;
    s.mean += delta / static_cast<double>(s.n);
    m2 += delta * (v - s.mean);
    s.min = std::min(s.min, v);
    s.max = std::max(s.max, v);
  }
  s.std = s.n > 1 ? std::sqrt(std::max(0.0, m2 / static_cast<double>(s.n - 1))) : 0.0;
  // Keep min <= mean <= max under rounding.
  s.mean = std::clamp(s.mean, s.min, s.max);
  return s;
}

std::vector<PlannerStats> aggregate(std::span<const TrialRecord> records) {
  if (records.empty()) throw InvalidInput("no trial records to aggregate");
  std::vector<PlannerStats> out;
  for (const auto& r : records) {
    if (std::none_of(out.begin(), out.end(), [&](const PlannerStats& s) { return s.planner == r.planner; }))
      out.push_back(PlannerStats{.planner = r.planner});
  }
  const MetricStats empty{0, kNaN, kNaN, kNaN, kNaN};
  for (auto& stats : out) {
    std::vector<double> iters, init, fin;
    for (const auto& r : records) {
      if (r.planner != stats.planner) continue;
      ++stats.trials;
      if (r.failed) {
        ++stats.failures;
        continue;
      }
      iters.push_back(static_cast<double>(r.initial_iteration));
      init.push_back(r.initial_cost);
      fin.push_back(r.final_cost);
    }
    stats.initial_iteration = iters.empty() ? empty : summarize(iters);
    stats.initial_cost = init.empty() ? empty : summarize(init);
    stats.final_cost = fin.empty() ? empty : summarize(fin);
  }
  return out;
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

void export_csv(std::span<const TrialRecord> records, std::span<const PlannerStats> stats,
                const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

  const auto trials_path = dir / "trials.csv";
  auto trials = open_for_write(trials_path);
  trials << "planner,seed,trial,initial_iteration,initial_cost,final_cost,wall_time_ms\n";
  for (const auto& r : records) {
    trials << planner_name(r.planner) << ',' << r.seed << ',' << r.trial << ','
           << r.initial_iteration << ',' << format_number(r.initial_cost) << ','
           << format_number(r.final_cost) << ',' << format_number(r.wall_time_ms) << '\n';
  }
  check_written(trials, trials_path);

  for (const auto& r : records) {
    const auto path = dir / trace_file_name(r.planner, r.trial);
    auto trace = open_for_write(path);
    trace << "iteration,best_cost\n";
    for (std::size_t i = 0; i < r.cost_trace.size(); ++i)
      trace << (i + 1) << ',' << format_number(r.cost_trace[i]) << '\n';
    check_written(trace, path);
  }

  const auto stats_path = dir / "stats.csv";
  auto out = open_for_write(stats_path);
  out << "planner,metric,n,failures,mean,std,min,max\n";
  for (const auto& s : stats) {
    const std::pair<const char*, const MetricStats*> rows[] = {
        {"initial_iteration", &s.initial_iteration},
        {"initial_cost", &s.initial_cost},
        {"final_cost", &s.final_cost},
    };
    for (const auto& [name, m] : rows) {
      out << planner_name(s.planner) << ',' << name << ',' << m->n << ',' << s.failures << ','
          << format_number(m->mean) << ',' << format_number(m->std) << ','
          << format_number(m->min) << ',' << format_number(m->max) << '\n';
    }
  }
  check_written(out, stats_path);

  const bool any_failed = std::any_of(records.begin(), records.end(), [](const auto& r) {
    return r.failed || !r.audit_ok;
  });
  const auto fail_path = dir / "failures.txt";
  if (any_failed) {
    auto fail = open_for_write(fail_path);
    for (const auto& r : records) {
      if (r.failed || !r.audit_ok)
        fail << planner_name(r.planner) << " trial " << r.trial << ": " << r.diagnostics << '\n';
    }
    check_written(fail, fail_path);
  } else {
    std::filesystem::remove(fail_path, ec);
  }
}

std::vector<TrialRecord> read_trials_csv(const std::filesystem::path& dir) {
  const auto trials_path = dir / "trials.csv";
  std::ifstream in(trials_path);
  if (!in) throw IoError("cannot read " + trials_path.string());
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty trials.csv");

  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv_line(line);
    if (f.size() != 7) throw ParseError("trials.csv row has " + std::to_string(f.size()) + " fields");
    TrialRecord r;
    const auto kind = parse_planner(f[0]);
    if (!kind) throw ParseError("unknown planner " + f[0]);
    r.planner = *kind;
    r.seed = std::stoull(f[1]);
    r.trial = std::stoull(f[2]);
    r.initial_iteration = std::stoull(f[3]);
    r.initial_cost = parse_number(f[4]);
    r.final_cost = parse_number(f[5]);
    r.wall_time_ms = parse_number(f[6]);
    r.failed = !std::isfinite(r.final_cost);

    const auto trace_path = dir / trace_file_name(r.planner, r.trial);
    std::ifstream trace(trace_path);
    if (!trace) throw IoError("cannot read " + trace_path.string());
    std::string tline;
    std::getline(trace, tline);
    while (std::getline(trace, tline)) {
      if (tline.empty()) continue;
      const auto tf = split_csv_line(tline);
      if (tf.size() != 2) throw ParseError("malformed trace row in " + trace_path.string());
      r.cost_trace.push_back(parse_number(tf[1]));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace esirrt

#include "sfo/harness/experiment.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

namespace sfo::harness {

MeanStderr mean_stderr(std::vector<double> values) {
  MeanStderr out;
  if (values.empty()) return out;
  std::sort(values.begin(), values.end());
  if (values.front() == values.back()) {
    out.mean = values.front();
    return out;
  }
  double sum = 0.0;
  for (double v : values) sum += v;
  const double n = static_cast<double>(values.size());
  out.mean = sum / n;
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - out.mean) * (v - out.mean);
    out.se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
  }
  return out;
}

AggregateTrajectory aggregate(const std::vector<TrajectoryRecord>& records) {
  AggregateTrajectory out;
  out.replications = records.size();
  if (records.empty()) return out;
  const auto& grid = records.front().rows;
  for (const auto& r : records) {
    require(r.rows.size() == grid.size(), ErrorKind::dimension_mismatch,
            "replications recorded different numbers of rows");
    for (std::size_t k = 0; k < grid.size(); ++k)
      require(r.rows[k].t == grid[k].t, ErrorKind::dimension_mismatch,
              "replications recorded different t grids");
  }
  out.rows.reserve(grid.size());
  std::vector<double> dist(records.size()), gap(records.size());
  for (std::size_t k = 0; k < grid.size(); ++k) {
    for (std::size_t i = 0; i < records.size(); ++i) {
      dist[i] = records[i].rows[k].dist_sq;
      gap[i] = records[i].rows[k].f_gap;
    }
    AggregateRow row;
    row.t = grid[k].t;
    row.gamma = grid[k].gamma;
    const auto d = mean_stderr(dist);
    const auto g = mean_stderr(gap);
    row.mean_dist_sq = d.mean;
    row.stderr_dist_sq = d.se;
    row.mean_f_gap = g.mean;
    row.stderr_f_gap = g.se;
    out.rows.push_back(row);
  }
  return out;
}

RandomStream replication_stream(std::uint64_t base_seed, std::size_t i) {
  return RandomStream(base_seed).split(static_cast<std::uint64_t>(i));
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn, std::size_t threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

AggregateTrajectory run_replications(const ReplicationSetup& setup) {
  require(setup.problem && setup.schedule, ErrorKind::invalid_parameter,
          "replication setup needs a problem and a schedule");
  require(setup.replications >= 1, ErrorKind::invalid_parameter, "replications must be at least 1");
  std::vector<TrajectoryRecord> records(setup.replications);
  parallel_for(
      setup.replications,
      [&](std::size_t i) {
        records[i] = run(*setup.problem, setup.method, *setup.schedule, setup.x0, setup.iterations,
                         replication_stream(setup.base_seed, i), setup.options)
                         .record;
      },
      setup.threads);
  return aggregate(records);
}

AggregateTrajectory run_experiment(const ExperimentConfig& cfg, const PreparedExperiment& prep) {
  ReplicationSetup setup;
  setup.problem = &prep.problem;
  setup.method = cfg.method;
  setup.schedule = &prep.schedule;
  setup.x0 = prep.x0;
  setup.iterations = cfg.iterations;
  setup.replications = cfg.replications;
  setup.base_seed = cfg.base_seed;
  setup.options.stride = cfg.stride;
  setup.options.record_gap = cfg.record_gap;
  return run_replications(setup);
}

AggregateTrajectory run_experiment(const ExperimentConfig& cfg) {
  const PreparedExperiment prep = prepare(cfg);
  return run_experiment(cfg, prep);
}

RestartReplications run_restart_replications(const CompositeProblem& p, Method method,
                                             const RestartPlan& plan, const Vector& x0,
                                             std::size_t replications, std::uint64_t base_seed,
                                             std::size_t threads) {
  require(replications >= 1, ErrorKind::invalid_parameter, "replications must be at least 1");
  RestartReplications out;
  out.runs.resize(replications);
  parallel_for(
      replications,
      [&](std::size_t i) { out.runs[i] = rsfo_run(p, method, plan, x0, replication_stream(base_seed, i)); },
      threads);
  const double f_star = p.optimal_value();
  for (const auto& r : out.runs) out.final_gaps.push_back(p.full_objective(r.average_iterate) - f_star);
  return out;
}

}  // namespace sfo::harness

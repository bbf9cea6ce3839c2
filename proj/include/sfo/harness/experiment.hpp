#pragma once

#include "sfo/harness/config.hpp"
#include "sfo/solvers.hpp"

#include <functional>
#include <vector>

namespace sfo::harness {

struct AggregateRow {
  std::size_t t = 0;
  double gamma = 0.0;
  double mean_dist_sq = 0.0;
  double stderr_dist_sq = 0.0;
  double mean_f_gap = 0.0;
  double stderr_f_gap = 0.0;
};

struct AggregateTrajectory {
  std::size_t replications = 0;
  std::vector<AggregateRow> rows;
};

struct MeanStderr {
  double mean = 0.0;
  double se = 0.0;
};

/// Mean and standard error (sample sd / sqrt(R), zero for R = 1). Values are
/// summed in sorted order, so the result does not depend on their order.
MeanStderr mean_stderr(std::vector<double> values);

/// Row-wise aggregation; all records must share the recorded t grid.
AggregateTrajectory aggregate(const std::vector<TrajectoryRecord>& records);

/// Stream of replication i: RandomStream(base_seed).split(i).
RandomStream replication_stream(std::uint64_t base_seed, std::size_t i);

/// Runs fn(i) for i in [0, count) on up to `threads` workers (0 selects the
/// hardware concurrency). Each index is processed exactly once; results are
/// written by index, so scheduling does not affect them.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  std::size_t threads = 0);

struct ReplicationSetup {
  const CompositeProblem* problem = nullptr;
  Method method = Method::spg;
  const StepsizeSchedule* schedule = nullptr;
  Vector x0;
  std::size_t iterations = 0;
  std::size_t replications = 1;
  std::uint64_t base_seed = 1;
  RunOptions options;
  std::size_t threads = 0;
};

AggregateTrajectory run_replications(const ReplicationSetup& setup);

AggregateTrajectory run_experiment(const ExperimentConfig& cfg, const PreparedExperiment& prep);
AggregateTrajectory run_experiment(const ExperimentConfig& cfg);

struct RestartReplications {
  std::vector<RestartResult> runs;
  std::vector<double> final_gaps;
};

RestartReplications run_restart_replications(const CompositeProblem& p, Method method,
                                             const RestartPlan& plan, const Vector& x0,
                                             std::size_t replications, std::uint64_t base_seed,
                                             std::size_t threads = 0);

}  // namespace sfo::harness

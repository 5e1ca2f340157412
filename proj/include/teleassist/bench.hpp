#pragma once

#include <functional>
#include <ostream>
#include <string>
#include <vector>

#include "teleassist/grasp.hpp"
#include "teleassist/scene.hpp"

namespace teleassist {

struct BenchRecord {
  std::size_t candidates = 0;
  std::size_t scene_triangles = 0;
  int workers = 1;
  double mean_ms = 0.0;
  double p95_ms = 0.0;
};

struct BenchOptions {
  int warmups = 5;
  int repetitions = 50;
};

struct TimingStats {
  double mean_ms = 0.0;
  double p95_ms = 0.0;
};

/// Runs `fn` warmups + repetitions times and summarizes the timed runs.
TimingStats time_runs(const std::function<void()>& fn, const BenchOptions& options = {});

/// Nearest-rank percentile of the samples, p in (0, 100].
double percentile(std::vector<double> samples, double p);

/// Pattern with exactly `count` candidates, shaped like the default pattern
/// where the count allows it.
PatternSpec pattern_for_count(std::size_t count);

/// End-effector pose hovering above the first block (by id) and pointing down
/// at a spot just off its top centre.
Pose bench_pointing_pose(const SceneModel& scene);

/// One assistance query: raycast, anchor, candidate filtering and selection.
std::optional<Suggestion> assistance_query(const SceneModel& scene, const GripperProxy& proxy,
                                           const Pose& ee_pose, const CandidatePattern& pattern,
                                           int workers, double standoff = -0.03);

std::vector<BenchRecord> run_bench(const SceneDescription& scene,
                                   const std::vector<std::size_t>& candidates,
                                   const std::vector<int>& workers, const BenchOptions& options = {});

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records);
void write_bench_table(std::ostream& out, const std::vector<BenchRecord>& records);

}  // namespace teleassist

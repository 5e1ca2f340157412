#include "teleassist/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <stdexcept>

namespace teleassist {

double percentile(std::vector<double> samples, double p) {
  if (samples.empty()) throw std::invalid_argument("percentile: no samples");
  std::sort(samples.begin(), samples.end());
  const auto rank = static_cast<std::size_t>(std::ceil(p / 100.0 * static_cast<double>(samples.size())));
  return samples[std::clamp<std::size_t>(rank, 1, samples.size()) - 1];
}

TimingStats time_runs(const std::function<void()>& fn, const BenchOptions& options) {
  if (options.repetitions <= 0) throw std::invalid_argument("time_runs: need at least one repetition");
  for (int i = 0; i < options.warmups; ++i) fn();
  std::vector<double> ms;
  ms.reserve(static_cast<std::size_t>(options.repetitions));
  for (int i = 0; i < options.repetitions; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  TimingStats s;
  s.mean_ms = std::accumulate(ms.begin(), ms.end(), 0.0) / static_cast<double>(ms.size());
  s.p95_ms = percentile(ms, 95.0);
  return s;
}

PatternSpec pattern_for_count(std::size_t count) {
  if (count == 0) throw std::invalid_argument("pattern_for_count: count must be positive");
  PatternSpec spec;
  if (count == spec.count()) return spec;
  for (int roll : {15, 25, 5, 1}) {
    const std::size_t per_ring = static_cast<std::size_t>(spec.n_radial * spec.n_depth * roll);
    if (count % per_ring == 0) {
      spec.n_roll = roll;
      spec.n_ring = static_cast<int>(count / per_ring);
      return spec;
    }
  }
  spec.n_radial = 1;
  spec.n_depth = 1;
  spec.n_roll = 1;
  spec.n_ring = static_cast<int>(count);
  return spec;
}

Pose bench_pointing_pose(const SceneModel& scene) {
  const auto& blocks = scene.description().blocks;
  if (blocks.empty()) throw std::invalid_argument("bench scene needs at least one block");
  const BlockSpec* first = &blocks.front();
  for (const BlockSpec& b : blocks) {
    if (b.id < first->id) first = &b;
  }
  Pose pose;
  pose.p = first->pose.p + Vec3(0.004, 0.003, 0.2);
  pose.q = Quat(0.0, 1.0, 0.0, 0.0);
  return pose;
}

std::optional<Suggestion> assistance_query(const SceneModel& scene, const GripperProxy& proxy,
                                           const Pose& ee_pose, const CandidatePattern& pattern,
                                           int workers, double standoff) {
  const auto hit = raycast(scene, ee_pose.p, ee_pose.axis_z());
  if (!hit) return std::nullopt;
  const GraspAnchor anchor = grasp_anchor(ee_pose, *hit, standoff);
  GraspQuery query;
  query.workers = workers;
  return suggest_grasp(scene, proxy, anchor.pose, pattern, query);
}

std::vector<BenchRecord> run_bench(const SceneDescription& desc,
                                   const std::vector<std::size_t>& candidates,
                                   const std::vector<int>& workers, const BenchOptions& options) {
  const SceneModel scene = SceneModel::build(desc);
  const GripperProxy proxy = desc.gripper ? *desc.gripper : GripperProxy::panda_like();
  const Pose ee = bench_pointing_pose(scene);
  std::vector<BenchRecord> out;
  for (std::size_t n : candidates) {
    const CandidatePattern pattern = make_pattern(pattern_for_count(n));
    for (int w : workers) {
      if (w <= 0) throw std::invalid_argument("worker counts must be positive");
      const TimingStats t = time_runs([&] { (void)assistance_query(scene, proxy, ee, pattern, w); }, options);
      out.push_back(BenchRecord{pattern.size(), scene.mesh().size(), w, t.mean_ms, t.p95_ms});
    }
  }
  return out;
}

void write_bench_csv(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << "candidates,scene_triangles,workers,mean_ms,p95_ms\n";
  out << std::fixed << std::setprecision(4);
  for (const BenchRecord& r : records) {
    out << r.candidates << ',' << r.scene_triangles << ',' << r.workers << ',' << r.mean_ms << ','
        << r.p95_ms << '\n';
  }
}

void write_bench_table(std::ostream& out, const std::vector<BenchRecord>& records) {
  out << std::setw(11) << "candidates" << std::setw(10) << "triangles" << std::setw(9) << "workers"
      << std::setw(12) << "mean_ms" << std::setw(12) << "p95_ms" << '\n';
  out << std::fixed << std::setprecision(3);
  for (const BenchRecord& r : records) {
    out << std::setw(11) << r.candidates << std::setw(10) << r.scene_triangles << std::setw(9)
        << r.workers << std::setw(12) << r.mean_ms << std::setw(12) << r.p95_ms << '\n';
  }
}

}  // namespace teleassist

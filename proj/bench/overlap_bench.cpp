// Compares the serial reference overlap filter against the parallel kernel
// on a bundled scene, across candidate counts and worker counts.

#include <CLI11.hpp>

#include <iomanip>
#include <iostream>

#include "teleassist/bench.hpp"
#include "teleassist/io.hpp"

using namespace teleassist;

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel batch overlap benchmark"};
  std::string scene_path = std::string(TELEASSIST_DATA_DIR) + "/scenes/clutter_a.json";
  std::vector<std::size_t> counts{1000, 7125, 20000, 100000};
  std::vector<int> workers{1, 2, 8};
  BenchOptions options;
  app.add_option("--scene", scene_path, "Scene file");
  app.add_option("--candidates", counts, "Candidate counts")->delimiter(',');
  app.add_option("--workers", workers, "Worker counts for the parallel kernel")->delimiter(',');
  app.add_option("--warmups", options.warmups);
  app.add_option("--reps", options.repetitions);
  CLI11_PARSE(app, argc, argv);

  const SceneModel scene = SceneModel::build(load_scene(scene_path));
  const GripperProxy proxy = GripperProxy::panda_like();
  const Pose ee = bench_pointing_pose(scene);
  const auto hit = raycast(scene, ee.p, ee.axis_z());
  if (!hit) {
    std::cerr << "bench pose misses the scene\n";
    return 1;
  }
  const GraspAnchor anchor = grasp_anchor(ee, *hit, -0.03);

  std::cout << std::left << std::setw(12) << "candidates" << std::setw(12) << "kernel" << std::setw(9) << "workers"
            << std::setw(12) << "mean_ms" << std::setw(12) << "p95_ms" << "speedup\n";
  for (std::size_t n : counts) {
    const auto poses = make_pattern(pattern_for_count(n)).candidates(anchor.pose);
    OverlapMask reference;
    const TimingStats serial =
        time_runs([&] { reference = batch_overlaps_serial(scene, proxy, poses); }, options);
    std::cout << std::setw(12) << n << std::setw(12) << "serial" << std::setw(9) << 1 << std::setw(12)
              << serial.mean_ms << std::setw(12) << serial.p95_ms << "1.00\n";
    for (int w : workers) {
      OverlapMask mask;
      const TimingStats t = time_runs([&] { mask = batch_overlaps(scene, proxy, poses, kNoObject, w); }, options);
      if (mask != reference) {
        std::cerr << "parallel result differs from the serial reference at " << w << " workers\n";
        return 1;
      }
      std::cout << std::setw(12) << n << std::setw(12) << "parallel" << std::setw(9) << w << std::setw(12) << t.mean_ms
                << std::setw(12) << t.p95_ms << std::fixed << std::setprecision(2) << serial.mean_ms / t.mean_ms
                << std::defaultfloat << std::setprecision(6) << "\n";
    }
  }
  return 0;
}

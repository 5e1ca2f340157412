#pragma once

#include <optional>

#include "teleassist/grasp.hpp"
#include "teleassist/se3.hpp"

namespace teleassist {

struct SnapConfig {
  bool enabled = true;
  double epsilon = 0.06;
  double gamma = 0.03;
  bool grasp = true;  // snap grasp suggestions
  bool place = true;  // snap placement suggestions
};

struct ImplicitConfig {
  double exposure_margin = 0.05;
  double reset_timeout = 2.0;
};

struct SimConfig {
  double dt = 1.0 / 60.0;
  double tau = 0.1;  // low-pass time constant
  TwistFrame twist_frame = TwistFrame::World;
  Pose initial_ee{Vec3(0.0, 0.0, 0.3), Quat(0.0, 1.0, 0.0, 0.0)};  // pointing down
  double pre_pose_offset = 0.10;
  double engage_linear_speed = 0.25;   // m/s
  double engage_angular_speed = 1.5;   // rad/s
  double place_gap = 0.005;            // m
  double place_angle_deg = 5.0;
  double place_min_overlap = 0.5;      // fraction of the footprint
  // Finger sweep volume in the ee frame; object centroids inside it are grasped.
  Vec3 sweep_center{0.0, 0.0, -0.02};
  Vec3 sweep_half_extents{0.02, 0.035, 0.02};
};

struct EngineConfig {
  double beta = 0.05;
  TranslationTerm distance_term = TranslationTerm::AsPrinted;
  double standoff = -0.03;
  ReferenceAxis reference = ReferenceAxis::X;
  PatternSpec pattern;
  std::optional<PatternSpec> place_pattern;
  SnapConfig snap;
  ImplicitConfig implicit;
  SimConfig sim;
  int workers = 0;  // 0: OpenMP default

  /// Throws std::invalid_argument when a value is out of range.
  void validate() const;
};

}  // namespace teleassist

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "teleassist/config.hpp"
#include "teleassist/grasp.hpp"
#include "teleassist/implicit.hpp"
#include "teleassist/place.hpp"
#include "teleassist/scene.hpp"

namespace teleassist {

enum class Mode { Explicit, Implicit, None };
enum class GripperState { Open, Closed };
enum class EngagePhase { Idle, PrePose, Approach };

std::string_view to_string(Mode mode);
std::optional<Mode> parse_mode(std::string_view text);
std::string_view to_string(SuggestionKind kind);

struct HeldObject {
  std::string object_id;
  Pose grasp_offset;  // object pose in the ee frame
  Vec3 size = Vec3::Zero();
  SupportFacet facet;
};

struct Buttons {
  bool engage = false;
  bool gripper = false;  // true requests a closed gripper
  std::optional<Mode> mode;
};

struct StepInput {
  Twist twist;
  Buttons buttons;
};

enum class EventKind {
  PickSuccess,
  PickFail,
  PlaceSuccess,
  PlaceFail,
  Drop,
  EngageStart,
  EngageEnd,
  EngageRejected,
  SnapFired,
  SuggestionChanged,
};

std::string_view to_string(EventKind kind);

struct Event {
  double t = 0.0;
  EventKind kind = EventKind::SuggestionChanged;
  nlohmann::json payload = nlohmann::json::object();
};

struct SimState {
  std::uint64_t step = 0;
  double time = 0.0;
  Pose ee_pose;
  Pose goal_pose;     // filtered tracking target
  Pose command_pose;  // raw integrated operator command
  GripperState gripper = GripperState::Open;
  std::optional<HeldObject> held;
  Mode mode = Mode::Explicit;

  bool engaged = false;
  EngagePhase phase = EngagePhase::Idle;
  std::optional<Pose> engage_target;
  double engage_start_time = 0.0;

  std::optional<RayHit> target;
  std::optional<Suggestion> suggestion;
  std::optional<std::size_t> snap_index;
  std::vector<double> goal_scores;
  TrajectoryWindow window;

  // Button levels seen on the previous step, for edge detection.
  bool engage_button = false;
  bool gripper_button = false;
};

/// Deterministic kinematic teleoperation loop. One engine is one session with
/// a single writer; step() is the only mutator.
class Engine {
 public:
  Engine(SceneDescription scene, EngineConfig config);

  const SimState& state() const { return state_; }
  const SceneModel& scene() const { return model_; }
  const SceneDescription& description() const { return desc_; }
  const EngineConfig& config() const { return config_; }
  const GripperProxy& proxy() const { return proxy_; }

  /// Advances one fixed step. Throws std::invalid_argument on non-finite input.
  std::vector<Event> step(const StepInput& input);

  /// Back to the initial scene and state.
  void reset();
  void reset(SceneDescription scene);
  void set_workers(int workers) { config_.workers = workers; }
  /// Switches mode outside a step (session setup); recomputes the suggestion
  /// without emitting events.
  void set_mode(Mode mode);

  /// Grasp or placement snap set in use for the current holding state,
  /// already collision filtered.
  const std::vector<Pose>& active_snap_set();

 private:
  void rebuild_scene();
  void close_gripper(std::vector<Event>& events);
  void open_gripper(std::vector<Event>& events);
  void update_engagement(const StepInput& input, std::vector<Event>& events);
  void advance_motion(const Twist& twist);
  void update_suggestion(std::vector<Event>& events);
  std::optional<Suggestion> explicit_suggestion(std::optional<std::size_t>& snap_index);
  std::optional<Suggestion> implicit_suggestion();
  GripperProxy placement_proxy() const;
  ObjectIndex held_index() const;

  SceneDescription initial_desc_;
  SceneDescription desc_;
  EngineConfig config_;
  GripperProxy proxy_;
  CandidatePattern pattern_;
  std::optional<CandidatePattern> place_pattern_;
  SceneModel model_;
  SimState state_;

  std::optional<std::vector<Pose>> grasp_set_;
  std::optional<std::vector<Pose>> place_set_;
  std::optional<Suggestion> last_reported_;
};

/// Area of the overlap between the xy footprints of two boxes.
double footprint_overlap_area(const Vec3& size_a, const Pose& pose_a, const Vec3& size_b,
                              const Pose& pose_b);
double footprint_area(const Vec3& size, const Pose& pose);

}  // namespace teleassist

#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleassist/io.hpp"
#include "teleassist/sim.hpp"

namespace teleassist {

inline constexpr int kProtocolVersion = 1;
inline constexpr std::size_t kMaxMessageBytes = 64 * 1024;

/// WebSocket close codes used for protocol violations.
enum class CloseCode : std::uint16_t {
  Normal = 1000,
  ProtocolError = 1002,
  InvalidPayload = 1007,
  PolicyViolation = 1008,
  MessageTooBig = 1009,
  TryAgainLater = 1013,
};

struct CloseRequest {
  CloseCode code = CloseCode::Normal;
  std::string reason;
};

/// One live session: the engine plus the client-facing message semantics.
/// Not thread-safe; the server serializes access.
class Session {
 public:
  /// `scene_dir` resolves load_scene requests by name (<dir>/<name>.json).
  Session(SceneDescription scene, EngineConfig config, std::filesystem::path scene_dir = {});

  /// Applies one client message. Inputs and mode changes take effect at the
  /// next step; load_scene and reset apply immediately. Returns a close
  /// request on a protocol violation.
  std::optional<CloseRequest> handle(const std::string& text);

  struct StepOutput {
    std::vector<Event> events;
    std::optional<nlohmann::json> state;  // every second step (30 Hz at 60 Hz)
  };
  /// Advances the engine one step with the latest input.
  StepOutput step();

  /// State message for the current engine state with the given events.
  nlohmann::json state_message(const std::vector<Event>& events) const;

  const Engine& engine() const { return engine_; }
  /// Input applied so far, as a replayable trace covering every executed step
  /// since the last scene load or reset.
  std::vector<TraceRecord> recorded_trace() const;

 private:
  std::optional<CloseRequest> handle_json(const nlohmann::json& msg);

  Engine engine_;
  std::filesystem::path scene_dir_;
  StepInput held_;
  std::vector<TraceRecord> record_;
  std::uint64_t steps_since_reset_ = 0;
  std::uint64_t seq_ = 0;
  std::vector<Event> unsent_events_;
};

}  // namespace teleassist

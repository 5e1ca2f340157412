#pragma once

#include <filesystem>
#include <istream>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleassist/config.hpp"
#include "teleassist/scene.hpp"
#include "teleassist/sim.hpp"

namespace teleassist {

inline constexpr int kFormatVersion = 1;
inline constexpr const char* kSceneFormat = "teleassist-scene";
inline constexpr const char* kConfigFormat = "teleassist-config";
inline constexpr const char* kTraceFormat = "teleassist-trace";
inline constexpr const char* kEventFormat = "teleassist-events";

/// Malformed input. `line` is 1-based, 0 when not applicable.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& message);
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

nlohmann::json pose_to_json(const Pose& pose);
Pose pose_from_json(const nlohmann::json& j);
nlohmann::json vec3_to_json(const Vec3& v);
Vec3 vec3_from_json(const nlohmann::json& j);

SceneDescription scene_from_json(const nlohmann::json& j);
nlohmann::json scene_to_json(const SceneDescription& scene);
SceneDescription load_scene(const std::filesystem::path& path);

/// Missing keys keep their defaults; unknown keys are rejected.
EngineConfig config_from_json(const nlohmann::json& j);
nlohmann::json config_to_json(const EngineConfig& config);
EngineConfig load_config(const std::filesystem::path& path);

struct TraceRecord {
  double t = 0.0;
  Twist twist;
  Buttons buttons;
};

/// Header line then one record per line; blank lines are skipped. Times must
/// not decrease.
std::vector<TraceRecord> parse_trace(std::istream& in, const std::string& source = "trace");
std::vector<TraceRecord> load_trace(const std::filesystem::path& path);
std::string format_trace(const std::vector<TraceRecord>& records);
nlohmann::json trace_record_to_json(const TraceRecord& r);
TraceRecord trace_record_from_json(const nlohmann::json& j);
Buttons buttons_from_json(const nlohmann::json& j);
Twist twist_from_json(const nlohmann::json& j);

nlohmann::json event_to_json(const Event& e);
/// Header line and one compact JSON object per event.
std::string format_event_log(const std::vector<Event>& events);

}  // namespace teleassist

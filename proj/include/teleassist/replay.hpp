#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teleassist/config.hpp"
#include "teleassist/io.hpp"
#include "teleassist/sim.hpp"

namespace teleassist {

struct ReplaySummary {
  std::size_t steps = 0;
  double duration = 0.0;
  int pick_success = 0;
  int pick_fail = 0;
  int place_success = 0;
  int place_fail = 0;
  int drops = 0;
  int suggestion_changes = 0;
  int snaps = 0;
  int engage_rejected = 0;
  std::vector<double> engage_durations;

  int failures() const { return pick_fail + place_fail + drops; }
  nlohmann::json to_json() const;
};

struct ReplayResult {
  std::vector<Event> events;
  ReplaySummary summary;
  SimState final_state;
  SceneDescription final_scene;
};

/// Number of fixed steps a trace covers: every step time up to the last record.
std::size_t trace_steps(const std::vector<TraceRecord>& trace, double dt);

/// Runs the trace through a fresh engine. Each step uses the latest record at
/// or before its start time (sample and hold). A mode override pins the mode
/// for the whole run and ignores mode changes in the trace.
ReplayResult replay(const SceneDescription& scene, const EngineConfig& config,
                    const std::vector<TraceRecord>& trace,
                    std::optional<Mode> mode_override = std::nullopt);

ReplaySummary summarize(const std::vector<Event>& events);

}  // namespace teleassist

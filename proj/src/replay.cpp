#include "teleassist/replay.hpp"

#include <cmath>

namespace teleassist {

namespace {
// Fixed-step times accumulate rounding; records this close count as due.
constexpr double kTimeSlack = 1e-9;
}  // namespace

nlohmann::json ReplaySummary::to_json() const {
  return {{"steps", steps},
          {"duration", duration},
          {"pick_success", pick_success},
          {"pick_fail", pick_fail},
          {"place_success", place_success},
          {"place_fail", place_fail},
          {"drop", drops},
          {"failures", failures()},
          {"suggestion_changes", suggestion_changes},
          {"snaps", snaps},
          {"engage_rejected", engage_rejected},
          {"engagements", engage_durations.size()},
          {"engage_durations", engage_durations}};
}

ReplaySummary summarize(const std::vector<Event>& events) {
  ReplaySummary s;
  for (const Event& e : events) {
    switch (e.kind) {
      case EventKind::PickSuccess: ++s.pick_success; break;
      case EventKind::PickFail: ++s.pick_fail; break;
      case EventKind::PlaceSuccess: ++s.place_success; break;
      case EventKind::PlaceFail: ++s.place_fail; break;
      case EventKind::Drop: ++s.drops; break;
      case EventKind::SuggestionChanged: ++s.suggestion_changes; break;
      case EventKind::SnapFired: ++s.snaps; break;
      case EventKind::EngageRejected: ++s.engage_rejected; break;
      case EventKind::EngageEnd: s.engage_durations.push_back(e.payload.at("duration").get<double>()); break;
      case EventKind::EngageStart: break;
    }
  }
  return s;
}

std::size_t trace_steps(const std::vector<TraceRecord>& trace, double dt) {
  if (trace.empty()) return 0;
  return static_cast<std::size_t>(std::floor((trace.back().t + kTimeSlack) / dt)) + 1;
}

ReplayResult replay(const SceneDescription& scene, const EngineConfig& config,
                    const std::vector<TraceRecord>& trace, std::optional<Mode> mode_override) {
  Engine engine(scene, config);
  if (mode_override) engine.set_mode(*mode_override);
  ReplayResult result;
  const double dt = config.sim.dt;
  const std::size_t steps = trace_steps(trace, dt);
  std::size_t next = 0;
  StepInput input;
  for (std::size_t k = 0; k < steps; ++k) {
    const double t = static_cast<double>(k) * dt;
    while (next < trace.size() && trace[next].t <= t + kTimeSlack) {
      input.twist = trace[next].twist;
      input.buttons = trace[next].buttons;
      ++next;
    }
    StepInput applied = input;
    applied.buttons.mode = mode_override ? mode_override : input.buttons.mode;
    auto events = engine.step(applied);
    result.events.insert(result.events.end(), std::make_move_iterator(events.begin()),
                         std::make_move_iterator(events.end()));
  }
  result.summary = summarize(result.events);
  result.summary.steps = steps;
  result.summary.duration = static_cast<double>(steps) * dt;
  result.final_state = engine.state();
  result.final_scene = engine.description();
  return result;
}

}  // namespace teleassist

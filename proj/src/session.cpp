#include "teleassist/session.hpp"

#include <algorithm>
#include <cctype>

namespace teleassist {

using nlohmann::json;

namespace {

CloseRequest violation(CloseCode code, std::string reason) { return CloseRequest{code, std::move(reason)}; }

bool valid_scene_name(const std::string& name) {
  return !name.empty() && name.size() <= 64 &&
         std::all_of(name.begin(), name.end(),
                     [](unsigned char c) { return std::isalnum(c) || c == '_' || c == '-'; });
}

bool same_input(const StepInput& a, const StepInput& b) {
  return a.twist.linear == b.twist.linear && a.twist.angular == b.twist.angular &&
         a.buttons.engage == b.buttons.engage && a.buttons.gripper == b.buttons.gripper &&
         a.buttons.mode == b.buttons.mode;
}

}  // namespace

Session::Session(SceneDescription scene, EngineConfig config, std::filesystem::path scene_dir)
    : engine_(std::move(scene), std::move(config)), scene_dir_(std::move(scene_dir)) {}

std::optional<CloseRequest> Session::handle(const std::string& text) {
  if (text.size() > kMaxMessageBytes) return violation(CloseCode::MessageTooBig, "message exceeds 64 KiB");
  json msg;
  try {
    msg = json::parse(text);
  } catch (const json::parse_error&) {
    return violation(CloseCode::InvalidPayload, "message is not valid JSON");
  }
  try {
    return handle_json(msg);
  } catch (const std::exception& e) {
    return violation(CloseCode::InvalidPayload, e.what());
  }
}

std::optional<CloseRequest> Session::handle_json(const json& msg) {
  if (!msg.is_object()) return violation(CloseCode::ProtocolError, "message must be an object");
  if (!msg.contains("v") || !msg["v"].is_number_integer() || msg["v"].get<int>() != kProtocolVersion) {
    return violation(CloseCode::ProtocolError, "missing or unsupported protocol version");
  }
  if (!msg.contains("type") || !msg["type"].is_string()) {
    return violation(CloseCode::ProtocolError, "missing message type");
  }
  const std::string type = msg["type"].get<std::string>();
  if (type == "input") {
    StepInput next;
    next.twist = twist_from_json(msg.at("twist"));
    next.buttons = buttons_from_json(msg.contains("buttons") ? msg["buttons"] : json());
    // Mode is a session setting, not a momentary button.
    next.buttons.mode = next.buttons.mode ? next.buttons.mode : held_.buttons.mode;
    held_ = next;
    return std::nullopt;
  }
  if (type == "set_mode") {
    const auto mode = parse_mode(msg.at("mode").get<std::string>());
    if (!mode) return violation(CloseCode::InvalidPayload, "unknown mode");
    held_.buttons.mode = mode;
    return std::nullopt;
  }
  if (type == "load_scene") {
    SceneDescription scene;
    if (msg.contains("scene")) {
      scene = scene_from_json(msg["scene"]);
    } else {
      const std::string name = msg.at("name").get<std::string>();
      if (!valid_scene_name(name)) return violation(CloseCode::InvalidPayload, "invalid scene name");
      const auto path = scene_dir_ / (name + ".json");
      if (scene_dir_.empty() || !std::filesystem::exists(path)) {
        return violation(CloseCode::InvalidPayload, "unknown scene \"" + name + "\"");
      }
      scene = load_scene(path);
    }
    engine_.reset(std::move(scene));
    held_ = StepInput{};
    record_.clear();
    steps_since_reset_ = 0;
    unsent_events_.clear();
    return std::nullopt;
  }
  if (type == "reset") {
    engine_.reset();
    held_ = StepInput{};
    record_.clear();
    steps_since_reset_ = 0;
    unsent_events_.clear();
    return std::nullopt;
  }
  return violation(CloseCode::ProtocolError, "unknown message type \"" + type + "\"");
}

Session::StepOutput Session::step() {
  const double t = engine_.state().time;
  if (record_.empty() || !same_input(StepInput{record_.back().twist, record_.back().buttons}, held_)) {
    record_.push_back(TraceRecord{t, held_.twist, held_.buttons});
  }
  StepOutput out;
  out.events = engine_.step(held_);
  ++steps_since_reset_;
  unsent_events_.insert(unsent_events_.end(), out.events.begin(), out.events.end());
  if (engine_.state().step % 2 == 0) {
    out.state = state_message(unsent_events_);
    unsent_events_.clear();
  }
  return out;
}

std::vector<TraceRecord> Session::recorded_trace() const {
  std::vector<TraceRecord> out = record_;
  if (steps_since_reset_ > 0) {
    // Pin the final step so a replay covers exactly the executed steps.
    TraceRecord last = out.back();
    last.t = static_cast<double>(steps_since_reset_ - 1) * engine_.config().sim.dt;
    if (last.t > out.back().t) out.push_back(last);
  }
  return out;
}

json Session::state_message(const std::vector<Event>& events) const {
  const SimState& s = engine_.state();
  json msg{{"v", kProtocolVersion},
           {"type", "state"},
           {"step", s.step},
           {"t", s.time},
           {"ee_pose", pose_to_json(s.ee_pose)},
           {"goal_pose", pose_to_json(s.goal_pose)},
           {"mode", to_string(s.mode)},
           {"engaged", s.engaged},
           {"gripper", s.gripper == GripperState::Open ? "open" : "closed"}};
  msg["held"] = s.held ? json(s.held->object_id) : json(nullptr);
  if (s.suggestion) {
    msg["suggestion"] = {{"pose", pose_to_json(s.suggestion->pose)},
                         {"kind", to_string(s.suggestion->kind)},
                         {"feasible", s.suggestion->feasible}};
  } else {
    msg["suggestion"] = nullptr;
  }
  if (s.target) {
    msg["target"] = {{"point", vec3_to_json(s.target->point)},
                     {"normal", vec3_to_json(s.target->normal)},
                     {"object", s.target->object_id ? json(*s.target->object_id) : json(nullptr)}};
  } else {
    msg["target"] = nullptr;
  }
  if (s.mode == Mode::Implicit) msg["goal_scores"] = s.goal_scores;
  json objects = json::array();
  for (const BlockSpec& b : engine_.description().blocks) {
    objects.push_back({{"id", b.id},
                       {"pose", pose_to_json(b.pose)},
                       {"size", vec3_to_json(b.size)},
                       {"color", b.color}});
  }
  msg["objects"] = std::move(objects);
  json evs = json::array();
  for (const Event& e : events) evs.push_back(event_to_json(e));
  msg["events"] = std::move(evs);
  return msg;
}

}  // namespace teleassist

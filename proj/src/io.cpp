#include "teleassist/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace teleassist {

using nlohmann::json;

ParseError::ParseError(const std::string& source, std::size_t line, const std::string& message)
    : std::runtime_error(line > 0 ? source + ":" + std::to_string(line) + ": " + message
                                  : source + ": " + message),
      line_(line) {}

namespace {

std::vector<double> numbers(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) {
    throw std::invalid_argument(std::string(what) + " must be an array of " + std::to_string(n) +
                                " numbers");
  }
  std::vector<double> out;
  for (const json& x : j) {
    if (!x.is_number()) throw std::invalid_argument(std::string(what) + " must contain numbers");
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw std::invalid_argument(std::string(what) + " must be finite");
    out.push_back(v);
  }
  return out;
}

void check_header(const json& j, const char* format) {
  if (!j.is_object()) throw std::invalid_argument("expected a JSON object");
  if (!j.contains("format") || j["format"] != format) {
    throw std::invalid_argument(std::string("missing or wrong \"format\" (expected \"") + format +
                                "\")");
  }
  if (!j.contains("version") || !j["version"].is_number_integer()) {
    throw std::invalid_argument("missing integer \"version\"");
  }
  if (j["version"].get<int>() != kFormatVersion) {
    throw std::invalid_argument("unsupported version " + j["version"].dump());
  }
}

void reject_unknown(const json& j, std::initializer_list<const char*> known, const std::string& where) {
  const std::set<std::string> allowed(known.begin(), known.end());
  for (const auto& [key, value] : j.items()) {
    if (!allowed.count(key)) throw std::invalid_argument("unknown key \"" + key + "\" in " + where);
  }
}

template <class T>
void read(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

// Line of a byte offset, for JSON parse errors.
std::size_t line_of(const std::string& text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<long>(byte), '\n'));
}

json parse_document(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(path.string(), line_of(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
}

PatternSpec pattern_from_json(const json& j) {
  reject_unknown(j, {"n_radial", "n_ring", "n_depth", "n_roll", "diameter", "thickness"}, "pattern");
  PatternSpec p;
  read(j, "n_radial", p.n_radial);
  read(j, "n_ring", p.n_ring);
  read(j, "n_depth", p.n_depth);
  read(j, "n_roll", p.n_roll);
  read(j, "diameter", p.diameter);
  read(j, "thickness", p.thickness);
  return p;
}

json pattern_to_json(const PatternSpec& p) {
  return {{"n_radial", p.n_radial}, {"n_ring", p.n_ring},     {"n_depth", p.n_depth},
          {"n_roll", p.n_roll},     {"diameter", p.diameter}, {"thickness", p.thickness}};
}

}  // namespace

json vec3_to_json(const Vec3& v) { return json::array({v.x(), v.y(), v.z()}); }

Vec3 vec3_from_json(const json& j) {
  const auto v = numbers(j, 3, "vector");
  return Vec3(v[0], v[1], v[2]);
}

json pose_to_json(const Pose& pose) {
  const auto a = to_array7(pose);
  return json(std::vector<double>(a.begin(), a.end()));
}

Pose pose_from_json(const json& j) { return from_array7(numbers(j, 7, "pose")); }

// ---------------------------------------------------------------------------
// Scene

SceneDescription scene_from_json(const json& j) {
  check_header(j, kSceneFormat);
  SceneDescription scene;
  if (j.contains("table")) {
    const json& t = j["table"];
    if (t.contains("size")) scene.table.size = vec3_from_json(t["size"]);
    if (t.contains("pose")) scene.table.pose = pose_from_json(t["pose"]);
  }
  if (j.contains("blocks")) {
    for (const json& b : j.at("blocks")) {
      BlockSpec block;
      block.id = b.at("id").get<std::string>();
      if (b.contains("size")) block.size = vec3_from_json(b["size"]);
      block.pose = pose_from_json(b.at("pose"));
      read(b, "color", block.color);
      scene.blocks.push_back(std::move(block));
    }
  }
  if (j.contains("snap_hints")) {
    for (const json& p : j["snap_hints"]) scene.snap_hints.push_back(pose_from_json(p));
  }
  if (j.contains("gripper")) {
    GripperProxy proxy;
    for (const json& b : j["gripper"].at("boxes")) {
      proxy.boxes.push_back(OrientedBox{vec3_from_json(b.at("half_extents")), pose_from_json(b.at("offset"))});
    }
    scene.gripper = std::move(proxy);
  }
  read(j, "margin", scene.margin);
  scene.validate();
  if (scene.gripper) scene.gripper->validate();
  return scene;
}

json scene_to_json(const SceneDescription& scene) {
  json j{{"format", kSceneFormat}, {"version", kFormatVersion}};
  j["table"] = {{"size", vec3_to_json(scene.table.size)}, {"pose", pose_to_json(scene.table.pose)}};
  j["blocks"] = json::array();
  for (const BlockSpec& b : scene.blocks) {
    j["blocks"].push_back({{"id", b.id},
                           {"size", vec3_to_json(b.size)},
                           {"pose", pose_to_json(b.pose)},
                           {"color", b.color}});
  }
  if (!scene.snap_hints.empty()) {
    j["snap_hints"] = json::array();
    for (const Pose& p : scene.snap_hints) j["snap_hints"].push_back(pose_to_json(p));
  }
  if (scene.gripper) {
    json boxes = json::array();
    for (const OrientedBox& b : scene.gripper->boxes) {
      boxes.push_back({{"half_extents", vec3_to_json(b.half_extents)}, {"offset", pose_to_json(b.offset)}});
    }
    j["gripper"] = {{"boxes", boxes}};
  }
  j["margin"] = scene.margin;
  return j;
}

SceneDescription load_scene(const std::filesystem::path& path) {
  const json j = parse_document(path);
  try {
    return scene_from_json(j);
  } catch (const ParseError&) {
    throw;
  } catch (const std::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

// ---------------------------------------------------------------------------
// Config

EngineConfig config_from_json(const json& j) {
  check_header(j, kConfigFormat);
  reject_unknown(j,
                 {"format", "version", "beta", "distance_term", "standoff", "reference", "workers",
                  "pattern", "place_pattern", "snap", "implicit", "sim"},
                 "config");
  EngineConfig c;
  read(j, "beta", c.beta);
  if (j.contains("distance_term")) {
    const auto s = j["distance_term"].get<std::string>();
    if (s == "as_printed") {
      c.distance_term = TranslationTerm::AsPrinted;
    } else if (s == "squared") {
      c.distance_term = TranslationTerm::Squared;
    } else {
      throw std::invalid_argument("distance_term must be \"as_printed\" or \"squared\"");
    }
  }
  read(j, "standoff", c.standoff);
  if (j.contains("reference")) {
    const auto s = j["reference"].get<std::string>();
    if (s != "x" && s != "y") throw std::invalid_argument("reference must be \"x\" or \"y\"");
    c.reference = s == "x" ? ReferenceAxis::X : ReferenceAxis::Y;
  }
  read(j, "workers", c.workers);
  if (j.contains("pattern")) c.pattern = pattern_from_json(j["pattern"]);
  if (j.contains("place_pattern") && !j["place_pattern"].is_null()) {
    c.place_pattern = pattern_from_json(j["place_pattern"]);
  }
  if (j.contains("snap")) {
    const json& s = j["snap"];
    reject_unknown(s, {"enabled", "epsilon", "gamma", "grasp", "place"}, "snap");
    read(s, "enabled", c.snap.enabled);
    read(s, "epsilon", c.snap.epsilon);
    read(s, "gamma", c.snap.gamma);
    read(s, "grasp", c.snap.grasp);
    read(s, "place", c.snap.place);
  }
  if (j.contains("implicit")) {
    const json& s = j["implicit"];
    reject_unknown(s, {"exposure_margin", "reset_timeout"}, "implicit");
    read(s, "exposure_margin", c.implicit.exposure_margin);
    read(s, "reset_timeout", c.implicit.reset_timeout);
  }
  if (j.contains("sim")) {
    const json& s = j["sim"];
    reject_unknown(s,
                   {"dt", "tau", "twist_frame", "initial_ee", "pre_pose_offset", "engage_linear_speed",
                    "engage_angular_speed", "place_gap", "place_angle_deg", "place_min_overlap",
                    "sweep_center", "sweep_half_extents"},
                   "sim");
    read(s, "dt", c.sim.dt);
    read(s, "tau", c.sim.tau);
    if (s.contains("twist_frame")) {
      const auto f = s["twist_frame"].get<std::string>();
      if (f != "world" && f != "body") throw std::invalid_argument("twist_frame must be \"world\" or \"body\"");
      c.sim.twist_frame = f == "world" ? TwistFrame::World : TwistFrame::Body;
    }
    if (s.contains("initial_ee")) c.sim.initial_ee = pose_from_json(s["initial_ee"]);
    read(s, "pre_pose_offset", c.sim.pre_pose_offset);
    read(s, "engage_linear_speed", c.sim.engage_linear_speed);
    read(s, "engage_angular_speed", c.sim.engage_angular_speed);
    read(s, "place_gap", c.sim.place_gap);
    read(s, "place_angle_deg", c.sim.place_angle_deg);
    read(s, "place_min_overlap", c.sim.place_min_overlap);
    if (s.contains("sweep_center")) c.sim.sweep_center = vec3_from_json(s["sweep_center"]);
    if (s.contains("sweep_half_extents")) c.sim.sweep_half_extents = vec3_from_json(s["sweep_half_extents"]);
  }
  c.validate();
  return c;
}

json config_to_json(const EngineConfig& c) {
  json j{{"format", kConfigFormat},
         {"version", kFormatVersion},
         {"beta", c.beta},
         {"distance_term", c.distance_term == TranslationTerm::AsPrinted ? "as_printed" : "squared"},
         {"standoff", c.standoff},
         {"reference", c.reference == ReferenceAxis::X ? "x" : "y"},
         {"workers", c.workers},
         {"pattern", pattern_to_json(c.pattern)}};
  j["place_pattern"] = c.place_pattern ? pattern_to_json(*c.place_pattern) : json(nullptr);
  j["snap"] = {{"enabled", c.snap.enabled},
               {"epsilon", c.snap.epsilon},
               {"gamma", c.snap.gamma},
               {"grasp", c.snap.grasp},
               {"place", c.snap.place}};
  j["implicit"] = {{"exposure_margin", c.implicit.exposure_margin},
                   {"reset_timeout", c.implicit.reset_timeout}};
  j["sim"] = {{"dt", c.sim.dt},
              {"tau", c.sim.tau},
              {"twist_frame", c.sim.twist_frame == TwistFrame::World ? "world" : "body"},
              {"initial_ee", pose_to_json(c.sim.initial_ee)},
              {"pre_pose_offset", c.sim.pre_pose_offset},
              {"engage_linear_speed", c.sim.engage_linear_speed},
              {"engage_angular_speed", c.sim.engage_angular_speed},
              {"place_gap", c.sim.place_gap},
              {"place_angle_deg", c.sim.place_angle_deg},
              {"place_min_overlap", c.sim.place_min_overlap},
              {"sweep_center", vec3_to_json(c.sim.sweep_center)},
              {"sweep_half_extents", vec3_to_json(c.sim.sweep_half_extents)}};
  return j;
}

EngineConfig load_config(const std::filesystem::path& path) {
  const json j = parse_document(path);
  try {
    return config_from_json(j);
  } catch (const std::exception& e) {
    throw ParseError(path.string(), 0, e.what());
  }
}

// ---------------------------------------------------------------------------
// Trace

Twist twist_from_json(const json& j) {
  const auto v = numbers(j, 6, "twist");
  Twist t;
  t.linear = Vec3(v[0], v[1], v[2]);
  t.angular = Vec3(v[3], v[4], v[5]);
  return t;
}

Buttons buttons_from_json(const json& j) {
  Buttons b;
  if (j.is_null()) return b;
  if (!j.is_object()) throw std::invalid_argument("buttons must be an object");
  if (j.contains("engage")) b.engage = j["engage"].get<bool>();
  if (j.contains("gripper")) b.gripper = j["gripper"].get<bool>();
  if (j.contains("mode") && !j["mode"].is_null()) {
    const auto text = j["mode"].get<std::string>();
    b.mode = parse_mode(text);
    if (!b.mode) throw std::invalid_argument("unknown mode \"" + text + "\"");
  }
  return b;
}

TraceRecord trace_record_from_json(const json& j) {
  if (!j.is_object()) throw std::invalid_argument("record must be an object");
  TraceRecord r;
  if (!j.contains("t") || !j["t"].is_number()) throw std::invalid_argument("record needs numeric \"t\"");
  r.t = j["t"].get<double>();
  if (!std::isfinite(r.t)) throw std::invalid_argument("\"t\" must be finite");
  r.twist = twist_from_json(j.at("twist"));
  if (j.contains("buttons")) r.buttons = buttons_from_json(j["buttons"]);
  return r;
}

json trace_record_to_json(const TraceRecord& r) {
  json buttons{{"engage", r.buttons.engage}, {"gripper", r.buttons.gripper}};
  if (r.buttons.mode) buttons["mode"] = to_string(*r.buttons.mode);
  return {{"t", r.t},
          {"twist", {r.twist.linear.x(), r.twist.linear.y(), r.twist.linear.z(), r.twist.angular.x(),
                     r.twist.angular.y(), r.twist.angular.z()}},
          {"buttons", buttons}};
}

std::vector<TraceRecord> parse_trace(std::istream& in, const std::string& source) {
  std::vector<TraceRecord> out;
  std::string line;
  std::size_t number = 0;
  bool header = false;
  while (std::getline(in, line)) {
    ++number;
    if (std::all_of(line.begin(), line.end(), [](unsigned char c) { return std::isspace(c); })) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(source, number, std::string("invalid JSON: ") + e.what());
    }
    try {
      if (!header) {
        check_header(j, kTraceFormat);
        header = true;
        continue;
      }
      TraceRecord r = trace_record_from_json(j);
      if (!out.empty() && r.t < out.back().t) throw std::invalid_argument("time went backwards");
      out.push_back(std::move(r));
    } catch (const std::exception& e) {
      throw ParseError(source, number, e.what());
    }
  }
  if (!header) throw ParseError(source, 0, "missing header line");
  return out;
}

std::vector<TraceRecord> load_trace(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path.string(), 0, "cannot open file");
  return parse_trace(in, path.string());
}

std::string format_trace(const std::vector<TraceRecord>& records) {
  std::string out = json{{"format", kTraceFormat}, {"version", kFormatVersion}}.dump() + "\n";
  for (const TraceRecord& r : records) out += trace_record_to_json(r).dump() + "\n";
  return out;
}

// ---------------------------------------------------------------------------
// Events

json event_to_json(const Event& e) {
  return {{"t", e.t}, {"kind", to_string(e.kind)}, {"payload", e.payload}};
}

std::string format_event_log(const std::vector<Event>& events) {
  std::string out = json{{"format", kEventFormat}, {"version", kFormatVersion}}.dump() + "\n";
  for (const Event& e : events) out += event_to_json(e).dump() + "\n";
  return out;
}

}  // namespace teleassist

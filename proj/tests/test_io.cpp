#include <doctest.h>

#include <sstream>

#include "support.hpp"
#include "teleassist/replay.hpp"

using namespace teleassist;
using namespace testsupport;
using nlohmann::json;

namespace {

std::size_t trace_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    parse_trace(in, "inline");
  } catch (const ParseError& e) {
    return e.line();
  }
  return static_cast<std::size_t>(-1);
}

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("trace errors report the offending line") {
    const std::string header = R"({"format": "teleassist-trace", "version": 1})";
    const std::string ok = R"({"t": 0.0, "twist": [0, 0, 0, 0, 0, 0]})";
    CHECK(trace_error_line(header + "\n" + ok + "\n{not json\n") == 3);
    CHECK(trace_error_line(header + "\n" + ok + "\n\n" + R"({"t": 1, "twist": [0, 0]})" + "\n") == 4);
    CHECK(trace_error_line(header + "\n" + R"({"t": 1, "twist": [0,0,0,0,0,0]})" + "\n" + ok + "\n") == 3);
    CHECK(trace_error_line(header + "\n" + R"({"t": 0, "twist": [0,0,0,0,0,0], "buttons": {"mode": "auto"}})") ==
          2);
    CHECK(trace_error_line(R"({"format": "teleassist-trace", "version": 2})") == 1);
    CHECK(trace_error_line(R"({"format": "something-else", "version": 1})") == 1);
    CHECK(trace_error_line("") == 0);
  }

  TEST_CASE("trace round trips through its text form") {
    const auto trace = load_trace(data_dir() / "traces" / "stack_one_block.jsonl");
    REQUIRE(trace.size() > 5);
    std::istringstream in(format_trace(trace));
    const auto again = parse_trace(in);
    REQUIRE(again.size() == trace.size());
    for (std::size_t i = 0; i < trace.size(); ++i) {
      CHECK(again[i].t == trace[i].t);
      CHECK(again[i].twist.linear == trace[i].twist.linear);
      CHECK(again[i].twist.angular == trace[i].twist.angular);
      CHECK(again[i].buttons.gripper == trace[i].buttons.gripper);
      CHECK(again[i].buttons.engage == trace[i].buttons.engage);
      CHECK(again[i].buttons.mode == trace[i].buttons.mode);
    }
  }

  TEST_CASE("scene documents round trip and reject bad headers") {
    for (const auto& name : clutter_names()) {
      const SceneDescription s = bundled_scene(name);
      const SceneDescription t = scene_from_json(scene_to_json(s));
      REQUIRE(t.blocks.size() == s.blocks.size());
      for (std::size_t i = 0; i < s.blocks.size(); ++i) {
        CHECK(t.blocks[i].id == s.blocks[i].id);
        CHECK((t.blocks[i].pose.p - s.blocks[i].pose.p).norm() == 0.0);
        CHECK(pose_distance(t.blocks[i].pose, s.blocks[i].pose, 1.0) < 1e-7);
      }
    }
    json doc = scene_to_json(bundled_scene("clutter_a"));
    doc["version"] = 7;
    CHECK_THROWS(scene_from_json(doc));
    doc["version"] = 1;
    doc["format"] = "teleassist-trace";
    CHECK_THROWS(scene_from_json(doc));
    doc = scene_to_json(bundled_scene("clutter_a"));
    doc["blocks"][0]["pose"] = json::array({0, 0, 0});
    CHECK_THROWS(scene_from_json(doc));
    CHECK_THROWS_AS(load_scene(data_dir() / "scenes" / "no_such_scene.json"), ParseError);
  }

  TEST_CASE("config round trips and rejects unknown or invalid keys") {
    EngineConfig c;
    c.beta = 0.2;
    c.distance_term = TranslationTerm::Squared;
    c.snap.epsilon = 0.1;
    c.place_pattern = PatternSpec{};
    c.place_pattern->n_roll = 4;
    const EngineConfig d = config_from_json(config_to_json(c));
    CHECK(d.beta == 0.2);
    CHECK(d.distance_term == TranslationTerm::Squared);
    CHECK(d.snap.epsilon == 0.1);
    REQUIRE(d.place_pattern);
    CHECK(d.place_pattern->n_roll == 4);
    CHECK(config_to_json(d) == config_to_json(c));

    json j = config_to_json(EngineConfig{});
    j["snap"]["epsilonn"] = 0.1;
    CHECK_THROWS(config_from_json(j));
    j = config_to_json(EngineConfig{});
    j["beta"] = -1.0;
    CHECK_THROWS(config_from_json(j));
    j = config_to_json(EngineConfig{});
    j["distance_term"] = "cubed";
    CHECK_THROWS(config_from_json(j));

    const EngineConfig bundled = load_config(data_dir() / "config" / "default.json");
    CHECK(config_to_json(bundled) == config_to_json(EngineConfig{}));
  }

  TEST_CASE("event log has a header and one object per line") {
    std::vector<Event> events{Event{0.5, EventKind::PickSuccess, {{"object", "a"}}},
                              Event{1.0, EventKind::Drop, {{"object", "a"}}}};
    std::istringstream in(format_event_log(events));
    std::string line;
    std::getline(in, line);
    CHECK(json::parse(line) == json({{"format", "teleassist-events"}, {"version", 1}}));
    std::getline(in, line);
    CHECK(json::parse(line)["kind"] == "pick_success");
    std::getline(in, line);
    CHECK(json::parse(line)["t"] == 1.0);
  }
}

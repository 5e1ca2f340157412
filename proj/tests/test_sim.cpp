#include <doctest.h>

#include "support.hpp"
#include "teleassist/replay.hpp"
#include "teleassist/sim.hpp"

using namespace teleassist;
using namespace testsupport;

namespace {

const Quat kDown(0.0, 1.0, 0.0, 0.0);

BlockSpec cube(const std::string& id, const Vec3& center, double yaw = 0.0) {
  BlockSpec b;
  b.id = id;
  b.pose.p = center;
  b.pose.q = Quat(Eigen::AngleAxisd(yaw, Vec3::UnitZ()));
  return b;
}

SceneDescription two_cubes() {
  SceneDescription s;
  s.blocks.push_back(cube("a", Vec3(0.2, 0.0, 0.02)));
  s.blocks.push_back(cube("b", Vec3(0.0, 0.0, 0.02)));
  return s;
}

// Unfiltered tracking (goal = command) so twists land exactly where scripted.
EngineConfig direct_config(const Pose& start) {
  EngineConfig c;
  c.sim.tau = 0.0;
  c.sim.initial_ee = start;
  return c;
}

StepInput hold(bool gripper = false, bool engage = false) {
  StepInput in;
  in.buttons.gripper = gripper;
  in.buttons.engage = engage;
  return in;
}

StepInput move(const Vec3& v, bool gripper) {
  StepInput in = hold(gripper);
  in.twist.linear = v;
  return in;
}

std::vector<Event> run(Engine& e, const StepInput& in, int steps) {
  std::vector<Event> all;
  for (int i = 0; i < steps; ++i) {
    auto ev = e.step(in);
    all.insert(all.end(), ev.begin(), ev.end());
  }
  return all;
}

int count(const std::vector<Event>& events, EventKind kind) {
  return static_cast<int>(std::count_if(events.begin(), events.end(), [&](const Event& e) { return e.kind == kind; }));
}

// Grasp "a" from its top, then move so the cube bottom sits `gap` above b's
// top, offset by `dx` along x. Returns events from opening the gripper.
std::vector<Event> pick_and_release(Engine& e, double gap, double dx) {
  // 60 steps of 1/60 s each move exactly the twist magnitude in metres.
  REQUIRE(count(run(e, hold(true), 1), EventKind::PickSuccess) == 1);
  run(e, move(Vec3(0, 0, 0.1), true), 60);
  run(e, move(Vec3(-0.2 + dx, 0, 0), true), 60);
  // ee z is now 0.11; cube bottom = ee z - 0.01.
  const double target_ee_z = 0.04 + gap + 0.01;
  run(e, move(Vec3(0, 0, target_ee_z - 0.11), true), 60);
  return run(e, hold(false), 1);
}

}  // namespace

TEST_SUITE("sim") {
  TEST_CASE("zero input leaves the state unchanged except time") {
    Engine e(bundled_scene("clutter_a"), EngineConfig{});
    const SimState before = e.state();
    const auto events = run(e, hold(), 30);
    CHECK(events.empty());
    CHECK(e.state().ee_pose.p == before.ee_pose.p);
    CHECK(e.state().ee_pose.q.coeffs() == before.ee_pose.q.coeffs());
    CHECK(e.state().step == 30);
    CHECK(e.state().time == doctest::Approx(0.5));
  }

  TEST_CASE("constant twist follows the closed-form lag response") {
    EngineConfig c;
    c.snap.enabled = false;
    Engine e(bundled_scene("clutter_a"), c);
    const Vec3 p0 = e.state().ee_pose.p;
    const double dt = c.sim.dt;
    const double a = lowpass_alpha(dt, c.sim.tau);
    const double s = 0.1 * dt;
    run(e, move(Vec3(0.1, 0, 0), false), 60);
    const double e_star = (1.0 - a) * s / a;
    const double expected = 60 * s - e_star * (1.0 - std::pow(1.0 - a, 60));
    CHECK(std::abs(e.state().ee_pose.p.x() - p0.x() - expected) < 1e-6);
    CHECK(std::abs(e.state().command_pose.p.x() - p0.x() - 0.1) < 1e-12);
  }

  TEST_CASE("non-finite input is rejected") {
    Engine e(bundled_scene("clutter_a"), EngineConfig{});
    StepInput in;
    in.twist.linear.x() = std::nan("");
    CHECK_THROWS_AS(e.step(in), std::invalid_argument);
    CHECK(e.state().step == 0);
  }

  TEST_CASE("closing centred over a lone cube picks it; closing in the air fails") {
    Engine good(two_cubes(), direct_config(Pose{Vec3(0.2, 0, 0.01), kDown}));
    auto ev = run(good, hold(true), 1);
    REQUIRE(count(ev, EventKind::PickSuccess) == 1);
    CHECK(good.state().held->object_id == "a");
    CHECK(good.state().gripper == GripperState::Closed);

    Engine air(two_cubes(), direct_config(Pose{Vec3(0.2, 0, 0.06), kDown}));
    ev = run(air, hold(true), 1);
    CHECK(count(ev, EventKind::PickFail) == 1);
    CHECK_FALSE(air.state().held);
  }

  TEST_CASE("held object follows the end effector rigidly") {
    Engine e(two_cubes(), direct_config(Pose{Vec3(0.2, 0, 0.01), kDown}));
    run(e, hold(true), 1);
    run(e, move(Vec3(0.05, 0.1, 0.2), true), 30);
    const BlockSpec* a = e.description().find_block("a");
    CHECK((a->pose.p - (e.state().ee_pose.p + Vec3(0, 0, 0.01))).norm() < 1e-12);
  }

  TEST_CASE("release 2 mm above a stack top with 80% overlap places and stacks") {
    Engine e(two_cubes(), direct_config(Pose{Vec3(0.2, 0, 0.01), kDown}));
    const auto ev = pick_and_release(e, 0.002, 0.008);  // 0.8 of the footprint overlaps
    REQUIRE(count(ev, EventKind::PlaceSuccess) == 1);
    CHECK(ev.front().payload["overlap"].get<double>() == doctest::Approx(0.8).epsilon(1e-6));
    const BlockSpec* a = e.description().find_block("a");
    CHECK(std::abs(a->pose.p.z() + 0.02 - 0.08) < 1e-9);  // top at two edges
    CHECK_FALSE(e.state().held);
  }

  TEST_CASE("footprint overlap matches the interval-product oracle") {
    std::mt19937_64 rng(41);
    std::uniform_real_distribution<double> u(-0.05, 0.05);
    std::uniform_real_distribution<double> sz(0.01, 0.08);
    for (int i = 0; i < 500; ++i) {
      const Vec3 sa(sz(rng), sz(rng), 0.04), sb(sz(rng), sz(rng), 0.04);
      const Pose pa{Vec3(u(rng), u(rng), 0.0), Quat::Identity()};
      const Pose pb{Vec3(u(rng), u(rng), 0.3), Quat::Identity()};
      auto overlap1d = [](double c1, double h1, double c2, double h2) {
        return std::max(0.0, std::min(c1 + h1, c2 + h2) - std::max(c1 - h1, c2 - h2));
      };
      const double oracle = overlap1d(pa.p.x(), sa.x() / 2, pb.p.x(), sb.x() / 2) *
                            overlap1d(pa.p.y(), sa.y() / 2, pb.p.y(), sb.y() / 2);
      CHECK(std::abs(footprint_overlap_area(sa, pa, sb, pb) - oracle) < 1e-12);
    }
    // A unit square over itself turned by 45 degrees overlaps in a regular octagon.
    const Pose turned{Vec3::Zero(), Quat(Eigen::AngleAxisd(std::numbers::pi / 4, Vec3::UnitZ()))};
    CHECK(footprint_overlap_area(Vec3(1, 1, 1), Pose{}, Vec3(1, 1, 1), turned) ==
          doctest::Approx(2.0 * (std::sqrt(2.0) - 1.0)).epsilon(1e-12));
  }

  TEST_CASE("mostly overhanging release is a place failure and falls to the table") {
    Engine e(two_cubes(), direct_config(Pose{Vec3(0.2, 0, 0.01), kDown}));
    const auto ev = pick_and_release(e, 0.002, 0.028);  // 30% overlap
    REQUIRE(count(ev, EventKind::PlaceFail) == 1);
    const BlockSpec* a = e.description().find_block("a");
    CHECK(std::abs(a->pose.p.z() - 0.02) < 1e-9);
  }

  TEST_CASE("release high above drops to the first support below") {
    Engine e(two_cubes(), direct_config(Pose{Vec3(0.2, 0, 0.01), kDown}));
    const auto ev = pick_and_release(e, 0.05, 0.0);
    REQUIRE(count(ev, EventKind::Drop) == 1);
    CHECK(ev.front().payload["landed_on"] == "b");
    CHECK(std::abs(e.description().find_block("a")->pose.p.z() - 0.06) < 1e-9);
  }

  TEST_CASE("engaging without a suggestion is a logged no-op") {
    EngineConfig c = direct_config(Pose{Vec3(0.0, 0.0, 0.3), Quat::Identity()});  // pointing up
    Engine e(two_cubes(), c);
    REQUIRE_FALSE(e.state().suggestion);
    const auto ev = run(e, hold(false, true), 5);
    CHECK(count(ev, EventKind::EngageRejected) == 1);
    CHECK_FALSE(e.state().engaged);
    CHECK(e.state().ee_pose.p == Vec3(0.0, 0.0, 0.3));
  }

  TEST_CASE("engage from the side goes through the pre-pose without collisions") {
    // Point at the side of cube "a" from a pose that is off the approach corridor.
    EngineConfig c;
    c.snap.enabled = false;
    const Quat toward_minus_x(Eigen::AngleAxisd(-std::numbers::pi / 2, Vec3::UnitY()));
    c.sim.initial_ee = Pose{Vec3(0.45, 0.01, 0.03), toward_minus_x};
    Engine e(two_cubes(), c);
    REQUIRE(e.state().suggestion);
    REQUIRE(e.state().suggestion->feasible);
    const Pose target = e.state().suggestion->pose;
    const Pose pre{target.p - c.sim.pre_pose_offset * target.axis_z(), target.q};

    auto ev = e.step(hold(false, true));
    REQUIRE(count(ev, EventKind::EngageStart) == 1);
    CHECK(e.state().phase == EngagePhase::PrePose);
    std::vector<Pose> path{c.sim.initial_ee, e.state().goal_pose};
    bool visited_pre = false;
    double last_d = std::numeric_limits<double>::infinity();
    for (int i = 0; i < 600; ++i) {
      e.step(hold(false, true));
      path.push_back(e.state().goal_pose);
      if (e.state().goal_pose.p == pre.p) visited_pre = true;
      if (e.state().phase == EngagePhase::Approach) {
        const double d = pose_distance(e.state().goal_pose, target, c.beta);
        CHECK(d <= last_d);  // never overshoots
        last_d = d;
      }
    }
    CHECK(visited_pre);
    CHECK(e.state().goal_pose.p == target.p);
    // Resample the path at 1 cm and check every sample is collision free.
    for (std::size_t i = 1; i < path.size(); ++i) {
      const double len = (path[i].p - path[i - 1].p).norm();
      const int n = std::max(1, static_cast<int>(std::ceil(len / 0.01)));
      for (int k = 0; k <= n; ++k) {
        const double f = static_cast<double>(k) / n;
        const Pose p{path[i - 1].p + f * (path[i].p - path[i - 1].p), path[i - 1].q.slerp(f, path[i].q)};
        CHECK_FALSE(overlaps(e.scene(), e.proxy(), p));
      }
    }
  }

  TEST_CASE("engaging at the pre-pose goes straight to the approach phase") {
    EngineConfig c = direct_config(Pose{Vec3(0.2, 0.0, 0.11), kDown});
    Engine e(two_cubes(), c);
    REQUIRE(e.state().suggestion);
    e.step(hold(false, true));
    CHECK(e.state().engaged);
    CHECK(e.state().phase == EngagePhase::Approach);
  }

  TEST_CASE("releasing engage mid-approach returns control on the next step") {
    EngineConfig c = direct_config(Pose{Vec3(0.2, 0.0, 0.2), kDown});
    Engine e(two_cubes(), c);
    run(e, hold(false, true), 10);
    const Pose mid = e.state().goal_pose;
    auto ev = e.step(move(Vec3(0.1, 0, 0), false));
    CHECK(count(ev, EventKind::EngageEnd) == 1);
    CHECK_FALSE(e.state().engaged);
    CHECK((e.state().ee_pose.p - (mid.p + Vec3(0.1 * c.sim.dt, 0, 0))).norm() < 1e-12);
  }

  TEST_CASE("mode none never suggests and mode changes apply at the next step") {
    Engine e(bundled_scene("clutter_a"), EngineConfig{});
    CHECK(e.state().suggestion);
    StepInput in;
    in.buttons.mode = Mode::None;
    e.step(in);
    CHECK(e.state().mode == Mode::None);
    CHECK_FALSE(e.state().suggestion);
    for (int i = 0; i < 60; ++i) {
      e.step(move(Vec3(0.05, 0.05, -0.1), false));
      CHECK_FALSE(e.state().suggestion);
    }
    in.buttons.mode = Mode::Implicit;
    e.step(in);
    CHECK(e.state().mode == Mode::Implicit);
    CHECK_FALSE(e.state().goal_scores.empty());
  }

  TEST_CASE("trace sample-and-hold covers the last record") {
    std::vector<TraceRecord> trace(2);
    trace[1].t = 1.0;
    CHECK(trace_steps(trace, 1.0 / 60.0) == 61);
    CHECK(trace_steps({}, 1.0 / 60.0) == 0);
  }
}

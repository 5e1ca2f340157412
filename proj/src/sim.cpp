#include "teleassist/sim.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "teleassist/snap.hpp"

namespace teleassist {

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::Explicit: return "explicit";
    case Mode::Implicit: return "implicit";
    case Mode::None: return "none";
  }
  return "none";
}

std::optional<Mode> parse_mode(std::string_view text) {
  if (text == "explicit") return Mode::Explicit;
  if (text == "implicit") return Mode::Implicit;
  if (text == "none") return Mode::None;
  return std::nullopt;
}

std::string_view to_string(SuggestionKind kind) {
  switch (kind) {
    case SuggestionKind::Anchor: return "anchor";
    case SuggestionKind::Candidate: return "candidate";
    case SuggestionKind::Snap: return "snap";
  }
  return "anchor";
}

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::PickSuccess: return "pick_success";
    case EventKind::PickFail: return "pick_fail";
    case EventKind::PlaceSuccess: return "place_success";
    case EventKind::PlaceFail: return "place_fail";
    case EventKind::Drop: return "drop";
    case EventKind::EngageStart: return "engage_start";
    case EventKind::EngageEnd: return "engage_end";
    case EventKind::EngageRejected: return "engage_rejected";
    case EventKind::SnapFired: return "snap_fired";
    case EventKind::SuggestionChanged: return "suggestion_changed";
  }
  return "unknown";
}

void EngineConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  require(beta > 0.0 && std::isfinite(beta), "beta must be positive");
  require(std::isfinite(standoff), "standoff must be finite");
  require(snap.epsilon >= 0.0, "snap.epsilon must be non-negative");
  require(snap.gamma >= 0.0, "snap.gamma must be non-negative");
  require(implicit.exposure_margin >= 0.0, "implicit.exposure_margin must be non-negative");
  require(implicit.reset_timeout > 0.0, "implicit.reset_timeout must be positive");
  require(sim.dt > 0.0 && std::isfinite(sim.dt), "sim.dt must be positive");
  require(sim.tau >= 0.0 && std::isfinite(sim.tau), "sim.tau must be non-negative");
  require(sim.pre_pose_offset >= 0.0, "sim.pre_pose_offset must be non-negative");
  require(sim.engage_linear_speed > 0.0, "sim.engage_linear_speed must be positive");
  require(sim.engage_angular_speed > 0.0, "sim.engage_angular_speed must be positive");
  require(sim.place_gap >= 0.0, "sim.place_gap must be non-negative");
  require(sim.place_angle_deg >= 0.0, "sim.place_angle_deg must be non-negative");
  require(sim.place_min_overlap >= 0.0 && sim.place_min_overlap <= 1.0,
          "sim.place_min_overlap must lie in [0, 1]");
  require((sim.sweep_half_extents.array() > 0.0).all(), "sim.sweep_half_extents must be positive");
  make_pattern(pattern);
  if (place_pattern) make_pattern(*place_pattern);
}

// ---------------------------------------------------------------------------
// Footprints

namespace {

using Vec2 = Eigen::Vector2d;
using Polygon = std::vector<Vec2>;

std::array<Vec3, 8> box_corners(const Vec3& size, const Pose& pose) {
  std::array<Vec3, 8> out;
  const Vec3 h = 0.5 * size;
  for (int i = 0; i < 8; ++i) {
    const Vec3 local((i & 1) ? h.x() : -h.x(), (i & 2) ? h.y() : -h.y(), (i & 4) ? h.z() : -h.z());
    out[static_cast<std::size_t>(i)] = pose.transform_point(local);
  }
  return out;
}

double cross2(const Vec2& o, const Vec2& a, const Vec2& b) {
  return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
}

// Monotone chain; counter-clockwise, no collinear points.
Polygon convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  if (pts.size() < 3) return pts;
  Polygon hull(2 * pts.size());
  std::size_t k = 0;
  for (const Vec2& p : pts) {
    while (k >= 2 && cross2(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross2(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

Polygon footprint(const Vec3& size, const Pose& pose) {
  std::vector<Vec2> pts;
  for (const Vec3& c : box_corners(size, pose)) pts.emplace_back(c.x(), c.y());
  return convex_hull(std::move(pts));
}

double polygon_area(const Polygon& poly) {
  double a = 0.0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Vec2& p = poly[i];
    const Vec2& q = poly[(i + 1) % poly.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * std::abs(a);
}

// Sutherland-Hodgman against a convex counter-clockwise clip polygon.
Polygon clip(const Polygon& subject, const Polygon& clipper) {
  Polygon out = subject;
  for (std::size_t i = 0; i < clipper.size() && !out.empty(); ++i) {
    const Vec2& a = clipper[i];
    const Vec2& b = clipper[(i + 1) % clipper.size()];
    const Polygon in = std::move(out);
    out.clear();
    for (std::size_t j = 0; j < in.size(); ++j) {
      const Vec2& p = in[j];
      const Vec2& q = in[(j + 1) % in.size()];
      const double sp = cross2(a, b, p);
      const double sq = cross2(a, b, q);
      if (sp >= 0.0) out.push_back(p);
      if ((sp >= 0.0) != (sq >= 0.0)) out.push_back(p + (sp / (sp - sq)) * (q - p));
    }
  }
  return out;
}

double min_corner_z(const Vec3& size, const Pose& pose) {
  double z = std::numeric_limits<double>::infinity();
  for (const Vec3& c : box_corners(size, pose)) z = std::min(z, c.z());
  return z;
}

double max_corner_z(const Vec3& size, const Pose& pose) {
  double z = -std::numeric_limits<double>::infinity();
  for (const Vec3& c : box_corners(size, pose)) z = std::max(z, c.z());
  return z;
}

// Box axis closest to world up, signed to point up.
Vec3 up_axis(const Pose& pose) {
  const Mat3 r = pose.rotation();
  int k = 0;
  for (int i = 1; i < 3; ++i) {
    if (std::abs(r(2, i)) > std::abs(r(2, k))) k = i;
  }
  return r(2, k) >= 0.0 ? Vec3(r.col(k)) : Vec3(-r.col(k));
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

double footprint_area(const Vec3& size, const Pose& pose) {
  return polygon_area(footprint(size, pose));
}

double footprint_overlap_area(const Vec3& size_a, const Pose& pose_a, const Vec3& size_b,
                              const Pose& pose_b) {
  const Polygon a = footprint(size_a, pose_a);
  const Polygon b = footprint(size_b, pose_b);
  if (a.size() < 3 || b.size() < 3) return 0.0;
  const Polygon inter = clip(a, b);
  return inter.size() < 3 ? 0.0 : polygon_area(inter);
}

// ---------------------------------------------------------------------------
// Engine

namespace {

nlohmann::json pose_json(const Pose& pose) {
  const auto a = to_array7(pose);
  return nlohmann::json(std::vector<double>(a.begin(), a.end()));
}

nlohmann::json suggestion_json(const std::optional<Suggestion>& s) {
  if (!s) return nlohmann::json{{"present", false}};
  return nlohmann::json{{"present", true},
                        {"kind", to_string(s->kind)},
                        {"feasible", s->feasible},
                        {"pose", pose_json(s->pose)}};
}

// Whether a new suggestion differs enough from the last reported one to log.
bool suggestion_moved(const std::optional<Suggestion>& a, const std::optional<Suggestion>& b) {
  if (a.has_value() != b.has_value()) return true;
  if (!a) return false;
  if (a->kind != b->kind || a->feasible != b->feasible) return true;
  if ((a->pose.p - b->pose.p).norm() > 0.02) return true;
  return rotation_angle(a->pose.q.conjugate() * b->pose.q) > 0.2;
}

// Moves `from` toward `to` by at most `max_linear` metres and `max_angular`
// radians, scaling both so they arrive together. Lands on `to` exactly.
Pose move_toward(const Pose& from, const Pose& to, double max_linear, double max_angular) {
  const double dist = (to.p - from.p).norm();
  const double angle = rotation_angle(from.q.conjugate() * to.q);
  double f = 1.0;
  if (dist > 0.0) f = std::min(f, max_linear / dist);
  if (angle > 0.0) f = std::min(f, max_angular / angle);
  if (f >= 1.0) return to;
  Pose out;
  out.p = from.p + f * (to.p - from.p);
  out.q = angle > 0.0 ? from.q.slerp(f, to.q).normalized() : from.q;
  return out;
}

Pose pre_pose_of(const Pose& target, double offset) {
  return Pose{target.p - offset * target.axis_z(), target.q};
}

}  // namespace

Engine::Engine(SceneDescription scene, EngineConfig config)
    : initial_desc_(std::move(scene)), config_(std::move(config)) {
  config_.validate();
  initial_desc_.validate();
  pattern_ = make_pattern(config_.pattern);
  if (config_.place_pattern) place_pattern_ = make_pattern(*config_.place_pattern);
  reset();
}

void Engine::reset(SceneDescription scene) {
  scene.validate();
  initial_desc_ = std::move(scene);
  reset();
}

void Engine::reset() {
  desc_ = initial_desc_;
  proxy_ = desc_.gripper ? *desc_.gripper : GripperProxy::panda_like();
  proxy_.validate();
  state_ = SimState{};
  const Pose ee = config_.sim.initial_ee.canonical();
  state_.ee_pose = ee;
  state_.goal_pose = ee;
  state_.command_pose = ee;
  state_.window = TrajectoryWindow::begin(ee, 0.0, config_.implicit.reset_timeout);
  last_reported_.reset();
  rebuild_scene();
  // Populate pointing state and the initial suggestion without emitting events.
  std::vector<Event> discard;
  update_suggestion(discard);
  last_reported_ = state_.suggestion;
}

void Engine::set_mode(Mode mode) {
  state_.mode = mode;
  std::vector<Event> discard;
  update_suggestion(discard);
  last_reported_ = state_.suggestion;
}

void Engine::rebuild_scene() {
  model_ = SceneModel::build(desc_);
  grasp_set_.reset();
  place_set_.reset();
}

ObjectIndex Engine::held_index() const {
  if (!state_.held) return kNoObject;
  return model_.exclude_index(state_.held->object_id);
}

GripperProxy Engine::placement_proxy() const {
  return proxy_.with_attached(held_object_box(state_.held->size, state_.held->grasp_offset));
}

const std::vector<Pose>& Engine::active_snap_set() {
  if (state_.held) {
    if (!place_set_) {
      place_set_ = filter_collision_free(
          model_, placement_proxy(),
          axis_aligned_place_set(model_, state_.held->facet, config_.reference), held_index(),
          config_.workers);
    }
    return *place_set_;
  }
  if (!grasp_set_) {
    std::vector<Pose> poses = axis_aligned_snap_set(model_, config_.standoff);
    poses.insert(poses.end(), desc_.snap_hints.begin(), desc_.snap_hints.end());
    grasp_set_ = filter_collision_free(model_, proxy_, poses, kNoObject, config_.workers);
  }
  return *grasp_set_;
}

std::vector<Event> Engine::step(const StepInput& input) {
  if (!input.twist.all_finite()) throw std::invalid_argument("step: non-finite twist");
  std::vector<Event> events;
  const std::uint64_t next_step = state_.step + 1;
  const double t_next = static_cast<double>(next_step) * config_.sim.dt;

  if (input.buttons.mode && *input.buttons.mode != state_.mode) {
    state_.mode = *input.buttons.mode;
  }

  // Buttons act on the state at the start of the step; events carry its time.
  const double t_now = state_.time;
  auto emit = [&](EventKind kind, nlohmann::json payload) {
    events.push_back(Event{t_now, kind, std::move(payload)});
  };
  std::vector<Event> button_events;
  if (input.buttons.gripper != state_.gripper_button) {
    if (input.buttons.gripper) {
      close_gripper(button_events);
    } else {
      open_gripper(button_events);
    }
    state_.gripper_button = input.buttons.gripper;
  }
  for (Event& e : button_events) emit(e.kind, std::move(e.payload));
  std::vector<Event> engage_events;
  update_engagement(input, engage_events);
  for (Event& e : engage_events) emit(e.kind, std::move(e.payload));

  advance_motion(input.twist);
  state_.step = next_step;
  state_.time = t_next;

  const bool input_active = !input.twist.is_zero() || state_.engaged;
  state_.window = tick_window(state_.window, t_next, input_active, state_.ee_pose);

  std::vector<Event> suggestion_events;
  update_suggestion(suggestion_events);
  for (Event& e : suggestion_events) events.push_back(Event{t_next, e.kind, std::move(e.payload)});
  return events;
}

void Engine::close_gripper(std::vector<Event>& events) {
  if (state_.gripper == GripperState::Closed) return;
  state_.gripper = GripperState::Closed;
  const Pose& ee = state_.ee_pose;
  const Pose to_ee = ee.inverse();
  std::vector<const BlockSpec*> inside;
  for (const BlockSpec& block : desc_.blocks) {
    const Vec3 local = to_ee.transform_point(block.pose.p) - config_.sim.sweep_center;
    if ((local.cwiseAbs().array() <= config_.sim.sweep_half_extents.array()).all()) {
      inside.push_back(&block);
    }
  }
  if (inside.size() != 1) {
    events.push_back(Event{0.0, EventKind::PickFail, {{"objects_in_sweep", inside.size()}}});
    return;
  }
  const BlockSpec& block = *inside.front();
  HeldObject held;
  held.object_id = block.id;
  held.grasp_offset = to_ee * block.pose;
  held.size = block.size;
  held.facet = record_support_facet(model_, ee, block.id);
  state_.held = std::move(held);
  place_set_.reset();
  events.push_back(Event{0.0, EventKind::PickSuccess,
                         {{"object", block.id},
                          {"support", state_.held->facet.estimated ? "estimated" : "measured"}}});
}

void Engine::open_gripper(std::vector<Event>& events) {
  state_.gripper = GripperState::Open;
  if (!state_.held) return;
  const HeldObject held = *state_.held;
  state_.held.reset();

  BlockSpec* object = nullptr;
  for (BlockSpec& b : desc_.blocks) {
    if (b.id == held.object_id) object = &b;
  }
  if (object == nullptr) throw std::logic_error("open_gripper: held object vanished");
  object->pose = (state_.ee_pose * held.grasp_offset).canonical();
  const Vec3 facet_world = state_.ee_pose.rotate(held.facet.normal_ee);

  struct Support {
    std::string id;
    Vec3 size;
    Pose pose;
    double top;
  };
  std::vector<Support> supports;
  supports.push_back({std::string(kTableId), desc_.table.size, desc_.table.pose,
                      max_corner_z(desc_.table.size, desc_.table.pose)});
  for (const BlockSpec& b : desc_.blocks) {
    if (b.id == held.object_id) continue;
    supports.push_back({b.id, b.size, b.pose, max_corner_z(b.size, b.pose)});
  }

  const SimConfig& sc = config_.sim;
  // Highest surface under the footprint that the bottom has not sunk through.
  auto find_support = [&](double bottom, const std::string& skip) -> const Support* {
    const Support* best = nullptr;
    for (const Support& s : supports) {
      if (s.id == skip || s.top > bottom + sc.place_gap) continue;
      if (footprint_overlap_area(object->size, object->pose, s.size, s.pose) <= 0.0) continue;
      if (best == nullptr || s.top > best->top) best = &s;
    }
    return best;
  };
  // Level the object on its recorded facet and rest it at `top`.
  auto land = [&](double top) {
    object->pose.q = (minimal_rotation_between(facet_world, kGravityDirection) * object->pose.q)
                         .normalized();
    object->pose.p.z() += top - min_corner_z(object->size, object->pose);
    object->pose = object->pose.canonical();
  };

  const double bottom = min_corner_z(object->size, object->pose);
  const double own_area = footprint_area(object->size, object->pose);
  const Support* support = find_support(bottom, "");
  const double table_top = supports.front().top;

  nlohmann::json payload{{"object", held.object_id}};
  EventKind kind = EventKind::Drop;
  if (support != nullptr) {
    const double gap = bottom - support->top;
    const double ratio =
        footprint_overlap_area(object->size, object->pose, support->size, support->pose) / own_area;
    const double limit = sc.place_angle_deg * std::numbers::pi / 180.0;
    const bool aligned = angle_between(facet_world, kGravityDirection) <= limit &&
                         angle_between(up_axis(support->pose), Vec3::UnitZ()) <= limit;
    const bool close = std::abs(gap) <= sc.place_gap;
    payload["support"] = support->id;
    payload["gap"] = gap;
    payload["overlap"] = ratio;
    if (close && aligned && ratio >= sc.place_min_overlap) {
      kind = EventKind::PlaceSuccess;
      land(support->top);
    } else if (close && aligned && support->id != kTableId) {
      kind = EventKind::PlaceFail;
      const Support* below = find_support(bottom, support->id);
      land(below ? below->top : table_top);
      payload["landed_on"] = below ? below->id : std::string(kTableId);
    } else {
      land(support->top);
      payload["landed_on"] = support->id;
    }
  } else {
    land(table_top);
    payload["landed_on"] = std::string(kTableId);
  }
  events.push_back(Event{0.0, kind, std::move(payload)});
  rebuild_scene();
}

void Engine::update_engagement(const StepInput& input, std::vector<Event>& events) {
  const bool pressed = input.buttons.engage;
  const bool rising = pressed && !state_.engage_button;
  state_.engage_button = pressed;

  if (!pressed) {
    if (state_.engaged) {
      state_.engaged = false;
      state_.phase = EngagePhase::Idle;
      state_.engage_target.reset();
      // Hand control back without a jump.
      state_.command_pose = state_.goal_pose;
      events.push_back(
          Event{0.0, EventKind::EngageEnd, {{"duration", state_.time - state_.engage_start_time}}});
    }
    return;
  }
  if (state_.engaged) return;
  if (!state_.suggestion || !state_.suggestion->feasible || state_.mode == Mode::None) {
    if (rising) events.push_back(Event{0.0, EventKind::EngageRejected, {{"reason", "no_suggestion"}}});
    return;
  }
  const Pose target = state_.suggestion->pose;
  state_.engaged = true;
  state_.engage_target = target;
  state_.engage_start_time = state_.time;

  // Already on the approach corridor: skip the pre-pose.
  const Vec3 approach = target.axis_z();
  const Vec3 v = state_.goal_pose.p - target.p;
  const double back = -v.dot(approach);
  const double lateral = (v + back * approach).norm();
  const double angle = rotation_angle(state_.goal_pose.q.conjugate() * target.q);
  const bool on_corridor = back >= -1e-6 && back <= config_.sim.pre_pose_offset + 1e-3 &&
                           lateral <= 1e-3 && angle <= 1e-3;
  state_.phase = on_corridor ? EngagePhase::Approach : EngagePhase::PrePose;
  events.push_back(Event{0.0, EventKind::EngageStart,
                         {{"target", pose_json(target)},
                          {"kind", to_string(state_.suggestion->kind)},
                          {"phase", on_corridor ? "approach" : "pre_pose"}}});
}

void Engine::advance_motion(const Twist& twist) {
  const SimConfig& sc = config_.sim;
  if (state_.engaged) {
    const Pose& target = *state_.engage_target;
    const double lin = sc.engage_linear_speed * sc.dt;
    const double ang = sc.engage_angular_speed * sc.dt;
    if (state_.phase == EngagePhase::PrePose) {
      const Pose pre = pre_pose_of(target, sc.pre_pose_offset);
      state_.goal_pose = move_toward(state_.goal_pose, pre, lin, ang);
      if (state_.goal_pose.p == pre.p && state_.goal_pose.q.coeffs() == pre.q.coeffs()) {
        state_.phase = EngagePhase::Approach;
      }
    } else {
      state_.goal_pose = move_toward(state_.goal_pose, target, lin, ang);
    }
    state_.command_pose = state_.goal_pose;
  } else {
    state_.command_pose = integrate_twist(state_.command_pose, twist, sc.dt, sc.twist_frame);
    state_.goal_pose =
        lowpass_pose(state_.goal_pose, state_.command_pose, lowpass_alpha(sc.dt, sc.tau));
  }
  state_.ee_pose = state_.goal_pose;
  if (state_.held) {
    for (BlockSpec& b : desc_.blocks) {
      if (b.id == state_.held->object_id) b.pose = state_.ee_pose * state_.held->grasp_offset;
    }
  }
}

std::optional<Suggestion> Engine::explicit_suggestion(std::optional<std::size_t>& snap_index) {
  snap_index.reset();
  if (!state_.target) return std::nullopt;
  const RayHit& hit = *state_.target;
  const bool snapping = config_.snap.enabled && (state_.held ? config_.snap.place : config_.snap.grasp);

  auto try_snap = [&](const Pose& anchor) -> std::optional<Suggestion> {
    if (!snapping) return std::nullopt;
    SnapField field{active_snap_set(), config_.snap.epsilon, config_.snap.gamma, config_.beta,
                    config_.distance_term};
    const auto snapped = apply_snap(field, anchor);
    if (!snapped) return std::nullopt;
    snap_index = snapped->index;
    Suggestion s;
    s.pose = snapped->pose;
    s.kind = SuggestionKind::Snap;
    s.distance_to_anchor = snapped->distance;
    s.feasible = true;
    return s;
  };

  if (state_.held) {
    const PlaceAnchor anchor = place_anchor(state_.ee_pose, state_.held->facet, hit, config_.reference);
    if (auto s = try_snap(anchor.pose)) return s;
    PlaceQuery q{config_.beta, config_.distance_term, held_index(), config_.workers};
    return suggest_place(model_, proxy_, held_object_box(state_.held->size, state_.held->grasp_offset),
                         anchor, place_pattern_ ? &*place_pattern_ : nullptr, q);
  }
  const GraspAnchor anchor = grasp_anchor(state_.ee_pose, hit, config_.standoff, config_.reference);
  if (auto s = try_snap(anchor.pose)) return s;
  GraspQuery q{config_.beta, config_.distance_term, kNoObject, config_.workers};
  return suggest_grasp(model_, proxy_, anchor.pose, pattern_, q);
}

std::optional<Suggestion> Engine::implicit_suggestion() {
  const std::vector<Pose>& goals = active_snap_set();
  std::vector<std::size_t> source(goals.size());
  for (std::size_t i = 0; i < goals.size(); ++i) source[i] = i;
  const GoalBelief belief =
      score_goals(state_.window, goals, std::move(source), config_.beta, config_.distance_term);
  state_.goal_scores = belief.scores;
  const auto exposed = exposed_goal(belief, config_.implicit.exposure_margin);
  if (!exposed) return std::nullopt;
  Suggestion s;
  s.pose = belief.goals[*exposed];
  s.kind = SuggestionKind::Candidate;
  s.distance_to_anchor = 0.0;
  s.feasible = true;
  s.candidate_index = belief.source[*exposed];
  return s;
}

void Engine::update_suggestion(std::vector<Event>& events) {
  state_.target = raycast(model_, state_.ee_pose.p, state_.ee_pose.axis_z(), held_index());
  state_.goal_scores.clear();
  std::optional<std::size_t> snap_index;
  std::optional<Suggestion> next;
  switch (state_.mode) {
    case Mode::Explicit: next = explicit_suggestion(snap_index); break;
    case Mode::Implicit: next = implicit_suggestion(); break;
    case Mode::None: break;
  }
  if (snap_index && (!state_.snap_index || *state_.snap_index != *snap_index)) {
    events.push_back(Event{0.0, EventKind::SnapFired,
                           {{"index", *snap_index},
                            {"distance", next->distance_to_anchor},
                            {"pose", pose_json(next->pose)}}});
  }
  state_.snap_index = snap_index;
  state_.suggestion = next;
  if (suggestion_moved(last_reported_, next)) {
    events.push_back(Event{0.0, EventKind::SuggestionChanged, suggestion_json(next)});
    last_reported_ = next;
  }
}

}  // namespace teleassist

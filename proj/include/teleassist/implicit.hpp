#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "teleassist/scene.hpp"
#include "teleassist/se3.hpp"

namespace teleassist {

/// Recent trajectory from start S to current U.
struct TrajectoryWindow {
  Pose start;               // S
  double start_time = 0.0;
  Pose current;             // U
  double last_input_time = 0.0;
  double now = 0.0;
  double reset_timeout = 2.0;

  static TrajectoryWindow begin(const Pose& pose, double t, double reset_timeout = 2.0);
};

/// Advances the window to `now`. Input refreshes U; S is reset to U once the
/// operator has been idle for the reset timeout. Throws on time regression.
TrajectoryWindow tick_window(const TrajectoryWindow& window, double now, bool input_active,
                             const Pose& current);

/// exp(-d(S,U)^2 - d(U,G)^2 + d(S,G)^2) * exp(-d(U,G)).
double goal_score(const Pose& start, const Pose& current, const Pose& goal, double beta,
                  TranslationTerm term = TranslationTerm::AsPrinted);
double log_goal_score(const Pose& start, const Pose& current, const Pose& goal, double beta,
                      TranslationTerm term = TranslationTerm::AsPrinted);

/// Normalizes non-negative scores given in log space.
std::vector<double> normalize_log_scores(std::span<const double> log_scores);
/// Index of the largest score, lowest index on ties.
std::optional<std::size_t> argmax_index(std::span<const double> scores);

struct GoalBelief {
  std::vector<Pose> goals;           // collision-free survivors
  std::vector<std::size_t> source;   // index of each survivor in the input set
  std::vector<double> scores;        // normalized
  std::optional<std::size_t> best;   // index into goals

  bool empty() const { return goals.empty(); }
};

struct InferQuery {
  double beta = 0.05;
  TranslationTerm term = TranslationTerm::AsPrinted;
  ObjectIndex exclude = kNoObject;
  int workers = 0;
};

GoalBelief infer_goal(const TrajectoryWindow& window, const std::vector<Pose>& goals,
                      const SceneModel& scene, const GripperProxy& proxy,
                      const InferQuery& query = {});

/// Scores already filtered elsewhere; no collision check.
GoalBelief score_goals(const TrajectoryWindow& window, std::vector<Pose> goals,
                       std::vector<std::size_t> source, double beta,
                       TranslationTerm term = TranslationTerm::AsPrinted);

/// Goal offered as a suggestion: the argmax when its normalized score exceeds
/// 1/|G| + margin, or the sole survivor of a single-goal set.
std::optional<std::size_t> exposed_goal(const GoalBelief& belief, double margin);

}  // namespace teleassist

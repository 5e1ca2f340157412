#include "teleassist/implicit.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace teleassist {

TrajectoryWindow TrajectoryWindow::begin(const Pose& pose, double t, double reset_timeout) {
  TrajectoryWindow w;
  w.start = pose;
  w.current = pose;
  w.start_time = t;
  w.last_input_time = t;
  w.now = t;
  w.reset_timeout = reset_timeout;
  return w;
}

TrajectoryWindow tick_window(const TrajectoryWindow& window, double now, bool input_active,
                             const Pose& current) {
  if (now < window.now) throw std::invalid_argument("tick_window: time went backwards");
  TrajectoryWindow w = window;
  w.now = now;
  if (input_active) {
    w.current = current;
    w.last_input_time = now;
  }
  // Fixed-step times accumulate rounding; allow a nanosecond of slack at the boundary.
  if (now - w.last_input_time >= w.reset_timeout - 1e-9) {
    w.start = w.current;
    w.start_time = w.last_input_time;
  }
  return w;
}

double log_goal_score(const Pose& start, const Pose& current, const Pose& goal, double beta,
                      TranslationTerm term) {
  const double su = pose_distance_squared(start, current, beta, term);
  const double ug = pose_distance_squared(current, goal, beta, term);
  const double sg = pose_distance_squared(start, goal, beta, term);
  return -su - ug + sg - std::sqrt(ug);
}

double goal_score(const Pose& start, const Pose& current, const Pose& goal, double beta,
                  TranslationTerm term) {
  return std::exp(log_goal_score(start, current, goal, beta, term));
}

std::vector<double> normalize_log_scores(std::span<const double> log_scores) {
  std::vector<double> out(log_scores.size());
  if (log_scores.empty()) return out;
  const double top = *std::max_element(log_scores.begin(), log_scores.end());
  double total = 0.0;
  for (std::size_t i = 0; i < log_scores.size(); ++i) {
    out[i] = std::exp(log_scores[i] - top);
    total += out[i];
  }
  for (double& s : out) s /= total;
  return out;
}

std::optional<std::size_t> argmax_index(std::span<const double> scores) {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (!best || scores[i] > scores[*best]) best = i;
  }
  return best;
}

GoalBelief score_goals(const TrajectoryWindow& window, std::vector<Pose> goals,
                       std::vector<std::size_t> source, double beta, TranslationTerm term) {
  GoalBelief belief;
  belief.goals = std::move(goals);
  belief.source = std::move(source);
  std::vector<double> logs;
  logs.reserve(belief.goals.size());
  for (const Pose& g : belief.goals) {
    logs.push_back(log_goal_score(window.start, window.current, g, beta, term));
  }
  belief.scores = normalize_log_scores(logs);
  belief.best = argmax_index(belief.scores);
  return belief;
}

GoalBelief infer_goal(const TrajectoryWindow& window, const std::vector<Pose>& goals,
                      const SceneModel& scene, const GripperProxy& proxy, const InferQuery& query) {
  const OverlapMask mask = batch_overlaps(scene, proxy, goals, query.exclude, query.workers);
  std::vector<Pose> survivors;
  std::vector<std::size_t> source;
  for (std::size_t i = 0; i < goals.size(); ++i) {
    if (mask[i]) continue;
    survivors.push_back(goals[i]);
    source.push_back(i);
  }
  return score_goals(window, std::move(survivors), std::move(source), query.beta, query.term);
}

std::optional<std::size_t> exposed_goal(const GoalBelief& belief, double margin) {
  if (!belief.best) return std::nullopt;
  if (belief.goals.size() == 1) return belief.best;
  const double n = static_cast<double>(belief.goals.size());
  if (belief.scores[*belief.best] > 1.0 / n + margin) return belief.best;
  return std::nullopt;
}

}  // namespace teleassist

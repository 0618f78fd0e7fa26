#include "adaptrack/quality.hpp"

#include <algorithm>
#include <stdexcept>

namespace adaptrack {

std::vector<std::size_t> neighbor_indices(const BBox& box,
                                          std::span<const BBox> others,
                                          double alpha) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < others.size(); ++i) {
    const double reach = alpha * 0.5 * (box.diagonal() + others[i].diagonal());
    if (center_distance(box, others[i]) <= reach) out.push_back(i);
  }
  return out;
}

double density_score(const BBox& box, std::span<const BBox> neighbors) {
  if (neighbors.empty()) return 0.0;
  thread_local std::vector<BBox> group;
  group.clear();
  group.reserve(neighbors.size() + 1);
  group.push_back(box);
  group.insert(group.end(), neighbors.begin(), neighbors.end());
  const double cover = cover_rect(group).area();
  if (cover <= 0.0) return 0.0;
  return union_area(group) / cover;
}

double occlusion_pair(const BBox& a, const BBox& b) {
  const double smaller = std::min(a.area(), b.area());
  if (smaller <= 0.0) return 0.0;
  return intersection_area(a, b) / smaller;
}

double occlusion_level(const BBox& box, std::span<const BBox> neighbors) {
  double level = 0.0;
  for (const BBox& n : neighbors) level = std::max(level, occlusion_pair(box, n));
  return level;
}

double interaction_score(double density, double occ_prev, double occ_now) {
  return (density + occ_prev + occ_now) / 3.0;
}

double error_score(const DescriptorSeries& series) {
  return error_score(series.speed(), series.direction_change(),
                     series.histogram_sim(), series.covariance_sim(),
                     series.config().mean_eps);
}

double error_score(const RingBuffer& speed, const RingBuffer& direction_change,
                   const RingBuffer& histogram_sim, const RingBuffer& covariance_sim,
                   double mean_eps) {
  return (series_cv(speed, mean_eps) + series_cv(direction_change, mean_eps) +
          series_cv(histogram_sim, mean_eps) + series_cv(covariance_sim, mean_eps)) /
         4.0;
}

bool alarm(double interaction, double error_now, double error_prev,
           const EvalConfig& cfg) {
  return interaction > cfg.th1 && error_now > cfg.th1 &&
         (error_now - error_prev) > cfg.th2;
}

bool frame_alarm(std::span<const QualityScores> scores) {
  return std::any_of(scores.begin(), scores.end(),
                     [](const QualityScores& q) { return q.alarm; });
}

OnlineEvaluator::OnlineEvaluator(const EvalConfig& cfg) : cfg_(cfg) {
  if (cfg.th1 <= 0.0 || cfg.th1 >= 1.0 || cfg.th2 <= 0.0 || cfg.th2 >= 1.0)
    throw std::invalid_argument("EvalConfig: thresholds must lie in (0,1)");
}

std::vector<QualityScores> OnlineEvaluator::evaluate(
    int frame, std::span<const TrackedObject> objects) {
  std::vector<QualityScores> out;
  out.reserve(objects.size());

  const bool have_prev = prev_frame_ == frame - 1;
  const double alpha = cfg_.neighbor_alpha;

  for (const TrackedObject& obj : objects) {
    QualityScores q;
    q.frame = frame;
    q.track_id = obj.id;
    const BBox& box = obj.det->bbox;

    scratch_.clear();
    for (const TrackedObject& o : objects) {
      if (o.id == obj.id) continue;
      const BBox& other = o.det->bbox;
      if (center_distance(box, other) <=
          alpha * 0.5 * (box.diagonal() + other.diagonal()))
        scratch_.push_back(other);
    }
    q.density = density_score(box, scratch_);
    q.occlusion_now = occlusion_level(box, scratch_);

    if (have_prev) {
      scratch_.clear();
      for (const auto& [id, other] : prev_boxes_) {
        if (id == obj.id) continue;
        if (center_distance(box, other) <=
            alpha * 0.5 * (box.diagonal() + other.diagonal()))
          scratch_.push_back(other);
      }
      q.occlusion_prev = occlusion_level(box, scratch_);
    }

    q.interaction = interaction_score(q.density, q.occlusion_prev, q.occlusion_now);

    auto [it, inserted] = states_.try_emplace(
        obj.id, TrackState{DescriptorSeries(cfg_.series), nullptr, 0.0, frame});
    TrackState& st = it->second;
    if (st.last_det != nullptr) st.series.update(*st.last_det, *obj.det);

    q.error = error_score(st.series);
    q.error_prev = st.last_error;
    q.alarm = alarm(q.interaction, q.error, q.error_prev, cfg_);

    st.last_det = obj.det;
    st.last_error = q.error;
    st.last_seen = frame;

    out.push_back(q);
  }

  // Drop state for tracks gone long enough that no revival can reach them.
  constexpr int kStateRetention = 100;
  for (auto it = states_.begin(); it != states_.end();) {
    if (frame - it->second.last_seen > kStateRetention)
      it = states_.erase(it);
    else
      ++it;
  }

  prev_boxes_.clear();
  for (const TrackedObject& o : objects) prev_boxes_.emplace_back(o.id, o.det->bbox);
  prev_frame_ = frame;
  return out;
}

}  // namespace adaptrack

#include "adaptrack/tracker.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "adaptrack/hungarian.hpp"

namespace adaptrack {

namespace {

bool det_less(const Detection& a, const Detection& b) {
  const auto key = [](const Detection& d) {
    return std::tuple(d.bbox.x, d.bbox.y, d.bbox.w, d.bbox.h, d.confidence);
  };
  return key(a) < key(b);
}

}  // namespace

Tracker::Tracker(const TrackerParams& params, const TrackerConfig& cfg)
    : params_(params), cfg_(cfg) {}

std::vector<Assignment> Tracker::step(int frame,
                                      std::span<const Detection> detections) {
  if (frame <= last_frame_)
    throw std::invalid_argument("Tracker::step: frames must be strictly increasing");
  last_frame_ = frame;

  const int window = params_.temporal_window();

  // Retire tracks whose last observation fell out of the temporal window.
  for (auto it = live_.begin(); it != live_.end();) {
    if (frame - it->last_frame() > window) {
      finished_.push_back(std::move(*it));
      it = live_.erase(it);
    } else {
      ++it;
    }
  }

  // Canonical detection order makes the association independent of input order.
  std::vector<int> order(detections.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return det_less(detections[a], detections[b]);
  });

  const int rows = static_cast<int>(live_.size());
  const int cols = static_cast<int>(detections.size());
  Eigen::MatrixXd score(rows, cols);
  for (int i = 0; i < rows; ++i) {
    const Detection& last = live_[i].last();
    for (int j = 0; j < cols; ++j)
      score(i, j) = link_score(last, detections[order[j]], params_, cfg_.similarity);
  }

  const std::vector<int> row_to_col = max_score_assignment(score, cfg_.gate);

  std::vector<Assignment> result(detections.size());
  std::vector<char> det_taken(detections.size(), 0);
  for (int i = 0; i < rows; ++i) {
    const int j = row_to_col[i];
    if (j < 0) continue;
    const int det_index = order[j];
    live_[i].observations.emplace(frame, detections[det_index]);
    det_taken[j] = 1;
    result[det_index] = {det_index, live_[i].id, false};
  }

  // Unmatched detections spawn tracks, ids assigned in canonical order.
  for (int j = 0; j < cols; ++j) {
    if (det_taken[j]) continue;
    const int det_index = order[j];
    Track t;
    t.id = next_id_++;
    t.observations.emplace(frame, detections[det_index]);
    result[det_index] = {det_index, t.id, true};
    live_.push_back(std::move(t));
  }

  return result;
}

std::vector<TrackedObject> Tracker::current_objects() const {
  std::vector<TrackedObject> out;
  for (const Track& t : live_) {
    if (t.last_frame() == last_frame_) out.push_back({t.id, &t.last()});
  }
  return out;
}

std::vector<Track> Tracker::tracks() const {
  std::vector<Track> all = finished_;
  all.insert(all.end(), live_.begin(), live_.end());
  std::sort(all.begin(), all.end(),
            [](const Track& a, const Track& b) { return a.id < b.id; });
  return all;
}

std::vector<Track> run_tracker(const SceneSequence& seq, const TrackerParams& params,
                               const TrackerConfig& cfg) {
  Tracker tracker(params, cfg);
  for (int f = 0; f < seq.frame_count(); ++f)
    tracker.step(f, seq.detections_by_frame[f]);
  return tracker.tracks();
}

}  // namespace adaptrack

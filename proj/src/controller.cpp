#include "adaptrack/controller.hpp"

#include <limits>
#include <stdexcept>

namespace adaptrack {

const ClusterEntry* match_cluster(const ContextSignature& window,
                                  const LearnedDatabase& db, double th3) {
  const ClusterEntry* best = nullptr;
  double best_dist = 0.0;
  for (const ClusterEntry& c : db.clusters) {
    const double d = context_distance(window, c.signature);
    if (best == nullptr || d < best_dist) {
      best = &c;
      best_dist = d;
    }
    // equal distance keeps the earlier entry; ids ascend in storage order
  }
  if (best == nullptr || best_dist >= th3) return nullptr;
  return best;
}

Controller::Controller(int frame_width, int frame_height,
                       const TrackerParams& initial, const LearnedDatabase* db,
                       const ControllerConfig& cfg)
    : frame_width_(frame_width),
      frame_height_(frame_height),
      cfg_(cfg),
      db_(db),
      tracker_(initial, cfg.tracker) {
  if (cfg.th3 <= 0.0 || cfg.th3 > 1.0)
    throw std::invalid_argument("ControllerConfig: th3 must lie in (0,1]");
  if (cfg.window_n < 1)
    throw std::invalid_argument("ControllerConfig: window must cover a frame");
  EvalConfig ec;
  ec.th1 = cfg.th1;
  ec.th2 = cfg.th2;
  ec.neighbor_alpha = cfg.neighbor_alpha;
  ec.series = cfg.series;
  eval_ = OnlineEvaluator(ec);
}

ControlRecord Controller::step(int frame, std::span<const Detection> detections) {
  tracker_.step(frame, detections);

  const std::vector<TrackedObject> objects = tracker_.current_objects();
  last_scores_ = eval_.evaluate(frame, objects);

  window_.push_back(frame_features(detections, frame_width_, frame_height_,
                                   cfg_.neighbor_alpha));
  while (static_cast<int>(window_.size()) > cfg_.window_n) window_.pop_front();

  ControlRecord rec;
  rec.frame = frame;
  rec.alarm = frame_alarm(last_scores_);

  // The cooldown spaces out parameter changes; attempts that would not change
  // anything (same-cluster matches, unmatched windows) do not arm it.
  if (rec.alarm && frame - last_tune_frame_ >= cfg_.cooldown && db_ != nullptr) {
    rec.attempted = true;
    const std::vector<FeatureVec> frames(window_.begin(), window_.end());
    const ContextSignature sig =
        window_signature(frames, db_->config.context.codeword_radius);
    const ClusterEntry* entry = match_cluster(sig, *db_, cfg_.th3);
    if (entry != nullptr) {
      rec.cluster_id = entry->id;
      if (entry->params.w() != tracker_.params().w()) {
        tracker_.set_params(tracker_.params().with_weights(entry->params.w()));
        rec.tuned = true;
        last_tune_frame_ = frame;
      }
    } else {
      rec.marked = true;
    }
  }

  rec.weights = tracker_.params().w();
  log_.push_back(rec);
  return rec;
}

ControlSummary Controller::summary() const {
  ControlSummary s;
  s.frames = static_cast<int>(log_.size());
  for (const ControlRecord& r : log_) {
    s.alarms += r.alarm ? 1 : 0;
    s.attempts += r.attempted ? 1 : 0;
    s.tuning_events += r.tuned ? 1 : 0;
    s.unmatched_windows += r.marked ? 1 : 0;
  }
  return s;
}

ControlledRun run_controlled(const SceneSequence& seq, const TrackerParams& initial,
                             const LearnedDatabase& db, const ControllerConfig& cfg,
                             bool collect_scores) {
  Controller ctl(seq.frame_width, seq.frame_height, initial, &db, cfg);
  ControlledRun run;
  for (int f = 0; f < seq.frame_count(); ++f) {
    ctl.step(f, seq.detections_by_frame[f]);
    if (collect_scores) {
      run.scores.insert(run.scores.end(), ctl.last_scores().begin(),
                        ctl.last_scores().end());
    }
  }
  run.tracks = ctl.tracker().tracks();
  run.log = ctl.log();
  run.summary = ctl.summary();
  return run;
}

}  // namespace adaptrack

#pragma once

#include <deque>
#include <limits>
#include <span>
#include <vector>

#include "adaptrack/context.hpp"
#include "adaptrack/database.hpp"
#include "adaptrack/quality.hpp"
#include "adaptrack/tracker.hpp"

namespace adaptrack {

struct ControllerConfig {
  double th1 = 0.2;   // alarm threshold on interaction and error scores
  double th2 = 0.15;  // alarm threshold on the error-score increase
  double th3 = 0.5;   // max context distance for a cluster match
  int window_n = 50;  // frames of the online context window
  int cooldown = 50;  // min frames between parameter changes
  double neighbor_alpha = 1.5;
  TrackerConfig tracker;
  SeriesConfig series;
};

/// The cluster at minimum context distance when that minimum is below th3,
/// otherwise nullptr. Ties resolve to the lowest cluster id.
const ClusterEntry* match_cluster(const ContextSignature& window,
                                  const LearnedDatabase& db, double th3);

struct ControlRecord {
  int frame = 0;
  bool alarm = false;      // some tracked object alarmed this frame
  bool attempted = false;  // context computed and matched against the database
  int cluster_id = -1;     // matched cluster, -1 when none
  bool tuned = false;      // parameters actually changed
  bool marked = false;     // attempted but unmatched: left for later offline learning
  Weights5 weights = Weights5::Zero();  // parameters in force after this frame
};

struct ControlSummary {
  int frames = 0;
  int alarms = 0;
  int attempts = 0;
  int tuning_events = 0;
  int unmatched_windows = 0;
};

/// Online control loop around the tracker: evaluate every frame, and on an
/// alarm match the recent context window against the learned database and
/// retune the tracker weights. Parameters only ever change at alarm frames
/// with a matching cluster; everything else runs the tracker untouched.
class Controller {
 public:
  Controller(int frame_width, int frame_height, const TrackerParams& initial,
             const LearnedDatabase* db, const ControllerConfig& cfg = {});

  ControlRecord step(int frame, std::span<const Detection> detections);

  const Tracker& tracker() const { return tracker_; }
  const std::vector<ControlRecord>& log() const { return log_; }
  const std::vector<QualityScores>& last_scores() const { return last_scores_; }
  ControlSummary summary() const;

 private:
  int frame_width_;
  int frame_height_;
  ControllerConfig cfg_;
  const LearnedDatabase* db_;
  Tracker tracker_;
  OnlineEvaluator eval_;
  std::deque<FeatureVec> window_;
  std::vector<ControlRecord> log_;
  std::vector<QualityScores> last_scores_;
  int last_tune_frame_ = std::numeric_limits<int>::min() / 2;
};

struct ControlledRun {
  std::vector<Track> tracks;
  std::vector<ControlRecord> log;
  ControlSummary summary;
  std::vector<QualityScores> scores;  // per frame per object when collected
};

ControlledRun run_controlled(const SceneSequence& seq, const TrackerParams& initial,
                             const LearnedDatabase& db,
                             const ControllerConfig& cfg = {},
                             bool collect_scores = false);

}  // namespace adaptrack

#pragma once

#include <span>
#include <vector>

#include "adaptrack/similarity.hpp"
#include "adaptrack/types.hpp"

namespace adaptrack {

struct TrackerConfig {
  double gate = 0.3;  // minimum link score for an association
  SimilarityConfig similarity;
};

/// One detection's outcome for a processed frame.
struct Assignment {
  int detection_index = -1;  // index into the step() input list
  int track_id = 0;
  bool is_new = false;  // true when the detection spawned a new track
};

/// View of one live track at the current frame. The detection pointer stays
/// valid for the lifetime of the tracker (observations are never discarded).
struct TrackedObject {
  int id = 0;
  const Detection* det = nullptr;
};

/// Appearance-based multi-object tracker: per-frame optimal bipartite
/// association on the weighted descriptor-similarity score, with lost-track
/// revival inside the temporal window. Parameters are hot-swappable between
/// frames; past assignments are never revised.
class Tracker {
 public:
  explicit Tracker(const TrackerParams& params = {}, const TrackerConfig& cfg = {});

  /// Processes one frame. Frames must arrive in strictly increasing order.
  /// Association is computed on a canonically sorted view of the detections,
  /// so permuting the input list never changes the resulting tracks.
  std::vector<Assignment> step(int frame, std::span<const Detection> detections);

  /// Swaps parameters; takes effect from the next step.
  void set_params(const TrackerParams& params) { params_ = params; }
  const TrackerParams& params() const { return params_; }
  const TrackerConfig& config() const { return cfg_; }

  /// Tracks observed at the most recently processed frame.
  std::vector<TrackedObject> current_objects() const;

  /// All tracks ever created, id-ascending, including finished ones.
  std::vector<Track> tracks() const;

  int last_frame() const { return last_frame_; }

 private:
  TrackerParams params_;
  TrackerConfig cfg_;
  std::vector<Track> live_;      // revivable: last observation within the window
  std::vector<Track> finished_;
  int next_id_ = 1;
  int last_frame_ = -1;
};

/// Runs the tracker over a whole sequence with fixed parameters.
std::vector<Track> run_tracker(const SceneSequence& seq, const TrackerParams& params,
                               const TrackerConfig& cfg = {});

}  // namespace adaptrack

#pragma once

#include <map>
#include <span>
#include <vector>

#include "adaptrack/series.hpp"
#include "adaptrack/tracker.hpp"
#include "adaptrack/types.hpp"

namespace adaptrack {

struct EvalConfig {
  double th1 = 0.2;            // alarm threshold on interaction and error scores
  double th2 = 0.15;           // alarm threshold on the error-score increase
  double neighbor_alpha = 1.5; // neighbor radius multiplier
  SeriesConfig series;
};

/// Per-object quality state at one frame.
struct QualityScores {
  int frame = 0;
  int track_id = 0;
  double density = 0;
  double occlusion_prev = 0;
  double occlusion_now = 0;
  double interaction = 0;  // (density + occlusion_prev + occlusion_now) / 3
  double error = 0;
  double error_prev = 0;
  bool alarm = false;
};

/// Spatially close boxes: center distance at most alpha times the mean of the
/// two diagonals. Returns indices into `others`.
std::vector<std::size_t> neighbor_indices(const BBox& box,
                                          std::span<const BBox> others,
                                          double alpha);

/// union / cover of the object together with its neighbors; 0 for a lone object.
double density_score(const BBox& box, std::span<const BBox> neighbors);

/// Overlap area over the smaller box area.
double occlusion_pair(const BBox& a, const BBox& b);

/// Max pairwise occlusion against the neighbors; 0 when there are none.
double occlusion_level(const BBox& box, std::span<const BBox> neighbors);

double interaction_score(double density, double occ_prev, double occ_now);

/// Mean coefficient of variation of the four descriptor series. Series with
/// fewer than two samples contribute 0.
double error_score(const DescriptorSeries& series);
double error_score(const RingBuffer& speed, const RingBuffer& direction_change,
                   const RingBuffer& histogram_sim, const RingBuffer& covariance_sim,
                   double mean_eps = 1e-6);

/// Per-object alarm rule: interaction and error above th1, error increased by
/// more than th2 since the previous frame. All comparisons strict.
bool alarm(double interaction, double error_now, double error_prev,
           const EvalConfig& cfg);

bool frame_alarm(std::span<const QualityScores> scores);

/// Frame-by-frame tracking-quality estimator over tracker output. Keeps the
/// per-track descriptor series and previous error scores between calls.
class OnlineEvaluator {
 public:
  explicit OnlineEvaluator(const EvalConfig& cfg = {});

  /// Evaluates the tracked objects of one frame; call once per frame in order.
  std::vector<QualityScores> evaluate(int frame,
                                      std::span<const TrackedObject> objects);

  const EvalConfig& config() const { return cfg_; }

 private:
  struct TrackState {
    DescriptorSeries series;
    const Detection* last_det = nullptr;
    double last_error = 0.0;
    int last_seen = -1;
  };

  EvalConfig cfg_;
  std::map<int, TrackState> states_;
  std::vector<std::pair<int, BBox>> prev_boxes_;  // (track id, box) at t-1
  std::vector<BBox> scratch_;
  int prev_frame_ = -1;
};

}  // namespace adaptrack

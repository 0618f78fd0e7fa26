#pragma once

#include <Eigen/Dense>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "adaptrack/geometry.hpp"

namespace adaptrack {

using Weights5 = Eigen::Matrix<double, 5, 1>;

constexpr int kDefaultHistogramBins = 16;
constexpr int kDefaultDominantColors = 3;

struct DominantColor {
  int index = 0;      // histogram bin index
  double weight = 0;  // >= 0, weights of one appearance sum to 1
};

/// Appearance descriptor of one detection: color histogram, color covariance,
/// dominant colors and contrast. Never computed from pixels here; ingested or
/// synthesized.
struct Appearance {
  Eigen::VectorXd histogram;                    // non-negative, sums to 1
  Eigen::Matrix3d covariance;                   // symmetric PSD
  std::vector<DominantColor> dominant_colors;   // weights sum to 1
  double contrast = 0.5;                        // [0,1]

  static Appearance neutral(int bins = kDefaultHistogramBins,
                            int colors = kDefaultDominantColors);
};

/// Re-derive the top-k dominant colors from a histogram (ties to lower bin).
std::vector<DominantColor> dominant_colors_from_histogram(
    const Eigen::VectorXd& histogram, int colors = kDefaultDominantColors);

struct Detection {
  int frame = 0;
  BBox bbox;
  double confidence = 1.0;
  Appearance appearance;
};

/// Identity-labeled sequence of detections, at most one per frame.
struct Track {
  int id = 0;
  std::map<int, Detection> observations;  // frame -> detection

  bool empty() const { return observations.empty(); }
  int first_frame() const { return observations.begin()->first; }
  int last_frame() const { return observations.rbegin()->first; }
  const Detection& last() const { return observations.rbegin()->second; }
  const Detection* at_frame(int frame) const;
};

struct SceneSequence {
  std::string name;
  int frame_width = 0;
  int frame_height = 0;
  double fps = 25.0;
  std::vector<std::vector<Detection>> detections_by_frame;
  std::optional<std::vector<Track>> ground_truth;

  int frame_count() const { return static_cast<int>(detections_by_frame.size()); }
};

/// The five descriptor weights of the controlled tracker plus its temporal
/// window. Weights are non-negative and renormalized to sum 1 on construction.
/// Index order: shape ratio, area, histogram, covariance, dominant color.
class TrackerParams {
 public:
  TrackerParams();  // uniform weights, default window
  TrackerParams(const Weights5& weights, int temporal_window);

  const Weights5& w() const { return w_; }
  int temporal_window() const { return temporal_window_; }
  TrackerParams with_weights(const Weights5& weights) const;

  bool operator==(const TrackerParams& o) const {
    return w_ == o.w_ && temporal_window_ == o.temporal_window_;
  }

  static constexpr int kDefaultTemporalWindow = 10;

 private:
  Weights5 w_;
  int temporal_window_;
};

}  // namespace adaptrack

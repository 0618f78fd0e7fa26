#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "adaptrack/similarity.hpp"
#include "adaptrack/types.hpp"

namespace adaptrack {

/// Fixed-capacity scalar ring buffer, oldest sample evicted first. Keeps
/// running first and second moments so mean and stddev are O(1).
class RingBuffer {
 public:
  explicit RingBuffer(std::size_t capacity = 20);

  void push(double v);
  std::size_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  double operator[](std::size_t i) const;  // 0 = oldest
  double mean() const;
  double stddev() const;  // population

 private:
  std::vector<double> data_;
  std::size_t head_ = 0;
  std::size_t size_ = 0;
  double sum_ = 0.0;
  double sumsq_ = 0.0;
};

/// Population std divided by mean; 0 with fewer than two samples or when the
/// mean falls below mean_eps.
double series_cv(const RingBuffer& series, double mean_eps = 1e-6);

struct SeriesConfig {
  std::size_t window = 20;   // ring buffer length, frames
  double mean_eps = 1e-6;
  double covariance_scale = 1.0;
};

/// Per-track time series of the four descriptors entering the tracking error
/// score: speed, direction change, and consecutive-frame histogram and
/// covariance similarities. The vector-valued appearance descriptors are
/// folded into scalar consecutive-similarity series.
class DescriptorSeries {
 public:
  explicit DescriptorSeries(const SeriesConfig& cfg = {});

  /// Appends one sample to each series from the step prev -> cur. prev must be
  /// the most recent observation before cur on the same track. The first step
  /// of a track has no previous heading; its direction-change sample is 0.
  void update(const Detection& prev, const Detection& cur);

  const RingBuffer& speed() const { return speed_; }
  const RingBuffer& direction_change() const { return turn_; }
  const RingBuffer& histogram_sim() const { return hist_sim_; }
  const RingBuffer& covariance_sim() const { return cov_sim_; }
  const SeriesConfig& config() const { return cfg_; }

 private:
  SeriesConfig cfg_;
  RingBuffer speed_, turn_, hist_sim_, cov_sim_;
  std::optional<Eigen::Vector2d> last_step_;
};

}  // namespace adaptrack

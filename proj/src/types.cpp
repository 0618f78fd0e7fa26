#include "adaptrack/types.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace adaptrack {

Appearance Appearance::neutral(int bins, int colors) {
  Appearance a;
  a.histogram = Eigen::VectorXd::Constant(bins, 1.0 / bins);
  a.covariance = Eigen::Matrix3d::Identity();
  a.dominant_colors.reserve(colors);
  for (int i = 0; i < colors; ++i) a.dominant_colors.push_back({i, 1.0 / colors});
  a.contrast = 0.5;
  return a;
}

std::vector<DominantColor> dominant_colors_from_histogram(
    const Eigen::VectorXd& histogram, int colors) {
  std::vector<int> order(histogram.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return histogram[a] > histogram[b]; });

  const int n = std::min<int>(colors, static_cast<int>(order.size()));
  double mass = 0.0;
  for (int i = 0; i < n; ++i) mass += histogram[order[i]];

  std::vector<DominantColor> dom;
  dom.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double wt = mass > 0.0 ? histogram[order[i]] / mass : 1.0 / n;
    dom.push_back({order[i], wt});
  }
  return dom;
}

const Detection* Track::at_frame(int frame) const {
  auto it = observations.find(frame);
  return it == observations.end() ? nullptr : &it->second;
}

TrackerParams::TrackerParams()
    : TrackerParams(Weights5::Constant(0.2), kDefaultTemporalWindow) {}

TrackerParams::TrackerParams(const Weights5& weights, int temporal_window)
    : temporal_window_(temporal_window) {
  if (temporal_window <= 0)
    throw std::invalid_argument("TrackerParams: temporal window must be positive");
  if ((weights.array() < 0.0).any())
    throw std::invalid_argument("TrackerParams: negative descriptor weight");
  const double sum = weights.sum();
  if (sum <= 0.0)
    throw std::invalid_argument("TrackerParams: weights sum to zero");
  // keep already-normalized vectors bit-identical (file round trips rely on it)
  w_ = std::abs(sum - 1.0) <= 1e-6 ? weights : Weights5(weights / sum);
}

TrackerParams TrackerParams::with_weights(const Weights5& weights) const {
  return TrackerParams(weights, temporal_window_);
}

}  // namespace adaptrack

#include "adaptrack/similarity.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace adaptrack {

namespace {

double min_max_ratio(double a, double b) {
  if (a <= 0.0 || b <= 0.0) return 0.0;
  return a < b ? a / b : b / a;
}

}  // namespace

double shape_ratio_similarity(const BBox& a, const BBox& b) {
  return min_max_ratio(a.h / a.w, b.h / b.w);
}

double area_similarity(const BBox& a, const BBox& b) {
  return min_max_ratio(a.area(), b.area());
}

double histogram_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("histogram_similarity: bin count mismatch");
  return a.cwiseMin(b).sum();
}

double covariance_similarity(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b,
                             double scale) {
  return std::exp(-(a - b).norm() / scale);
}

double dominant_color_similarity(const std::vector<DominantColor>& a,
                                 const std::vector<DominantColor>& b) {
  double sim = 0.0;
  for (const DominantColor& da : a)
    for (const DominantColor& db : b)
      if (da.index == db.index) sim += std::min(da.weight, db.weight);
  return std::min(sim, 1.0);
}

double link_similarity(int k, const Detection& a, const Detection& b,
                       const SimilarityConfig& cfg) {
  switch (k) {
    case 0: return shape_ratio_similarity(a.bbox, b.bbox);
    case 1: return area_similarity(a.bbox, b.bbox);
    case 2: return histogram_similarity(a.appearance.histogram, b.appearance.histogram);
    case 3:
      return covariance_similarity(a.appearance.covariance, b.appearance.covariance,
                                   cfg.covariance_scale);
    case 4:
      return dominant_color_similarity(a.appearance.dominant_colors,
                                       b.appearance.dominant_colors);
    default:
      throw std::out_of_range("link_similarity: descriptor index out of range");
  }
}

double link_score(const Detection& a, const Detection& b,
                  const TrackerParams& params, const SimilarityConfig& cfg) {
  double score = 0.0;
  for (int k = 0; k < 5; ++k) {
    const double wk = params.w()[k];
    if (wk > 0.0) score += wk * link_similarity(k, a, b, cfg);
  }
  return score;
}

}  // namespace adaptrack

#pragma once

#include "adaptrack/types.hpp"

namespace adaptrack {

struct SimilarityConfig {
  double covariance_scale = 1.0;  // sigma in exp(-|dCov|_F / sigma)
};

// The five link similarities, all symmetric, in [0,1], and 1 on identical inputs.
double shape_ratio_similarity(const BBox& a, const BBox& b);
double area_similarity(const BBox& a, const BBox& b);
double histogram_similarity(const Eigen::VectorXd& a, const Eigen::VectorXd& b);
double covariance_similarity(const Eigen::Matrix3d& a, const Eigen::Matrix3d& b,
                             double scale = 1.0);
double dominant_color_similarity(const std::vector<DominantColor>& a,
                                 const std::vector<DominantColor>& b);

/// Similarity of descriptor k between two detections. k indexes the weight
/// vector: 0 shape ratio, 1 area, 2 histogram, 3 covariance, 4 dominant color.
double link_similarity(int k, const Detection& a, const Detection& b,
                       const SimilarityConfig& cfg = {});

/// Weighted combination of the five descriptor similarities.
double link_score(const Detection& a, const Detection& b,
                  const TrackerParams& params, const SimilarityConfig& cfg = {});

}  // namespace adaptrack

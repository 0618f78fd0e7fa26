#pragma once

#include <Eigen/Dense>
#include <span>
#include <vector>

#include "adaptrack/context.hpp"

namespace adaptrack {

/// Quality-threshold clustering over a symmetric distance matrix: repeatedly
/// grow one candidate cluster per remaining seed (always adding the point
/// that increases the diameter least while staying within `diameter`), then
/// extract the largest candidate. Ties prefer the lowest seed index.
/// Singletons are allowed. Returns index groups in extraction order.
std::vector<std::vector<int>> qt_cluster(const Eigen::MatrixXd& distance,
                                         double diameter);

/// Same, over chunk signatures under the symmetrized context distance.
std::vector<std::vector<int>> qt_cluster(std::span<const ContextSignature> contexts,
                                         double diameter);

}  // namespace adaptrack

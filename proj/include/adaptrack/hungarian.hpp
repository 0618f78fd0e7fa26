#pragma once

#include <Eigen/Dense>
#include <vector>

namespace adaptrack {

/// Maximum-total-score bipartite assignment with per-pair gating.
///
/// Entries below `gate` are never matched; rows and columns may stay
/// unassigned when that maximizes the total score. Returns row -> column
/// (-1 for unassigned). Deterministic; among equal-score assignments a tiny
/// rank perturbation prefers low row indices matched to low column indices.
std::vector<int> max_score_assignment(const Eigen::MatrixXd& score, double gate);

}  // namespace adaptrack

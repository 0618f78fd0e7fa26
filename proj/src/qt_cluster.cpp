#include "adaptrack/qt_cluster.hpp"

#include <algorithm>
#include <stdexcept>

namespace adaptrack {

namespace {

// Greedy candidate cluster for one seed over the remaining points.
std::vector<int> grow_candidate(const Eigen::MatrixXd& d, double diameter,
                                int seed, const std::vector<int>& remaining) {
  std::vector<int> cluster{seed};
  std::vector<char> in_cluster(d.rows(), 0);
  in_cluster[seed] = 1;

  // max distance from each candidate to the current cluster
  std::vector<double> reach(d.rows(), 0.0);
  for (int p : remaining) reach[p] = d(p, seed);

  while (true) {
    // remaining is ascending, so ties on reach keep the lowest index
    int best = -1;
    double best_reach = 0.0;
    for (int p : remaining) {
      if (in_cluster[p] || reach[p] > diameter) continue;
      if (best == -1 || reach[p] < best_reach) {
        best = p;
        best_reach = reach[p];
      }
    }
    if (best < 0) break;
    cluster.push_back(best);
    in_cluster[best] = 1;
    for (int p : remaining)
      if (!in_cluster[p]) reach[p] = std::max(reach[p], d(p, best));
  }
  return cluster;
}

}  // namespace

std::vector<std::vector<int>> qt_cluster(const Eigen::MatrixXd& distance,
                                         double diameter) {
  const int n = static_cast<int>(distance.rows());
  if (distance.cols() != n) throw std::invalid_argument("qt_cluster: square matrix required");

  std::vector<int> remaining(n);
  for (int i = 0; i < n; ++i) remaining[i] = i;

  std::vector<std::vector<int>> clusters;
  while (!remaining.empty()) {
    std::vector<int> best;
    for (int seed : remaining) {
      std::vector<int> cand = grow_candidate(distance, diameter, seed, remaining);
      if (cand.size() > best.size()) best = std::move(cand);
    }
    std::sort(best.begin(), best.end());
    std::vector<int> next;
    next.reserve(remaining.size() - best.size());
    for (int p : remaining)
      if (!std::binary_search(best.begin(), best.end(), p)) next.push_back(p);
    remaining = std::move(next);
    clusters.push_back(std::move(best));
  }
  return clusters;
}

std::vector<std::vector<int>> qt_cluster(std::span<const ContextSignature> contexts,
                                         double diameter) {
  const int n = static_cast<int>(contexts.size());
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      d(i, j) = d(j, i) = symmetric_context_distance(contexts[i], contexts[j]);
    }
  }
  return qt_cluster(d, diameter);
}

}  // namespace adaptrack

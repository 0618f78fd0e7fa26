#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "adaptrack/similarity.hpp"
#include "adaptrack/types.hpp"

namespace adaptrack {

/// A pair of detections inside the temporal window, labeled +1 when both carry
/// the same ground-truth identity and -1 otherwise.
struct LabeledPair {
  Detection a;
  Detection b;
  int label = 1;
};

/// Builds training pairs from annotated trajectories. Detections are first
/// labeled with the ground-truth identity whose box they overlap best (IoU at
/// least `label_iou`); positives are then adjacent same-identity detections no
/// more than temporal_window frames apart, negatives cross-identity pairs
/// inside the window, sampled down to negative_ratio times the positive count
/// with the given seed.
std::vector<LabeledPair> make_pairs(
    std::span<const Track> ground_truth,
    std::span<const std::vector<Detection>> detections_by_frame,
    int temporal_window, std::uint64_t seed, double negative_ratio = 3.0,
    double label_iou = 0.5);

struct BoostConfig {
  int rounds = 50;
  int threshold_grid = 32;  // evenly spaced stump thresholds over [0,1]
  double error_clamp = 1e-6;
  SimilarityConfig similarity;
};

struct BoostResult {
  Weights5 weights;                  // per-descriptor weight, sums to 1
  std::vector<double> round_errors;  // ensemble 0/1 training error per round
};

/// Adaboost over decision stumps on the five link similarities. The learned
/// descriptor weight is the normalized sum of the stump weights alpha over the
/// rounds that picked that descriptor. Requires both labels present.
BoostResult adaboost_weights(std::span<const LabeledPair> pairs,
                             const BoostConfig& cfg = {});

}  // namespace adaptrack

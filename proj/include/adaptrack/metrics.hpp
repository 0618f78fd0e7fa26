#pragma once

#include <span>

#include "adaptrack/types.hpp"

namespace adaptrack {

struct MetricsReport {
  int gt_tracks = 0;
  double mt = 0.0;  // % of ground-truth tracks covered > 80%
  double pt = 0.0;  // % covered 20..80%
  double ml = 0.0;  // % covered < 20%
  double mota = 0.0;  // clamped at 0 for display
  double motp = 0.0;  // mean matched overlap, higher is better
  double m_mean = 0.0;  // (MOTA + MOTP) / 2
  double iou_threshold = 0.5;

  // raw event counts behind MOTA
  long misses = 0;
  long false_positives = 0;
  long id_switches = 0;
  long gt_boxes = 0;
};

/// Per ground-truth track: fraction of its frames matched (IoU at or above the
/// threshold) by the single best output identity. Buckets: MT > 0.8,
/// ML < 0.2, PT otherwise. Returns percentages over the ground truth.
struct CoverageResult {
  int mt = 0, pt = 0, ml = 0;  // track counts
};
CoverageResult coverage_metrics(std::span<const Track> ground_truth,
                                std::span<const Track> output,
                                double iou_threshold = 0.5);

/// CLEAR multi-object scores with match persistence: established pairs are
/// kept while their overlap stays above the threshold, the remainder are
/// re-matched per frame by maximum total overlap.
struct ClearResult {
  double mota = 0.0;  // unclamped, can be negative
  double motp = 0.0;
  long misses = 0, false_positives = 0, id_switches = 0, matches = 0, gt_boxes = 0;
};
ClearResult clear_mot(std::span<const Track> ground_truth,
                      std::span<const Track> output, double iou_threshold = 0.5);

MetricsReport evaluate_tracks(std::span<const Track> ground_truth,
                              std::span<const Track> output,
                              double iou_threshold = 0.5);

}  // namespace adaptrack

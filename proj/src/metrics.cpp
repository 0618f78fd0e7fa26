#include "adaptrack/metrics.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "adaptrack/hungarian.hpp"

namespace adaptrack {

CoverageResult coverage_metrics(std::span<const Track> ground_truth,
                                std::span<const Track> output,
                                double iou_threshold) {
  if (ground_truth.empty())
    throw std::invalid_argument("coverage_metrics: empty ground truth");

  CoverageResult res;
  for (const Track& gt : ground_truth) {
    int best_matched = 0;
    for (const Track& out : output) {
      int matched = 0;
      for (const auto& [frame, gdet] : gt.observations) {
        const Detection* odet = out.at_frame(frame);
        if (odet != nullptr && iou(gdet.bbox, odet->bbox) >= iou_threshold)
          ++matched;
      }
      best_matched = std::max(best_matched, matched);
    }
    const double coverage =
        static_cast<double>(best_matched) / static_cast<double>(gt.observations.size());
    if (coverage > 0.8)
      ++res.mt;
    else if (coverage < 0.2)
      ++res.ml;
    else
      ++res.pt;
  }
  return res;
}

ClearResult clear_mot(std::span<const Track> ground_truth,
                      std::span<const Track> output, double iou_threshold) {
  if (ground_truth.empty())
    throw std::invalid_argument("clear_mot: empty ground truth");

  int last_frame = -1;
  for (const Track& t : ground_truth) last_frame = std::max(last_frame, t.last_frame());
  for (const Track& t : output)
    if (!t.empty()) last_frame = std::max(last_frame, t.last_frame());

  ClearResult res;
  double iou_sum = 0.0;
  std::map<int, int> pair_of;      // gt id -> out id carried from previous frame
  std::map<int, int> last_match;   // gt id -> last out id ever matched

  for (int frame = 0; frame <= last_frame; ++frame) {
    std::vector<std::pair<int, const Detection*>> gts, outs;
    for (const Track& t : ground_truth) {
      const Detection* d = t.at_frame(frame);
      if (d != nullptr) gts.emplace_back(t.id, d);
    }
    for (const Track& t : output) {
      const Detection* d = t.at_frame(frame);
      if (d != nullptr) outs.emplace_back(t.id, d);
    }
    res.gt_boxes += static_cast<long>(gts.size());
    if (gts.empty() && outs.empty()) continue;

    std::vector<char> gt_used(gts.size(), 0), out_used(outs.size(), 0);
    std::vector<std::pair<std::size_t, std::size_t>> frame_pairs;

    // keep surviving pairs from the previous frame
    for (std::size_t i = 0; i < gts.size(); ++i) {
      auto it = pair_of.find(gts[i].first);
      if (it == pair_of.end()) continue;
      for (std::size_t j = 0; j < outs.size(); ++j) {
        if (outs[j].first != it->second) continue;
        if (iou(gts[i].second->bbox, outs[j].second->bbox) >= iou_threshold) {
          gt_used[i] = 1;
          out_used[j] = 1;
          frame_pairs.emplace_back(i, j);
        }
        break;
      }
    }

    // match the rest by maximum total overlap
    std::vector<std::size_t> free_gt, free_out;
    for (std::size_t i = 0; i < gts.size(); ++i)
      if (!gt_used[i]) free_gt.push_back(i);
    for (std::size_t j = 0; j < outs.size(); ++j)
      if (!out_used[j]) free_out.push_back(j);
    if (!free_gt.empty() && !free_out.empty()) {
      Eigen::MatrixXd score(free_gt.size(), free_out.size());
      for (std::size_t a = 0; a < free_gt.size(); ++a)
        for (std::size_t b = 0; b < free_out.size(); ++b)
          score(a, b) =
              iou(gts[free_gt[a]].second->bbox, outs[free_out[b]].second->bbox);
      const std::vector<int> match = max_score_assignment(score, iou_threshold);
      for (std::size_t a = 0; a < free_gt.size(); ++a)
        if (match[a] >= 0) frame_pairs.emplace_back(free_gt[a], free_out[match[a]]);
    }

    std::map<int, int> next_pairs;
    std::vector<char> gt_matched(gts.size(), 0), out_matched(outs.size(), 0);
    for (const auto& [i, j] : frame_pairs) {
      gt_matched[i] = 1;
      out_matched[j] = 1;
      iou_sum += iou(gts[i].second->bbox, outs[j].second->bbox);
      ++res.matches;
      const int gt_id = gts[i].first;
      const int out_id = outs[j].first;
      auto prev = last_match.find(gt_id);
      if (prev != last_match.end() && prev->second != out_id) ++res.id_switches;
      last_match[gt_id] = out_id;
      next_pairs[gt_id] = out_id;
    }
    for (std::size_t i = 0; i < gts.size(); ++i)
      if (!gt_matched[i]) ++res.misses;
    for (std::size_t j = 0; j < outs.size(); ++j)
      if (!out_matched[j]) ++res.false_positives;

    pair_of = std::move(next_pairs);
  }

  res.mota = res.gt_boxes > 0
                 ? 1.0 - static_cast<double>(res.misses + res.false_positives +
                                             res.id_switches) /
                             static_cast<double>(res.gt_boxes)
                 : 0.0;
  res.motp = res.matches > 0 ? iou_sum / static_cast<double>(res.matches) : 0.0;
  return res;
}

MetricsReport evaluate_tracks(std::span<const Track> ground_truth,
                              std::span<const Track> output,
                              double iou_threshold) {
  const CoverageResult cov = coverage_metrics(ground_truth, output, iou_threshold);
  const ClearResult clear = clear_mot(ground_truth, output, iou_threshold);

  MetricsReport rep;
  rep.gt_tracks = static_cast<int>(ground_truth.size());
  const double n = static_cast<double>(rep.gt_tracks);
  rep.mt = 100.0 * cov.mt / n;
  rep.pt = 100.0 * cov.pt / n;
  rep.ml = 100.0 * cov.ml / n;
  rep.mota = std::max(0.0, clear.mota);
  rep.motp = clear.motp;
  rep.m_mean = 0.5 * (rep.mota + rep.motp);
  rep.iou_threshold = iou_threshold;
  rep.misses = clear.misses;
  rep.false_positives = clear.false_positives;
  rep.id_switches = clear.id_switches;
  rep.gt_boxes = clear.gt_boxes;
  return rep;
}

}  // namespace adaptrack

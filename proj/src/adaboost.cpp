#include "adaptrack/adaboost.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

#include "adaptrack/hungarian.hpp"

namespace adaptrack {

std::vector<LabeledPair> make_pairs(
    std::span<const Track> ground_truth,
    std::span<const std::vector<Detection>> detections_by_frame,
    int temporal_window, std::uint64_t seed, double negative_ratio,
    double label_iou) {
  if (temporal_window <= 0)
    throw std::invalid_argument("make_pairs: temporal window must be positive");
  if (ground_truth.empty())
    throw std::invalid_argument("make_pairs: empty ground truth");

  // Transfer ground-truth identities to the detections frame by frame.
  std::map<int, std::vector<const Detection*>> labeled;  // gt id -> detections
  for (const auto& frame_dets : detections_by_frame) {
    if (frame_dets.empty()) continue;
    const int frame = frame_dets.front().frame;
    std::vector<const Track*> present;
    for (const Track& t : ground_truth)
      if (t.at_frame(frame) != nullptr) present.push_back(&t);
    if (present.empty()) continue;

    Eigen::MatrixXd overlap(present.size(), frame_dets.size());
    for (std::size_t i = 0; i < present.size(); ++i)
      for (std::size_t j = 0; j < frame_dets.size(); ++j)
        overlap(i, j) = iou(present[i]->at_frame(frame)->bbox, frame_dets[j].bbox);
    const std::vector<int> match = max_score_assignment(overlap, label_iou);
    for (std::size_t i = 0; i < present.size(); ++i)
      if (match[i] >= 0)
        labeled[present[i]->id].push_back(&frame_dets[match[i]]);
  }

  std::vector<LabeledPair> pairs;
  for (const auto& [id, dets] : labeled) {
    for (std::size_t k = 0; k + 1 < dets.size(); ++k) {
      if (dets[k + 1]->frame - dets[k]->frame <= temporal_window)
        pairs.push_back({*dets[k], *dets[k + 1], +1});
    }
  }
  const std::size_t positives = pairs.size();

  // Candidate negatives held as index pairs until the sample is drawn.
  struct Candidate {
    const Detection* a;
    const Detection* b;
  };
  std::vector<Candidate> candidates;
  for (auto ia = labeled.begin(); ia != labeled.end(); ++ia) {
    for (auto ib = std::next(ia); ib != labeled.end(); ++ib) {
      for (const Detection* da : ia->second) {
        for (const Detection* db : ib->second) {
          if (std::abs(da->frame - db->frame) <= temporal_window)
            candidates.push_back({da, db});
        }
      }
    }
  }

  const std::size_t cap =
      static_cast<std::size_t>(negative_ratio * static_cast<double>(positives));
  if (candidates.size() > cap) {
    std::mt19937_64 rng(seed);
    std::shuffle(candidates.begin(), candidates.end(), rng);
    candidates.resize(cap);
  }
  for (const Candidate& c : candidates) pairs.push_back({*c.a, *c.b, -1});
  return pairs;
}

BoostResult adaboost_weights(std::span<const LabeledPair> pairs,
                             const BoostConfig& cfg) {
  const std::size_t n = pairs.size();
  bool has_pos = false, has_neg = false;
  for (const LabeledPair& p : pairs) (p.label > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg)
    throw std::invalid_argument("adaboost_weights: need both labels present");

  const int grid = cfg.threshold_grid;
  if (grid < 2) throw std::invalid_argument("adaboost_weights: grid too small");

  // cell = number of grid thresholds at or below the similarity value; the
  // stump (k, g, +) predicts +1 exactly for cells >= g.
  std::vector<std::array<int, 5>> cell(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (int k = 0; k < 5; ++k) {
      const double s = link_similarity(k, pairs[i].a, pairs[i].b, cfg.similarity);
      int c = static_cast<int>(std::floor(s * (grid - 1)));
      cell[i][k] = std::clamp(c, 0, grid - 1);
    }
  }

  std::vector<double> weight(n, 1.0 / static_cast<double>(n));
  std::vector<double> margin(n, 0.0);  // running ensemble score per pair
  Weights5 alpha_sum = Weights5::Zero();
  BoostResult result;
  result.round_errors.reserve(cfg.rounds);

  for (int round = 0; round < cfg.rounds; ++round) {
    int best_k = -1, best_g = 0, best_pol = +1;
    double best_err = 2.0;

    for (int k = 0; k < 5; ++k) {
      std::vector<double> wpos(grid, 0.0), wneg(grid, 0.0);
      for (std::size_t i = 0; i < n; ++i)
        (pairs[i].label > 0 ? wpos : wneg)[cell[i][k]] += weight[i];

      // err(+, g) = weight of negatives predicted + plus positives predicted -.
      // Ties within rounding dust keep the first stump scanned (lowest k, g).
      constexpr double kTieTol = 1e-12;
      double neg_suffix = 0.0;
      for (int c = 0; c < grid; ++c) neg_suffix += wneg[c];
      double pos_prefix = 0.0;
      for (int g = 0; g < grid; ++g) {
        const double err_plus = neg_suffix + pos_prefix;
        const double err_minus = 1.0 - err_plus;
        if (err_plus < best_err - kTieTol) {
          best_err = err_plus;
          best_k = k;
          best_g = g;
          best_pol = +1;
        }
        if (err_minus < best_err - kTieTol) {
          best_err = err_minus;
          best_k = k;
          best_g = g;
          best_pol = -1;
        }
        neg_suffix -= wneg[g];
        pos_prefix += wpos[g];
      }
    }

    const double eps =
        std::clamp(best_err, cfg.error_clamp, 1.0 - cfg.error_clamp);
    const double alpha = 0.5 * std::log((1.0 - eps) / eps);
    alpha_sum[best_k] += alpha;

    double norm = 0.0;
    std::size_t wrong = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const int h = (cell[i][best_k] >= best_g ? +1 : -1) * best_pol;
      weight[i] *= std::exp(-alpha * pairs[i].label * h);
      norm += weight[i];
      margin[i] += alpha * h;
      if (margin[i] * pairs[i].label <= 0.0) ++wrong;
    }
    for (double& w : weight) w /= norm;
    result.round_errors.push_back(static_cast<double>(wrong) /
                                  static_cast<double>(n));
  }

  const double total = alpha_sum.sum();
  result.weights = total > 0.0 ? Weights5(alpha_sum / total)
                               : Weights5(Weights5::Constant(0.2));
  return result;
}

}  // namespace adaptrack

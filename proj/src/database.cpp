#include "adaptrack/database.hpp"

#include <algorithm>
#include <stdexcept>

#include "adaptrack/qt_cluster.hpp"

namespace adaptrack {

TrackerParams cluster_params(
    std::span<const std::pair<TrackerParams, int>> members) {
  if (members.empty())
    throw std::invalid_argument("cluster_params: no members");
  Weights5 acc = Weights5::Zero();
  double total = 0.0;
  for (const auto& [params, length] : members) {
    acc += static_cast<double>(length) * params.w();
    total += static_cast<double>(length);
  }
  if (total <= 0.0)
    throw std::invalid_argument("cluster_params: non-positive total length");
  return TrackerParams(acc / total, members.front().first.temporal_window());
}

ContextSignature merge_signatures(std::span<const ContextSignature* const> members) {
  ContextSignature merged;
  for (const ContextSignature* m : members) {
    merged.frame_count += m->frame_count;
    for (int f = 0; f < 6; ++f) {
      for (const CodeWord& w : m->books[f]) {
        auto same = std::find_if(
            merged.books[f].begin(), merged.books[f].end(), [&](const CodeWord& o) {
              return o.center == w.center && o.radius == w.radius;
            });
        if (same != merged.books[f].end())
          same->count += w.count;
        else
          merged.books[f].push_back(w);
      }
    }
  }
  return merged;
}

namespace {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t video, std::uint64_t chunk) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (video + 1) + 0xbf58476d1ce4e5b9ULL * (chunk + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Ground-truth observations per frame, the annotated objects of the offline phase.
std::vector<std::vector<Detection>> gt_by_frame(const SceneSequence& seq) {
  std::vector<std::vector<Detection>> frames(seq.frame_count());
  for (const Track& t : *seq.ground_truth)
    for (const auto& [frame, det] : t.observations)
      if (frame >= 0 && frame < seq.frame_count()) frames[frame].push_back(det);
  return frames;
}

std::vector<Track> clip_tracks(std::span<const Track> tracks, int start, int end) {
  std::vector<Track> out;
  for (const Track& t : tracks) {
    Track clipped;
    clipped.id = t.id;
    for (const auto& [frame, det] : t.observations)
      if (frame >= start && frame <= end) clipped.observations.emplace(frame, det);
    if (!clipped.empty()) out.push_back(std::move(clipped));
  }
  return out;
}

}  // namespace

LearnedDatabase build_database(
    std::span<const std::pair<std::string, SceneSequence>> training,
    const LearnConfig& cfg, LearnReport* report) {
  LearnReport local;
  LearnReport& rep = report != nullptr ? *report : local;

  struct ChunkResult {
    ContextSignature signature;
    TrackerParams params;
    ChunkProvenance provenance;
  };
  std::vector<ChunkResult> results;

  for (std::size_t v = 0; v < training.size(); ++v) {
    const auto& [name, seq] = training[v];
    if (!seq.ground_truth.has_value() || seq.ground_truth->empty())
      throw std::invalid_argument("build_database: sequence '" + name +
                                  "' has no ground truth");

    const auto annotated = gt_by_frame(seq);
    std::vector<FeatureVec> features(annotated.size());
    for (std::size_t f = 0; f < annotated.size(); ++f)
      features[f] = frame_features(annotated[f], seq.frame_width, seq.frame_height,
                                   cfg.context.neighbor_alpha);
    if (features.empty()) {
      rep.warnings.push_back("video '" + name + "' has no frames, skipped");
      continue;
    }

    const std::vector<ContextChunk> chunks = segment(features, cfg.context);
    int used = 0;
    for (std::size_t c = 0; c < chunks.size(); ++c) {
      ++rep.chunks_total;
      const ContextChunk& chunk = chunks[c];
      const std::vector<Track> gt = clip_tracks(*seq.ground_truth, chunk.start, chunk.end);
      if (gt.empty()) {
        rep.warnings.push_back("video '" + name + "' chunk [" +
                               std::to_string(chunk.start) + "," +
                               std::to_string(chunk.end) +
                               "]: no annotated objects, skipped");
        continue;
      }
      const int det_end = std::min(chunk.end, seq.frame_count() - 1);
      std::vector<std::vector<Detection>> chunk_dets;
      for (int f = chunk.start; f <= det_end; ++f)
        chunk_dets.push_back(seq.detections_by_frame[f]);
      const std::vector<LabeledPair> pairs =
          make_pairs(gt, chunk_dets, cfg.temporal_window, mix_seed(cfg.seed, v, c),
                     cfg.negative_ratio);
      const bool has_pos = std::any_of(pairs.begin(), pairs.end(),
                                       [](const LabeledPair& p) { return p.label > 0; });
      const bool has_neg = std::any_of(pairs.begin(), pairs.end(),
                                       [](const LabeledPair& p) { return p.label < 0; });
      if (!has_pos || !has_neg) {
        rep.warnings.push_back("video '" + name + "' chunk [" +
                               std::to_string(chunk.start) + "," +
                               std::to_string(chunk.end) +
                               "]: not enough labeled pairs, skipped");
        continue;
      }
      const BoostResult boost = adaboost_weights(pairs, cfg.boost);
      results.push_back({chunk.signature,
                         TrackerParams(boost.weights, cfg.temporal_window),
                         {name, chunk.start, chunk.end, chunk.length()}});
      ++rep.chunks_used;
      ++used;
    }
    if (used == 0)
      rep.warnings.push_back("video '" + name + "' produced no usable chunks");
  }

  LearnedDatabase db;
  db.config = cfg;
  if (results.empty()) return db;

  std::vector<ContextSignature> signatures;
  signatures.reserve(results.size());
  for (const ChunkResult& r : results) signatures.push_back(r.signature);

  const std::vector<std::vector<int>> groups =
      qt_cluster(signatures, cfg.qt_diameter);

  for (std::size_t g = 0; g < groups.size(); ++g) {
    ClusterEntry entry;
    entry.id = static_cast<int>(g);
    std::vector<const ContextSignature*> member_sigs;
    std::vector<std::pair<TrackerParams, int>> member_params;
    for (int idx : groups[g]) {
      member_sigs.push_back(&results[idx].signature);
      member_params.emplace_back(results[idx].params, results[idx].provenance.length);
      entry.provenance.push_back(results[idx].provenance);
    }
    entry.signature = merge_signatures(member_sigs);
    entry.params = cluster_params(member_params);
    db.clusters.push_back(std::move(entry));
  }
  return db;
}

}  // namespace adaptrack

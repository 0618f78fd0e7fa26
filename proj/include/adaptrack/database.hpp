#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "adaptrack/adaboost.hpp"
#include "adaptrack/context.hpp"
#include "adaptrack/types.hpp"

namespace adaptrack {

struct ChunkProvenance {
  std::string video;
  int start = 0;
  int end = 0;
  int length = 0;
};

struct ClusterEntry {
  int id = 0;
  ContextSignature signature;  // merged over member chunks, no raw window
  TrackerParams params;
  std::vector<ChunkProvenance> provenance;
};

struct LearnConfig {
  ContextConfig context;
  BoostConfig boost;
  double qt_diameter = 0.3;
  int temporal_window = 10;
  double negative_ratio = 3.0;
  std::uint64_t seed = 1;
};

struct LearnedDatabase {
  int version = 1;
  LearnConfig config;
  std::vector<ClusterEntry> clusters;
};

/// Chunk-length-weighted mean of the member weight vectors, renormalized.
TrackerParams cluster_params(
    std::span<const std::pair<TrackerParams, int>> members);

/// Union of the member code-books per feature; words with identical center and
/// radius coalesce with counts summed. Raw window vectors are dropped.
ContextSignature merge_signatures(std::span<const ContextSignature* const> members);

struct LearnReport {
  int chunks_total = 0;
  int chunks_used = 0;
  std::vector<std::string> warnings;
};

/// The offline phase over a training set of annotated sequences: contextual
/// features, chunk segmentation, per-chunk Adaboost weights, QT clustering of
/// chunk contexts, and per-cluster parameter computation. Deterministic given
/// inputs and config.
LearnedDatabase build_database(
    std::span<const std::pair<std::string, SceneSequence>> training,
    const LearnConfig& cfg, LearnReport* report = nullptr);

}  // namespace adaptrack

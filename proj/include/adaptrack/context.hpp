#pragma once

#include <array>
#include <span>
#include <vector>

#include "adaptrack/types.hpp"

namespace adaptrack {

/// Six contextual features of one frame, all in [0,1].
using FeatureVec = Eigen::Matrix<double, 6, 1>;

enum ContextFeature : int {
  kFeatDensity = 0,
  kFeatOcclusion = 1,
  kFeatContrast = 2,
  kFeatContrastVar = 3,
  kFeatArea = 4,
  kFeatAreaVar = 5,
};

struct ContextConfig {
  double codeword_radius = 0.1;  // per-feature quantization cell half-width
  int min_chunk_len = 50;
  int break_patience = 5;   // consecutive unstable frames that cut a chunk
  int match_quorum = 3;     // features that must match for a frame to be stable
  double neighbor_alpha = 1.5;
};

struct CodeWord {
  double center = 0;
  double radius = 0;
  long count = 0;
};

using CodeBook = std::vector<CodeWord>;

/// Absorbs one value: the nearest code-word within `radius` takes it (running
/// mean, count + 1), otherwise a fresh word is appended.
void codebook_update(CodeBook& book, double value, double radius);

/// True when the value falls inside any code-word's cell.
bool codebook_matches(const CodeBook& book, double value);

/// Code-book summary of a span of frames: one book per context feature.
/// Signatures built from frames retain the raw per-frame vectors, which the
/// asymmetric context distance needs on its window side. Merged cluster
/// signatures drop them.
struct ContextSignature {
  std::array<CodeBook, 6> books;
  long frame_count = 0;
  std::vector<FeatureVec> window;

  void absorb(const FeatureVec& v, double radius);
};

/// Context features of one frame of detections. Empty frame -> all zeros.
FeatureVec frame_features(std::span<const Detection> detections, int frame_width,
                          int frame_height, double neighbor_alpha = 1.5);

struct ContextChunk {
  int start = 0;  // inclusive
  int end = 0;    // inclusive
  ContextSignature signature;

  int length() const { return end - start + 1; }
};

/// Splits a feature sequence into consecutive stable-context chunks. A chunk
/// is cut after `break_patience` consecutive frames where fewer than
/// `match_quorum` features match the chunk's books; chunks shorter than
/// `min_chunk_len` are merged into a neighbor where one exists.
std::vector<ContextChunk> segment(std::span<const FeatureVec> frames,
                                  const ContextConfig& cfg = {});

/// 1 - (matched feature values) / (6 * frames): the fraction of the window's
/// raw values that fall outside the cluster's code-words. Asymmetric.
double context_distance(const ContextSignature& window,
                        const ContextSignature& cluster);

/// Max of the two directed distances; used when clustering chunk signatures.
double symmetric_context_distance(const ContextSignature& a,
                                  const ContextSignature& b);

/// Builds a fresh signature over the given frames (typically the last n).
ContextSignature window_signature(std::span<const FeatureVec> frames,
                                  double codeword_radius = 0.1);

}  // namespace adaptrack

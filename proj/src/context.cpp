#include "adaptrack/context.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "adaptrack/quality.hpp"

namespace adaptrack {

void codebook_update(CodeBook& book, double value, double radius) {
  CodeWord* nearest = nullptr;
  double best = radius;
  for (CodeWord& w : book) {
    const double d = std::abs(value - w.center);
    if (d <= best) {
      best = d;
      nearest = &w;
    }
  }
  if (nearest != nullptr) {
    nearest->center =
        (nearest->center * static_cast<double>(nearest->count) + value) /
        static_cast<double>(nearest->count + 1);
    nearest->count += 1;
  } else {
    book.push_back({value, radius, 1});
  }
}

bool codebook_matches(const CodeBook& book, double value) {
  return std::any_of(book.begin(), book.end(), [&](const CodeWord& w) {
    return std::abs(value - w.center) <= w.radius;
  });
}

void ContextSignature::absorb(const FeatureVec& v, double radius) {
  for (int f = 0; f < 6; ++f) codebook_update(books[f], v[f], radius);
  window.push_back(v);
  frame_count += 1;
}

namespace {

double population_variance(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  double mean = 0.0;
  for (double x : xs) mean += x;
  mean /= static_cast<double>(xs.size());
  double acc = 0.0;
  for (double x : xs) acc += (x - mean) * (x - mean);
  return acc / static_cast<double>(xs.size());
}

// Stability rule shared by segment(): at least match_quorum of the six
// feature values fall inside the chunk's books.
int matching_features(const std::array<CodeBook, 6>& books, const FeatureVec& v) {
  int matches = 0;
  for (int f = 0; f < 6; ++f)
    if (codebook_matches(books[f], v[f])) ++matches;
  return matches;
}

}  // namespace

FeatureVec frame_features(std::span<const Detection> detections, int frame_width,
                          int frame_height, double neighbor_alpha) {
  FeatureVec v = FeatureVec::Zero();
  if (detections.empty()) return v;

  const double frame_area = static_cast<double>(frame_width) * frame_height;
  const std::size_t n = detections.size();

  std::vector<BBox> boxes(n);
  for (std::size_t i = 0; i < n; ++i) boxes[i] = detections[i].bbox;

  double area_sum = 0.0;
  std::vector<double> contrasts(n), areas(n);
  for (std::size_t i = 0; i < n; ++i) {
    areas[i] = boxes[i].area() / frame_area;
    area_sum += boxes[i].area();
    contrasts[i] = detections[i].appearance.contrast;
  }

  double occ_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double level = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      const double reach =
          neighbor_alpha * 0.5 * (boxes[i].diagonal() + boxes[j].diagonal());
      if (center_distance(boxes[i], boxes[j]) <= reach)
        level = std::max(level, occlusion_pair(boxes[i], boxes[j]));
    }
    occ_sum += level;
  }

  double contrast_mean = 0.0, area_mean = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    contrast_mean += contrasts[i];
    area_mean += areas[i];
  }
  contrast_mean /= static_cast<double>(n);
  area_mean /= static_cast<double>(n);

  // Variances of [0,1] variables are normalized by their maximum 0.25.
  v[kFeatDensity] = std::min(1.0, area_sum / frame_area);
  v[kFeatOcclusion] = occ_sum / static_cast<double>(n);
  v[kFeatContrast] = contrast_mean;
  v[kFeatContrastVar] = std::min(1.0, population_variance(contrasts) / 0.25);
  v[kFeatArea] = std::min(1.0, area_mean);
  v[kFeatAreaVar] = std::min(1.0, population_variance(areas) / 0.25);
  return v;
}

std::vector<ContextChunk> segment(std::span<const FeatureVec> frames,
                                  const ContextConfig& cfg) {
  if (frames.empty()) throw std::invalid_argument("segment: empty feature sequence");

  std::vector<ContextChunk> chunks;
  ContextSignature sig;
  int chunk_start = 0;
  std::vector<FeatureVec> pending;  // consecutive unstable frames, not yet owned
  int pending_start = 0;

  auto start_chunk = [&](int at, std::span<const FeatureVec> seed) {
    sig = ContextSignature{};
    chunk_start = at;
    for (const FeatureVec& v : seed) sig.absorb(v, cfg.codeword_radius);
  };

  auto finalize_chunk = [&](int end) {
    chunks.push_back({chunk_start, end, std::move(sig)});
    sig = ContextSignature{};
  };

  for (int t = 0; t < static_cast<int>(frames.size()); ++t) {
    const FeatureVec& v = frames[t];
    const bool stable =
        sig.frame_count == 0 || matching_features(sig.books, v) >= cfg.match_quorum;

    if (stable) {
      for (const FeatureVec& p : pending) sig.absorb(p, cfg.codeword_radius);
      pending.clear();
      sig.absorb(v, cfg.codeword_radius);
    } else {
      if (pending.empty()) pending_start = t;
      pending.push_back(v);
      if (static_cast<int>(pending.size()) >= cfg.break_patience) {
        finalize_chunk(pending_start - 1);
        start_chunk(pending_start, pending);
        pending.clear();
      }
    }
  }

  // Trailing unstable frames were too few to open a chunk of their own.
  for (const FeatureVec& p : pending) sig.absorb(p, cfg.codeword_radius);
  finalize_chunk(static_cast<int>(frames.size()) - 1);

  // Merge short chunks into a neighbor (predecessor first) so every emitted
  // chunk meets min_chunk_len whenever the input allows it.
  for (std::size_t i = 0; i < chunks.size();) {
    if (chunks[i].length() >= cfg.min_chunk_len || chunks.size() == 1) {
      ++i;
      continue;
    }
    const std::size_t target = i > 0 ? i - 1 : i + 1;
    ContextChunk& dst = chunks[target];
    ContextChunk& src = chunks[i];
    if (target < i) {
      dst.end = src.end;
      for (const FeatureVec& v : src.signature.window)
        dst.signature.absorb(v, cfg.codeword_radius);
    } else {
      // Prepend: rebuild the successor from the union, preserving frame order.
      ContextSignature merged;
      for (const FeatureVec& v : src.signature.window)
        merged.absorb(v, cfg.codeword_radius);
      for (const FeatureVec& v : dst.signature.window)
        merged.absorb(v, cfg.codeword_radius);
      dst.start = src.start;
      dst.signature = std::move(merged);
    }
    chunks.erase(chunks.begin() + static_cast<std::ptrdiff_t>(i));
    if (i > 0) --i;
  }

  return chunks;
}

double context_distance(const ContextSignature& window,
                        const ContextSignature& cluster) {
  if (window.window.empty())
    throw std::invalid_argument("context_distance: window signature has no raw vectors");
  long matched = 0;
  for (const FeatureVec& v : window.window)
    for (int f = 0; f < 6; ++f)
      if (codebook_matches(cluster.books[f], v[f])) ++matched;
  const long total = 6 * static_cast<long>(window.window.size());
  return 1.0 - static_cast<double>(matched) / static_cast<double>(total);
}

double symmetric_context_distance(const ContextSignature& a,
                                  const ContextSignature& b) {
  return std::max(context_distance(a, b), context_distance(b, a));
}

ContextSignature window_signature(std::span<const FeatureVec> frames,
                                  double codeword_radius) {
  if (frames.empty())
    throw std::invalid_argument("window_signature: no frames");
  ContextSignature sig;
  for (const FeatureVec& v : frames) sig.absorb(v, codeword_radius);
  return sig;
}

}  // namespace adaptrack

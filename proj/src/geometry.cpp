#include "adaptrack/geometry.hpp"

#include <algorithm>
#include <stdexcept>
#include <vector>

namespace adaptrack {

double intersection_area(const BBox& a, const BBox& b) {
  const double ix = std::min(a.right(), b.right()) - std::max(a.x, b.x);
  const double iy = std::min(a.bottom(), b.bottom()) - std::max(a.y, b.y);
  if (ix <= 0.0 || iy <= 0.0) return 0.0;
  return ix * iy;
}

double iou(const BBox& a, const BBox& b) {
  const double inter = intersection_area(a, b);
  const double uni = a.area() + b.area() - inter;
  return uni > 0.0 ? inter / uni : 0.0;
}

BBox cover_rect(std::span<const BBox> boxes) {
  if (boxes.empty()) throw std::invalid_argument("cover_rect: empty box list");
  double x0 = boxes[0].x, y0 = boxes[0].y;
  double x1 = boxes[0].right(), y1 = boxes[0].bottom();
  for (const BBox& b : boxes.subspan(1)) {
    x0 = std::min(x0, b.x);
    y0 = std::min(y0, b.y);
    x1 = std::max(x1, b.right());
    y1 = std::max(y1, b.bottom());
  }
  return {x0, y0, x1 - x0, y1 - y0};
}

double union_area(std::span<const BBox> boxes) {
  if (boxes.empty()) throw std::invalid_argument("union_area: empty box list");

  // reused across calls; this sits on the per-object hot path of the evaluator
  thread_local std::vector<double> xs;
  thread_local std::vector<std::pair<double, double>> spans;

  xs.clear();
  xs.reserve(boxes.size() * 2);
  for (const BBox& b : boxes) {
    xs.push_back(b.x);
    xs.push_back(b.right());
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

  double total = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double slab_w = xs[i + 1] - xs[i];
    if (slab_w <= 0.0) continue;
    const double mid = xs[i];

    spans.clear();
    for (const BBox& b : boxes) {
      if (b.x <= mid && b.right() > mid) spans.emplace_back(b.y, b.bottom());
    }
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());

    // union length of the y intervals in this slab
    double covered = 0.0;
    double cur_lo = spans[0].first, cur_hi = spans[0].second;
    for (std::size_t k = 1; k < spans.size(); ++k) {
      if (spans[k].first > cur_hi) {
        covered += cur_hi - cur_lo;
        cur_lo = spans[k].first;
        cur_hi = spans[k].second;
      } else {
        cur_hi = std::max(cur_hi, spans[k].second);
      }
    }
    covered += cur_hi - cur_lo;
    total += covered * slab_w;
  }
  return total;
}

double center_distance(const BBox& a, const BBox& b) {
  const double dx = a.cx() - b.cx();
  const double dy = a.cy() - b.cy();
  return std::sqrt(dx * dx + dy * dy);
}

}  // namespace adaptrack

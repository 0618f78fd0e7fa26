#pragma once

#include <cmath>
#include <span>

namespace adaptrack {

/// Axis-aligned bounding box, top-left origin, real-valued pixel units.
struct BBox {
  double x = 0.0;
  double y = 0.0;
  double w = 0.0;
  double h = 0.0;

  double area() const { return w * h; }
  double right() const { return x + w; }
  double bottom() const { return y + h; }
  double cx() const { return x + 0.5 * w; }
  double cy() const { return y + 0.5 * h; }
  double diagonal() const { return std::sqrt(w * w + h * h); }
  bool valid() const { return w > 0.0 && h > 0.0; }
};

double intersection_area(const BBox& a, const BBox& b);

double iou(const BBox& a, const BBox& b);

/// Smallest axis-aligned rectangle covering all boxes. Input must be non-empty.
BBox cover_rect(std::span<const BBox> boxes);

/// Exact area of the geometric union (coordinate-compression sweep over x slabs).
double union_area(std::span<const BBox> boxes);

double center_distance(const BBox& a, const BBox& b);

}  // namespace adaptrack

#pragma once

#include <string>

namespace pcd {

// Axis-aligned box in pixel coordinates, corners (x1,y1) top-left and
// (x2,y2) bottom-right after normalization. A missing detection is an
// absent optional<BoundingBox>, never a zero-area box.
struct BoundingBox {
  double x1 = 0.0;
  double y1 = 0.0;
  double x2 = 0.0;
  double y2 = 0.0;

  // Annotation tools disagree on corner order; swap instead of rejecting.
  // Throws InputError when the box is degenerate (zero width or height)
  // or has non-finite coordinates.
  static BoundingBox normalized(double x1, double y1, double x2, double y2);

  double width() const { return x2 - x1; }
  double height() const { return y2 - y1; }
  double area() const { return width() * height(); }
  bool valid() const;
};

// Intersection-over-union of two valid boxes. Symmetric, in [0, 1].
// Throws InputError when either box is invalid.
double compute_iou(const BoundingBox& a, const BoundingBox& b);

// Product of IoU and confidence. Both inputs must lie in [0, 1].
double compute_quality_score(double iou, double confidence);

}  // namespace pcd

#include "pcd/geometry.hpp"

#include <algorithm>
#include <cmath>

#include "pcd/errors.hpp"

namespace pcd {

BoundingBox BoundingBox::normalized(double x1, double y1, double x2, double y2) {
  for (double v : {x1, y1, x2, y2}) {
    if (!std::isfinite(v)) {
      throw InputError("bounding box has non-finite coordinate");
    }
  }
  if (x1 > x2) std::swap(x1, x2);
  if (y1 > y2) std::swap(y1, y2);
  BoundingBox box{x1, y1, x2, y2};
  if (!box.valid()) {
    throw InputError("bounding box is degenerate (zero width or height)");
  }
  return box;
}

bool BoundingBox::valid() const {
  return std::isfinite(x1) && std::isfinite(y1) && std::isfinite(x2) && std::isfinite(y2) &&
         x2 > x1 && y2 > y1;
}

double compute_iou(const BoundingBox& a, const BoundingBox& b) {
  if (!a.valid() || !b.valid()) {
    throw InputError("compute_iou requires valid boxes");
  }
  const double ix = std::max(0.0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
  const double iy = std::max(0.0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
  const double inter = ix * iy;
  const double uni = a.area() + b.area() - inter;
  const double iou = inter / uni;
  return std::clamp(iou, 0.0, 1.0);
}

double compute_quality_score(double iou, double confidence) {
  if (!(iou >= 0.0 && iou <= 1.0)) {
    throw InputError("iou outside [0, 1]");
  }
  if (!(confidence >= 0.0 && confidence <= 1.0)) {
    throw InputError("confidence outside [0, 1]");
  }
  return iou * confidence;
}

}  // namespace pcd

#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcd/geometry.hpp"

namespace pcd {

// One frame of a detection log. quality_score = IoU(pred, gt) * confidence,
// and exactly 0 when the prediction is absent. gt_box is absent only for
// precomputed-schema logs, which carry no box geometry.
struct DetectionRecord {
  std::string frame_id;
  double distance_m = 0.0;
  std::optional<BoundingBox> gt_box;
  std::optional<BoundingBox> pred_box;
  double confidence = 0.0;
  double quality_score = 0.0;
};

// Distance-sorted (x_i, y_i) pairs, the unit of all statistical processing.
// Invariants enforced at construction: n >= 1, x strictly increasing and
// finite, y in [0, 1].
class DistanceSeries {
 public:
  DistanceSeries(std::vector<double> x, std::vector<double> y);

  std::size_t size() const { return x_.size(); }
  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

// Sorts records by distance and averages the quality scores of records at
// exactly equal distances into one point. Throws InputError on empty input.
DistanceSeries build_series(std::span<const DetectionRecord> records);

}  // namespace pcd

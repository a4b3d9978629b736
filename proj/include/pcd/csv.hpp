#pragma once

#include <istream>
#include <string>
#include <string_view>
#include <vector>

#include "pcd/detection.hpp"

namespace pcd {

// The two accepted CSV layouts. Headers must match exactly:
//   raw_boxes:   frame_id,distance_m,gt_x1,gt_y1,gt_x2,gt_y2,
//                pred_x1,pred_y1,pred_x2,pred_y2,confidence
//   precomputed: frame_id,distance_m,iou,confidence
enum class LogSchema { raw_boxes, precomputed };

// Maps "raw-boxes"/"precomputed" to the enum; throws InputError otherwise.
LogSchema parse_schema_name(std::string_view name);
std::string_view schema_name(LogSchema schema);

// Parses a detection log. Prediction columns may be empty (missing
// detection, quality_score 0). Errors carry the 1-based line number and
// the offending field.
std::vector<DetectionRecord> parse_detection_log(std::istream& in, LogSchema schema);

// File wrapper; prefixes errors with the path.
std::vector<DetectionRecord> load_detection_log(const std::string& path, LogSchema schema);

}  // namespace pcd

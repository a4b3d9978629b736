#include "pcd/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pcd/errors.hpp"
#include "pcd/geometry.hpp"

namespace pcd {
namespace {

constexpr std::string_view kRawHeader =
    "frame_id,distance_m,gt_x1,gt_y1,gt_x2,gt_y2,pred_x1,pred_y1,pred_x2,pred_y2,confidence";
constexpr std::string_view kPrecomputedHeader = "frame_id,distance_m,iou,confidence";

[[noreturn]] void fail(std::size_t line, const std::string& what) {
  throw InputError("line " + std::to_string(line) + ": " + what);
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      break;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, std::size_t line, const char* name) {
  if (field.empty()) {
    fail(line, std::string("field '") + name + "' is empty");
  }
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc{} || ptr != last) {
    fail(line, std::string("field '") + name + "' is not a number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    fail(line, std::string("field '") + name + "' is non-finite");
  }
  return value;
}

// Unit-interval fields tolerate 1e-9 of float noise outside [0, 1].
double parse_unit(std::string_view field, std::size_t line, const char* name) {
  double value = parse_number(field, line, name);
  if (value < -1e-9 || value > 1.0 + 1e-9) {
    fail(line, std::string("field '") + name + "' outside [0, 1]: '" + std::string(field) + "'");
  }
  return std::min(std::max(value, 0.0), 1.0);
}

double parse_distance(std::string_view field, std::size_t line) {
  const double value = parse_number(field, line, "distance_m");
  if (value < 0.0) {
    fail(line, "field 'distance_m' is negative");
  }
  return value;
}

BoundingBox parse_box(const std::vector<std::string_view>& f, std::size_t base, std::size_t line,
                      const char* which) {
  const char* names[4] = {"x1", "y1", "x2", "y2"};
  double v[4];
  for (std::size_t k = 0; k < 4; ++k) {
    const std::string name = std::string(which) + "_" + names[k];
    v[k] = parse_number(f[base + k], line, name.c_str());
  }
  try {
    return BoundingBox::normalized(v[0], v[1], v[2], v[3]);
  } catch (const InputError& e) {
    fail(line, std::string(which) + " box: " + e.what());
  }
}

DetectionRecord parse_raw_row(const std::vector<std::string_view>& f, std::size_t line) {
  if (f.size() != 11) {
    fail(line, "expected 11 fields, got " + std::to_string(f.size()));
  }
  DetectionRecord rec;
  rec.frame_id = std::string(f[0]);
  rec.distance_m = parse_distance(f[1], line);
  rec.gt_box = parse_box(f, 2, line, "gt");
  rec.confidence = parse_unit(f[10], line, "confidence");

  const bool pred_empty = f[6].empty() && f[7].empty() && f[8].empty() && f[9].empty();
  if (pred_empty) {
    rec.pred_box.reset();
    rec.quality_score = 0.0;
  } else {
    rec.pred_box = parse_box(f, 6, line, "pred");
    rec.quality_score =
        compute_quality_score(compute_iou(*rec.pred_box, *rec.gt_box), rec.confidence);
  }
  return rec;
}

DetectionRecord parse_precomputed_row(const std::vector<std::string_view>& f, std::size_t line) {
  if (f.size() != 4) {
    fail(line, "expected 4 fields, got " + std::to_string(f.size()));
  }
  DetectionRecord rec;
  rec.frame_id = std::string(f[0]);
  rec.distance_m = parse_distance(f[1], line);
  const double iou = parse_unit(f[2], line, "iou");
  rec.confidence = parse_unit(f[3], line, "confidence");
  rec.quality_score = compute_quality_score(iou, rec.confidence);
  return rec;
}

}  // namespace

LogSchema parse_schema_name(std::string_view name) {
  if (name == "raw-boxes") return LogSchema::raw_boxes;
  if (name == "precomputed") return LogSchema::precomputed;
  throw InputError("unknown schema '" + std::string(name) +
                   "' (expected 'raw-boxes' or 'precomputed')");
}

std::string_view schema_name(LogSchema schema) {
  return schema == LogSchema::raw_boxes ? "raw-boxes" : "precomputed";
}

std::vector<DetectionRecord> parse_detection_log(std::istream& in, LogSchema schema) {
  const std::string_view want =
      schema == LogSchema::raw_boxes ? kRawHeader : kPrecomputedHeader;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  std::vector<DetectionRecord> records;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    if (line.empty()) {
      continue;
    }
    if (!header_seen) {
      if (line != want) {
        fail(line_no, "header does not match schema '" + std::string(schema_name(schema)) +
                          "' (expected '" + std::string(want) + "')");
      }
      header_seen = true;
      continue;
    }
    const auto fields = split_fields(line);
    records.push_back(schema == LogSchema::raw_boxes ? parse_raw_row(fields, line_no)
                                                     : parse_precomputed_row(fields, line_no));
  }
  if (!header_seen) {
    fail(1, "empty input: missing '" + std::string(want) + "' header");
  }
  return records;
}

std::vector<DetectionRecord> load_detection_log(const std::string& path, LogSchema schema) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw InputError(path + ": cannot open for reading");
  }
  try {
    return parse_detection_log(in, schema);
  } catch (const InputError& e) {
    throw InputError(path + ": " + e.what());
  }
}

}  // namespace pcd

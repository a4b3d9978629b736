#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>

#include "pcd/changepoint.hpp"
#include "pcd/csv.hpp"
#include "pcd/detection.hpp"
#include "pcd/metric.hpp"
#include "pcd/spline.hpp"

namespace pcd {

enum class ReportFormat { json, csv_summary };

ReportFormat parse_report_format(std::string_view name);
std::string_view report_format_name(ReportFormat format);

// Everything one evaluation depends on. parallel_surface only selects the
// execution path and is deliberately absent from the emitted report: equal
// configs produce equal bytes regardless of thread count.
struct EvalConfig {
  SplineConfig spline;
  ChangePointTest test;
  double y_t = 0.5;
  double p_t = 0.5;
  ThresholdGrid grid = ThresholdGrid::default_grid();
  bool parallel_surface = false;

  void validate() const;
};

struct EvaluationReport {
  EvalConfig config;
  DistanceSeries series;
  FittedCurve curve;
  ChangePointResult changepoints;
  SegmentModel model;
  std::optional<double> pcd;
  PcdSurface surface;
  double mean_quality = 0.0;
};

// Fit, detect, model, score, surface — in that order.
EvaluationReport evaluate_series(const DistanceSeries& series, const EvalConfig& config);

// Load + build_series + evaluate_series.
EvaluationReport run_evaluate(const std::string& input_path, LogSchema schema,
                              const EvalConfig& config);

// JSON keys appear in a fixed order and numbers render shortest-round-trip,
// so equal inputs produce byte-identical output. csv_summary is a block of
// "# key=value" scalars followed by one y_t,p_t,pcd_m row per grid cell.
void emit_report(std::ostream& out, const EvaluationReport& report, ReportFormat format);
std::string report_to_string(const EvaluationReport& report, ReportFormat format);

// Inverse of the JSON emitter; embedded series and config make the parsed
// report re-runnable as-is.
EvaluationReport parse_report_json(const std::string& text);

// CSV columns x,f,sigma,p_exceed,marker: `resolution` equally spaced rows
// across the domain (marker 0), then one marker-1 row per change point at
// its detected distance. Rejects resolution < 2.
void emit_curve_trace(std::ostream& out, const EvaluationReport& report, std::size_t resolution);

}  // namespace pcd

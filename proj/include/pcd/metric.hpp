#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "pcd/changepoint.hpp"
#include "pcd/detection.hpp"
#include "pcd/spline.hpp"

namespace pcd {

// Per-segment Gaussian model: y_i ~ N(mu_i, sigma_i^2) with mu_i = f(x_i)
// and sigma constant within each change-point-delimited segment.
struct SegmentModel {
  FittedCurve curve;
  DistanceSeries series;
  std::vector<std::size_t> boundaries;  // tau values partitioning the series
  std::vector<double> sigmas;           // boundaries.size() + 1 entries
};

// Segments are [1,tau_1], [tau_1+1,tau_2], ..., [tau_M+1,n] in 1-based
// point indices. sigma per segment is the sample standard deviation
// (n-1 denominator, 0 for single-point segments) of the segment's y values
// (segment_raw) or residuals (segment_residual).
SegmentModel build_segment_model(const DistanceSeries& series, const FittedCurve& curve,
                                 std::span<const std::size_t> changepoints,
                                 SigmaMode mode = SigmaMode::segment_raw);

// Segment owning 0-based point index i, or owning distance x (points past
// the last observation belong to the last segment).
std::size_t segment_of_index(const SegmentModel& model, std::size_t i);
std::size_t segment_of_x(const SegmentModel& model, double x);
double sigma_at(const SegmentModel& model, double x);

// P(y > y_t) for N(mu, sigma^2) via the complementary error function;
// degenerates to the step 1{mu > y_t} when sigma = 0.
double normal_exceedance(double mu, double sigma, double y_t);

// P(y_i > y_t) for 0-based point index i.
double exceedance_probability(const SegmentModel& model, std::size_t i, double y_t);

// PCD = max{ x_i : P(y_i > y_t) > p_t } over the observed points (strict
// inequality); absent when no point qualifies.
std::optional<double> compute_pcd(const SegmentModel& model, double y_t, double p_t);

// Smooth variant: the same scan over `resolution` equally spaced curve
// evaluations instead of the observed points.
std::optional<double> compute_pcd_dense(const SegmentModel& model, double y_t, double p_t,
                                        std::size_t resolution);

// Detection-quality (y_t) and probability (p_t) threshold axes, strictly
// increasing, inside (0, 1). Default 0.1 to 0.9 step 0.1 on both.
struct ThresholdGrid {
  std::vector<double> y_values;
  std::vector<double> p_values;

  static ThresholdGrid default_grid();
  void validate() const;
};

// PCD over the full grid, row-major over y then p. Absent cells are
// recorded explicitly and count as 0 toward mpcd.
struct PcdSurface {
  ThresholdGrid grid;
  std::vector<std::optional<double>> values;  // size y_values * p_values
  double mpcd = 0.0;

  const std::optional<double>& at(std::size_t iy, std::size_t ip) const;
};

// Cells are independent; `parallel` computes rows concurrently but writes
// into preallocated slots so the result is scheduling-independent.
PcdSurface compute_pcd_surface(const SegmentModel& model, const ThresholdGrid& grid,
                               bool parallel = false);

// Mean over all grid cells in row-major order, absent cells as 0.
// Throws InputError on an empty grid.
double mean_pcd(const PcdSurface& surface);

// Arithmetic mean of the series' quality scores.
double mean_quality_score(const DistanceSeries& series);

}  // namespace pcd

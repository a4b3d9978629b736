#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "pcd/changepoint.hpp"
#include "pcd/detection.hpp"
#include "pcd/metric.hpp"

namespace pcd::synth {

// Trend shapes for the noiseless mean curve over distance.
struct ConstantMean {
  double value = 0.5;
};

struct LinearMean {
  double intercept = 1.0;
  double slope = -0.004;
};

// top / (1 + exp((x - midpoint) / width)): near `top` for x << midpoint,
// decaying to 0 past it. width > 0.
struct LogisticDecayMean {
  double top = 0.9;
  double midpoint = 150.0;
  double width = 25.0;
};

using MeanKind = std::variant<ConstantMean, LinearMean, LogisticDecayMean>;

double mean_at(const MeanKind& mean, double x);

// Piecewise-constant noise: sigma_levels[s] applies from boundary s-1 (or
// the start) up to but excluding boundary s. boundaries are distances,
// strictly increasing, inside (x_min, x_max); sigma_levels has exactly
// boundaries.size() + 1 entries, each >= 0.
struct SynthSpec {
  std::size_t n = 300;
  double x_min = 0.0;
  double x_max = 300.0;
  MeanKind mean = LogisticDecayMean{};
  std::vector<double> sigma_boundaries;
  std::vector<double> sigma_levels = {0.05};
  std::uint64_t seed = 42;

  void validate() const;
};

double sigma_at(const SynthSpec& spec, double x);

// What the generator planted, kept alongside the sample so tests can
// compare detector output against it.
struct GroundTruth {
  std::vector<double> boundaries;          // distances
  std::vector<std::size_t> boundary_taus;  // count of points strictly left of each
  std::vector<double> sigma_levels;
};

struct Generated {
  DistanceSeries series;
  GroundTruth truth;
};

// Equally spaced x over [x_min, x_max]; y_i = clamp(mean(x_i) + sigma(x_i) * z_i, 0, 1)
// with z_i standard normal. Each point draws from its own splitmix64-seeded
// stream, so any prefix of a longer run is reproducible.
Generated generate(const SynthSpec& spec);

// y-values only, deterministic in (seed, i).
double noise_unit(std::uint64_t seed, std::size_t i);

// "key=value" per line, '#' comments. Keys: n, x_min, x_max, seed, mean
// (constant|linear|logistic), mean.value, mean.intercept, mean.slope,
// mean.top, mean.midpoint, mean.width, sigma_boundaries (comma list),
// sigma_levels (comma list).
SynthSpec parse_synth_config(const std::string& text);

// Reference implementations for tests: quadratic-time SIC scan and a direct
// per-point PCD scan, written independently of the library code paths.
struct BruteScan {
  double t_n = 0.0;
  std::size_t tau = 0;
};

BruteScan brute_force_sic_scan(std::span<const double> residuals, std::size_t min_segment);

std::optional<double> brute_force_pcd(std::span<const double> x, std::span<const double> mu,
                                      std::span<const double> sigma, double y_t, double p_t);

// Literal definition scan over a full model: per-point mu from the curve,
// sigma by walking the boundary list, tail probability written out directly.
std::optional<double> brute_force_pcd(const SegmentModel& model, double y_t, double p_t);

}  // namespace pcd::synth

#include "pcd/metric.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numbers>

#include "pcd/errors.hpp"

namespace pcd {
namespace {

double sample_std(std::span<const double> values) {
  const std::size_t n = values.size();
  if (n < 2) {
    return 0.0;
  }
  double sum = 0.0;
  for (double v : values) {
    sum += v;
  }
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) {
    const double d = v - mean;
    ss += d * d;
  }
  return std::sqrt(ss / static_cast<double>(n - 1));
}

void validate_threshold(double value, const char* name) {
  if (!(value > 0.0 && value < 1.0)) {
    throw InputError(std::string(name) + " must lie in (0, 1)");
  }
}

}  // namespace

SegmentModel build_segment_model(const DistanceSeries& series, const FittedCurve& curve,
                                 std::span<const std::size_t> changepoints, SigmaMode mode) {
  const std::size_t n = series.size();
  for (std::size_t m = 0; m < changepoints.size(); ++m) {
    if (changepoints[m] < 1 || changepoints[m] > n - 1) {
      throw InputError("segment model: change point out of range");
    }
    if (m > 0 && changepoints[m] <= changepoints[m - 1]) {
      throw InputError("segment model: change points must be strictly increasing");
    }
  }

  SegmentModel model{curve, series, {changepoints.begin(), changepoints.end()}, {}};
  model.sigmas.reserve(changepoints.size() + 1);
  std::size_t start = 0;
  for (std::size_t s = 0; s <= changepoints.size(); ++s) {
    const std::size_t stop = s < changepoints.size() ? changepoints[s] : n;
    std::vector<double> values(series.y().begin() + static_cast<std::ptrdiff_t>(start),
                               series.y().begin() + static_cast<std::ptrdiff_t>(stop));
    if (mode == SigmaMode::segment_residual) {
      for (std::size_t i = 0; i < values.size(); ++i) {
        values[i] -= evaluate(curve, series.x()[start + i]);
      }
    }
    model.sigmas.push_back(sample_std(values));
    start = stop;
  }
  return model;
}

std::size_t segment_of_index(const SegmentModel& model, std::size_t i) {
  if (i >= model.series.size()) {
    throw InputError("segment lookup: index out of range");
  }
  const auto it = std::upper_bound(model.boundaries.begin(), model.boundaries.end(), i);
  return static_cast<std::size_t>(it - model.boundaries.begin());
}

std::size_t segment_of_x(const SegmentModel& model, double x) {
  const auto& xs = model.series.x();
  const auto it = std::lower_bound(xs.begin(), xs.end(), x);
  const std::size_t i = it == xs.end() ? xs.size() - 1 : static_cast<std::size_t>(it - xs.begin());
  return segment_of_index(model, i);
}

double sigma_at(const SegmentModel& model, double x) {
  return model.sigmas[segment_of_x(model, x)];
}

double normal_exceedance(double mu, double sigma, double y_t) {
  if (!(sigma >= 0.0)) {
    throw InputError("normal_exceedance: sigma must be >= 0");
  }
  if (sigma == 0.0) {
    return mu > y_t ? 1.0 : 0.0;
  }
  return 0.5 * std::erfc((y_t - mu) / (sigma * std::numbers::sqrt2));
}

double exceedance_probability(const SegmentModel& model, std::size_t i, double y_t) {
  validate_threshold(y_t, "y_t");
  if (i >= model.series.size()) {
    throw InputError("exceedance_probability: index out of range");
  }
  const double mu = evaluate(model.curve, model.series.x()[i]);
  return normal_exceedance(mu, model.sigmas[segment_of_index(model, i)], y_t);
}

std::optional<double> compute_pcd(const SegmentModel& model, double y_t, double p_t) {
  validate_threshold(y_t, "y_t");
  validate_threshold(p_t, "p_t");
  for (std::size_t i = model.series.size(); i-- > 0;) {
    if (exceedance_probability(model, i, y_t) > p_t) {
      return model.series.x()[i];
    }
  }
  return std::nullopt;
}

std::optional<double> compute_pcd_dense(const SegmentModel& model, double y_t, double p_t,
                                        std::size_t resolution) {
  validate_threshold(y_t, "y_t");
  validate_threshold(p_t, "p_t");
  if (resolution < 2) {
    throw InputError("compute_pcd_dense: resolution must be >= 2");
  }
  const double lo = model.curve.domain_min;
  const double hi = model.curve.domain_max;
  const double step = (hi - lo) / static_cast<double>(resolution - 1);
  for (std::size_t k = resolution; k-- > 0;) {
    const double x = k + 1 == resolution ? hi : lo + static_cast<double>(k) * step;
    const double mu = evaluate(model.curve, x);
    if (normal_exceedance(mu, sigma_at(model, x), y_t) > p_t) {
      return x;
    }
  }
  return std::nullopt;
}

ThresholdGrid ThresholdGrid::default_grid() {
  ThresholdGrid grid;
  for (int k = 1; k <= 9; ++k) {
    grid.y_values.push_back(static_cast<double>(k) / 10.0);
  }
  grid.p_values = grid.y_values;
  return grid;
}

void ThresholdGrid::validate() const {
  for (const auto* axis : {&y_values, &p_values}) {
    if (axis->empty()) {
      throw InputError("threshold grid: empty axis");
    }
    for (std::size_t i = 0; i < axis->size(); ++i) {
      if (!((*axis)[i] > 0.0 && (*axis)[i] < 1.0)) {
        throw InputError("threshold grid: values must lie in (0, 1)");
      }
      if (i > 0 && !((*axis)[i] > (*axis)[i - 1])) {
        throw InputError("threshold grid: values must be strictly increasing");
      }
    }
  }
}

const std::optional<double>& PcdSurface::at(std::size_t iy, std::size_t ip) const {
  if (iy >= grid.y_values.size() || ip >= grid.p_values.size()) {
    throw InputError("surface: cell index out of range");
  }
  return values[iy * grid.p_values.size() + ip];
}

PcdSurface compute_pcd_surface(const SegmentModel& model, const ThresholdGrid& grid,
                               bool parallel) {
  grid.validate();
  PcdSurface surface;
  surface.grid = grid;
  const std::size_t ny = grid.y_values.size();
  const std::size_t np = grid.p_values.size();
  surface.values.assign(ny * np, std::nullopt);

  const auto fill_row = [&](std::size_t iy) {
    for (std::size_t ip = 0; ip < np; ++ip) {
      surface.values[iy * np + ip] = compute_pcd(model, grid.y_values[iy], grid.p_values[ip]);
    }
  };

  if (parallel && ny > 1) {
    // Rows land in preallocated slots; the result is scheduling-independent.
    std::vector<std::future<void>> rows;
    rows.reserve(ny);
    for (std::size_t iy = 0; iy < ny; ++iy) {
      rows.push_back(std::async(std::launch::async, fill_row, iy));
    }
    for (auto& row : rows) {
      row.get();
    }
  } else {
    for (std::size_t iy = 0; iy < ny; ++iy) {
      fill_row(iy);
    }
  }

  surface.mpcd = mean_pcd(surface);
  return surface;
}

double mean_pcd(const PcdSurface& surface) {
  if (surface.values.empty()) {
    throw InputError("mean_pcd: empty surface");
  }
  double sum = 0.0;
  for (const auto& cell : surface.values) {
    sum += cell.value_or(0.0);
  }
  return sum / static_cast<double>(surface.values.size());
}

double mean_quality_score(const DistanceSeries& series) {
  double sum = 0.0;
  for (double v : series.y()) {
    sum += v;
  }
  return sum / static_cast<double>(series.size());
}

}  // namespace pcd

#include "pcd/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "pcd/errors.hpp"

namespace pcd {

DistanceSeries::DistanceSeries(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty() || x_.size() != y_.size()) {
    throw InputError("series needs at least one (x, y) pair with matching lengths");
  }
  for (std::size_t i = 0; i < x_.size(); ++i) {
    if (!std::isfinite(x_[i])) {
      throw InputError("series distance is non-finite");
    }
    if (i > 0 && !(x_[i] > x_[i - 1])) {
      throw InputError("series distances must be strictly increasing");
    }
    if (!(y_[i] >= 0.0 && y_[i] <= 1.0)) {
      throw InputError("series quality score outside [0, 1]");
    }
  }
}

DistanceSeries build_series(std::span<const DetectionRecord> records) {
  if (records.empty()) {
    throw InputError("build_series: no records");
  }
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].distance_m < records[b].distance_m;
  });

  std::vector<double> x;
  std::vector<double> y;
  x.reserve(records.size());
  y.reserve(records.size());
  std::size_t i = 0;
  while (i < order.size()) {
    const double d = records[order[i]].distance_m;
    double sum = 0.0;
    std::size_t count = 0;
    while (i < order.size() && records[order[i]].distance_m == d) {
      sum += records[order[i]].quality_score;
      ++count;
      ++i;
    }
    x.push_back(d);
    y.push_back(sum / static_cast<double>(count));
  }
  return DistanceSeries(std::move(x), std::move(y));
}

}  // namespace pcd

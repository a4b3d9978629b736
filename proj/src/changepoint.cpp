#include "pcd/changepoint.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "pcd/errors.hpp"

namespace pcd {
namespace {

// Variance floor: exactly-zero residual runs (score-0 tails) must not
// produce log(0).
constexpr double kVarianceFloor = 1e-12;

double mean_square(double sum_sq, std::size_t count) {
  return std::max(sum_sq / static_cast<double>(count), kVarianceFloor);
}

struct WindowScan {
  double t_n = 0.0;
  std::size_t tau = 0;
};

// Comparison mode: both sums centered at the candidate point's fitted value,
// the no-split likelihood centered at the window's last fitted value.
WindowScan scan_split_point(const DistanceSeries& series, const FittedCurve& curve,
                            std::size_t begin, std::size_t end, std::size_t min_segment) {
  const std::size_t n = end - begin;
  const auto& x = series.x();
  const auto& y = series.y();

  const double center_last = evaluate(curve, x[end - 1]);
  double total = 0.0;
  for (std::size_t i = begin; i < end; ++i) {
    const double r = y[i] - center_last;
    total += r * r;
  }
  const double l0 = static_cast<double>(n) * std::log(mean_square(total, n));

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_tau = min_segment;
  for (std::size_t tau = min_segment; tau + min_segment <= n; ++tau) {
    const double center = evaluate(curve, x[begin + tau - 1]);
    double left = 0.0;
    double right = 0.0;
    for (std::size_t i = begin; i < begin + tau; ++i) {
      const double r = y[i] - center;
      left += r * r;
    }
    for (std::size_t i = begin + tau; i < end; ++i) {
      const double r = y[i] - center;
      right += r * r;
    }
    const double l = static_cast<double>(tau) * std::log(mean_square(left, tau)) +
                     static_cast<double>(n - tau) * std::log(mean_square(right, n - tau));
    if (l < best) {
      best = l;
      best_tau = tau;
    }
  }
  return {std::log(static_cast<double>(n)) - (best - l0), best_tau};
}

}  // namespace

void ChangePointTest::validate() const {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("changepoint: alpha must lie in (0, 1)");
  }
  if (min_segment < 2) {
    throw InputError("changepoint: min_segment must be >= 2");
  }
}

double split_log_likelihood(std::span<const double> residuals, std::size_t tau) {
  const std::size_t n = residuals.size();
  if (tau < 1 || tau > n - 1 || n < 2) {
    throw InputError("split_log_likelihood: tau must lie in [1, n-1]");
  }
  double left = 0.0;
  for (std::size_t i = 0; i < tau; ++i) {
    left += residuals[i] * residuals[i];
  }
  double right = 0.0;
  for (std::size_t i = tau; i < n; ++i) {
    right += residuals[i] * residuals[i];
  }
  return static_cast<double>(tau) * std::log(mean_square(left, tau)) +
         static_cast<double>(n - tau) * std::log(mean_square(right, n - tau));
}

SicScan sic_statistic(std::span<const double> residuals, int min_segment) {
  if (min_segment < 1) {
    throw InputError("sic_statistic: min_segment must be >= 1");
  }
  const std::size_t n = residuals.size();
  const auto ms = static_cast<std::size_t>(min_segment);
  if (n < 2 * ms) {
    throw InputError("sic_statistic: need at least 2 * min_segment points");
  }

  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    prefix[i + 1] = prefix[i] + residuals[i] * residuals[i];
  }
  std::vector<double> suffix(n + 1, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    suffix[i] = suffix[i + 1] + residuals[i] * residuals[i];
  }

  const double l0 = static_cast<double>(n) * std::log(mean_square(prefix[n], n));

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_tau = ms;
  for (std::size_t tau = ms; tau + ms <= n; ++tau) {
    const double l = static_cast<double>(tau) * std::log(mean_square(prefix[tau], tau)) +
                     static_cast<double>(n - tau) * std::log(mean_square(suffix[tau], n - tau));
    if (l < best) {
      best = l;
      best_tau = tau;
    }
  }
  return {std::log(static_cast<double>(n)) - (best - l0), best_tau};
}

CriticalConstants critical_threshold(std::size_t n, double alpha) {
  if (n < 20) {
    throw InputError(
        "critical_threshold: n must be >= 20 (the asymptotic constants need "
        "log log log n; widen the window or raise min_segment)");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw InputError("critical_threshold: alpha must lie in (0, 1)");
  }
  const double log_n = std::log(static_cast<double>(n));
  const double loglog = std::log(log_n);
  const double logloglog = std::log(loglog);
  const double log_gamma_half = 0.5 * std::log(std::numbers::pi);

  CriticalConstants c;
  c.a_n = std::sqrt(2.0 * loglog) / log_n;
  c.b_n = (2.0 * loglog + 0.5 * logloglog - log_gamma_half) / log_n;
  c.c_alpha = -std::log(-std::log(1.0 - alpha) / 2.0);
  return c;
}

double tn_threshold(std::size_t n, double alpha, RejectionRule rule) {
  const CriticalConstants c = critical_threshold(n, alpha);
  const double log_n = std::log(static_cast<double>(n));
  if (rule == RejectionRule::gumbel_sqrt) {
    // a_n log n = sqrt(2 log log n) scales sqrt(T_n - log n); invert for T_n.
    const double a = c.a_n * log_n;
    const double b = c.b_n * log_n;
    const double root = (c.c_alpha + b) / a;
    return log_n + root * root;
  }
  return (c.c_alpha + c.b_n * log_n) / (c.a_n * std::sqrt(log_n));
}

std::vector<double> residuals_of(const DistanceSeries& series, const FittedCurve& curve) {
  std::vector<double> r(series.size());
  for (std::size_t i = 0; i < series.size(); ++i) {
    r[i] = series.y()[i] - evaluate(curve, series.x()[i]);
  }
  return r;
}

std::optional<TestStatistics> detect_single(const DistanceSeries& series, const FittedCurve& curve,
                                            const ChangePointTest& test, std::size_t begin,
                                            std::size_t end, std::vector<std::string>* notes) {
  test.validate();
  if (begin >= end || end > series.size()) {
    throw InputError("detect_single: bad window bounds");
  }
  const std::size_t n = end - begin;
  const auto ms = static_cast<std::size_t>(test.min_segment);
  const std::size_t min_window = std::max<std::size_t>(2 * ms, 20);
  if (n < min_window) {
    if (notes != nullptr) {
      notes->push_back("window [" + std::to_string(begin) + ", " + std::to_string(end) + ") of " +
                       std::to_string(n) + " points skipped: needs >= " +
                       std::to_string(min_window));
    }
    return std::nullopt;
  }

  WindowScan scan;
  if (test.centering == ResidualCentering::per_point) {
    std::vector<double> r(n);
    for (std::size_t i = 0; i < n; ++i) {
      r[i] = series.y()[begin + i] - evaluate(curve, series.x()[begin + i]);
    }
    const SicScan s = sic_statistic(r, test.min_segment);
    scan = {s.t_n, s.tau};
  } else {
    scan = scan_split_point(series, curve, begin, end, ms);
  }

  const double threshold = tn_threshold(n, test.alpha, test.rule);
  if (!(scan.t_n > threshold)) {
    return std::nullopt;
  }

  TestStatistics stats;
  stats.tau = begin + scan.tau;
  stats.distance_m = series.x()[stats.tau - 1];
  stats.t_n = scan.t_n;
  stats.threshold = threshold;
  stats.window_begin = begin;
  stats.window_end = end;
  return stats;
}

namespace {

void segment_recurse(const DistanceSeries& series, const FittedCurve& curve,
                     const ChangePointTest& test, std::size_t begin, std::size_t end,
                     ChangePointResult& out) {
  const auto hit = detect_single(series, curve, test, begin, end, &out.notes);
  if (!hit) {
    return;
  }
  // In-order traversal keeps detections sorted by position.
  segment_recurse(series, curve, test, begin, hit->tau, out);
  out.indices.push_back(hit->tau);
  out.distances.push_back(hit->distance_m);
  out.statistics.push_back(*hit);
  segment_recurse(series, curve, test, hit->tau, end, out);
}

}  // namespace

ChangePointResult detect_all(const DistanceSeries& series, const FittedCurve& curve,
                             const ChangePointTest& test) {
  test.validate();
  ChangePointResult result;
  segment_recurse(series, curve, test, 0, series.size(), result);
  return result;
}

}  // namespace pcd

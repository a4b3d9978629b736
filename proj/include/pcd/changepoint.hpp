#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pcd/detection.hpp"
#include "pcd/spline.hpp"

namespace pcd {

// Which values feed the per-segment standard deviation.
enum class SigmaMode { segment_raw, segment_residual };

// Residual convention inside the split likelihood: per_point uses
// r_i = y_i - f(x_i); split_point centers both sums at the candidate
// point's fitted value f(x_tau) (comparison mode).
enum class ResidualCentering { per_point, split_point };

// gumbel_sqrt tests a(log n) * sqrt(T_n - log n) - b(log n) > c_alpha,
// the Gumbel limit the a_n/b_n/c_alpha constants are normalized for.
// literal_tn tests a_n * sqrt(log n) * T_n - b_n * log n > c_alpha with
// T_n entering linearly; its rejection probability tends to 1 with n,
// so it is a comparison mode only.
enum class RejectionRule { gumbel_sqrt, literal_tn };

struct ChangePointTest {
  double alpha = 0.05;
  int min_segment = 5;
  SigmaMode sigma_mode = SigmaMode::segment_raw;
  ResidualCentering centering = ResidualCentering::per_point;
  RejectionRule rule = RejectionRule::gumbel_sqrt;

  void validate() const;
};

// One accepted detection. tau counts the points in the left segment
// (1-based index of the last point before the change); the tested window
// is the half-open 0-based range [window_begin, window_end).
struct TestStatistics {
  std::size_t tau = 0;
  double distance_m = 0.0;
  double t_n = 0.0;
  double threshold = 0.0;  // critical value on the T_n scale
  std::size_t window_begin = 0;
  std::size_t window_end = 0;
};

struct ChangePointResult {
  std::vector<std::size_t> indices;  // tau values, strictly increasing
  std::vector<double> distances;     // x at each tau
  std::vector<TestStatistics> statistics;
  std::vector<std::string> notes;  // windows skipped as too small, etc.
};

// l(tau) = tau*log(mean square of r_1..r_tau) + (n-tau)*log(mean square of
// the rest). Per-side mean squares are clamped to 1e-12 so identical or
// all-zero runs stay finite. Requires 1 <= tau <= n-1.
double split_log_likelihood(std::span<const double> residuals, std::size_t tau);

struct SicScan {
  double t_n = 0.0;
  std::size_t tau = 0;
};

// T_n = log n - min_tau { l(tau) - l0 } over tau in [min_segment,
// n - min_segment]; l0 is the one-segment likelihood. Smallest tau on ties.
SicScan sic_statistic(std::span<const double> residuals, int min_segment);

struct CriticalConstants {
  double a_n = 0.0;
  double b_n = 0.0;
  double c_alpha = 0.0;
};

// a_n = sqrt(2 log log n)/log n, b_n = (2 log log n + log(log log n)/2
// - log Gamma(1/2))/log n, c_alpha = -log(-log(1-alpha)/2). Natural logs.
// Requires n >= 20 so log log log n is defined and sane.
CriticalConstants critical_threshold(std::size_t n, double alpha);

// Critical value on the T_n scale for a window of n points under `rule`:
// the test rejects H0 exactly when T_n exceeds this.
double tn_threshold(std::size_t n, double alpha, RejectionRule rule);

// r_i = y_i - f(x_i) for the whole series.
std::vector<double> residuals_of(const DistanceSeries& series, const FittedCurve& curve);

// Tests the half-open window [begin, end). Returns the accepted detection,
// or nullopt when H0 stands or the window is shorter than
// max(2*min_segment, 20) (in which case a note is appended if given).
std::optional<TestStatistics> detect_single(const DistanceSeries& series,
                                            const FittedCurve& curve,
                                            const ChangePointTest& test, std::size_t begin,
                                            std::size_t end,
                                            std::vector<std::string>* notes = nullptr);

// Sequential binary segmentation over the full series: detect, split at tau,
// recurse on both sides until no window rejects H0. Deterministic; indices
// ascending, adjacent detections separated by at least min_segment.
ChangePointResult detect_all(const DistanceSeries& series, const FittedCurve& curve,
                             const ChangePointTest& test);

}  // namespace pcd

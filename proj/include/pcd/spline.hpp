#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "pcd/detection.hpp"

namespace pcd {

enum class KnotPlacement { uniform, quantile };

// Penalized B-spline configuration. `uniform` places equidistant knots
// extended `degree` spans beyond each boundary so that the second-difference
// penalty leaves affine trends untouched; `quantile` places interior knots
// at sample quantiles with clamped (repeated) boundary knots for clustered x.
struct SplineConfig {
  int num_basis = 10;
  int degree = 3;
  double lambda = 0.6;
  KnotPlacement knot_placement = KnotPlacement::uniform;

  void validate() const;  // throws InputError
};

// Immutable fit result: f(x) = sum_j coefficients[j] * B_j(x) on
// [domain_min, domain_max]; evaluation outside clamps to the endpoints.
struct FittedCurve {
  SplineConfig config;
  std::vector<double> knots;         // size num_basis + degree + 1, non-decreasing
  std::vector<double> coefficients;  // size num_basis
  double domain_min = 0.0;
  double domain_max = 0.0;
};

// Knot vector over [x.front(), x.back()] per config. x must be sorted.
std::vector<double> make_knot_vector(std::span<const double> x, const SplineConfig& config);

// Writes the K basis values B_0(x)..B_{K-1}(x) into out (size num_basis).
// Throws InputError when x lies outside the knot span [t_degree, t_K].
void basis_row(std::span<const double> knots, int degree, int num_basis, double x,
               std::span<double> out);

// n x K design matrix, entry (i, j) = B_j(x_i). Rows sum to 1 on the domain.
Eigen::MatrixXd build_basis(std::span<const double> x, const SplineConfig& config);

// Minimizes sum_i (y_i - f(x_i))^2 + lambda * sum_j (delta^2 beta_j)^2 via
// the normal equations (B^T B + lambda D2^T D2) beta = B^T y; a 1e-12 ridge
// is added when the factorization reports singularity. Requires n >= 4.
FittedCurve fit_penalized(const DistanceSeries& series, const SplineConfig& config);

// f(x) with clamp-to-endpoint extrapolation. Throws on non-finite x.
double evaluate(const FittedCurve& curve, double x);

enum class FitCriterion { aic, bic };

// Picks the candidate minimizing the criterion, with model degrees of
// freedom = trace of the smoother hat matrix; ties go to the larger lambda.
double select_lambda(const DistanceSeries& series, std::span<const double> candidates,
                     FitCriterion criterion, SplineConfig base = {});

}  // namespace pcd

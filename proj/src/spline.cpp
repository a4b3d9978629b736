#include "pcd/spline.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "pcd/errors.hpp"

namespace pcd {
namespace {

// Binary search for the span s with knots[s] <= x < knots[s+1], clamping the
// right domain endpoint into the last non-degenerate span.
int find_span(std::span<const double> knots, int degree, int num_basis, double x) {
  if (x >= knots[static_cast<std::size_t>(num_basis)]) {
    return num_basis - 1;
  }
  if (x <= knots[static_cast<std::size_t>(degree)]) {
    return degree;
  }
  int low = degree;
  int high = num_basis;
  int mid = (low + high) / 2;
  while (x < knots[static_cast<std::size_t>(mid)] ||
         x >= knots[static_cast<std::size_t>(mid + 1)]) {
    if (x < knots[static_cast<std::size_t>(mid)]) {
      high = mid;
    } else {
      low = mid;
    }
    mid = (low + high) / 2;
  }
  return mid;
}

Eigen::MatrixXd basis_matrix(std::span<const double> x, std::span<const double> knots, int degree,
                             int num_basis) {
  Eigen::MatrixXd design = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(x.size()), num_basis);
  std::vector<double> row(static_cast<std::size_t>(num_basis));
  for (std::size_t i = 0; i < x.size(); ++i) {
    basis_row(knots, degree, num_basis, x[i], row);
    for (int j = 0; j < num_basis; ++j) {
      design(static_cast<Eigen::Index>(i), j) = row[static_cast<std::size_t>(j)];
    }
  }
  return design;
}

Eigen::MatrixXd penalty_matrix(int num_basis) {
  // D2^T D2 with D2 the (K-2) x K second-difference operator.
  Eigen::MatrixXd d2 = Eigen::MatrixXd::Zero(num_basis - 2, num_basis);
  for (int r = 0; r < num_basis - 2; ++r) {
    d2(r, r) = 1.0;
    d2(r, r + 1) = -2.0;
    d2(r, r + 2) = 1.0;
  }
  return d2.transpose() * d2;
}

Eigen::VectorXd solve_normal_equations(const Eigen::MatrixXd& lhs, const Eigen::VectorXd& rhs) {
  Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
  Eigen::VectorXd beta;
  if (ldlt.info() == Eigen::Success) {
    beta = ldlt.solve(rhs);
  }
  if (ldlt.info() != Eigen::Success || !beta.allFinite()) {
    // Singular system (e.g. lambda = 0 with n < K): fall back to a tiny ridge.
    Eigen::MatrixXd ridged = lhs;
    ridged.diagonal().array() += 1e-12;
    Eigen::LDLT<Eigen::MatrixXd> retry(ridged);
    if (retry.info() != Eigen::Success) {
      throw NumericalError("normal equations: factorization failed");
    }
    beta = retry.solve(rhs);
    if (!beta.allFinite()) {
      throw NumericalError("normal equations: non-finite solution");
    }
  }
  return beta;
}

double sample_quantile(std::span<const double> sorted, double q) {
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  if (lo + 1 >= sorted.size()) {
    return sorted.back();
  }
  const double frac = pos - static_cast<double>(lo);
  return sorted[lo] * (1.0 - frac) + sorted[lo + 1] * frac;
}

}  // namespace

void SplineConfig::validate() const {
  if (num_basis < 4) {
    throw InputError("spline: num_basis must be >= 4");
  }
  if (degree < 1) {
    throw InputError("spline: degree must be >= 1");
  }
  if (num_basis <= degree) {
    throw InputError("spline: num_basis must exceed degree");
  }
  if (!(std::isfinite(lambda) && lambda >= 0.0)) {
    throw InputError("spline: lambda must be finite and non-negative");
  }
}

std::vector<double> make_knot_vector(std::span<const double> x, const SplineConfig& config) {
  config.validate();
  if (x.empty()) {
    throw InputError("knot vector: empty sample");
  }
  const double a = x.front();
  const double b = x.back();
  if (!(std::isfinite(a) && std::isfinite(b)) || !(b > a)) {
    throw InputError("knot vector: domain is degenerate");
  }
  const int k = config.num_basis;
  const int d = config.degree;
  std::vector<double> knots(static_cast<std::size_t>(k + d + 1));

  if (config.knot_placement == KnotPlacement::uniform) {
    // Equidistant grid extended `degree` spans past each boundary; keeps
    // affine coefficient sequences in the penalty null space.
    const double h = (b - a) / static_cast<double>(k - d);
    for (int i = 0; i <= k + d; ++i) {
      knots[static_cast<std::size_t>(i)] = a + static_cast<double>(i - d) * h;
    }
    knots[static_cast<std::size_t>(d)] = a;
    knots[static_cast<std::size_t>(k)] = b;
  } else {
    // Clamped boundaries, interior knots at sample quantiles.
    for (int i = 0; i <= d; ++i) {
      knots[static_cast<std::size_t>(i)] = a;
      knots[static_cast<std::size_t>(k + i)] = b;
    }
    const int interior = k - d - 1;
    for (int j = 1; j <= interior; ++j) {
      const double q = static_cast<double>(j) / static_cast<double>(interior + 1);
      knots[static_cast<std::size_t>(d + j)] = sample_quantile(x, q);
    }
  }
  return knots;
}

void basis_row(std::span<const double> knots, int degree, int num_basis, double x,
               std::span<double> out) {
  if (num_basis <= degree || degree < 1) {
    throw InputError("basis: num_basis must exceed degree >= 1");
  }
  if (knots.size() != static_cast<std::size_t>(num_basis + degree + 1)) {
    throw InputError("basis: knot vector length must be num_basis + degree + 1");
  }
  if (out.size() != static_cast<std::size_t>(num_basis)) {
    throw InputError("basis: output span length must be num_basis");
  }
  if (!std::isfinite(x) || x < knots[static_cast<std::size_t>(degree)] ||
      x > knots[static_cast<std::size_t>(num_basis)]) {
    throw InputError("basis: x outside the knot span");
  }

  const int span = find_span(knots, degree, num_basis, x);

  // Cox-de Boor triangle (the standard pointwise recurrence).
  std::vector<double> n(static_cast<std::size_t>(degree + 1));
  std::vector<double> left(static_cast<std::size_t>(degree + 1));
  std::vector<double> right(static_cast<std::size_t>(degree + 1));
  n[0] = 1.0;
  for (int j = 1; j <= degree; ++j) {
    left[static_cast<std::size_t>(j)] = x - knots[static_cast<std::size_t>(span + 1 - j)];
    right[static_cast<std::size_t>(j)] = knots[static_cast<std::size_t>(span + j)] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      const double temp = n[static_cast<std::size_t>(r)] /
                          (right[static_cast<std::size_t>(r + 1)] +
                           left[static_cast<std::size_t>(j - r)]);
      n[static_cast<std::size_t>(r)] = saved + right[static_cast<std::size_t>(r + 1)] * temp;
      saved = left[static_cast<std::size_t>(j - r)] * temp;
    }
    n[static_cast<std::size_t>(j)] = saved;
  }

  std::fill(out.begin(), out.end(), 0.0);
  for (int r = 0; r <= degree; ++r) {
    out[static_cast<std::size_t>(span - degree + r)] = n[static_cast<std::size_t>(r)];
  }
}

Eigen::MatrixXd build_basis(std::span<const double> x, const SplineConfig& config) {
  const auto knots = make_knot_vector(x, config);
  return basis_matrix(x, knots, config.degree, config.num_basis);
}

FittedCurve fit_penalized(const DistanceSeries& series, const SplineConfig& config) {
  config.validate();
  if (series.size() < 4) {
    throw InputError("fit: need at least 4 points");
  }
  const auto knots = make_knot_vector(series.x(), config);
  const Eigen::MatrixXd design = basis_matrix(series.x(), knots, config.degree, config.num_basis);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(series.y().data(), static_cast<Eigen::Index>(series.size()));

  const Eigen::MatrixXd lhs =
      design.transpose() * design + config.lambda * penalty_matrix(config.num_basis);
  const Eigen::VectorXd beta = solve_normal_equations(lhs, design.transpose() * y);

  FittedCurve curve;
  curve.config = config;
  curve.knots = knots;
  curve.coefficients.assign(beta.data(), beta.data() + beta.size());
  curve.domain_min = series.x().front();
  curve.domain_max = series.x().back();
  return curve;
}

double evaluate(const FittedCurve& curve, double x) {
  if (!std::isfinite(x)) {
    throw InputError("evaluate: non-finite x");
  }
  const double clamped = std::clamp(x, curve.domain_min, curve.domain_max);
  std::vector<double> row(curve.coefficients.size());
  basis_row(curve.knots, curve.config.degree, curve.config.num_basis, clamped, row);
  double value = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    value += curve.coefficients[j] * row[j];
  }
  return value;
}

double select_lambda(const DistanceSeries& series, std::span<const double> candidates,
                     FitCriterion criterion, SplineConfig base) {
  if (candidates.empty()) {
    throw InputError("select_lambda: no candidates");
  }
  base.validate();
  for (double c : candidates) {
    if (!(std::isfinite(c) && c >= 0.0)) {
      throw InputError("select_lambda: candidates must be finite and non-negative");
    }
  }

  const auto knots = make_knot_vector(series.x(), base);
  const Eigen::MatrixXd design = basis_matrix(series.x(), knots, base.degree, base.num_basis);
  const Eigen::MatrixXd gram = design.transpose() * design;
  const Eigen::MatrixXd penalty = penalty_matrix(base.num_basis);
  const Eigen::VectorXd y =
      Eigen::Map<const Eigen::VectorXd>(series.y().data(), static_cast<Eigen::Index>(series.size()));
  const double n = static_cast<double>(series.size());

  std::vector<double> sorted(candidates.begin(), candidates.end());
  std::sort(sorted.begin(), sorted.end());

  double best_lambda = sorted.front();
  double best_score = std::numeric_limits<double>::infinity();
  for (double lambda : sorted) {
    const Eigen::MatrixXd lhs = gram + lambda * penalty;
    const Eigen::VectorXd beta = solve_normal_equations(lhs, design.transpose() * y);
    const double rss = (y - design * beta).squaredNorm();
    // Effective df = trace of the hat matrix B (B^T B + lambda P)^-1 B^T.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(lhs);
    Eigen::MatrixXd hat_core = ldlt.solve(gram);
    if (ldlt.info() != Eigen::Success || !hat_core.allFinite()) {
      Eigen::MatrixXd ridged = lhs;
      ridged.diagonal().array() += 1e-12;
      hat_core = ridged.ldlt().solve(gram);
    }
    const double df = hat_core.trace();
    const double fit_term = n * std::log(std::max(rss / n, 1e-300));
    const double score =
        criterion == FitCriterion::aic ? fit_term + 2.0 * df : fit_term + std::log(n) * df;
    // <= prefers the larger lambda on ties (candidates scanned ascending).
    if (score <= best_score) {
      best_score = score;
      best_lambda = lambda;
    }
  }
  return best_lambda;
}

}  // namespace pcd

#include "pcd/report.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "json.hpp"

#include "pcd/errors.hpp"
#include "pcd/version.hpp"

namespace pcd {
namespace {

using ordered_json = nlohmann::ordered_json;

// Shortest round-trip representation, locale-independent.
std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string fmt_list(const std::vector<double>& values, char sep) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out.push_back(sep);
    out += fmt(values[i]);
  }
  return out;
}

const char* knot_placement_name(KnotPlacement p) {
  return p == KnotPlacement::uniform ? "uniform" : "quantile";
}

KnotPlacement parse_knot_placement(const std::string& s) {
  if (s == "uniform") return KnotPlacement::uniform;
  if (s == "quantile") return KnotPlacement::quantile;
  throw InputError("unknown knot placement '" + s + "'");
}

const char* sigma_mode_name(SigmaMode m) {
  return m == SigmaMode::segment_raw ? "segment-raw" : "segment-residual";
}

SigmaMode parse_sigma_mode(const std::string& s) {
  if (s == "segment-raw") return SigmaMode::segment_raw;
  if (s == "segment-residual") return SigmaMode::segment_residual;
  throw InputError("unknown sigma mode '" + s + "'");
}

const char* centering_name(ResidualCentering c) {
  return c == ResidualCentering::per_point ? "per-point" : "split-point";
}

ResidualCentering parse_centering(const std::string& s) {
  if (s == "per-point") return ResidualCentering::per_point;
  if (s == "split-point") return ResidualCentering::split_point;
  throw InputError("unknown residual centering '" + s + "'");
}

const char* rule_name(RejectionRule r) {
  return r == RejectionRule::gumbel_sqrt ? "gumbel-sqrt" : "literal-tn";
}

RejectionRule parse_rule(const std::string& s) {
  if (s == "gumbel-sqrt") return RejectionRule::gumbel_sqrt;
  if (s == "literal-tn") return RejectionRule::literal_tn;
  throw InputError("unknown rejection rule '" + s + "'");
}

ordered_json to_json(const EvaluationReport& report) {
  const EvalConfig& cfg = report.config;
  ordered_json j;
  j["tool"] = kToolName;
  j["version"] = kToolVersion;

  ordered_json spline;
  spline["num_basis"] = cfg.spline.num_basis;
  spline["degree"] = cfg.spline.degree;
  spline["lambda"] = cfg.spline.lambda;
  spline["knot_placement"] = knot_placement_name(cfg.spline.knot_placement);

  ordered_json test;
  test["alpha"] = cfg.test.alpha;
  test["min_segment"] = cfg.test.min_segment;
  test["sigma_mode"] = sigma_mode_name(cfg.test.sigma_mode);
  test["residual_centering"] = centering_name(cfg.test.centering);
  test["rejection_rule"] = rule_name(cfg.test.rule);

  ordered_json config;
  config["spline"] = std::move(spline);
  config["changepoint"] = std::move(test);
  config["y_t"] = cfg.y_t;
  config["p_t"] = cfg.p_t;
  config["grid"] = {{"y_values", cfg.grid.y_values}, {"p_values", cfg.grid.p_values}};
  j["config"] = std::move(config);

  j["input"] = {{"n", report.series.size()},
                {"x_min", report.series.x().front()},
                {"x_max", report.series.x().back()},
                {"mean_quality_score", report.mean_quality}};
  j["series"] = {{"x", report.series.x()}, {"y", report.series.y()}};
  j["curve"] = {{"knots", report.curve.knots},
                {"coefficients", report.curve.coefficients},
                {"domain_min", report.curve.domain_min},
                {"domain_max", report.curve.domain_max}};

  ordered_json stats = ordered_json::array();
  for (const TestStatistics& s : report.changepoints.statistics) {
    stats.push_back({{"tau", s.tau},
                     {"distance_m", s.distance_m},
                     {"t_n", s.t_n},
                     {"threshold", s.threshold},
                     {"window_begin", s.window_begin},
                     {"window_end", s.window_end}});
  }
  j["changepoints"] = {{"count", report.changepoints.indices.size()},
                       {"indices", report.changepoints.indices},
                       {"distances", report.changepoints.distances},
                       {"statistics", std::move(stats)},
                       {"warnings", report.changepoints.notes}};

  j["segments"] = {{"sigmas", report.model.sigmas}};

  ordered_json pcd_value;
  if (report.pcd) {
    pcd_value = *report.pcd;
  }
  j["pcd"] = {{"y_t", cfg.y_t}, {"p_t", cfg.p_t}, {"value_m", std::move(pcd_value)}};

  ordered_json rows = ordered_json::array();
  for (std::size_t iy = 0; iy < report.surface.grid.y_values.size(); ++iy) {
    ordered_json row = ordered_json::array();
    for (std::size_t ip = 0; ip < report.surface.grid.p_values.size(); ++ip) {
      const auto& cell = report.surface.at(iy, ip);
      if (cell) {
        row.push_back(*cell);
      } else {
        row.push_back(nullptr);
      }
    }
    rows.push_back(std::move(row));
  }
  j["surface"] = {{"y_values", report.surface.grid.y_values},
                  {"p_values", report.surface.grid.p_values},
                  {"values_m", std::move(rows)},
                  {"mpcd_m", report.surface.mpcd},
                  {"mpcd_convention", "cells with no qualifying distance count as 0"}};
  return j;
}

void emit_csv_summary(std::ostream& out, const EvaluationReport& report) {
  const EvalConfig& cfg = report.config;
  out << "# tool=" << kToolName << '\n';
  out << "# version=" << kToolVersion << '\n';
  out << "# n=" << report.series.size() << '\n';
  out << "# x_min=" << fmt(report.series.x().front()) << '\n';
  out << "# x_max=" << fmt(report.series.x().back()) << '\n';
  out << "# mean_quality_score=" << fmt(report.mean_quality) << '\n';
  out << "# num_basis=" << cfg.spline.num_basis << '\n';
  out << "# degree=" << cfg.spline.degree << '\n';
  out << "# lambda=" << fmt(cfg.spline.lambda) << '\n';
  out << "# knot_placement=" << knot_placement_name(cfg.spline.knot_placement) << '\n';
  out << "# alpha=" << fmt(cfg.test.alpha) << '\n';
  out << "# min_segment=" << cfg.test.min_segment << '\n';
  out << "# sigma_mode=" << sigma_mode_name(cfg.test.sigma_mode) << '\n';
  out << "# residual_centering=" << centering_name(cfg.test.centering) << '\n';
  out << "# rejection_rule=" << rule_name(cfg.test.rule) << '\n';
  out << "# y_t=" << fmt(cfg.y_t) << '\n';
  out << "# p_t=" << fmt(cfg.p_t) << '\n';

  std::string indices;
  for (std::size_t i = 0; i < report.changepoints.indices.size(); ++i) {
    if (i > 0) indices.push_back(';');
    indices += std::to_string(report.changepoints.indices[i]);
  }
  out << "# changepoint_indices=" << indices << '\n';
  out << "# changepoint_distances=" << fmt_list(report.changepoints.distances, ';') << '\n';
  out << "# segment_sigmas=" << fmt_list(report.model.sigmas, ';') << '\n';
  out << "# pcd_m=" << (report.pcd ? fmt(*report.pcd) : std::string()) << '\n';
  out << "# mpcd_m=" << fmt(report.surface.mpcd) << '\n';
  out << "y_t,p_t,pcd_m\n";
  for (std::size_t iy = 0; iy < report.surface.grid.y_values.size(); ++iy) {
    for (std::size_t ip = 0; ip < report.surface.grid.p_values.size(); ++ip) {
      const auto& cell = report.surface.at(iy, ip);
      out << fmt(report.surface.grid.y_values[iy]) << ',' << fmt(report.surface.grid.p_values[ip])
          << ',' << (cell ? fmt(*cell) : std::string()) << '\n';
    }
  }
}

}  // namespace

ReportFormat parse_report_format(std::string_view name) {
  if (name == "json") return ReportFormat::json;
  if (name == "csv-summary") return ReportFormat::csv_summary;
  throw InputError("unknown format '" + std::string(name) + "' (expected 'json' or 'csv-summary')");
}

std::string_view report_format_name(ReportFormat format) {
  return format == ReportFormat::json ? "json" : "csv-summary";
}

void EvalConfig::validate() const {
  spline.validate();
  test.validate();
  if (!(y_t > 0.0 && y_t < 1.0)) {
    throw InputError("y_t must lie in (0, 1)");
  }
  if (!(p_t > 0.0 && p_t < 1.0)) {
    throw InputError("p_t must lie in (0, 1)");
  }
  grid.validate();
}

EvaluationReport evaluate_series(const DistanceSeries& series, const EvalConfig& config) {
  config.validate();
  FittedCurve curve = fit_penalized(series, config.spline);
  ChangePointResult changepoints = detect_all(series, curve, config.test);
  SegmentModel model =
      build_segment_model(series, curve, changepoints.indices, config.test.sigma_mode);
  std::optional<double> pcd = compute_pcd(model, config.y_t, config.p_t);
  PcdSurface surface = compute_pcd_surface(model, config.grid, config.parallel_surface);
  const double mean_quality = mean_quality_score(series);
  return EvaluationReport{config,
                          series,
                          std::move(curve),
                          std::move(changepoints),
                          std::move(model),
                          pcd,
                          std::move(surface),
                          mean_quality};
}

EvaluationReport run_evaluate(const std::string& input_path, LogSchema schema,
                              const EvalConfig& config) {
  const auto records = load_detection_log(input_path, schema);
  return evaluate_series(build_series(records), config);
}

void emit_report(std::ostream& out, const EvaluationReport& report, ReportFormat format) {
  if (format == ReportFormat::json) {
    out << to_json(report).dump(2) << '\n';
  } else {
    emit_csv_summary(out, report);
  }
}

std::string report_to_string(const EvaluationReport& report, ReportFormat format) {
  std::ostringstream out;
  emit_report(out, report, format);
  return out.str();
}

EvaluationReport parse_report_json(const std::string& text) {
  try {
    const ordered_json j = ordered_json::parse(text);

    EvalConfig config;
    const auto& jc = j.at("config");
    const auto& js = jc.at("spline");
    config.spline.num_basis = js.at("num_basis").get<int>();
    config.spline.degree = js.at("degree").get<int>();
    config.spline.lambda = js.at("lambda").get<double>();
    config.spline.knot_placement = parse_knot_placement(js.at("knot_placement").get<std::string>());
    const auto& jt = jc.at("changepoint");
    config.test.alpha = jt.at("alpha").get<double>();
    config.test.min_segment = jt.at("min_segment").get<int>();
    config.test.sigma_mode = parse_sigma_mode(jt.at("sigma_mode").get<std::string>());
    config.test.centering = parse_centering(jt.at("residual_centering").get<std::string>());
    config.test.rule = parse_rule(jt.at("rejection_rule").get<std::string>());
    config.y_t = jc.at("y_t").get<double>();
    config.p_t = jc.at("p_t").get<double>();
    config.grid.y_values = jc.at("grid").at("y_values").get<std::vector<double>>();
    config.grid.p_values = jc.at("grid").at("p_values").get<std::vector<double>>();

    DistanceSeries series(j.at("series").at("x").get<std::vector<double>>(),
                          j.at("series").at("y").get<std::vector<double>>());

    FittedCurve curve;
    curve.config = config.spline;
    curve.knots = j.at("curve").at("knots").get<std::vector<double>>();
    curve.coefficients = j.at("curve").at("coefficients").get<std::vector<double>>();
    curve.domain_min = j.at("curve").at("domain_min").get<double>();
    curve.domain_max = j.at("curve").at("domain_max").get<double>();

    ChangePointResult changepoints;
    const auto& jp = j.at("changepoints");
    changepoints.indices = jp.at("indices").get<std::vector<std::size_t>>();
    changepoints.distances = jp.at("distances").get<std::vector<double>>();
    for (const auto& s : jp.at("statistics")) {
      TestStatistics stat;
      stat.tau = s.at("tau").get<std::size_t>();
      stat.distance_m = s.at("distance_m").get<double>();
      stat.t_n = s.at("t_n").get<double>();
      stat.threshold = s.at("threshold").get<double>();
      stat.window_begin = s.at("window_begin").get<std::size_t>();
      stat.window_end = s.at("window_end").get<std::size_t>();
      changepoints.statistics.push_back(stat);
    }
    changepoints.notes = jp.at("warnings").get<std::vector<std::string>>();

    SegmentModel model{curve, series, changepoints.indices,
                       j.at("segments").at("sigmas").get<std::vector<double>>()};

    std::optional<double> pcd;
    if (!j.at("pcd").at("value_m").is_null()) {
      pcd = j.at("pcd").at("value_m").get<double>();
    }

    PcdSurface surface;
    const auto& ju = j.at("surface");
    surface.grid.y_values = ju.at("y_values").get<std::vector<double>>();
    surface.grid.p_values = ju.at("p_values").get<std::vector<double>>();
    for (const auto& row : ju.at("values_m")) {
      for (const auto& cell : row) {
        surface.values.push_back(cell.is_null() ? std::nullopt
                                                : std::optional<double>(cell.get<double>()));
      }
    }
    surface.mpcd = ju.at("mpcd_m").get<double>();

    const double mean_quality = j.at("input").at("mean_quality_score").get<double>();
    return EvaluationReport{std::move(config),    std::move(series), std::move(curve),
                            std::move(changepoints), std::move(model),  pcd,
                            std::move(surface),   mean_quality};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report JSON: ") + e.what());
  }
}

void emit_curve_trace(std::ostream& out, const EvaluationReport& report, std::size_t resolution) {
  if (resolution < 2) {
    throw InputError("trace: resolution must be >= 2");
  }
  const double lo = report.curve.domain_min;
  const double hi = report.curve.domain_max;
  const double step = (hi - lo) / static_cast<double>(resolution - 1);
  out << "x,f,sigma,p_exceed,marker\n";
  const auto row = [&](double x, int marker) {
    const double f = evaluate(report.curve, x);
    const double sigma = sigma_at(report.model, x);
    const double p = normal_exceedance(f, sigma, report.config.y_t);
    out << fmt(x) << ',' << fmt(f) << ',' << fmt(sigma) << ',' << fmt(p) << ',' << marker << '\n';
  };
  for (std::size_t k = 0; k < resolution; ++k) {
    row(k + 1 == resolution ? hi : lo + static_cast<double>(k) * step, 0);
  }
  for (double d : report.changepoints.distances) {
    row(d, 1);
  }
}

}  // namespace pcd

#include <charconv>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "pcd/csv.hpp"
#include "pcd/errors.hpp"
#include "pcd/metric.hpp"
#include "pcd/report.hpp"
#include "pcd/synth.hpp"
#include "pcd/version.hpp"

namespace {

std::string fmt(double v) {
  char buf[32];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::vector<double> parse_grid_axis(const std::string& spec) {
  double parts[3];
  std::size_t start = 0;
  for (int k = 0; k < 3; ++k) {
    const std::size_t colon = spec.find(':', start);
    if ((k < 2) != (colon != std::string::npos)) {
      throw pcd::InputError("grid spec '" + spec + "' must be LO:STEP:HI");
    }
    const std::string item = spec.substr(start, colon - start);
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), parts[k]);
    if (ec != std::errc{} || ptr != item.data() + item.size()) {
      throw pcd::InputError("grid spec: '" + item + "' is not a number");
    }
    start = colon + 1;
  }
  const auto [lo, step, hi] = std::tuple{parts[0], parts[1], parts[2]};
  if (!(step > 0.0) || lo > hi) {
    throw pcd::InputError("grid spec: need LO <= HI and STEP > 0");
  }
  const auto count = static_cast<std::size_t>((hi - lo) / step + 1e-9) + 1;
  std::vector<double> axis(count);
  for (std::size_t k = 0; k < count; ++k) {
    axis[k] = lo + static_cast<double>(k) * step;
  }
  return axis;
}

struct EvalOptions {
  std::string input;
  pcd::LogSchema schema = pcd::LogSchema::precomputed;
  pcd::EvalConfig config;
  std::string grid_spec;
  unsigned threads = 1;
};

void add_eval_options(CLI::App* cmd, EvalOptions& opt) {
  cmd->add_option("--input", opt.input, "detection log (CSV)")->required();
  cmd->add_option("--schema", opt.schema, "input schema")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, pcd::LogSchema>{{"raw-boxes", pcd::LogSchema::raw_boxes},
                                                {"precomputed", pcd::LogSchema::precomputed}}))
      ->default_str("precomputed");
  cmd->add_option("--alpha", opt.config.test.alpha, "significance level")
      ->capture_default_str();
  cmd->add_option("--lambda", opt.config.spline.lambda, "spline penalty weight")
      ->capture_default_str();
  cmd->add_option("--knots", opt.config.spline.num_basis, "number of basis functions")
      ->capture_default_str();
  cmd->add_option("--degree", opt.config.spline.degree, "spline degree")->capture_default_str();
  cmd->add_option("--knot-placement", opt.config.spline.knot_placement, "knot placement")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, pcd::KnotPlacement>{{"uniform", pcd::KnotPlacement::uniform},
                                                    {"quantile", pcd::KnotPlacement::quantile}}))
      ->default_str("uniform");
  cmd->add_option("--yt", opt.config.y_t, "quality threshold y_t")->capture_default_str();
  cmd->add_option("--pt", opt.config.p_t, "probability threshold p_t")->capture_default_str();
  cmd->add_option("--grid", opt.grid_spec, "threshold grid for both axes, LO:STEP:HI")
      ->default_str("0.1:0.1:0.9");
  cmd->add_option("--sigma-mode", opt.config.test.sigma_mode, "per-segment sigma source")
      ->transform(CLI::CheckedTransformer(std::map<std::string, pcd::SigmaMode>{
          {"segment-raw", pcd::SigmaMode::segment_raw},
          {"segment-residual", pcd::SigmaMode::segment_residual}}))
      ->default_str("segment-raw");
  cmd->add_option("--centering", opt.config.test.centering, "split-likelihood residual centering")
      ->transform(CLI::CheckedTransformer(std::map<std::string, pcd::ResidualCentering>{
          {"per-point", pcd::ResidualCentering::per_point},
          {"split-point", pcd::ResidualCentering::split_point}}))
      ->default_str("per-point");
  cmd->add_option("--rule", opt.config.test.rule, "change-point rejection rule")
      ->transform(CLI::CheckedTransformer(std::map<std::string, pcd::RejectionRule>{
          {"gumbel-sqrt", pcd::RejectionRule::gumbel_sqrt},
          {"literal-tn", pcd::RejectionRule::literal_tn}}))
      ->default_str("gumbel-sqrt");
  cmd->add_option("--min-segment", opt.config.test.min_segment, "minimum points per segment")
      ->capture_default_str();
  cmd->add_option("--threads", opt.threads, "surface worker threads")->capture_default_str();
}

pcd::EvaluationReport run_pipeline(EvalOptions& opt) {
  if (!opt.grid_spec.empty()) {
    const auto axis = parse_grid_axis(opt.grid_spec);
    opt.config.grid.y_values = axis;
    opt.config.grid.p_values = axis;
  }
  opt.config.parallel_surface = opt.threads > 1;
  return pcd::run_evaluate(opt.input, opt.schema, opt.config);
}

int run_eval(EvalOptions& opt, pcd::ReportFormat format, const std::string& trace_path,
             std::size_t resolution) {
  const pcd::EvaluationReport report = run_pipeline(opt);
  pcd::emit_report(std::cout, report, format);
  if (!trace_path.empty()) {
    std::ofstream trace(trace_path);
    if (!trace) {
      throw pcd::InputError(trace_path + ": cannot open for writing");
    }
    pcd::emit_curve_trace(trace, report, resolution);
  }
  return 0;
}

int run_trace(EvalOptions& opt, std::size_t resolution) {
  const pcd::EvaluationReport report = run_pipeline(opt);
  pcd::emit_curve_trace(std::cout, report, resolution);
  return 0;
}

int run_surface(const std::string& report_path, const std::string& grid_spec, unsigned threads,
                pcd::ReportFormat format) {
  std::ifstream in(report_path);
  if (!in) {
    throw pcd::InputError(report_path + ": cannot open for reading");
  }
  std::ostringstream text;
  text << in.rdbuf();
  const pcd::EvaluationReport report = pcd::parse_report_json(text.str());

  pcd::ThresholdGrid grid = report.config.grid;
  if (!grid_spec.empty()) {
    const auto axis = parse_grid_axis(grid_spec);
    grid.y_values = axis;
    grid.p_values = axis;
  }
  const pcd::PcdSurface surface = pcd::compute_pcd_surface(report.model, grid, threads > 1);

  if (format == pcd::ReportFormat::json) {
    nlohmann::ordered_json rows = nlohmann::ordered_json::array();
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
      nlohmann::ordered_json row = nlohmann::ordered_json::array();
      for (std::size_t ip = 0; ip < grid.p_values.size(); ++ip) {
        const auto& cell = surface.at(iy, ip);
        if (cell) {
          row.push_back(*cell);
        } else {
          row.push_back(nullptr);
        }
      }
      rows.push_back(std::move(row));
    }
    nlohmann::ordered_json j;
    j["y_values"] = grid.y_values;
    j["p_values"] = grid.p_values;
    j["values_m"] = std::move(rows);
    j["mpcd_m"] = surface.mpcd;
    std::cout << j.dump(2) << '\n';
  } else {
    std::cout << "# mpcd_m=" << fmt(surface.mpcd) << '\n';
    std::cout << "y_t,p_t,pcd_m\n";
    for (std::size_t iy = 0; iy < grid.y_values.size(); ++iy) {
      for (std::size_t ip = 0; ip < grid.p_values.size(); ++ip) {
        const auto& cell = surface.at(iy, ip);
        std::cout << fmt(grid.y_values[iy]) << ',' << fmt(grid.p_values[ip]) << ','
                  << (cell ? fmt(*cell) : std::string()) << '\n';
      }
    }
  }
  return 0;
}

struct SynthOptions {
  std::string output = "-";
  std::string truth_path;
  std::string config_path;
  pcd::synth::SynthSpec spec;
  std::string mean_kind = "logistic";
  double mean_value = 0.5;
  double intercept = 1.0;
  double slope = -0.004;
  double top = 0.9;
  double midpoint = 150.0;
  double width = 25.0;
  std::vector<double> sigma_boundaries;
  std::vector<double> sigma_levels;
};

int run_synth(const CLI::App& cmd, SynthOptions& opt) {
  if (!opt.config_path.empty()) {
    std::ifstream in(opt.config_path);
    if (!in) {
      throw pcd::InputError(opt.config_path + ": cannot open for reading");
    }
    std::ostringstream text;
    text << in.rdbuf();
    opt.spec = pcd::synth::parse_synth_config(text.str());
  }

  // Explicit flags override config-file values.
  if (cmd.count("--mean") > 0 || opt.config_path.empty()) {
    if (opt.mean_kind == "constant") {
      opt.spec.mean = pcd::synth::ConstantMean{opt.mean_value};
    } else if (opt.mean_kind == "linear") {
      opt.spec.mean = pcd::synth::LinearMean{opt.intercept, opt.slope};
    } else {
      opt.spec.mean = pcd::synth::LogisticDecayMean{opt.top, opt.midpoint, opt.width};
    }
  }
  if (cmd.count("--sigma-boundaries") > 0) {
    opt.spec.sigma_boundaries = opt.sigma_boundaries;
  }
  if (cmd.count("--sigma-levels") > 0) {
    opt.spec.sigma_levels = opt.sigma_levels;
  }

  const pcd::synth::Generated generated = pcd::synth::generate(opt.spec);

  std::ofstream file;
  std::ostream* out = &std::cout;
  if (opt.output != "-") {
    file.open(opt.output);
    if (!file) {
      throw pcd::InputError(opt.output + ": cannot open for writing");
    }
    out = &file;
  }
  *out << "frame_id,distance_m,iou,confidence\n";
  const auto& series = generated.series;
  for (std::size_t i = 0; i < series.size(); ++i) {
    char frame[24];
    std::snprintf(frame, sizeof(frame), "synth_%06zu", i);
    *out << frame << ',' << fmt(series.x()[i]) << ',' << fmt(series.y()[i]) << ",1\n";
  }

  if (!opt.truth_path.empty()) {
    nlohmann::ordered_json truth;
    truth["seed"] = opt.spec.seed;
    truth["boundaries"] = generated.truth.boundaries;
    truth["boundary_taus"] = generated.truth.boundary_taus;
    truth["sigma_levels"] = generated.truth.sigma_levels;
    std::ofstream tf(opt.truth_path);
    if (!tf) {
      throw pcd::InputError(opt.truth_path + ": cannot open for writing");
    }
    tf << truth.dump(2) << '\n';
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(pcd::kToolName) +
               " - distance-dependent reliability metrics for detection logs"};
  app.set_version_flag("--version", std::string(pcd::kToolVersion));
  app.require_subcommand(1);

  EvalOptions eval_opt;
  pcd::ReportFormat eval_format = pcd::ReportFormat::json;
  std::string eval_trace;
  std::size_t eval_resolution = 200;
  CLI::App* eval_cmd = app.add_subcommand("eval", "run the full evaluation pipeline");
  add_eval_options(eval_cmd, eval_opt);
  eval_cmd->add_option("--format", eval_format, "report format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, pcd::ReportFormat>{{"json", pcd::ReportFormat::json},
                                                   {"csv-summary", pcd::ReportFormat::csv_summary}}))
      ->default_str("json");
  eval_cmd->add_option("--trace", eval_trace, "also write a curve trace CSV to this path");
  eval_cmd->add_option("--resolution", eval_resolution, "trace sample count")
      ->capture_default_str();

  EvalOptions trace_opt;
  std::size_t trace_resolution = 200;
  CLI::App* trace_cmd = app.add_subcommand("trace", "emit a curve trace CSV");
  add_eval_options(trace_cmd, trace_opt);
  trace_cmd->add_option("--resolution", trace_resolution, "trace sample count")
      ->capture_default_str();

  std::string surface_input;
  std::string surface_grid;
  unsigned surface_threads = 1;
  pcd::ReportFormat surface_format = pcd::ReportFormat::json;
  CLI::App* surface_cmd =
      app.add_subcommand("surface", "recompute the PCD surface from an eval report");
  surface_cmd->add_option("--input", surface_input, "report JSON from eval")->required();
  surface_cmd->add_option("--grid", surface_grid, "threshold grid for both axes, LO:STEP:HI");
  surface_cmd->add_option("--threads", surface_threads, "surface worker threads")
      ->capture_default_str();
  surface_cmd->add_option("--format", surface_format, "output format")
      ->transform(CLI::CheckedTransformer(
          std::map<std::string, pcd::ReportFormat>{{"json", pcd::ReportFormat::json},
                                                   {"csv-summary", pcd::ReportFormat::csv_summary}}))
      ->default_str("json");

  SynthOptions synth_opt;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic detection log");
  synth_cmd->add_option("--output", synth_opt.output, "output CSV path, - for stdout")
      ->capture_default_str();
  synth_cmd->add_option("--truth", synth_opt.truth_path, "write planted ground truth JSON here");
  synth_cmd->add_option("--config", synth_opt.config_path, "key=value spec file");
  synth_cmd->add_option("--n", synth_opt.spec.n, "number of points")->capture_default_str();
  synth_cmd->add_option("--x-min", synth_opt.spec.x_min, "closest distance")
      ->capture_default_str();
  synth_cmd->add_option("--x-max", synth_opt.spec.x_max, "farthest distance")
      ->capture_default_str();
  synth_cmd->add_option("--seed", synth_opt.spec.seed, "random seed")->capture_default_str();
  synth_cmd->add_option("--mean", synth_opt.mean_kind, "mean shape")
      ->check(CLI::IsMember({"constant", "linear", "logistic"}))
      ->default_str("logistic");
  synth_cmd->add_option("--mean-value", synth_opt.mean_value, "constant mean level")
      ->capture_default_str();
  synth_cmd->add_option("--intercept", synth_opt.intercept, "linear mean intercept")
      ->capture_default_str();
  synth_cmd->add_option("--slope", synth_opt.slope, "linear mean slope")->capture_default_str();
  synth_cmd->add_option("--top", synth_opt.top, "logistic mean plateau")->capture_default_str();
  synth_cmd->add_option("--midpoint", synth_opt.midpoint, "logistic mean midpoint")
      ->capture_default_str();
  synth_cmd->add_option("--width", synth_opt.width, "logistic mean width")->capture_default_str();
  synth_cmd
      ->add_option("--sigma-boundaries", synth_opt.sigma_boundaries,
                   "planted change-point distances")
      ->delimiter(',');
  synth_cmd->add_option("--sigma-levels", synth_opt.sigma_levels, "per-segment noise levels")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
    if (*eval_cmd) {
      return run_eval(eval_opt, eval_format, eval_trace, eval_resolution);
    }
    if (*trace_cmd) {
      return run_trace(trace_opt, trace_resolution);
    }
    if (*surface_cmd) {
      return run_surface(surface_input, surface_grid, surface_threads, surface_format);
    }
    return run_synth(*synth_cmd, synth_opt);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const pcd::InputError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return 2;
  }
}

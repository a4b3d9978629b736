#include "pcd/synth.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <sstream>

#include "pcd/errors.hpp"
#include "pcd/spline.hpp"

namespace pcd::synth {
namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

double parse_config_number(const std::string& key, const std::string& value) {
  double out = 0.0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last || !std::isfinite(out)) {
    throw InputError("synth config: key '" + key + "' has non-numeric value '" + value + "'");
  }
  return out;
}

std::uint64_t parse_config_integer(const std::string& key, const std::string& value) {
  std::uint64_t out = 0;
  const char* first = value.data();
  const char* last = value.data() + value.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  if (ec != std::errc{} || ptr != last) {
    throw InputError("synth config: key '" + key + "' has non-integer value '" + value + "'");
  }
  return out;
}

std::vector<double> parse_config_list(const std::string& key, const std::string& value) {
  std::vector<double> out;
  if (value.empty()) {
    return out;
  }
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = value.find(',', start);
    const std::string item = value.substr(start, comma - start);
    out.push_back(parse_config_number(key, item));
    if (comma == std::string::npos) {
      break;
    }
    start = comma + 1;
  }
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  const auto e = s.find_last_not_of(" \t");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

}  // namespace

double mean_at(const MeanKind& mean, double x) {
  return std::visit(
      [x](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantMean>) {
          return m.value;
        } else if constexpr (std::is_same_v<T, LinearMean>) {
          return m.intercept + m.slope * x;
        } else {
          return m.top / (1.0 + std::exp((x - m.midpoint) / m.width));
        }
      },
      mean);
}

void SynthSpec::validate() const {
  if (n < 2) {
    throw InputError("synth: n must be >= 2");
  }
  if (!(std::isfinite(x_min) && std::isfinite(x_max) && x_min < x_max)) {
    throw InputError("synth: need finite x_min < x_max");
  }
  if (sigma_levels.size() != sigma_boundaries.size() + 1) {
    throw InputError("synth: sigma_levels must have one more entry than sigma_boundaries");
  }
  for (std::size_t i = 0; i < sigma_boundaries.size(); ++i) {
    const double b = sigma_boundaries[i];
    if (!(b > x_min && b < x_max)) {
      throw InputError("synth: sigma boundaries must lie strictly inside (x_min, x_max)");
    }
    if (i > 0 && !(b > sigma_boundaries[i - 1])) {
      throw InputError("synth: sigma boundaries must be strictly increasing");
    }
  }
  for (double s : sigma_levels) {
    if (!(std::isfinite(s) && s >= 0.0)) {
      throw InputError("synth: sigma levels must be finite and >= 0");
    }
  }
  std::visit(
      [](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, ConstantMean>) {
          if (!std::isfinite(m.value)) {
            throw InputError("synth: constant mean must be finite");
          }
        } else if constexpr (std::is_same_v<T, LinearMean>) {
          if (!(std::isfinite(m.intercept) && std::isfinite(m.slope))) {
            throw InputError("synth: linear mean must be finite");
          }
        } else {
          if (!(std::isfinite(m.top) && std::isfinite(m.midpoint)) ||
              !(std::isfinite(m.width) && m.width > 0.0)) {
            throw InputError("synth: logistic mean needs finite parameters and width > 0");
          }
        }
      },
      mean);
}

double sigma_at(const SynthSpec& spec, double x) {
  const auto it = std::upper_bound(spec.sigma_boundaries.begin(), spec.sigma_boundaries.end(), x);
  return spec.sigma_levels[static_cast<std::size_t>(it - spec.sigma_boundaries.begin())];
}

double noise_unit(std::uint64_t seed, std::size_t i) {
  // One splitmix64 stream per point, keyed off (seed, i): prefixes of a
  // longer run reproduce, and points can be drawn in any order.
  std::uint64_t state =
      seed + (static_cast<std::uint64_t>(i) + 1) * 0x9E3779B97F4A7C15ull;
  const std::uint64_t r1 = splitmix64(state);
  const std::uint64_t r2 = splitmix64(state);
  const double u1 = static_cast<double>((r1 >> 11) + 1) * 0x1.0p-53;  // (0, 1]
  const double u2 = static_cast<double>(r2 >> 11) * 0x1.0p-53;        // [0, 1)
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

Generated generate(const SynthSpec& spec) {
  spec.validate();
  const double h = (spec.x_max - spec.x_min) / static_cast<double>(spec.n - 1);
  std::vector<double> x(spec.n);
  std::vector<double> y(spec.n);
  for (std::size_t i = 0; i < spec.n; ++i) {
    x[i] = i + 1 == spec.n ? spec.x_max : spec.x_min + static_cast<double>(i) * h;
    const double noisy = mean_at(spec.mean, x[i]) + sigma_at(spec, x[i]) * noise_unit(spec.seed, i);
    y[i] = std::clamp(noisy, 0.0, 1.0);
  }

  GroundTruth truth;
  truth.boundaries = spec.sigma_boundaries;
  truth.sigma_levels = spec.sigma_levels;
  for (double b : spec.sigma_boundaries) {
    const auto it = std::lower_bound(x.begin(), x.end(), b);
    truth.boundary_taus.push_back(static_cast<std::size_t>(it - x.begin()));
  }
  return Generated{DistanceSeries(std::move(x), std::move(y)), std::move(truth)};
}

SynthSpec parse_synth_config(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) {
      line.resize(hash);
    }
    line = trim(line);
    if (line.empty()) {
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw InputError("synth config line " + std::to_string(line_no) + ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }

  SynthSpec spec;
  if (const auto it = kv.find("mean"); it != kv.end()) {
    if (it->second == "constant") {
      spec.mean = ConstantMean{};
    } else if (it->second == "linear") {
      spec.mean = LinearMean{};
    } else if (it->second == "logistic") {
      spec.mean = LogisticDecayMean{};
    } else {
      throw InputError("synth config: mean must be constant, linear, or logistic");
    }
    kv.erase(it);
  }

  const auto set_mean_field = [&spec](const std::string& key, double value) {
    const auto wrong_kind = [&key] {
      return InputError("synth config: key '" + key + "' does not apply to the selected mean");
    };
    if (key == "mean.value") {
      auto* m = std::get_if<ConstantMean>(&spec.mean);
      if (m == nullptr) throw wrong_kind();
      m->value = value;
    } else if (key == "mean.intercept" || key == "mean.slope") {
      auto* m = std::get_if<LinearMean>(&spec.mean);
      if (m == nullptr) throw wrong_kind();
      (key == "mean.intercept" ? m->intercept : m->slope) = value;
    } else {
      auto* m = std::get_if<LogisticDecayMean>(&spec.mean);
      if (m == nullptr) throw wrong_kind();
      if (key == "mean.top") {
        m->top = value;
      } else if (key == "mean.midpoint") {
        m->midpoint = value;
      } else {
        m->width = value;
      }
    }
  };

  for (const auto& [key, value] : kv) {
    if (key == "n") {
      spec.n = static_cast<std::size_t>(parse_config_integer(key, value));
    } else if (key == "x_min") {
      spec.x_min = parse_config_number(key, value);
    } else if (key == "x_max") {
      spec.x_max = parse_config_number(key, value);
    } else if (key == "seed") {
      spec.seed = parse_config_integer(key, value);
    } else if (key == "sigma_boundaries") {
      spec.sigma_boundaries = parse_config_list(key, value);
    } else if (key == "sigma_levels") {
      spec.sigma_levels = parse_config_list(key, value);
    } else if (key == "mean.value" || key == "mean.intercept" || key == "mean.slope" ||
               key == "mean.top" || key == "mean.midpoint" || key == "mean.width") {
      set_mean_field(key, parse_config_number(key, value));
    } else {
      throw InputError("synth config: unknown key '" + key + "'");
    }
  }
  spec.validate();
  return spec;
}

BruteScan brute_force_sic_scan(std::span<const double> residuals, std::size_t min_segment) {
  const std::size_t n = residuals.size();
  if (min_segment < 1 || n < 2 * min_segment) {
    throw InputError("brute_force_sic_scan: window too small");
  }

  // Everything from scratch, no shared sums.
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    total += residuals[i] * residuals[i];
  }
  const double l0 =
      static_cast<double>(n) * std::log(std::max(total / static_cast<double>(n), 1e-12));

  double best = std::numeric_limits<double>::infinity();
  std::size_t best_tau = min_segment;
  for (std::size_t tau = min_segment; tau + min_segment <= n; ++tau) {
    double left = 0.0;
    for (std::size_t i = 0; i < tau; ++i) {
      left += residuals[i] * residuals[i];
    }
    double right = 0.0;
    for (std::size_t i = tau; i < n; ++i) {
      right += residuals[i] * residuals[i];
    }
    const double l =
        static_cast<double>(tau) *
            std::log(std::max(left / static_cast<double>(tau), 1e-12)) +
        static_cast<double>(n - tau) *
            std::log(std::max(right / static_cast<double>(n - tau), 1e-12));
    if (l < best) {
      best = l;
      best_tau = tau;
    }
  }
  return {std::log(static_cast<double>(n)) - (best - l0), best_tau};
}

namespace {

double tail_probability(double mu, double sigma, double y_t) {
  if (sigma == 0.0) {
    return mu > y_t ? 1.0 : 0.0;
  }
  const double z = (mu - y_t) / sigma;
  return 0.5 * (1.0 + std::erf(z / std::numbers::sqrt2));
}

}  // namespace

std::optional<double> brute_force_pcd(std::span<const double> x, std::span<const double> mu,
                                      std::span<const double> sigma, double y_t, double p_t) {
  std::optional<double> best;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (tail_probability(mu[i], sigma[i], y_t) > p_t) {
      if (!best || x[i] > *best) {
        best = x[i];
      }
    }
  }
  return best;
}

std::optional<double> brute_force_pcd(const SegmentModel& model, double y_t, double p_t) {
  std::optional<double> best;
  for (std::size_t i = 0; i < model.series.size(); ++i) {
    std::size_t segment = 0;
    for (std::size_t b : model.boundaries) {
      if (i >= b) {
        ++segment;
      }
    }
    const double mu = evaluate(model.curve, model.series.x()[i]);
    if (tail_probability(mu, model.sigmas[segment], y_t) > p_t) {
      if (!best || model.series.x()[i] > *best) {
        best = model.series.x()[i];
      }
    }
  }
  return best;
}

}  // namespace pcd::synth

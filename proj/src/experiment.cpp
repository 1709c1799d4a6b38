#include "rlmc/experiment.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <ostream>
#include <sstream>

#include "rlmc/ensemble.hpp"

#ifndef RLMC_CONFIG_DIR
#define RLMC_CONFIG_DIR "configs"
#endif

namespace rlmc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec != std::errc() || ptr != t.data() + t.size() || t.empty()) {
    throw ConfigError("key '" + key + "': not a number: '" + text + "'");
  }
  return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  const std::string t = trim(text);
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (ec == std::errc() && ptr == t.data() + t.size() && !t.empty()) return v;
  // Allow 1e5-style counts as long as they are exact integers.
  const double d = parse_double(key, text);
  if (d < 0.0 || d != std::floor(d) || d > 9.0e18) {
    throw ConfigError("key '" + key + "': not a non-negative integer: '" + text + "'");
  }
  return static_cast<std::uint64_t>(d);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_double(key, item));
  }
  return out;
}

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

SpherePoint default_sphere_start() {
  return SpherePoint(Chart::One, std::numbers::pi / 4, std::numbers::pi / 4);
}

SpdPoint default_spd_start() {
  HalfVec x;
  x << 2, 4, 2, 1, 1, 0;
  return SpdPoint(hvec_inv(x));
}

}  // namespace

KeyValues parse_key_values(std::istream& in) {
  KeyValues kv;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError("line " + std::to_string(line_no) + ": empty key");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

KeyValues read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  return parse_key_values(in);
}

void overlay(KeyValues& base, const KeyValues& top) {
  for (const auto& [k, v] : top) base[k] = v;
}

std::string preset_directory() {
  if (const char* env = std::getenv("RLMC_CONFIG_DIR"); env != nullptr && *env != '\0') {
    return env;
  }
  return RLMC_CONFIG_DIR;
}

std::string preset_path(const std::string& preset) {
  return preset_directory() + "/" + preset + ".cfg";
}

KeyValues resolve_layers(const ConfigLayers& layers) {
  KeyValues kv;
  if (!layers.preset.empty()) overlay(kv, read_key_value_file(preset_path(layers.preset)));
  if (!layers.file.empty()) overlay(kv, read_key_value_file(layers.file));
  if (layers.env_seed && !layers.env_seed->empty()) kv["seed"] = *layers.env_seed;
  for (const auto& s : layers.sets) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
    kv[trim(s.substr(0, eq))] = trim(s.substr(eq + 1));
  }
  overlay(kv, layers.flags);
  return kv;
}

ExperimentConfig experiment_from_key_values(const KeyValues& kv) {
  static const char* const kKnown[] = {"name",  "target", "lambda", "sigma",  "obs",
                                       "scheme", "noise", "h",      "T",      "L",
                                       "seed",  "R",      "burn_in", "output", "x0",
                                       "workers", "synthetic"};
  for (const auto& [k, v] : kv) {
    bool known = false;
    for (const char* name : kKnown) known = known || k == name;
    if (!known) throw ConfigError("unknown config key '" + k + "'");
  }
  auto get = [&kv](const std::string& k) -> std::optional<std::string> {
    const auto it = kv.find(k);
    if (it == kv.end()) return std::nullopt;
    return it->second;
  };

  ExperimentConfig cfg;
  if (auto v = get("name")) cfg.name = *v;

  const std::string target = get("target").value_or("vmf");
  if (target == "vmf") {
    cfg.potential = VonMisesFisher{get("lambda") ? parse_double("lambda", *get("lambda")) : 1.0};
  } else if (target == "rgauss") {
    cfg.potential =
        RiemannianGaussian{get("sigma") ? parse_double("sigma", *get("sigma")) : 1.0};
  } else if (target == "dwell") {
    cfg.potential = DoubleWell{};
  } else {
    throw ConfigError("unknown target '" + target + "' (expected vmf, rgauss, dwell)");
  }
  const bool sphere = cfg.manifold() == ManifoldKind::Sphere2;

  cfg.observable = get("obs").value_or(target == "vmf"      ? "sin_r"
                                       : target == "rgauss" ? "det"
                                                            : "inv1ptr");
  cfg.scheme = get("scheme") ? scheme_from_name(*get("scheme"))
                             : (sphere ? Scheme::RetractionEuler : Scheme::ExpEuler);
  if (auto v = get("noise")) cfg.noise = noise_kind_from_name(*v);
  if (auto v = get("h")) cfg.h_list = parse_list("h", *v);
  if (auto v = get("T")) cfg.T = parse_double("T", *v);
  if (auto v = get("L")) cfg.L = parse_count("L", *v);
  if (auto v = get("seed")) cfg.seed = parse_count("seed", *v);
  if (auto v = get("R"); v && trim(*v) != "none" && !trim(*v).empty()) {
    cfg.rejection_radius = parse_double("R", *v);
  }
  if (auto v = get("burn_in")) cfg.burn_in = parse_count("burn_in", *v);
  if (auto v = get("output")) cfg.output = *v;
  if (auto v = get("workers")) cfg.workers = static_cast<unsigned>(parse_count("workers", *v));
  if (auto v = get("synthetic")) {
    const auto ab = parse_list("synthetic", *v);
    if (ab.size() != 2) throw ConfigError("synthetic expects two numbers 'a,b'");
    cfg.synthetic = std::make_pair(ab[0], ab[1]);
  }

  if (auto v = get("x0")) {
    const auto x = parse_list("x0", *v);
    if (sphere) {
      if (x.size() != 2) throw ConfigError("x0 on the sphere is 'r,theta' in chart 1");
      cfg.x0 = SpherePoint(Chart::One, x[0], x[1]);
    } else {
      if (x.size() != 6) throw ConfigError("x0 on SPD matrices is the six hvec coordinates");
      HalfVec hv;
      for (int i = 0; i < 6; ++i) hv(i) = x[i];
      try {
        cfg.x0 = SpdPoint(hvec_inv(hv));
      } catch (const NotPositiveDefinite& e) {
        throw ConfigError(std::string("x0 is not positive definite: ") + e.what());
      }
    }
  } else if (sphere) {
    cfg.x0 = default_sphere_start();
  } else {
    cfg.x0 = default_spd_start();
  }
  return cfg;
}

void validate(const ExperimentConfig& cfg) {
  if (cfg.h_list.empty()) throw ConfigError("h_list is empty: set h = h1,h2,...");
  if (cfg.L < 2) throw ConfigError("L must be at least 2");
  for (double h : cfg.h_list) sampler_config(cfg, h).validate();
  if (!observable(cfg).supports(cfg.manifold())) {
    throw ConfigError("observable '" + cfg.observable + "' is not defined for target " +
                      describe(cfg.potential));
  }
}

SamplerConfig sampler_config(const ExperimentConfig& cfg, double h) {
  SamplerConfig s;
  s.potential = cfg.potential;
  s.h = h;
  s.T = cfg.T;
  s.noise = cfg.noise;
  s.scheme = cfg.scheme;
  s.rejection_radius = cfg.rejection_radius;
  s.initial = cfg.x0;
  s.seed = cfg.seed;
  return s;
}

Observable observable(const ExperimentConfig& cfg) {
  try {
    return observable_from_name(cfg.observable);
  } catch (const UnsupportedError& e) {
    throw ConfigError(e.what());
  }
}

double reference(const ExperimentConfig& cfg) {
  return reference_value(cfg.potential, observable(cfg));
}

EstimateResult run_ensemble_at(const ExperimentConfig& cfg, double h,
                               std::optional<double> ref) {
  EnsembleOptions opts;
  opts.trajectories = cfg.L;
  opts.workers = cfg.workers;
  const SampleTally t = run_ensemble(sampler_config(cfg, h), observable(cfg), opts);
  return ensemble_estimate(t, ref);
}

ConvergenceReport run_convergence(const ExperimentConfig& cfg) {
  validate(cfg);
  const double ref = reference(cfg);
  ConvergenceReport report;
  for (double h : cfg.h_list) {
    ConvergenceRow row;
    row.h = h;
    row.L = cfg.L;
    const auto start = std::chrono::steady_clock::now();
    try {
      row.result = run_ensemble_at(cfg, h, ref);
    } catch (const std::exception& e) {
      row.failure = e.what();
    }
    row.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    report.rows.push_back(std::move(row));
  }
  report.fit = fit_resolved_rows(report.rows);
  return report;
}

void write_convergence_csv(std::ostream& out, const ConvergenceReport& report) {
  out << kConvergenceCsvHeader << '\n';
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& row : report.rows) {
    const EstimateResult& r = row.result;
    const bool ok = !row.failure.has_value();
    out << format_double(row.h) << ',' << row.L << ',' << format_double(ok ? r.estimate : nan)
        << ',' << format_double(ok && r.err ? *r.err : nan) << ','
        << format_double(ok ? r.mcerr : nan) << ',' << format_double(ok ? r.ci_low() : nan) << ','
        << format_double(ok ? r.ci_high() : nan) << ',' << (ok ? r.n_rejected : 0) << ','
        << format_double(row.wall_time_s) << '\n';
    if (!ok) {
      std::string msg = *row.failure;
      for (char& c : msg) {
        if (c == '\n' || c == '\r') c = ' ';
      }
      out << "# failed," << format_double(row.h) << ',' << msg << '\n';
    }
  }
  if (report.fit) {
    out << "# fit,slope," << format_double(report.fit->slope) << ",intercept,"
        << format_double(report.fit->intercept) << ",rows," << report.fit->rows_used << '\n';
  }
}

ConvergenceReport read_convergence_csv(std::istream& in) {
  ConvergenceReport report;
  std::string line;
  if (!std::getline(in, line) || trim(line) != kConvergenceCsvHeader) {
    throw ConfigError("convergence CSV: missing or unexpected header");
  }
  auto split = [](const std::string& s) {
    std::vector<std::string> cells;
    std::stringstream ss(s);
    std::string c;
    while (std::getline(ss, c, ',')) cells.push_back(trim(c));
    return cells;
  };
  auto num = [](const std::string& s) {
    return s == "nan" ? std::numeric_limits<double>::quiet_NaN() : parse_double("csv", s);
  };
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line.rfind("# fit,", 0) == 0) {
      const auto c = split(line.substr(2));
      if (c.size() != 7) throw ConfigError("convergence CSV: malformed fit line");
      report.fit = SlopeFit{num(c[2]), num(c[4]), static_cast<std::size_t>(parse_count("csv", c[6]))};
      continue;
    }
    if (line.rfind("# failed,", 0) == 0) {
      const auto rest = line.substr(9);
      const auto comma = rest.find(',');
      if (!report.rows.empty()) {
        report.rows.back().failure = comma == std::string::npos ? rest : rest.substr(comma + 1);
      }
      continue;
    }
    if (line[0] == '#') continue;
    const auto c = split(line);
    if (c.size() != 9) throw ConfigError("convergence CSV: expected 9 columns in '" + line + "'");
    ConvergenceRow row;
    row.h = num(c[0]);
    row.L = parse_count("csv", c[1]);
    row.result.estimate = num(c[2]);
    const double err = num(c[3]);
    if (!std::isnan(err)) row.result.err = err;
    row.result.mcerr = num(c[4]);
    const double lo = num(c[5]);
    const double hi = num(c[6]);
    row.result.ci_halfwidth = 0.5 * (hi - lo);
    row.result.n_samples = row.L;
    row.result.n_rejected = parse_count("csv", c[7]);
    row.wall_time_s = num(c[8]);
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::optional<double> ExtrapolationResult::err1() const {
  if (!reference) return std::nullopt;
  return std::abs(a1 - *reference);
}

std::optional<double> ExtrapolationResult::err2() const {
  if (!reference) return std::nullopt;
  return std::abs(a2 - *reference);
}

std::optional<double> ExtrapolationResult::err_improved() const {
  if (!reference) return std::nullopt;
  return std::abs(improved - *reference);
}

ExtrapolationResult run_extrapolation(const ExperimentConfig& cfg) {
  if (cfg.h_list.size() != 2) {
    throw ConfigError("extrapolation needs exactly two step sizes, got " +
                      std::to_string(cfg.h_list.size()));
  }
  ExtrapolationResult r;
  r.h1 = cfg.h_list[0];
  r.h2 = cfg.h_list[1];
  if (cfg.synthetic) {
    const auto [a, b] = *cfg.synthetic;
    r.a1 = a + b * r.h1;
    r.a2 = a + b * r.h2;
  } else {
    validate(cfg);
    r.reference = reference(cfg);
    r.first = run_ensemble_at(cfg, r.h1, r.reference);
    r.second = run_ensemble_at(cfg, r.h2, r.reference);
    r.a1 = r.first->estimate;
    r.a2 = r.second->estimate;
  }
  r.improved = talay_tubaro(r.h1, r.a1, r.h2, r.a2);
  return r;
}

TimeAverageResult run_time_average(const ExperimentConfig& cfg) {
  if (cfg.h_list.size() != 1) throw ConfigError("time-average needs exactly one step size");
  const SamplerConfig s = sampler_config(cfg, cfg.h_list[0]);
  s.validate();
  const Observable obs = observable(cfg);
  if (!obs.supports(cfg.manifold())) {
    throw ConfigError("observable '" + cfg.observable + "' is not defined for this target");
  }
  const TrajectoryOutcome out = run_trajectory(s, 0, &obs);
  const auto* done = std::get_if<Completed>(&out.status);
  if (done == nullptr) {
    throw InsufficientSamples("time-average trajectory was rejected at step " +
                              std::to_string(std::get<Rejected>(out.status).step));
  }
  TimeAverageResult r;
  r.h = s.h;
  r.steps = s.steps();
  r.burn_in = cfg.burn_in;
  r.estimate = time_average(done->trace, cfg.burn_in);
  r.reference = reference(cfg);
  r.err = std::abs(r.estimate - *r.reference);
  return r;
}

}  // namespace rlmc

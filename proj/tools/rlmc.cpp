// rlmc: Riemannian Langevin Monte Carlo experiments from the command line.
//
//   rlmc reference      --preset table-3
//   rlmc reference      --target vmf --lambda 1 --obs sin_r
//   rlmc converge       --preset table-1 --L 10000 --output t1.csv
//   rlmc extrapolate    --preset gpu-extrapolation
//   rlmc run            --config my.cfg --h 0.05
//   rlmc time-average   --preset table-1 --h 0.01 --T 1000

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rlmc/errors.hpp"
#include "rlmc/experiment.hpp"

namespace {

// Flags that map one-to-one onto config keys.
constexpr std::pair<const char*, const char*> kKeyFlags[] = {
    {"--name", "name"},       {"--target", "target"}, {"--lambda", "lambda"},
    {"--sigma", "sigma"},     {"--obs", "obs"},       {"--scheme", "scheme"},
    {"--noise", "noise"},     {"--h", "h"},           {"--T", "T"},
    {"--L", "L"},             {"--seed", "seed"},     {"--R", "R"},
    {"--burn-in", "burn_in"}, {"--output", "output"}, {"--x0", "x0"},
    {"--workers", "workers"},
};

struct Common {
  std::string preset;
  std::string config;
  std::vector<std::string> sets;
  std::map<std::string, std::string> flags;
  std::vector<std::string> synthetic;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--preset", c.preset, "Shipped preset (table-1 .. table-4, gpu-extrapolation)");
  cmd->add_option("--config", c.config, "key=value config file");
  cmd->add_option("--set", c.sets, "Override a config key, as key=value")->take_all();
  for (const auto& [flag, key] : kKeyFlags) {
    cmd->add_option_function<std::string>(
        flag, [&c, k = std::string(key)](const std::string& v) { c.flags[k] = v; },
        std::string("Config key '") + key + "'");
  }
  cmd->add_option("--synthetic", c.synthetic, "Use A(h) = a + b h instead of sampling")
      ->expected(2);
}

rlmc::ExperimentConfig resolve(const Common& c) {
  rlmc::ConfigLayers layers;
  layers.preset = c.preset;
  layers.file = c.config;
  if (const char* env = std::getenv("RLMC_SEED")) layers.env_seed = env;
  layers.sets = c.sets;
  layers.flags = c.flags;
  if (c.synthetic.size() == 2) layers.flags["synthetic"] = c.synthetic[0] + "," + c.synthetic[1];
  return rlmc::experiment_from_key_values(rlmc::resolve_layers(layers));
}

template <class F>
void with_output(const rlmc::ExperimentConfig& cfg, F&& write) {
  if (cfg.output.empty() || cfg.output == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(cfg.output);
  if (!out) throw rlmc::ConfigError("cannot write '" + cfg.output + "'");
  write(out);
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string num(const std::optional<double>& v) { return v ? num(*v) : "nan"; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Riemannian Langevin Monte Carlo on the sphere and on SPD matrices"};
  app.require_subcommand(1);
  // Free -h: --h is the step size.
  app.set_help_flag("--help", "Print this help message and exit");

  Common ref_opts, conv_opts, extra_opts, run_opts, ta_opts;
  auto* ref_cmd = app.add_subcommand("reference", "Quadrature value of E_pi[f]");
  auto* conv_cmd = app.add_subcommand("converge", "Ensemble estimates over the h list (CSV)");
  auto* extra_cmd = app.add_subcommand("extrapolate", "Talay-Tubaro extrapolation from two step sizes");
  auto* run_cmd = app.add_subcommand("run", "Ensemble estimate at a single step size (CSV)");
  auto* ta_cmd = app.add_subcommand("time-average", "Ergodic average along one long trajectory");
  add_common(ref_cmd, ref_opts);
  add_common(conv_cmd, conv_opts);
  add_common(extra_cmd, extra_opts);
  add_common(run_cmd, run_opts);
  add_common(ta_cmd, ta_opts);

  CLI11_PARSE(app, argc, argv);

  try {
    if (ref_cmd->parsed()) {
      const auto cfg = resolve(ref_opts);
      with_output(cfg, [&](std::ostream& out) { out << num(rlmc::reference(cfg)) << '\n'; });
    } else if (conv_cmd->parsed()) {
      const auto cfg = resolve(conv_opts);
      const auto report = rlmc::run_convergence(cfg);
      with_output(cfg, [&](std::ostream& out) { rlmc::write_convergence_csv(out, report); });
    } else if (run_cmd->parsed()) {
      auto cfg = resolve(run_opts);
      if (cfg.h_list.size() != 1) throw rlmc::ConfigError("run needs exactly one step size (--h)");
      const auto report = rlmc::run_convergence(cfg);
      with_output(cfg, [&](std::ostream& out) { rlmc::write_convergence_csv(out, report); });
      if (report.rows.front().failure) return 1;
    } else if (extra_cmd->parsed()) {
      const auto cfg = resolve(extra_opts);
      const auto r = rlmc::run_extrapolation(cfg);
      with_output(cfg, [&](std::ostream& out) {
        out << "h1,A1,h2,A2,extrapolated,reference,err1,err2,err_extrapolated\n"
            << num(r.h1) << ',' << num(r.a1) << ',' << num(r.h2) << ',' << num(r.a2) << ','
            << num(r.improved) << ',' << num(r.reference) << ',' << num(r.err1()) << ','
            << num(r.err2()) << ',' << num(r.err_improved()) << '\n';
      });
    } else if (ta_cmd->parsed()) {
      const auto cfg = resolve(ta_opts);
      const auto r = rlmc::run_time_average(cfg);
      with_output(cfg, [&](std::ostream& out) {
        out << "h,steps,burn_in,estimate,reference,err\n"
            << num(r.h) << ',' << r.steps << ',' << r.burn_in << ',' << num(r.estimate) << ','
            << num(r.reference) << ',' << num(r.err) << '\n';
      });
    }
  } catch (const rlmc::ConfigError& e) {
    std::cerr << "rlmc: configuration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rlmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

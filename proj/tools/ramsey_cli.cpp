// ramsey: sweeps of two-field Ramsey fringes with independently detuned fields.
//
//   ramsey fringe   [--config cfg.json] [--out out.csv] [--engine analytic|numeric|ensemble]
//   ramsey contour  ...
//   ramsey ensemble ... [--oracle]
//   ramsey width    ...
//   ramsey pulse    ...  (sin^4 envelopes, numerical propagation)
//
// Exit codes: 0 success, 1 configuration error, 2 numerical-domain error.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ramsey/app/commands.hpp"
#include "ramsey/app/config.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string out_path;
  std::optional<std::string> engine;
  std::optional<std::string> picture;
  std::optional<unsigned> threads;
  bool oracle = false;
  bool area_normalized = false;
  bool print_config = false;
  std::optional<double> tau, gap, rabi, step, delta_min, delta_max;
  std::optional<std::size_t> delta_points;
  std::vector<double> t0_values;
  std::optional<std::string> envelope;
  std::optional<std::string> envelope_file;
};

void add_options(CLI::App& cmd, Overrides& o) {
  cmd.add_option("--config", o.config_path, "JSON run configuration");
  cmd.add_option("--out", o.out_path, "output CSV path (default: stdout)");
  cmd.add_option("--engine", o.engine, "analytic | numeric | ensemble")
      ->check(CLI::IsMember({"analytic", "numeric", "ensemble"}));
  cmd.add_option("--picture", o.picture, "interaction picture for the numeric engine")
      ->check(CLI::IsMember({"i1", "i2", "i3"}));
  cmd.add_option("--threads", o.threads, "worker threads (default: hardware concurrency)");
  cmd.add_flag("--oracle", o.oracle, "ensemble: brute-force 2D phase-space quadrature");
  cmd.add_flag("--area-normalized", o.area_normalized,
               "scale the pulse peak so each pulse has area pi/2");
  cmd.add_flag("--print-config", o.print_config, "print the effective configuration and exit");
  cmd.add_option("--tau", o.tau, "pulse duration");
  cmd.add_option("--gap", o.gap, "free flight time between the pulses");
  cmd.add_option("--rabi", o.rabi, "peak Rabi frequency");
  cmd.add_option("--step", o.step, "integrator step (0: automatic)");
  cmd.add_option("--delta-min", o.delta_min, "lower end of the detuning sweep");
  cmd.add_option("--delta-max", o.delta_max, "upper end of the detuning sweep");
  cmd.add_option("--delta-points", o.delta_points, "number of detuning samples");
  cmd.add_option("--t0", o.t0_values, "entrance times (one block each)");
  cmd.add_option("--envelope", o.envelope, "mesa | sin4 | tabulated")
      ->check(CLI::IsMember({"mesa", "sin4", "tabulated"}));
  cmd.add_option("--envelope-file", o.envelope_file, "two-column CSV (time, rabi)");
}

ramsey::app::RunConfig effective_config(const Overrides& o) {
  ramsey::app::RunConfig cfg =
      o.config_path.empty() ? ramsey::app::RunConfig{} : ramsey::app::load_config(o.config_path);
  if (o.engine) cfg.engine = *o.engine;
  if (o.picture) cfg.picture = *o.picture;
  if (o.threads) cfg.threads = *o.threads;
  if (o.oracle) cfg.oracle = true;
  if (o.area_normalized) cfg.area_normalized = true;
  if (o.tau) cfg.duration = *o.tau;
  if (o.gap) cfg.gap = *o.gap;
  if (o.rabi) cfg.rabi = *o.rabi;
  if (o.step) cfg.step = *o.step;
  if (o.delta_min) cfg.delta.min = *o.delta_min;
  if (o.delta_max) cfg.delta.max = *o.delta_max;
  if (o.delta_points) cfg.delta.points = *o.delta_points;
  if (!o.t0_values.empty()) cfg.t0_values = o.t0_values;
  if (o.envelope) cfg.envelope = *o.envelope;
  if (o.envelope_file) cfg.envelope_file = *o.envelope_file;
  cfg.validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Ramsey fringes for two separated fields with independent detunings"};
  app.require_subcommand(1);
  Overrides overrides;
  for (const char* name : {"fringe", "contour", "ensemble", "width", "pulse"}) {
    add_options(*app.add_subcommand(name), overrides);
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  try {
    const ramsey::app::RunConfig cfg = effective_config(overrides);
    if (overrides.print_config) {
      std::cout << ramsey::app::to_json(cfg).dump(2) << '\n';
      return 0;
    }
    const std::string csv = ramsey::app::run_command(command, cfg);
    if (overrides.out_path.empty()) {
      std::cout << csv;
    } else {
      std::ofstream out(overrides.out_path, std::ios::binary);
      if (!out) throw ramsey::ConfigError("cannot open output file: " + overrides.out_path);
      out << csv;
      if (!out) throw ramsey::ConfigError("failed writing output file: " + overrides.out_path);
    }
  } catch (const ramsey::ConfigError& e) {
    std::cerr << "ramsey: configuration error: " << e.what() << '\n';
    return 1;
  } catch (const ramsey::DomainError& e) {
    std::cerr << "ramsey: numerical error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ramsey: error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}

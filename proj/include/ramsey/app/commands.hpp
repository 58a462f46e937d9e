#pragma once

#include <charconv>
#include <cmath>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <system_error>

#include "ramsey/analysis.hpp"
#include "ramsey/analytic.hpp"
#include "ramsey/app/config.hpp"
#include "ramsey/ensemble.hpp"
#include "ramsey/numeric.hpp"
#include "ramsey/pulses.hpp"

// Sweep commands behind the CLI. Each returns the full CSV text so output
// is identical however it is written and however many threads computed it.
namespace ramsey::app {

// Shortest decimal string that reads back to the same double.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  if (res.ec != std::errc{}) throw Error("format_double: conversion failed");
  return std::string(buf, res.ptr);
}

inline std::string format_optional(const std::optional<double>& v) {
  return v ? format_double(*v) : std::string("nan");
}

// Probability as a function of (delta, t0) for the configured engine. For
// the ensemble engine t0 is the central entrance time of the cloud.
using Engine2 = std::function<double(double, double)>;

namespace detail {

inline EnvelopeKind load_envelope(const RunConfig& cfg) {
  if (cfg.envelope == "mesa") return Mesa{};
  if (cfg.envelope == "sin4") return SinFourth{};
  return load_tabulated_csv(cfg.envelope_file);
}

inline double effective_peak(const RunConfig& cfg, const EnvelopeKind& env) {
  return cfg.area_normalized ? area_normalized_peak(env, cfg.duration, std::numbers::pi / 2.0)
                             : cfg.rabi;
}

}  // namespace detail

inline SequenceConfig make_sequence(const RunConfig& cfg, const EnvelopeKind& env, double delta,
                                    double t0) {
  SequenceConfig seq;
  seq.entrance_time = t0;
  seq.gap = cfg.gap;
  seq.constants = cfg.constants;
  const double peak = detail::effective_peak(cfg, env);
  const double d1 = cfg.detuning_mode == "opposite" ? -delta : delta;
  seq.pulse1 = PulseConfig{peak, d1, cfg.duration, cfg.phase1, env};
  seq.pulse2 = PulseConfig{peak, delta, cfg.duration, cfg.phase2, env};
  return seq;
}

inline SpatialConfig make_spatial(const RunConfig& cfg) {
  SpatialConfig s;
  s.field_length = cfg.ensemble.field_length;
  s.gap_length = cfg.ensemble.gap_length;
  s.constants = cfg.constants;
  s.rabi = cfg.ensemble.rabi.value_or(
      SpatialConfig::pi_half_rabi(cfg.ensemble.k_mean, cfg.ensemble.field_length, cfg.constants));
  return s;
}

inline Engine2 make_engine(const RunConfig& cfg, const std::string& engine) {
  if (engine == "ensemble") {
    if (cfg.detuning_mode != "opposite") {
      throw ConfigError("the ensemble engine supports detuning_mode 'opposite' only");
    }
    const SpatialConfig space = make_spatial(cfg);
    const PhaseSpaceGaussian base =
        PhaseSpaceGaussian::from_momentum_spread(cfg.ensemble.k_mean, cfg.ensemble.dk, 0.0);
    const QuadratureOptions quad = cfg.ensemble.quadrature;
    if (cfg.oracle) {
      return [=](double delta, double t0c) {
        return averaged_p12_quadrature(delta, base.with_t0_center(t0c), space, quad);
      };
    }
    return [=](double delta, double t0c) {
      return averaged_p12_closed(delta, base.with_t0_center(t0c), space, quad);
    };
  }

  const EnvelopeKind env = detail::load_envelope(cfg);
  if (engine == "analytic") {
    if (!std::holds_alternative<Mesa>(env)) {
      throw ConfigError("the analytic engine requires mesa pulses; use --engine numeric");
    }
    return [=](double delta, double t0) {
      return two_pulse_state(make_sequence(cfg, env, delta, t0)).excited_probability();
    };
  }
  if (engine == "numeric") {
    const Picture picture = picture_from(cfg.picture);
    return [=](double delta, double t0) {
      const SequenceConfig seq = make_sequence(cfg, env, delta, t0);
      IntegratorParams params{cfg.step > 0.0 ? cfg.step : recommended_step(seq), cfg.max_defect};
      return p12_numeric(picture, seq, params);
    };
  }
  throw ConfigError("invalid engine: '" + engine + "'");
}

namespace detail {

inline void write_header(std::ostringstream& os, const char* command, const RunConfig& cfg,
                         const std::string& engine) {
  os << "# ramsey " << command << " engine=" << engine << '\n';
  os << "# config: " << provenance(cfg) << '\n';
}

inline void write_blocks(std::ostringstream& os, const RunConfig& cfg, const Engine2& engine,
                         const char* t0_label, const char* value_label) {
  bool first = true;
  for (double t0 : cfg.t0_values) {
    const FringeScan scan = scan_fringe(
        cfg.delta, [&](double delta) { return engine(delta, t0); }, cfg.threads);
    if (!first) os << "\n\n";
    first = false;
    os << "# " << t0_label << '=' << format_double(t0) << '\n';
    os << "delta," << value_label << '\n';
    for (std::size_t i = 0; i < scan.detunings.size(); ++i) {
      os << format_double(scan.detunings[i]) << ',' << format_double(scan.values[i]) << '\n';
    }
  }
}

}  // namespace detail

// delta, p12 blocks, one per entrance time, separated by two blank lines.
inline std::string cmd_fringe(const RunConfig& cfg) {
  cfg.validate();
  std::ostringstream os;
  detail::write_header(os, "fringe", cfg, cfg.engine);
  detail::write_blocks(os, cfg, make_engine(cfg, cfg.engine), "t0", "p12");
  return os.str();
}

// Header row of delta values, then one row per t0 starting with t0.
inline std::string cmd_contour(const RunConfig& cfg) {
  cfg.validate();
  const ContourGrid grid = contour_grid(cfg.delta, cfg.t0, make_engine(cfg, cfg.engine), cfg.threads);
  std::ostringstream os;
  detail::write_header(os, "contour", cfg, cfg.engine);
  os << "t0\\delta";
  for (std::size_t c = 0; c < cfg.delta.points; ++c) os << ',' << format_double(cfg.delta.at(c));
  os << '\n';
  for (std::size_t r = 0; r < cfg.t0.points; ++r) {
    os << format_double(cfg.t0.at(r));
    for (std::size_t c = 0; c < cfg.delta.points; ++c) os << ',' << format_double(grid.at(r, c));
    os << '\n';
  }
  return os.str();
}

// Cloud-averaged fringes, one block per central entrance time.
inline std::string cmd_ensemble(const RunConfig& cfg) {
  cfg.validate();
  std::ostringstream os;
  detail::write_header(os, "ensemble", cfg, cfg.oracle ? "ensemble-quadrature" : "ensemble");
  detail::write_blocks(os, cfg, make_engine(cfg, "ensemble"), "t0c", "p12_avg");
  return os.str();
}

// Central-fringe report per entrance time. The estimate column is the
// small-detuning pi/2-pulse formula; ratio is estimate / first_zero_pos.
inline std::string cmd_width(const RunConfig& cfg) {
  cfg.validate();
  const Engine2 engine = make_engine(cfg, cfg.engine);
  const double search = cfg.zero_search_max > 0.0 ? cfg.zero_search_max
                        : cfg.delta.max > 0.0     ? cfg.delta.max
                                                  : 10.0;
  std::vector<FringeMetrics> metrics(cfg.t0_values.size());
  parallel_for(metrics.size(), cfg.threads, [&](std::size_t i) {
    const double t0 = cfg.t0_values[i];
    metrics[i] = fringe_metrics([&](double d) { return engine(d, t0); }, search, 1e-12);
  });

  std::ostringstream os;
  detail::write_header(os, "width", cfg, cfg.engine);
  os << "t0,first_zero_pos,first_zero_neg,fwhm,peak,estimate,ratio\n";
  for (std::size_t i = 0; i < metrics.size(); ++i) {
    const double t0 = cfg.t0_values[i];
    const double estimate = central_zero_estimate(cfg.duration, cfg.gap, t0);
    const auto& m = metrics[i];
    const double ratio = m.first_zero_pos ? estimate / *m.first_zero_pos : std::nan("");
    os << format_double(t0) << ',' << format_optional(m.first_zero_pos) << ','
       << format_optional(m.first_zero_neg) << ',' << format_optional(m.fwhm) << ','
       << format_double(m.peak_value) << ',' << format_double(estimate) << ','
       << format_double(ratio) << '\n';
  }
  return os.str();
}

// Numerically integrated fringes for shaped pulses (sin^4 unless a
// tabulated envelope is configured).
inline std::string cmd_pulse(const RunConfig& base) {
  RunConfig cfg = base;
  if (cfg.envelope == "mesa") cfg.envelope = "sin4";
  cfg.engine = "numeric";
  cfg.validate();
  const EnvelopeKind env = detail::load_envelope(cfg);
  const double peak = detail::effective_peak(cfg, env);
  std::ostringstream os;
  detail::write_header(os, "pulse", cfg, "numeric");
  os << "# envelope=" << envelope_name(env) << " peak=" << format_double(peak)
     << " area=" << format_double(pulse_area(env, cfg.duration, peak))
     << (cfg.area_normalized ? " (area-normalized)" : "") << '\n';
  detail::write_blocks(os, cfg, make_engine(cfg, "numeric"), "t0", "p12");
  return os.str();
}

inline std::string run_command(const std::string& name, const RunConfig& cfg) {
  if (name == "fringe") return cmd_fringe(cfg);
  if (name == "contour") return cmd_contour(cfg);
  if (name == "ensemble") return cmd_ensemble(cfg);
  if (name == "width") return cmd_width(cfg);
  if (name == "pulse") return cmd_pulse(cfg);
  throw ConfigError("unknown command: '" + name + "'");
}

}  // namespace ramsey::app

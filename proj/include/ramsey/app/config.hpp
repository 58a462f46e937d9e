#pragma once

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ramsey/analysis.hpp"
#include "ramsey/core.hpp"
#include "ramsey/ensemble.hpp"
#include "ramsey/numeric.hpp"

// Run configuration for the command-line front end, stored as JSON. Every
// key is optional; unknown keys are rejected. Defaults reproduce the
// dimensionless setup tau = 1, T = 5, Omega = pi/2, hbar = m = 1.
namespace ramsey::app {

using nlohmann::json;

struct EnsembleSettings {
  double k_mean = 1.0;
  double dk = 0.1;
  double field_length = 1.0;
  double gap_length = 5.0;
  std::optional<double> rabi;  // default: pi/2 pulse at the mean velocity
  QuadratureOptions quadrature;

  bool operator==(const EnsembleSettings&) const = default;
};

struct RunConfig {
  PhysicalConstants constants;

  double rabi = std::numbers::pi / 2.0;
  double duration = 1.0;
  std::string envelope = "mesa";  // mesa | sin4 | tabulated
  std::string envelope_file;
  bool area_normalized = false;   // rescale the peak so the area is pi/2
  double phase1 = 0.0;
  double phase2 = 0.0;

  double gap = 5.0;
  std::string detuning_mode = "opposite";  // opposite: (-D, D); equal: (D, D)

  Axis delta{-10.0, 10.0, 401};
  Axis t0{0.0, 20.0, 201};
  std::vector<double> t0_values{0.0, 5.0, 10.0};

  EnsembleSettings ensemble;

  double step = 0.0;  // 0 selects recommended_step per run
  double max_defect = 1e-9;

  std::string engine = "analytic";  // analytic | numeric | ensemble
  std::string picture = "i1";       // i1 | i2 | i3
  bool oracle = false;              // ensemble: use the 2D quadrature
  double zero_search_max = 0.0;     // 0 selects delta.max (or 10)
  unsigned threads = 0;             // 0 selects hardware concurrency

  json metadata = json::object();   // free-form, carried through untouched

  bool operator==(const RunConfig&) const = default;

  void validate() const;
};

namespace detail {

inline void check_keys(const json& j, const char* where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected a JSON object");
  for (const auto& item : j.items()) {
    const bool known = std::any_of(keys.begin(), keys.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) throw ConfigError(std::string(where) + ": unknown key '" + item.key() + "'");
  }
}

template <typename T>
void read(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->template get<T>();
}

inline void read_axis(const json& j, const char* key, Axis& axis) {
  auto it = j.find(key);
  if (it == j.end()) return;
  check_keys(*it, key, {"min", "max", "points"});
  read(*it, "min", axis.min);
  read(*it, "max", axis.max);
  read(*it, "points", axis.points);
}

inline json axis_json(const Axis& a) { return {{"min", a.min}, {"max", a.max}, {"points", a.points}}; }

template <typename T>
void require_one_of(const std::string& value, const char* what, std::initializer_list<T> allowed) {
  for (const auto& a : allowed) {
    if (value == a) return;
  }
  throw ConfigError(std::string("invalid ") + what + ": '" + value + "'");
}

}  // namespace detail

inline void RunConfig::validate() const {
  constants.validate();
  if (!(duration > 0.0)) throw ConfigError("pulse.duration must be positive");
  if (!(rabi >= 0.0)) throw ConfigError("pulse.rabi must be non-negative");
  if (!(gap >= 0.0)) throw ConfigError("gap must be non-negative");
  detail::require_one_of(envelope, "pulse.envelope", {"mesa", "sin4", "tabulated"});
  if (envelope == "tabulated" && envelope_file.empty()) {
    throw ConfigError("pulse.envelope_file is required for tabulated envelopes");
  }
  detail::require_one_of(detuning_mode, "detuning_mode", {"opposite", "equal"});
  detail::require_one_of(engine, "engine", {"analytic", "numeric", "ensemble"});
  detail::require_one_of(picture, "picture", {"i1", "i2", "i3"});
  delta.validate("delta");
  t0.validate("t0");
  if (t0_values.empty()) throw ConfigError("t0_values must not be empty");
  if (!(step >= 0.0)) throw ConfigError("integrator.step must be >= 0");
  if (!(max_defect > 0.0)) throw ConfigError("integrator.max_defect must be positive");
  if (!(zero_search_max >= 0.0)) throw ConfigError("zero_search_max must be >= 0");
  if (!(ensemble.dk > 0.0)) throw ConfigError("ensemble.dk must be positive");
  if (ensemble.quadrature.panels < 1 || ensemble.quadrature.order < 1) {
    throw ConfigError("ensemble quadrature panels and order must be >= 1");
  }
  if (!(ensemble.quadrature.window > 0.0)) throw ConfigError("ensemble.window must be positive");
}

inline json to_json(const RunConfig& c) {
  json ens = {{"k_mean", c.ensemble.k_mean},
              {"dk", c.ensemble.dk},
              {"field_length", c.ensemble.field_length},
              {"gap_length", c.ensemble.gap_length},
              {"rabi", c.ensemble.rabi ? json(*c.ensemble.rabi) : json(nullptr)},
              {"panels", c.ensemble.quadrature.panels},
              {"order", c.ensemble.quadrature.order},
              {"window", c.ensemble.quadrature.window}};
  return {
      {"constants", {{"hbar", c.constants.hbar}, {"mass", c.constants.mass}}},
      {"pulse",
       {{"rabi", c.rabi},
        {"duration", c.duration},
        {"envelope", c.envelope},
        {"envelope_file", c.envelope_file},
        {"area_normalized", c.area_normalized},
        {"phases", {c.phase1, c.phase2}}}},
      {"gap", c.gap},
      {"detuning_mode", c.detuning_mode},
      {"delta", detail::axis_json(c.delta)},
      {"t0", detail::axis_json(c.t0)},
      {"t0_values", c.t0_values},
      {"ensemble", ens},
      {"integrator", {{"step", c.step}, {"max_defect", c.max_defect}}},
      {"engine", c.engine},
      {"picture", c.picture},
      {"oracle", c.oracle},
      {"zero_search_max", c.zero_search_max},
      {"threads", c.threads},
      {"metadata", c.metadata},
  };
}

inline RunConfig config_from_json(const json& j) {
  RunConfig c;
  try {
    detail::check_keys(j, "config",
                       {"constants", "pulse", "gap", "detuning_mode", "delta", "t0", "t0_values",
                        "ensemble", "integrator", "engine", "picture", "oracle",
                        "zero_search_max", "threads", "metadata"});
    if (auto it = j.find("constants"); it != j.end()) {
      detail::check_keys(*it, "constants", {"hbar", "mass"});
      detail::read(*it, "hbar", c.constants.hbar);
      detail::read(*it, "mass", c.constants.mass);
    }
    if (auto it = j.find("pulse"); it != j.end()) {
      detail::check_keys(*it, "pulse",
                         {"rabi", "duration", "envelope", "envelope_file", "area_normalized",
                          "phases"});
      detail::read(*it, "rabi", c.rabi);
      detail::read(*it, "duration", c.duration);
      detail::read(*it, "envelope", c.envelope);
      detail::read(*it, "envelope_file", c.envelope_file);
      detail::read(*it, "area_normalized", c.area_normalized);
      if (auto ph = it->find("phases"); ph != it->end()) {
        const auto v = ph->get<std::vector<double>>();
        if (v.size() != 2) throw ConfigError("pulse.phases must have two entries");
        c.phase1 = v[0];
        c.phase2 = v[1];
      }
    }
    detail::read(j, "gap", c.gap);
    detail::read(j, "detuning_mode", c.detuning_mode);
    detail::read_axis(j, "delta", c.delta);
    detail::read_axis(j, "t0", c.t0);
    detail::read(j, "t0_values", c.t0_values);
    if (auto it = j.find("ensemble"); it != j.end()) {
      detail::check_keys(*it, "ensemble",
                         {"k_mean", "dk", "field_length", "gap_length", "rabi", "panels", "order",
                          "window"});
      detail::read(*it, "k_mean", c.ensemble.k_mean);
      detail::read(*it, "dk", c.ensemble.dk);
      detail::read(*it, "field_length", c.ensemble.field_length);
      detail::read(*it, "gap_length", c.ensemble.gap_length);
      if (auto r = it->find("rabi"); r != it->end() && !r->is_null()) {
        c.ensemble.rabi = r->get<double>();
      }
      detail::read(*it, "panels", c.ensemble.quadrature.panels);
      detail::read(*it, "order", c.ensemble.quadrature.order);
      detail::read(*it, "window", c.ensemble.quadrature.window);
    }
    if (auto it = j.find("integrator"); it != j.end()) {
      detail::check_keys(*it, "integrator", {"step", "max_defect"});
      detail::read(*it, "step", c.step);
      detail::read(*it, "max_defect", c.max_defect);
    }
    detail::read(j, "engine", c.engine);
    detail::read(j, "picture", c.picture);
    detail::read(j, "oracle", c.oracle);
    detail::read(j, "zero_search_max", c.zero_search_max);
    detail::read(j, "threads", c.threads);
    if (auto it = j.find("metadata"); it != j.end()) c.metadata = *it;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

inline RunConfig parse_config(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return config_from_json(j);
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

// The configuration that determines the numbers in an output file. The
// thread count is excluded because it never changes results.
inline std::string provenance(const RunConfig& c) {
  json j = to_json(c);
  j.erase("threads");
  return j.dump();
}

inline Picture picture_from(const std::string& s) {
  if (s == "i1") return Picture::I1;
  if (s == "i2") return Picture::I2;
  if (s == "i3") return Picture::I3;
  throw ConfigError("invalid picture: '" + s + "'");
}

}  // namespace ramsey::app

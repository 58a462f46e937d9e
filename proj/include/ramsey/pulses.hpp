#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ramsey/errors.hpp"

namespace ramsey {

// Rectangular (top-hat) envelope: constant peak inside the window.
struct Mesa {
  bool operator==(const Mesa&) const = default;
};

// Omega * sin^4(pi * (t - t_start) / tau) inside the window.
struct SinFourth {
  bool operator==(const SinFourth&) const = default;
};

// Sampled envelope on a uniform grid of pulse-local times. Sample values are
// absolute Rabi frequencies; the pulse's peak setting does not rescale them.
class Tabulated {
 public:
  Tabulated() = default;

  static Tabulated from_samples(std::vector<double> times, std::vector<double> rabi) {
    if (times.size() != rabi.size()) {
      throw ConfigError("tabulated envelope: time and rabi columns differ in length");
    }
    if (times.size() < 2) {
      throw ConfigError("tabulated envelope: need at least two samples");
    }
    for (std::size_t i = 0; i < times.size(); ++i) {
      if (!std::isfinite(times[i]) || !std::isfinite(rabi[i])) {
        throw ConfigError("tabulated envelope: non-finite sample");
      }
      if (rabi[i] < 0.0) {
        throw ConfigError("tabulated envelope: negative Rabi frequency");
      }
      if (i > 0 && !(times[i] > times[i - 1])) {
        throw ConfigError("tabulated envelope: times must be strictly increasing");
      }
    }
    if (rabi.front() != 0.0 || rabi.back() != 0.0) {
      throw ConfigError("tabulated envelope: first and last samples must be zero");
    }
    const double h = (times.back() - times.front()) / static_cast<double>(times.size() - 1);
    for (std::size_t i = 1; i < times.size(); ++i) {
      if (std::abs((times[i] - times[i - 1]) - h) > 1e-6 * h) {
        throw ConfigError("tabulated envelope: samples must lie on a uniform grid");
      }
    }
    Tabulated t;
    t.times_ = std::move(times);
    t.rabi_ = std::move(rabi);
    return t;
  }

  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& rabi() const { return rabi_; }

  double max_rabi() const { return *std::max_element(rabi_.begin(), rabi_.end()); }

  // Linear interpolation; zero outside the sampled range.
  double at(double local_t) const {
    if (times_.empty() || local_t < times_.front() || local_t > times_.back()) return 0.0;
    auto hi = std::upper_bound(times_.begin(), times_.end(), local_t);
    if (hi == times_.end()) return rabi_.back();
    const auto i = static_cast<std::size_t>(hi - times_.begin());
    const double t0 = times_[i - 1], t1 = times_[i];
    const double w = (local_t - t0) / (t1 - t0);
    return rabi_[i - 1] + w * (rabi_[i] - rabi_[i - 1]);
  }

  bool operator==(const Tabulated&) const = default;

 private:
  std::vector<double> times_;
  std::vector<double> rabi_;
};

using EnvelopeKind = std::variant<Mesa, SinFourth, Tabulated>;

inline const char* envelope_name(const EnvelopeKind& kind) {
  switch (kind.index()) {
    case 0: return "mesa";
    case 1: return "sin4";
    default: return "tabulated";
  }
}

// Envelope shape at a pulse-local time, ignoring the window indicator.
// Callers that already know the pulse is active (segment integration) use
// this so that window edges never switch the field off mid-segment.
inline double envelope_shape(const EnvelopeKind& kind, double local_t, double duration,
                             double peak) {
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Mesa>) {
          return peak;
        } else if constexpr (std::is_same_v<K, SinFourth>) {
          const double s = std::sin(std::numbers::pi * local_t / duration);
          const double s2 = s * s;
          return peak * s2 * s2;
        } else {
          return k.at(local_t);
        }
      },
      kind);
}

// Instantaneous Rabi frequency of a pulse occupying [t_start, t_start + duration].
inline double envelope_value(const EnvelopeKind& kind, double t, double t_start, double duration,
                             double peak) {
  if (!std::isfinite(t)) throw DomainError("envelope_value: non-finite time");
  if (!(duration > 0.0)) throw ConfigError("envelope_value: duration must be positive");
  const double local = t - t_start;
  if (local < 0.0 || local > duration) return 0.0;
  return envelope_shape(kind, local, duration, peak);
}

// Rotation angle on resonance, the integral of the envelope over the window.
inline double pulse_area(const EnvelopeKind& kind, double duration, double peak) {
  if (!(duration > 0.0)) throw ConfigError("pulse_area: duration must be positive");
  return std::visit(
      [&](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, Mesa>) {
          return peak * duration;
        } else if constexpr (std::is_same_v<K, SinFourth>) {
          return 0.375 * peak * duration;
        } else {
          // trapezoid over the samples clipped to [0, duration]
          const auto& ts = k.times();
          const double lo = std::max(0.0, ts.front());
          const double hi = std::min(duration, ts.back());
          if (!(hi > lo)) return 0.0;
          std::vector<double> nodes{lo};
          for (double t : ts) {
            if (t > lo && t < hi) nodes.push_back(t);
          }
          nodes.push_back(hi);
          double area = 0.0;
          for (std::size_t i = 1; i < nodes.size(); ++i) {
            area += 0.5 * (nodes[i] - nodes[i - 1]) * (k.at(nodes[i - 1]) + k.at(nodes[i]));
          }
          return area;
        }
      },
      kind);
}

// Peak Rabi frequency that gives the requested area. Only meaningful for the
// analytic shapes; tabulated samples are absolute and cannot be rescaled here.
inline double area_normalized_peak(const EnvelopeKind& kind, double duration, double target_area) {
  if (std::holds_alternative<Tabulated>(kind)) {
    throw ConfigError("area normalization is not defined for tabulated envelopes");
  }
  return target_area / pulse_area(kind, duration, 1.0);
}

// Two-column CSV (time, rabi). Blank lines, '#' comments and a non-numeric
// header line are skipped.
inline Tabulated parse_tabulated_csv(std::istream& in) {
  std::vector<double> times, rabi;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double t = 0.0, w = 0.0;
    if (!(row >> t >> w)) {
      if (times.empty()) continue;  // header
      throw ConfigError("tabulated envelope: cannot parse line " + std::to_string(lineno));
    }
    times.push_back(t);
    rabi.push_back(w);
  }
  return Tabulated::from_samples(std::move(times), std::move(rabi));
}

inline Tabulated load_tabulated_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open envelope file: " + path);
  return parse_tabulated_csv(in);
}

}  // namespace ramsey

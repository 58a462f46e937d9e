#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey/errors.hpp"
#include "ramsey/pulses.hpp"

// Two-level atom crossing two separated oscillating fields.
//
// Units: all detunings and Rabi frequencies are angular frequencies
// (rad/time). The internal dynamics only ever sees H/hbar, so hbar and the
// atomic mass enter solely through the semiclassical trajectory (velocity,
// kinetic energy, crossing times).
namespace ramsey {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

// Internal state c1|1> + c2|2>, |1> ground, |2> excited.
struct Complex2State {
  cplx c1{1.0, 0.0};
  cplx c2{0.0, 0.0};

  static Complex2State ground() { return {cplx{1.0, 0.0}, cplx{0.0, 0.0}}; }
  static Complex2State excited() { return {cplx{0.0, 0.0}, cplx{1.0, 0.0}}; }

  double norm2() const { return std::norm(c1) + std::norm(c2); }
  double excited_probability() const { return std::norm(c2); }

  bool operator==(const Complex2State&) const = default;
};

// 2x2 complex matrix. Used for evolution operators and for H/hbar.
struct Propagator2 {
  cplx u11{1.0, 0.0};
  cplx u12{0.0, 0.0};
  cplx u21{0.0, 0.0};
  cplx u22{1.0, 0.0};

  static Propagator2 identity() { return {}; }
  static Propagator2 zero() { return {cplx{}, cplx{}, cplx{}, cplx{}}; }
  static Propagator2 diag(cplx a, cplx b) { return {a, cplx{}, cplx{}, b}; }

  Propagator2 adjoint() const {
    return {std::conj(u11), std::conj(u21), std::conj(u12), std::conj(u22)};
  }

  Complex2State apply(const Complex2State& s) const {
    return {u11 * s.c1 + u12 * s.c2, u21 * s.c1 + u22 * s.c2};
  }

  Propagator2& operator+=(const Propagator2& o) {
    u11 += o.u11;
    u12 += o.u12;
    u21 += o.u21;
    u22 += o.u22;
    return *this;
  }

  friend Propagator2 operator+(Propagator2 a, const Propagator2& b) { return a += b; }
  friend Propagator2 operator-(const Propagator2& a, const Propagator2& b) {
    return {a.u11 - b.u11, a.u12 - b.u12, a.u21 - b.u21, a.u22 - b.u22};
  }
  friend Propagator2 operator*(cplx s, const Propagator2& a) {
    return {s * a.u11, s * a.u12, s * a.u21, s * a.u22};
  }

  bool operator==(const Propagator2&) const = default;
};

inline Propagator2 mat_mul(const Propagator2& a, const Propagator2& b) {
  return {a.u11 * b.u11 + a.u12 * b.u21, a.u11 * b.u12 + a.u12 * b.u22,
          a.u21 * b.u11 + a.u22 * b.u21, a.u21 * b.u12 + a.u22 * b.u22};
}

inline Propagator2 operator*(const Propagator2& a, const Propagator2& b) { return mat_mul(a, b); }

inline double max_abs(const Propagator2& m) {
  return std::max({std::abs(m.u11), std::abs(m.u12), std::abs(m.u21), std::abs(m.u22)});
}

// max |(u^dagger u - 1)_ij|
inline double unitarity_defect(const Propagator2& u) {
  return max_abs(mat_mul(u.adjoint(), u) - Propagator2::identity());
}

struct PhysicalConstants {
  double hbar = 1.0;
  double mass = 1.0;

  void validate() const {
    if (!(hbar > 0.0) || !std::isfinite(hbar)) throw ConfigError("hbar must be positive");
    if (!(mass > 0.0) || !std::isfinite(mass)) throw ConfigError("mass must be positive");
  }

  bool operator==(const PhysicalConstants&) const = default;
};

struct PulseConfig {
  double rabi_peak = 0.0;  // rad/time
  double detuning = 0.0;   // rad/time, field frequency minus transition frequency
  double duration = 1.0;
  double phase = 0.0;      // field phase at t = 0
  EnvelopeKind envelope = Mesa{};

  // Largest Rabi frequency the envelope reaches.
  double max_rabi() const {
    if (const auto* tab = std::get_if<Tabulated>(&envelope)) return tab->max_rabi();
    return rabi_peak;
  }

  void validate() const {
    if (!(duration > 0.0) || !std::isfinite(duration)) {
      throw ConfigError("pulse duration must be positive");
    }
    if (!(rabi_peak >= 0.0) || !std::isfinite(rabi_peak)) {
      throw ConfigError("pulse rabi_peak must be non-negative");
    }
    if (!std::isfinite(detuning) || !std::isfinite(phase)) {
      throw ConfigError("pulse detuning and phase must be finite");
    }
  }

  bool operator==(const PulseConfig&) const = default;
};

// One interferometer run. The fields are mutually in phase at t = 0; the atom
// enters field 1 at entrance_time, spends pulse1.duration inside it, flies
// freely for gap and then crosses field 2.
struct SequenceConfig {
  double entrance_time = 0.0;
  PulseConfig pulse1;
  PulseConfig pulse2;
  double gap = 0.0;
  PhysicalConstants constants;

  double pulse1_start() const { return entrance_time; }
  double pulse1_end() const { return entrance_time + pulse1.duration; }
  double pulse2_start() const { return pulse1_end() + gap; }
  double pulse2_end() const { return pulse2_start() + pulse2.duration; }

  void validate() const {
    if (!std::isfinite(entrance_time)) throw ConfigError("entrance time must be finite");
    if (!(gap >= 0.0) || !std::isfinite(gap)) throw ConfigError("gap must be non-negative");
    pulse1.validate();
    pulse2.validate();
    constants.validate();
  }

  // Equal-shape mesa pulses with independent detunings.
  static SequenceConfig mesa(double d1, double d2, double rabi, double tau, double gap,
                             double t0) {
    SequenceConfig s;
    s.entrance_time = t0;
    s.pulse1 = PulseConfig{rabi, d1, tau, 0.0, Mesa{}};
    s.pulse2 = PulseConfig{rabi, d2, tau, 0.0, Mesa{}};
    s.gap = gap;
    return s;
  }

  bool operator==(const SequenceConfig&) const = default;
};

// Warnings for each coupling scale that is not small against the kinetic
// energy m v^2 / 2. Advisory only.
inline std::vector<std::string> validate_semiclassical(const SequenceConfig& seq, double velocity,
                                                       double threshold = 10.0) {
  if (!(velocity > 0.0)) throw ConfigError("validate_semiclassical: velocity must be positive");
  const double hbar = seq.constants.hbar;
  const double energy = 0.5 * seq.constants.mass * velocity * velocity;
  std::vector<std::string> warnings;
  auto check = [&](const char* what, int j, double freq) {
    const double scale = hbar * std::abs(freq);
    if (scale == 0.0) return;
    const double ratio = energy / scale;
    if (ratio < threshold) {
      std::ostringstream os;
      os << "semiclassical validity: E/(hbar*" << what << j << ") = " << ratio << " < "
         << threshold;
      warnings.push_back(os.str());
    }
  };
  check("Omega", 1, seq.pulse1.max_rabi());
  check("Delta", 1, seq.pulse1.detuning);
  check("Omega", 2, seq.pulse2.max_rabi());
  check("Delta", 2, seq.pulse2.detuning);
  return warnings;
}

}  // namespace ramsey

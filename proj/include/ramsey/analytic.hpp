#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <variant>

#include "ramsey/core.hpp"

// Closed-form results for mesa (rectangular) pulses in the atom-adapted
// interaction picture, where the field-free evolution is the identity.
namespace ramsey {

inline double effective_rabi(double rabi, double detuning) { return std::hypot(rabi, detuning); }

namespace detail {

// sin(w * t / 2) / w, continuous at w = 0.
inline double half_sin_over(double w, double t) {
  if (w == 0.0) return 0.5 * t;
  return std::sin(0.5 * w * t) / w;
}

inline double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

}  // namespace detail

// U(t_end, t_start) inside a constant field. The off-diagonal phases depend
// on absolute time through Delta * (t_end + t_start) / 2; this is what makes
// the two-field result depend on the entrance time.
inline Propagator2 mesa_propagator(const PulseConfig& pulse, double t_start, double t_end) {
  if (!std::holds_alternative<Mesa>(pulse.envelope)) {
    throw ConfigError("mesa_propagator: envelope must be mesa");
  }
  if (t_end < t_start) throw ConfigError("mesa_propagator: t_end < t_start");
  const double rabi = pulse.rabi_peak;
  const double det = pulse.detuning;
  const double dt = t_end - t_start;
  const double w = effective_rabi(rabi, det);
  const double c = std::cos(0.5 * w * dt);
  const double so = detail::half_sin_over(w, dt);

  const cplx diff_phase = std::polar(1.0, 0.5 * det * dt);
  const cplx sum_phase = std::polar(1.0, 0.5 * det * (t_end + t_start) + pulse.phase);

  Propagator2 u;
  u.u11 = diff_phase * cplx{c, -det * so};
  u.u22 = std::conj(diff_phase) * cplx{c, det * so};
  u.u12 = -kI * rabi * so * sum_phase;
  u.u21 = -kI * rabi * so * std::conj(sum_phase);
  return u;
}

// Ground state through field 1, free flight (identity in this picture), field 2.
inline Complex2State two_pulse_state(const SequenceConfig& seq) {
  seq.validate();
  const Propagator2 u1 = mesa_propagator(seq.pulse1, seq.pulse1_start(), seq.pulse1_end());
  const Propagator2 u2 = mesa_propagator(seq.pulse2, seq.pulse2_start(), seq.pulse2_end());
  return mat_mul(u2, u1).apply(Complex2State::ground());
}

// Excitation probability for detunings d1, d2, written out term by term.
inline double p12_general(double d1, double d2, double rabi, double tau, double gap,
                          double entrance) {
  const double w1 = effective_rabi(rabi, d1);
  const double w2 = effective_rabi(rabi, d2);
  const double c1 = std::cos(0.5 * w1 * tau);
  const double c2 = std::cos(0.5 * w2 * tau);
  const double so1 = detail::half_sin_over(w1, tau);
  const double so2 = detail::half_sin_over(w2, tau);

  const double mix = 0.5 * (d1 - d2) * (entrance + tau);
  const cplx first = std::polar(1.0, mix) * std::polar(1.0, -0.5 * d2 * gap) * (rabi * so2) *
                     cplx{c1, -d1 * so1};
  const cplx second = std::polar(1.0, -mix) * std::polar(1.0, 0.5 * d2 * gap) * (rabi * so1) *
                      cplx{c2, d2 * so2};
  return detail::clamp_probability(std::norm(first + second));
}

// Standard Ramsey result for equal detunings; independent of the entrance time.
inline double p12_equal(double d, double rabi, double tau, double gap) {
  const double w = effective_rabi(rabi, d);
  const double c = std::cos(0.5 * w * tau);
  const double so = detail::half_sin_over(w, tau);
  const double bracket = c * std::cos(0.5 * d * gap) - d * so * std::sin(0.5 * d * gap);
  // 4 Omega^2/Omega'^2 sin^2 == 4 (Omega * sin / Omega')^2
  const double amp = rabi * so;
  return detail::clamp_probability(4.0 * amp * amp * bracket * bracket);
}

struct OppositeDetuningParams {
  double detuning = 0.0;  // field 2 detuning; field 1 has -detuning
  double rabi = 0.0;
  double tau = 1.0;
  double gap = 0.0;
  double entrance = 0.0;

  bool operator==(const OppositeDetuningParams&) const = default;
};

namespace detail {

// Everything in P12(-D, D) except the entrance-time cosine.
inline double opposite_envelope(double d, double rabi, double tau) {
  const double w = effective_rabi(rabi, d);
  const double c = std::cos(0.5 * w * tau);
  const double so = detail::half_sin_over(w, tau);
  const double amp = rabi * so;
  return 4.0 * amp * amp * (c * c + d * d * so * so);
}

}  // namespace detail

// P12(-D, D): fields detuned by equal amounts of opposite sign.
inline double p12_opposite(const OppositeDetuningParams& p) {
  const double cf = std::cos(p.detuning * (p.entrance + p.tau + 0.5 * p.gap));
  return detail::clamp_probability(detail::opposite_envelope(p.detuning, p.rabi, p.tau) * cf * cf);
}

// P12(-D, D) for entrance at t = 0 with explicit field phases. The phase
// difference enters in the convention where it is equivalent to an entrance
// time (phi2 - phi1) / D. In terms of the coupling phases of the field
// Hamiltonian (PulseConfig::phase) that difference is half of theirs; see
// tests/test_numeric.cpp for the cross-check against the integrator.
inline double p12_opposite_phases(double d, double rabi, double tau, double gap, double phi1,
                                  double phi2) {
  const double cf = std::cos(d * (tau + 0.5 * gap) + phi2 - phi1);
  return detail::clamp_probability(detail::opposite_envelope(d, rabi, tau) * cf * cf);
}

// Small-detuning estimate of the first zeros, +-2 / (T + 2 (t0 + tau)), for
// pi/2 pulses. The exact first zero of P12(-D, D) lies at pi / (T + 2 (t0 + tau)).
inline double central_zero_estimate(double tau, double gap, double entrance) {
  return 2.0 / (gap + 2.0 * (entrance + tau));
}

inline double central_zero_exact(double tau, double gap, double entrance) {
  return std::numbers::pi / (gap + 2.0 * (entrance + tau));
}

// Rabi frequency of a pi/2 mesa pulse of the given duration.
inline double pi_half_rabi(double tau) { return std::numbers::pi / (2.0 * tau); }

}  // namespace ramsey

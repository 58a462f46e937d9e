#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey/analytic.hpp"
#include "ramsey/core.hpp"

// Fixed-step RK4 integration of i dU/dt = (H/hbar) U for arbitrary envelopes.
//
// The field phases exp(i Delta_j t) are always evaluated at absolute time t,
// never at pulse-local time. The two fields are in phase at t = 0, and the
// entrance-time dependence of the fringes comes entirely from this.
namespace ramsey {

enum class Picture {
  I1,  // atom-adapted: zero Hamiltonian between the fields
  I2,  // rotating with field 1
  I3,  // rotating with field 2
};

inline const char* picture_name(Picture p) {
  switch (p) {
    case Picture::I1: return "i1";
    case Picture::I2: return "i2";
    default: return "i3";
  }
}

struct IntegratorParams {
  double step = 1e-3;
  double max_defect = 1e-9;

  bool operator==(const IntegratorParams&) const = default;
};

struct PropagationResult {
  Propagator2 propagator;
  double defect = 0.0;
};

namespace detail {

// H/hbar given the instantaneous Rabi frequencies of both fields.
inline Propagator2 hamiltonian_from_rabi(Picture picture, const SequenceConfig& seq, double t,
                                         double rabi1, double rabi2) {
  const double d1 = seq.pulse1.detuning;
  const double d2 = seq.pulse2.detuning;
  const double ph1 = seq.pulse1.phase;
  const double ph2 = seq.pulse2.phase;

  cplx coupling;
  Propagator2 h = Propagator2::zero();
  switch (picture) {
    case Picture::I1:
      coupling = 0.5 * rabi1 * std::polar(1.0, d1 * t + ph1) +
                 0.5 * rabi2 * std::polar(1.0, d2 * t + ph2);
      break;
    case Picture::I2:
      h.u22 = -d1;
      coupling = 0.5 * rabi1 * std::polar(1.0, ph1) +
                 0.5 * rabi2 * std::polar(1.0, -(d1 - d2) * t + ph2);
      break;
    case Picture::I3:
      h.u22 = -d2;
      coupling = 0.5 * rabi2 * std::polar(1.0, ph2) +
                 0.5 * rabi1 * std::polar(1.0, (d1 - d2) * t + ph1);
      break;
  }
  h.u12 = coupling;
  h.u21 = std::conj(coupling);
  return h;
}

// -i H U
inline Propagator2 rhs(const Propagator2& h, const Propagator2& u) {
  return -kI * mat_mul(h, u);
}

struct Segment {
  double begin;
  double end;
  bool field1;
  bool field2;
};

}  // namespace detail

// H(t)/hbar in the chosen picture, center-of-mass kinetic term dropped.
inline Propagator2 hamiltonian_matrix(Picture picture, const SequenceConfig& seq, double t) {
  const double r1 = envelope_value(seq.pulse1.envelope, t, seq.pulse1_start(),
                                   seq.pulse1.duration, seq.pulse1.rabi_peak);
  const double r2 = envelope_value(seq.pulse2.envelope, t, seq.pulse2_start(),
                                   seq.pulse2.duration, seq.pulse2.rabi_peak);
  return detail::hamiltonian_from_rabi(picture, seq, t, r1, r2);
}

// Largest admissible fixed step: one fiftieth of the fastest time scale.
inline double max_admissible_step(const SequenceConfig& seq) {
  double scale = std::min(seq.pulse1.duration, seq.pulse2.duration);
  const double w = std::max(effective_rabi(seq.pulse1.max_rabi(), seq.pulse1.detuning),
                            effective_rabi(seq.pulse2.max_rabi(), seq.pulse2.detuning));
  if (w > 0.0) scale = std::min(scale, 2.0 * std::numbers::pi / w);
  const double beat = std::abs(seq.pulse1.detuning - seq.pulse2.detuning);
  if (beat > 0.0) scale = std::min(scale, 2.0 * std::numbers::pi / beat);
  return scale / 50.0;
}

// Step used when none is configured: 10x finer than the admissibility bound,
// which keeps RK4 errors near 1e-10 for the parameter ranges of interest.
inline double recommended_step(const SequenceConfig& seq) { return max_admissible_step(seq) / 10.0; }

// U(t0 + tau1 + T + tau2, t0) starting from the identity. Integration is split
// at the pulse edges so no step straddles an envelope discontinuity. In I1 the
// free flight is the identity and is skipped; I2 and I3 integrate it.
inline PropagationResult propagate(Picture picture, const SequenceConfig& seq,
                                   const IntegratorParams& params) {
  seq.validate();
  if (!(params.max_defect > 0.0)) throw ConfigError("max_defect must be positive");
  const double limit = max_admissible_step(seq);
  if (!(params.step > 0.0) || !(params.step <= limit)) {
    std::ostringstream os;
    os << "integrator step " << params.step << " outside (0, " << limit << "]";
    throw StepInvalid(os.str());
  }

  std::vector<detail::Segment> segments;
  segments.push_back({seq.pulse1_start(), seq.pulse1_end(), true, false});
  if (picture != Picture::I1 && seq.gap > 0.0) {
    segments.push_back({seq.pulse1_end(), seq.pulse2_start(), false, false});
  }
  segments.push_back({seq.pulse2_start(), seq.pulse2_end(), false, true});

  auto rabi_at = [&](const detail::Segment& seg, double t, double& r1, double& r2) {
    r1 = seg.field1 ? envelope_shape(seq.pulse1.envelope, t - seq.pulse1_start(),
                                     seq.pulse1.duration, seq.pulse1.rabi_peak)
                    : 0.0;
    r2 = seg.field2 ? envelope_shape(seq.pulse2.envelope, t - seq.pulse2_start(),
                                     seq.pulse2.duration, seq.pulse2.rabi_peak)
                    : 0.0;
  };
  auto h_at = [&](const detail::Segment& seg, double t) {
    double r1 = 0.0, r2 = 0.0;
    rabi_at(seg, t, r1, r2);
    return detail::hamiltonian_from_rabi(picture, seq, t, r1, r2);
  };

  Propagator2 u = Propagator2::identity();
  for (const auto& seg : segments) {
    const double len = seg.end - seg.begin;
    if (len <= 0.0) continue;
    const auto n = static_cast<long>(std::ceil(len / params.step - 1e-9));
    const double h = len / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
      const double t = seg.begin + static_cast<double>(i) * h;
      const Propagator2 ha = h_at(seg, t);
      const Propagator2 hm = h_at(seg, t + 0.5 * h);
      const Propagator2 hb = h_at(seg, t + h);
      const Propagator2 k1 = detail::rhs(ha, u);
      const Propagator2 k2 = detail::rhs(hm, u + cplx{0.5 * h} * k1);
      const Propagator2 k3 = detail::rhs(hm, u + cplx{0.5 * h} * k2);
      const Propagator2 k4 = detail::rhs(hb, u + cplx{h} * k3);
      u += cplx{h / 6.0} * (k1 + cplx{2.0} * k2 + cplx{2.0} * k3 + k4);
    }
  }

  PropagationResult result{u, unitarity_defect(u)};
  if (result.defect > params.max_defect) {
    std::ostringstream os;
    os << "unitarity defect " << result.defect << " exceeds " << params.max_defect
       << " (step " << params.step << " too coarse)";
    throw DefectExceeded(os.str());
  }
  return result;
}

inline double p12_numeric(Picture picture, const SequenceConfig& seq,
                          const IntegratorParams& params) {
  const PropagationResult r = propagate(picture, seq, params);
  double p = std::norm(r.propagator.u21);
  if (p > 1.0 && p - 1.0 <= r.defect) p = 1.0;
  return p;
}

}  // namespace ramsey

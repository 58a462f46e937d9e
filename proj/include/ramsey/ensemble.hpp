#pragma once

#include <cmath>
#include <numbers>
#include <algorithm>

#include "ramsey/analytic.hpp"
#include "ramsey/core.hpp"
#include "ramsey/quadrature.hpp"

// Averaging P12(-D, D) over a minimum-uncertainty Gaussian cloud of atoms
// that cross spatially separated fields along classical trajectories.
//
// Each (x, k) in the cloud is an atom with velocity v = hbar k / m that
// enters field 1 at t0c + m x / (hbar k), spends m l / (hbar k) in each field
// and m L / (hbar k) between them. The position Gaussian is taken at the
// reference instant where it is centered on x = 0.
namespace ramsey {

class PhaseSpaceGaussian {
 public:
  // delta_x is derived from delta_k through delta_x * delta_k = 1/2.
  static PhaseSpaceGaussian from_momentum_spread(double k_mean, double dk, double t0_center) {
    if (!(dk > 0.0)) throw ConfigError("momentum spread must be positive");
    return PhaseSpaceGaussian(k_mean, dk, 0.5 / dk, t0_center);
  }

  static PhaseSpaceGaussian from_position_spread(double k_mean, double dx, double t0_center) {
    if (!(dx > 0.0)) throw ConfigError("position spread must be positive");
    return PhaseSpaceGaussian(k_mean, 0.5 / dx, dx, t0_center);
  }

  double k_mean() const { return k_mean_; }
  double dk() const { return dk_; }
  double dx() const { return dx_; }
  double t0_center() const { return t0_center_; }

  PhaseSpaceGaussian with_t0_center(double t0c) const {
    PhaseSpaceGaussian g = *this;
    g.t0_center_ = t0c;
    return g;
  }

  // Phase-space density, position Gaussian centered at x = 0.
  double density(double x, double k) const {
    const double u = (k - k_mean_) / dk_;
    const double v = x / dx_;
    return std::exp(-0.5 * (u * u + v * v)) / (2.0 * std::numbers::pi * dx_ * dk_);
  }

  bool operator==(const PhaseSpaceGaussian&) const = default;

 private:
  PhaseSpaceGaussian(double k_mean, double dk, double dx, double t0c)
      : k_mean_(k_mean), dk_(dk), dx_(dx), t0_center_(t0c) {
    if (!std::isfinite(k_mean) || !std::isfinite(dk) || !std::isfinite(dx) ||
        !std::isfinite(t0c)) {
      throw ConfigError("phase-space parameters must be finite");
    }
    if (!(k_mean >= 8.0 * dk)) {
      throw ConfigError("mean wavenumber must be at least 8 momentum spreads above zero");
    }
  }

  double k_mean_;
  double dk_;
  double dx_;
  double t0_center_;
};

struct SpatialConfig {
  double field_length = 1.0;  // l
  double gap_length = 0.0;    // L
  PhysicalConstants constants;
  double rabi = 0.0;

  void validate() const {
    if (!(field_length > 0.0)) throw ConfigError("field length must be positive");
    if (!(gap_length >= 0.0)) throw ConfigError("gap length must be non-negative");
    if (!(rabi >= 0.0)) throw ConfigError("rabi must be non-negative");
    constants.validate();
  }

  double velocity(double k) const { return constants.hbar * k / constants.mass; }
  double crossing_time(double k) const { return field_length / velocity(k); }
  double gap_time(double k) const { return gap_length / velocity(k); }
  double entrance_time(double t0_center, double x, double k) const {
    return t0_center + x / velocity(k);
  }

  // pi/2 pulse for an atom moving at the mean velocity.
  static double pi_half_rabi(double k_mean, double field_length, const PhysicalConstants& c) {
    return std::numbers::pi * c.hbar * k_mean / (2.0 * c.mass * field_length);
  }

  bool operator==(const SpatialConfig&) const = default;
};

struct QuadratureOptions {
  int panels = 8;
  int order = 32;
  double window = 8.0;  // half-width in standard deviations

  bool operator==(const QuadratureOptions&) const = default;
};

// Marginal momentum density: integral of the phase-space density over x.
inline double marginal_g(const PhaseSpaceGaussian& dist, double k) {
  const double u = (k - dist.k_mean()) / dist.dk();
  return std::exp(-0.5 * u * u) / (std::sqrt(2.0 * std::numbers::pi) * dist.dk());
}

namespace detail {

inline CompositeRule k_rule(const PhaseSpaceGaussian& dist, const QuadratureOptions& opt) {
  const double lo = dist.k_mean() - opt.window * dist.dk();
  const double hi = dist.k_mean() + opt.window * dist.dk();
  if (!(lo > 0.0)) throw DomainError("k integration window reaches k <= 0");
  return CompositeRule(lo, hi, opt.panels, GaussLegendreRule(opt.order));
}

}  // namespace detail

// Brute-force double integral of density(x, k) * P12(-D, D) over the cloud.
inline double averaged_p12_quadrature(double delta, const PhaseSpaceGaussian& dist,
                                      const SpatialConfig& space,
                                      const QuadratureOptions& opt = {}) {
  space.validate();
  const CompositeRule krule = detail::k_rule(dist, opt);
  const double xw = opt.window * dist.dx();
  const CompositeRule xrule(-xw, xw, opt.panels, GaussLegendreRule(opt.order));

  double total = 0.0;
  for (std::size_t i = 0; i < krule.points.size(); ++i) {
    const double k = krule.points[i];
    OppositeDetuningParams p{delta, space.rabi, space.crossing_time(k), space.gap_time(k), 0.0};
    double inner = 0.0;
    for (std::size_t j = 0; j < xrule.points.size(); ++j) {
      const double x = xrule.points[j];
      p.entrance = space.entrance_time(dist.t0_center(), x, k);
      inner += xrule.weights[j] * dist.density(x, k) * p12_opposite(p);
    }
    total += krule.weights[i] * inner;
  }
  return std::clamp(total, 0.0, 1.0);
}

// Same average with the x integral done in closed form. The spread of entrance
// times damps the oscillatory half of P12 by exp(-2 m^2 D^2 dx^2 / (hbar^2 k^2)).
inline double averaged_p12_closed(double delta, const PhaseSpaceGaussian& dist,
                                  const SpatialConfig& space, const QuadratureOptions& opt = {}) {
  space.validate();
  const CompositeRule krule = detail::k_rule(dist, opt);
  const double m = space.constants.mass;
  const double hbar = space.constants.hbar;
  const double l = space.field_length;
  const double gap = space.gap_length;
  const double rabi = space.rabi;
  const double w = effective_rabi(rabi, delta);
  const double dx = dist.dx();

  const double total = krule.integrate([&](double k) {
    const double crossing = m * l / (hbar * k);
    const double c = std::cos(0.5 * w * crossing);
    // Omega sin / Omega' and Delta sin / Omega', finite at Omega' = 0
    const double so = detail::half_sin_over(w, crossing);
    const double rabi_s = rabi * so;
    const double det_s = delta * so;
    const double damping =
        std::exp(-2.0 * m * m * delta * delta * dx * dx / (hbar * hbar * k * k));
    const double phase = 2.0 * delta * (crossing + m * gap / (2.0 * hbar * k)) +
                         2.0 * delta * dist.t0_center();
    return 2.0 * marginal_g(dist, k) * rabi_s * rabi_s * (1.0 + damping * std::cos(phase)) *
           (c * c + det_s * det_s);
  });
  return std::clamp(total, 0.0, 1.0);
}

}  // namespace ramsey

#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey/analytic.hpp"
#include "ramsey/errors.hpp"
#include "ramsey/parallel.hpp"

// Fringe metrology: zeros, widths, periodicity and sampled grids.
namespace ramsey {

using Curve = std::function<double(double)>;

// Evenly spaced samples, endpoints included. Doubling the resolution as
// points -> 2 * points - 1 reproduces every original sample bit for bit.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  std::size_t points = 1;

  double at(std::size_t i) const {
    if (points <= 1) return min;
    const double frac = static_cast<double>(i) / static_cast<double>(points - 1);
    return min + (max - min) * frac;
  }

  void validate(const char* what) const {
    if (!std::isfinite(min) || !std::isfinite(max)) {
      throw ConfigError(std::string(what) + " range must be finite");
    }
    if (points == 0) throw ConfigError(std::string(what) + " needs at least one point");
    if (points > 1 && !(max > min)) {
      throw ConfigError(std::string(what) + " range must satisfy max > min");
    }
  }

  bool operator==(const Axis&) const = default;
};

struct Extremum {
  double x;
  double value;
};

// Golden-section minimization on [a, b]; returns the best point evaluated.
inline Extremum golden_section_minimize(const Curve& f, double a, double b, double tol) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  Extremum best = fc < fd ? Extremum{c, fc} : Extremum{d, fd};
  while (std::abs(b - a) > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
      if (fc < best.value) best = {c, fc};
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
      if (fd < best.value) best = {d, fd};
    }
    if (c == d) break;
  }
  return best;
}

// Bisection for a sign change of f on [a, b].
inline double bisect(const Curve& f, double a, double b, double tol) {
  double fa = f(a);
  for (int i = 0; i < 200 && std::abs(b - a) > tol; ++i) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fm < 0.0) == (fa < 0.0)) {
      a = m;
      fa = fm;
    } else {
      b = m;
    }
  }
  return 0.5 * (a + b);
}

struct ZeroSearchOptions {
  std::size_t samples = 2000;
  double threshold = 1e-12;
};

// First zero of a non-negative curve between 0 and search_max (which may be
// negative to search leftwards). Probability curves touch zero without
// crossing it, so sign-change bisection does not apply: each local minimum of
// a uniform pre-scan is refined by golden-section search and accepted when
// its value falls below the threshold. A genuine sign change is bisected.
inline double find_first_zero(const Curve& curve, double search_max, double tol,
                              const ZeroSearchOptions& opt = {}) {
  if (!(curve(0.0) > 0.0)) throw DomainError("find_first_zero: curve(0) must be positive");
  if (search_max == 0.0 || !std::isfinite(search_max)) {
    throw DomainError("find_first_zero: search_max must be finite and nonzero");
  }
  const std::size_t n = std::max<std::size_t>(opt.samples, 3);
  std::vector<double> xs(n + 1), ys(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    xs[i] = search_max * static_cast<double>(i) / static_cast<double>(n);
    ys[i] = curve(xs[i]);
    if (ys[i] < 0.0) {
      return bisect(curve, xs[i - 1], xs[i], tol);
    }
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const bool left_ok = ys[i] <= ys[i - 1];
    const bool right_ok = i == n || ys[i] <= ys[i + 1];
    if (!(left_ok && right_ok)) continue;
    const double lo = std::min(xs[i - 1], i == n ? xs[i] : xs[i + 1]);
    const double hi = std::max(xs[i - 1], i == n ? xs[i] : xs[i + 1]);
    const Extremum m = golden_section_minimize(curve, lo, hi, tol);
    if (m.value <= opt.threshold) return m.x;
  }
  std::ostringstream os;
  os << "no zero below " << opt.threshold << " between 0 and " << search_max;
  throw NoZeroFound(os.str());
}

// Full width at half maximum of the peak at 0. Each side is found by scanning
// outwards to the first sample below half the peak, then bisecting.
inline double fwhm(const Curve& curve, double tol, double search_half_width = 10.0,
                   std::size_t samples = 4000) {
  const double peak = curve(0.0);
  if (!(peak > 0.0)) throw HalfMaxNotBracketed("fwhm: no peak at zero detuning");
  const double half = 0.5 * peak;
  const Curve shifted = [&](double x) { return curve(x) - half; };
  auto side = [&](double dir) {
    double prev = 0.0;
    for (std::size_t i = 1; i <= samples; ++i) {
      const double x = dir * search_half_width * static_cast<double>(i) /
                       static_cast<double>(samples);
      if (curve(x) < half) return bisect(shifted, prev, x, tol);
      prev = x;
    }
    std::ostringstream os;
    os << "fwhm: curve stays above half maximum within " << search_half_width;
    throw HalfMaxNotBracketed(os.str());
  };
  const double right = side(1.0);
  const double left = side(-1.0);
  return right - left;
}

struct FringeMetrics {
  std::optional<double> first_zero_pos;
  std::optional<double> first_zero_neg;
  std::optional<double> fwhm;
  double peak_value = 0.0;
};

// Metrics of a central fringe. Missing zeros or half-maximum crossings are
// reported as empty rather than failing, since averaged curves have none.
inline FringeMetrics fringe_metrics(const Curve& curve, double search_max, double tol) {
  FringeMetrics m;
  m.peak_value = curve(0.0);
  try {
    m.first_zero_pos = find_first_zero(curve, search_max, tol);
  } catch (const DomainError&) {
  }
  try {
    m.first_zero_neg = find_first_zero(curve, -search_max, tol);
  } catch (const DomainError&) {
  }
  try {
    m.fwhm = fwhm(curve, tol, search_max);
  } catch (const DomainError&) {
  }
  return m;
}

struct FringeScan {
  std::vector<double> detunings;
  std::vector<double> values;
  std::string metadata;

  void validate() const {
    if (detunings.size() != values.size()) throw DomainError("fringe scan: length mismatch");
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (i > 0 && !(detunings[i] > detunings[i - 1])) {
        throw DomainError("fringe scan: detunings must be strictly increasing");
      }
      if (!(values[i] >= 0.0 && values[i] <= 1.0)) {
        throw DomainError("fringe scan: value outside [0, 1]");
      }
    }
  }
};

template <typename Engine>
FringeScan scan_fringe(const Axis& delta, Engine&& engine, unsigned threads,
                       std::string metadata = {}) {
  delta.validate("delta");
  FringeScan scan;
  scan.metadata = std::move(metadata);
  scan.detunings.resize(delta.points);
  scan.values.resize(delta.points);
  parallel_for(delta.points, threads, [&](std::size_t i) {
    scan.detunings[i] = delta.at(i);
    scan.values[i] = engine(scan.detunings[i]);
  });
  scan.validate();
  return scan;
}

// P12 over (t0, delta), stored row-major with one row per entrance time.
struct ContourGrid {
  Axis delta;
  Axis t0;
  std::vector<double> values;

  double at(std::size_t row, std::size_t col) const { return values[row * delta.points + col]; }
};

template <typename Engine>
ContourGrid contour_grid(const Axis& delta, const Axis& t0, Engine&& engine, unsigned threads) {
  delta.validate("delta");
  t0.validate("t0");
  ContourGrid grid{delta, t0, std::vector<double>(delta.points * t0.points)};
  parallel_for(grid.values.size(), threads, [&](std::size_t idx) {
    const std::size_t row = idx / delta.points;
    const std::size_t col = idx % delta.points;
    grid.values[idx] = engine(delta.at(col), t0.at(row));
  });
  return grid;
}

struct PeriodicityReport {
  double period = 0.0;  // infinity when no periodicity applies
  double residual = 0.0;
};

// P12(-D, D) sampled over `periods` periods pi/D of the entrance time,
// starting at base.entrance; residual is max |P(t0) - P(t0 + pi/D)|.
inline PeriodicityReport periodicity_check(double delta, const OppositeDetuningParams& base,
                                           std::size_t samples = 600, double periods = 3.0) {
  if (delta == 0.0) throw DomainError("periodicity_check: detuning must be nonzero");
  const double period = std::numbers::pi / std::abs(delta);
  OppositeDetuningParams p = base;
  p.detuning = delta;
  double residual = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t0 = base.entrance + periods * period * static_cast<double>(i) /
                                          static_cast<double>(samples);
    p.entrance = t0;
    const double a = p12_opposite(p);
    p.entrance = t0 + period;
    const double b = p12_opposite(p);
    residual = std::max(residual, std::abs(a - b));
  }
  return {period, residual};
}

// General detunings: period 2 pi / |d1 - d2|. For d1 == d2 there is no
// period and the residual measures constancy under a shift of `probe_shift`.
inline PeriodicityReport periodicity_check_general(double d1, double d2, double rabi, double tau,
                                                   double gap, double t0_start,
                                                   std::size_t samples = 600,
                                                   double probe_shift = 1.0) {
  const double beat = std::abs(d1 - d2);
  const double period =
      beat > 0.0 ? 2.0 * std::numbers::pi / beat : std::numeric_limits<double>::infinity();
  const double shift = beat > 0.0 ? period : probe_shift;
  const double span = 3.0 * shift;
  double residual = 0.0;
  for (std::size_t i = 0; i < samples; ++i) {
    const double t0 = t0_start + span * static_cast<double>(i) / static_cast<double>(samples);
    residual = std::max(residual, std::abs(p12_general(d1, d2, rabi, tau, gap, t0) -
                                           p12_general(d1, d2, rabi, tau, gap, t0 + shift)));
  }
  return {period, residual};
}

}  // namespace ramsey

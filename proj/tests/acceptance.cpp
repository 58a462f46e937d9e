// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on failure.
// Usage: acceptance <path-to-ramsey-cli> <scratch-dir>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ramsey/ramsey.hpp"

using namespace ramsey;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = kPi / 2;

struct Outcome {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(int id, const char* name, const std::function<Outcome()>& check) {
  Outcome o;
  try {
    o = check();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.pass) ++failures;
  std::cout << (o.pass ? "PASS" : "FAIL") << "  " << id << ". " << name << "  (" << o.detail
            << ")" << std::endl;
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

double p12_numeric_default(Picture pic, const SequenceConfig& seq) {
  return p12_numeric(pic, seq, {recommended_step(seq), 1e-9});
}

Outcome central_peak() {
  double worst_a = 0.0, worst_n = 0.0;
  for (int t0 = 0; t0 <= 20; ++t0) {
    const auto seq = SequenceConfig::mesa(0.0, 0.0, kHalfPi, 1.0, 5.0, t0);
    worst_a = std::max(worst_a, std::abs(two_pulse_state(seq).excited_probability() - 1.0));
    worst_a = std::max(worst_a, std::abs(p12_general(0.0, 0.0, kHalfPi, 1.0, 5.0, t0) - 1.0));
    worst_n = std::max(worst_n, std::abs(p12_numeric_default(Picture::I1, seq) - 1.0));
  }
  return {worst_a <= 1e-12 && worst_n <= 1e-8,
          "analytic dev " + fmt(worst_a) + ", numeric dev " + fmt(worst_n)};
}

Outcome outer_zeros() {
  const double d = kPi * std::sqrt(3.75);
  double worst = 0.0;
  for (int i = 0; i <= 80; ++i) {
    const double t0 = 0.25 * i;
    worst = std::max({worst, p12_general(-d, d, kHalfPi, 1.0, 5.0, t0),
                      p12_general(d, -d, kHalfPi, 1.0, 5.0, t0)});
  }
  return {worst < 1e-10, "max P12 at +-6.0837 over t0 in [0,20]: " + fmt(worst)};
}

Outcome narrowing_law() {
  std::mt19937_64 gen(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_zero = 0.0, worst_ratio = 0.0;
  int accepted = 0;
  while (accepted < 50) {
    const double tau = 0.5 + 1.5 * u(gen);
    const double gap = 10.0 * u(gen);
    const double t0 = 20.0 * u(gen);
    const double rabi = pi_half_rabi(tau);
    const double exact = central_zero_exact(tau, gap, t0);
    const double sin_zero = std::sqrt(std::pow(2.0 * kPi / tau, 2) - rabi * rabi);
    if (!(exact < sin_zero)) continue;
    ++accepted;
    const Curve curve = [&](double d) { return p12_opposite({d, rabi, tau, gap, t0}); };
    const double found = find_first_zero(curve, std::min(1.5 * exact, sin_zero), 1e-13);
    worst_zero = std::max(worst_zero, std::abs(found - exact));
    worst_ratio = std::max(worst_ratio,
                           std::abs(central_zero_estimate(tau, gap, t0) / found - 2.0 / kPi));
  }
  return {worst_zero <= 1e-6 && worst_ratio <= 1e-6,
          "50 draws, zero dev " + fmt(worst_zero) + ", ratio dev " + fmt(worst_ratio)};
}

Outcome t0_periodicity() {
  double worst = 0.0;
  for (double d : {2.5, 5.0, 7.5, 10.0}) {
    worst = std::max(worst, periodicity_check(d, {d, kHalfPi, 1.0, 5.0, 0.0}).residual);
  }
  return {worst < 1e-12, "max residual " + fmt(worst)};
}

Outcome equal_detuning() {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst_formula = 0.0, worst_t0 = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double d = -10.0 + 20.0 * u(gen);
    const double rabi = 4.0 * u(gen);
    const double tau = 0.2 + 2.0 * u(gen);
    const double gap = 10.0 * u(gen);
    const double ta = 20.0 * u(gen), tb = 20.0 * u(gen);
    const double pa = p12_general(d, d, rabi, tau, gap, ta);
    worst_formula = std::max(worst_formula, std::abs(pa - p12_equal(d, rabi, tau, gap)));
    worst_t0 = std::max(worst_t0, std::abs(pa - p12_general(d, d, rabi, tau, gap, tb)));
  }
  return {worst_formula <= 1e-12 && worst_t0 <= 1e-12,
          "100 draws, formula dev " + fmt(worst_formula) + ", t0 dev " + fmt(worst_t0)};
}

Outcome phase_equivalence() {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double d = -10.0 + 20.0 * u(gen);
    const double rabi = 4.0 * u(gen);
    const double tau = 0.2 + 2.0 * u(gen);
    const double gap = 10.0 * u(gen);
    const double t0 = 20.0 * u(gen);
    const double phi1 = -kPi + 2.0 * kPi * u(gen);
    const double a = p12_opposite_phases(d, rabi, tau, gap, phi1, phi1 + d * t0);
    worst = std::max(worst, std::abs(a - p12_opposite({d, rabi, tau, gap, t0})));
  }
  return {worst <= 1e-12, "100 draws, max dev " + fmt(worst)};
}

Outcome numeric_oracle() {
  const Axis delta{-10.0, 10.0, 41};
  const Axis t0{0.0, 20.0, 21};
  std::vector<double> dev(delta.points * t0.points);
  parallel_for(dev.size(), default_thread_count(), [&](std::size_t idx) {
    const double d = delta.at(idx % delta.points);
    const double t = t0.at(idx / delta.points);
    const auto seq = SequenceConfig::mesa(-d, d, kHalfPi, 1.0, 5.0, t);
    dev[idx] = std::abs(p12_numeric_default(Picture::I1, seq) -
                        p12_general(-d, d, kHalfPi, 1.0, 5.0, t));
  });
  const double grid = *std::max_element(dev.begin(), dev.end());

  const Axis pic_delta{-10.0, 10.0, 21};
  std::vector<double> pic_dev(pic_delta.points);
  parallel_for(pic_dev.size(), default_thread_count(), [&](std::size_t i) {
    const double d = pic_delta.at(i);
    const auto seq = SequenceConfig::mesa(-d, d, kHalfPi, 1.0, 5.0, 3.0);
    const double p1 = p12_numeric_default(Picture::I1, seq);
    const double p2 = p12_numeric_default(Picture::I2, seq);
    const double p3 = p12_numeric_default(Picture::I3, seq);
    pic_dev[i] = std::max({std::abs(p1 - p2), std::abs(p1 - p3), std::abs(p2 - p3)});
  });
  const double pics = *std::max_element(pic_dev.begin(), pic_dev.end());
  return {grid <= 1e-8 && pics <= 1e-8,
          "41x21 grid dev " + fmt(grid) + ", I1/I2/I3 spread " + fmt(pics)};
}

Outcome integrator_order() {
  const auto seq = SequenceConfig::mesa(-0.5, 0.5, kHalfPi, 1.0, 5.0, 1.0);
  const Propagator2 exact =
      mesa_propagator(seq.pulse2, seq.pulse2_start(), seq.pulse2_end()) *
      mesa_propagator(seq.pulse1, seq.pulse1_start(), seq.pulse1_end());
  double step = max_admissible_step(seq);
  double prev = max_abs(propagate(Picture::I1, seq, {step, 1.0}).propagator - exact);
  bool ok = true;
  std::string ratios;
  for (int level = 0; level < 3; ++level) {
    step /= 2.0;
    const double err = max_abs(propagate(Picture::I1, seq, {step, 1.0}).propagator - exact);
    const double ratio = prev / err;
    ok = ok && ratio >= 12.0 && ratio <= 20.0;
    ratios += (level ? ", " : "") + fmt(ratio);
    prev = err;
  }
  return {ok, "error ratios per halving: " + ratios};
}

SpatialConfig reference_cloud_space() {
  SpatialConfig s;
  s.field_length = 1.0;
  s.gap_length = 5.0;
  s.rabi = SpatialConfig::pi_half_rabi(1.0, 1.0, s.constants);
  return s;
}

Outcome ensemble_oracle() {
  const SpatialConfig space = reference_cloud_space();
  const Axis delta{-1.0, 1.0, 81};
  const std::vector<double> centers{0.0, 5.0, 10.0};
  std::vector<double> dev(delta.points * centers.size());
  parallel_for(dev.size(), default_thread_count(), [&](std::size_t idx) {
    const double d = delta.at(idx % delta.points);
    const auto g = PhaseSpaceGaussian::from_momentum_spread(1.0, 0.1, centers[idx / delta.points]);
    dev[idx] = std::abs(averaged_p12_closed(d, g, space) - averaged_p12_quadrature(d, g, space));
  });
  const double worst = *std::max_element(dev.begin(), dev.end());
  return {worst < 1e-6, "81 points x t0c {0,5,10}, max diff " + fmt(worst)};
}

double contrast(const Curve& f, double lo, double hi) {
  double mn = 1.0, mx = 0.0;
  for (int i = 0; i <= 400; ++i) {
    const double v = f(lo + (hi - lo) * i / 400.0);
    mn = std::min(mn, v);
    mx = std::max(mx, v);
  }
  return mx - mn;
}

Outcome ensemble_narrowing() {
  const SpatialConfig space = reference_cloud_space();
  double prev = INFINITY;
  bool ok = true;
  std::string widths, contrasts;
  for (double t0c : {0.0, 5.0, 10.0}) {
    const auto g = PhaseSpaceGaussian::from_momentum_spread(1.0, 0.1, t0c);
    const Curve avg = [&](double d) { return averaged_p12_closed(d, g, space); };
    const Curve mono = [&](double d) { return p12_opposite({d, space.rabi, 1.0, 5.0, t0c}); };
    const double w = fwhm(avg, 1e-10, 1.0, 1000);
    ok = ok && w < prev && std::abs(avg(0.0) - mono(0.0)) <= 0.05;
    const double ca = contrast(avg, 0.5, 1.0), cm = contrast(mono, 0.5, 1.0);
    ok = ok && ca < cm;
    widths += (widths.empty() ? "" : ", ") + fmt(w);
    contrasts += (contrasts.empty() ? "" : ", ") + fmt(ca) + "/" + fmt(cm);
    prev = w;
  }
  return {ok, "fwhm " + widths + "; outer contrast avg/mono " + contrasts};
}

Outcome sin4_pulses() {
  const Axis delta{-10.0, 10.0, 201};
  bool ok = true;
  double asym = 0.0, prev = INFINITY;
  std::string widths;
  for (double t0 : {0.0, 5.0, 10.0}) {
    auto seq_at = [t0](double d) {
      auto seq = SequenceConfig::mesa(-d, d, kHalfPi, 1.0, 5.0, t0);
      seq.pulse1.envelope = SinFourth{};
      seq.pulse2.envelope = SinFourth{};
      return seq;
    };
    const Curve curve = [&](double d) { return p12_numeric_default(Picture::I1, seq_at(d)); };
    const FringeScan scan = scan_fringe(delta, curve, default_thread_count());
    const auto peak = std::max_element(scan.values.begin(), scan.values.end());
    ok = ok && scan.detunings[static_cast<std::size_t>(peak - scan.values.begin())] == 0.0;
    for (std::size_t i = 0; i < scan.values.size(); ++i) {
      asym = std::max(asym, std::abs(scan.values[i] - scan.values[scan.values.size() - 1 - i]));
    }
    const double w = fwhm(curve, 1e-10, 5.0, 500);
    ok = ok && w < prev;
    widths += (widths.empty() ? "" : ", ") + fmt(w);
    prev = w;
  }
  ok = ok && asym <= 1e-8;
  return {ok, "max at 0, asymmetry " + fmt(asym) + ", fwhm " + widths};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome cli_determinism(const std::string& cli, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  const auto cfg = dir / "determinism.json";
  std::ofstream(cfg) << R"({"delta": {"min": -3, "max": 3, "points": 25},
    "t0": {"min": 0, "max": 10, "points": 5}, "t0_values": [0, 5, 10],
    "ensemble": {"panels": 4, "order": 16}})";
  std::string bad;
  for (const char* cmd : {"fringe", "contour", "ensemble", "width", "pulse"}) {
    std::vector<std::string> outputs;
    for (const char* threads : {"1", "8", "8"}) {
      const auto out = dir / (std::string(cmd) + "_" + threads + "_" +
                              std::to_string(outputs.size()) + ".csv");
      const std::string line = "\"" + cli + "\" " + cmd + " --config \"" + cfg.string() +
                               "\" --threads " + threads + " --out \"" + out.string() + "\"";
      if (std::system(line.c_str()) != 0) return {false, std::string(cmd) + ": CLI failed"};
      outputs.push_back(slurp(out));
    }
    for (const auto& o : outputs) {
      if (o.empty() || o != outputs.front()) bad += std::string(" ") + cmd;
    }
  }
  return {bad.empty(), bad.empty() ? "5 commands, threads 1/8/8 byte-identical"
                                   : "differs:" + bad};
}

}  // namespace

int main(int argc, char** argv) {
  const std::string cli = argc > 1 ? argv[1] : "ramsey";
  const std::filesystem::path scratch =
      argc > 2 ? argv[2] : std::filesystem::temp_directory_path() / "ramsey_acceptance";

  report(1, "central peak stable in t0", central_peak);
  report(2, "outer zeros independent of t0", outer_zeros);
  report(3, "narrowing law of the first zero", narrowing_law);
  report(4, "t0 periodicity pi/D", t0_periodicity);
  report(5, "equal-detuning regression", equal_detuning);
  report(6, "phase / entrance-time equivalence", phase_equivalence);
  report(7, "analytic vs numeric, pictures agree", numeric_oracle);
  report(8, "RK4 order", integrator_order);
  report(9, "ensemble closed form vs 2D quadrature", ensemble_oracle);
  report(10, "ensemble narrowing with pedestal", ensemble_narrowing);
  report(11, "sin^4 pulses", sin4_pulses);
  report(12, "CLI determinism", [&] { return cli_determinism(cli, scratch); });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
  return failures == 0 ? 0 : 1;
}

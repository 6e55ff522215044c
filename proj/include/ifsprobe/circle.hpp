#pragma once

// North-south map plus a rotation on the circle: minimality and ergodicity
// probes, rational substitution, and perturbation sweeps.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ifsprobe/analysis.hpp"
#include "ifsprobe/error.hpp"
#include "ifsprobe/geometry.hpp"
#include "ifsprobe/maps.hpp"

namespace ifsprobe {

inline constexpr double kGoldenAngle = 0.6180339887498949;

struct Fraction {
  long long p = 0;
  long long q = 1;
  double value() const { return static_cast<double>(p) / static_cast<double>(q); }
};

struct CircleExampleParams {
  double lambda = 0.7;
  double rotation_angle = kGoldenAngle;
  std::optional<Fraction> rational_approx;
  double perturb_amplitude = 0.0;
  std::uint64_t seed = 1;
  double pole = 0.0;  // attracting fixed point of f1
};

struct CircleProbeSettings {
  double epsilon = 0.01;
  int max_word_length = 300;
  int samples = 8;
  int resolution = 4096;
  int seed_sets = 12;
  int refine_steps = 20;
  int saturation_steps = 256;
  std::uint64_t seed = 1;
};

inline void validate(const CircleExampleParams& p) {
  if (!(p.lambda > 0.5 && p.lambda < 1.0)) throw MultiplierError("lambda must lie in (1/2, 1)");
  if (!std::isfinite(p.rotation_angle)) throw ValidationError("rotation angle must be finite");
  if (!(p.perturb_amplitude >= 0.0)) throw ValidationError("perturbation amplitude must be >= 0");
  if (p.rational_approx && p.rational_approx->q <= 0) throw ValidationError("rational approximation needs q > 0");
}

inline SystemSpec circle_pair(const CircleExampleParams& p, double angle, double amplitude) {
  MapSpec f1 = MapSpec::circle_moebius(p.lambda, p.pole);
  MapSpec rot = MapSpec::circle_rotation(angle);
  if (amplitude > 0.0) {
    f1 = MapSpec::perturbed(f1, amplitude, p.seed);
    rot = MapSpec::perturbed(rot, amplitude, p.seed + 1);
  }
  return SystemSpec({f1, rot});
}

// {f1, R}: f1 north-south with multiplier lambda at the pole, R the rotation.
inline SystemSpec build_circle_example(const CircleExampleParams& p) {
  validate(p);
  return circle_pair(p, p.rotation_angle, p.perturb_amplitude);
}

struct CircleProbeResult {
  MinimalityReport minimality;
  ErgodicityReport ergodicity;

  bool minimal() const { return minimality.eps_dense(); }
  bool ergodic() const { return !ergodicity.candidate_found; }
};

inline CircleProbeResult run_probes(const SystemSpec& sys, const CircleProbeSettings& s) {
  const Domain dom = Domain::circle(s.resolution);
  const MinimalityOptions mo{s.epsilon, s.max_word_length, s.samples, s.seed};
  const ErgodicityOptions eo{s.seed_sets, s.refine_steps, s.saturation_steps, s.seed};
  return {minimality_test(sys, GridSet::full(dom), mo), ergodicity_probe(sys, dom, eo)};
}

struct RationalSubstitutionReport {
  Fraction gamma;
  CircleProbeResult pair;
  CircleProbeResult f1_alone;
  CircleProbeResult rotation_alone;

  bool singles_fail() const {
    return !f1_alone.minimal() && !f1_alone.ergodic() && !rotation_alone.minimal() && !rotation_alone.ergodic();
  }
  bool pair_passes() const { return pair.minimal() && pair.ergodic(); }
};

// Replaces the rotation angle by the supplied rational and probes the pair
// and each generator on its own.
inline RationalSubstitutionReport rational_substitution_experiment(const CircleExampleParams& p,
                                                                   const CircleProbeSettings& s) {
  validate(p);
  if (!p.rational_approx) throw ValidationError("rational substitution needs a rational approximation");
  const Fraction g = *p.rational_approx;
  const SystemSpec pair = circle_pair(p, g.value(), p.perturb_amplitude);
  RationalSubstitutionReport r{g, run_probes(pair, s), run_probes(SystemSpec({pair[0]}), s),
                               run_probes(SystemSpec({pair[1]}), s)};
  return r;
}

struct SweepRow {
  double amplitude = 0.0;
  CircleProbeResult result;
};

struct RobustnessReport {
  CircleProbeResult baseline;
  std::vector<SweepRow> rows;
  std::optional<double> largest_unchanged;  // end of the unchanged prefix
};

inline constexpr double kMaxSweepAmplitude = 0.1;

// Re-runs both probes with both generators perturbed at each amplitude.
// largest_unchanged is the last amplitude, in the given order, before the
// first change of either verdict relative to the unperturbed system.
inline RobustnessReport robustness_sweep(const CircleExampleParams& p, const std::vector<double>& amplitudes,
                                         const CircleProbeSettings& s) {
  validate(p);
  for (double a : amplitudes)
    if (!(a >= 0.0 && a < kMaxSweepAmplitude)) throw ValidationError("sweep amplitudes must lie in [0, 0.1)");
  RobustnessReport rep;
  rep.baseline = run_probes(circle_pair(p, p.rotation_angle, 0.0), s);
  bool unchanged = true;
  for (double a : amplitudes) {
    SweepRow row{a, run_probes(circle_pair(p, p.rotation_angle, a), s)};
    const bool same = row.result.minimal() == rep.baseline.minimal() && row.result.ergodic() == rep.baseline.ergodic();
    unchanged = unchanged && same;
    if (unchanged) rep.largest_unchanged = a;
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

}  // namespace ifsprobe

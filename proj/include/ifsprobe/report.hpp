#pragma once

// JSON and CSV serialization of probe results. Keys come out sorted and
// doubles in shortest round-trip form, so equal inputs give equal bytes.
// Infinite values are written as null.

#include <cmath>
#include <fstream>
#include <string>

#include <json.hpp>

#include "ifsprobe/analysis.hpp"
#include "ifsprobe/circle.hpp"
#include "ifsprobe/construction.hpp"
#include "ifsprobe/error.hpp"
#include "ifsprobe/packing.hpp"
#include "ifsprobe/rng.hpp"

namespace ifsprobe {

using Json = nlohmann::json;

inline Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

inline Json disk_json(const Disk& d) { return {{"cx", d.center.x}, {"cy", d.center.y}, {"r", d.radius}}; }

inline Json minimality_json(const MinimalityReport& r) {
  return {{"epsilon", r.epsilon},
          {"max_word_len", r.max_word_length},
          {"samples", r.samples},
          {"uncovered_fraction", r.uncovered_fraction},
          {"verdict", r.verdict()}};
}

inline Json distortion_json(const DistortionReport& r) {
  return {{"alpha", r.alpha}, {"C", r.c},           {"xi", r.xi},           {"diam", r.diam},
          {"L_H", r.l_h},     {"emp_min", r.emp_min}, {"emp_max", r.emp_max}, {"samples", r.samples},
          {"consistent", r.consistent()}};
}

inline Json shrink_json(const ShrinkResult& s) {
  return {{"r0", s.r0},
          {"diam_r0", s.diam_at_r0},
          {"diam_r0_minus_1", s.diam_before ? Json(*s.diam_before) : Json(nullptr)}};
}

inline Json ergodicity_json(const ErgodicityReport& r) {
  return {{"resolution", r.resolution},
          {"best_defect", number_or_null(r.best_defect)},
          {"best_volume", r.candidate ? Json(r.best_volume) : Json(nullptr)},
          {"verdict", r.verdict()},
          {"label", "term-ergodic (per the preimage-invariance definition)"},
          {"candidates_considered", r.candidates_considered}};
}

inline Json construction_json(const ConstructionParams& p, const ConstructionResult& c, const AbsorbingResult& a,
                              const AttractorResult& att) {
  Json anchors = Json::array();
  for (Point y : c.anchors) anchors.push_back({y.x, y.y});
  return {{"kappa", p.kappa},
          {"theta", p.theta},
          {"delta", p.delta},
          {"k", c.k()},
          {"anchors", anchors},
          {"cover_verified", c.cover_verified},
          {"absorbing_verified", a.absorbing},
          {"escape_distance", a.escape_distance},
          {"iterations", att.iterations},
          {"final_hausdorff", att.final_distance},
          {"attractor_volume", volume(att.set)},
          {"attractor_inradius", inradius(att.set)},
          {"attractor_diameter", rasterized_diameter(att.set)}};
}

inline Json probe_json(const CircleProbeResult& r) {
  return {{"minimality", minimality_json(r.minimality)}, {"ergodicity", ergodicity_json(r.ergodicity)}};
}

inline Json rational_json(const RationalSubstitutionReport& r) {
  return {{"gamma", {{"p", r.gamma.p}, {"q", r.gamma.q}}},
          {"pair", probe_json(r.pair)},
          {"f1_alone", probe_json(r.f1_alone)},
          {"rotation_alone", probe_json(r.rotation_alone)},
          {"singles_fail", r.singles_fail()},
          {"pair_passes", r.pair_passes()}};
}

inline Json robustness_json(const RobustnessReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) {
    Json j = probe_json(row.result);
    j["amplitude"] = row.amplitude;
    rows.push_back(j);
  }
  return {{"baseline", probe_json(r.baseline)},
          {"rows", rows},
          {"largest_unchanged", r.largest_unchanged ? Json(*r.largest_unchanged) : Json(nullptr)}};
}

inline Json packing_json(const PackingReport& r) {
  return {{"cond1", r.cond1},
          {"cond2", r.cond2},
          {"cond3", r.cond3},
          {"cond4", r.cond4},
          {"margins", {number_or_null(r.margin1), number_or_null(r.margin2), number_or_null(r.margin3),
                       number_or_null(r.margin4)}},
          {"density_premise", r.density_premise},
          {"covered_fraction", r.covered_fraction},
          {"centers_in_dp", r.centers_in_dp},
          {"feasible", r.feasible()}};
}

inline Json contradiction_json(const ContradictionReport& r) {
  return {{"lower_bound", r.lower_bound},
          {"actual", r.actual},
          {"complement_in_union", r.complement_in_union},
          {"density_premise", r.density_premise},
          {"infeasible_with_density_premise", r.infeasible_with_premise},
          {"chain_holds", r.chain_holds}};
}

// Top-level report: the command, the generator and seed, and the body.
inline Json envelope(const std::string& command, std::uint64_t seed, Json body) {
  body["command"] = command;
  body["rng"] = kRngName;
  body["seed"] = seed;
  return body;
}

inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  out << text;
}

inline void write_sweep_csv(const RobustnessReport& r, const std::string& path) {
  std::string text = "amplitude,minimality_verdict,uncovered_fraction,ergodicity_verdict,best_defect\n";
  for (const auto& row : r.rows) {
    const auto& e = row.result.ergodicity;
    text += format_double(row.amplitude) + "," + row.result.minimality.verdict() + "," +
            format_double(row.result.minimality.uncovered_fraction) + "," + e.verdict() + "," +
            (std::isfinite(e.best_defect) ? format_double(e.best_defect) : std::string("inf")) + "\n";
  }
  write_text(path, text);
}

}  // namespace ifsprobe

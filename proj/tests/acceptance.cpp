// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Every criterion produces a JSON report from fixed seeds; criterion 10 reruns
// 1-9 and compares the serialized reports byte for byte.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "ifsprobe/ifsprobe.hpp"

using namespace ifsprobe;

namespace {

constexpr double kGolden = 0.6180339887498949;

struct Outcome {
  bool pass = true;
  std::string detail;
  Json report;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

const ConstructionParams kParams{0.76, 179.0, 1.0, 16.0};

// Delta at resolution 1024 for the unperturbed construction.
GridSet construction_attractor(const SystemSpec& sys) {
  const Domain dom = construction_domain(kParams, 1024);
  return attractor(sys, Disk{{0.0, 0.0}, 16.0}, dom, 2.0 * dom.cell_width(), 200).set;
}

Outcome affine_identity() {
  Outcome o;
  const auto c = build_construction(kParams, 1024);
  const GridSet delta = construction_attractor(c.system);
  DistortionOptions d;
  d.word_length = 30;
  d.variable_length = true;
  d.word_count = 10000;
  d.pair_count = 1000;
  d.seed = 11;
  const auto t0 = Clock::now();
  const auto r = empirical_distortion(c.system, delta, d);
  const double secs = seconds_since(t0);
  o.pass = r.min >= 1.0 - 1e-12 && r.max <= 1.0 + 1e-12 && secs < 10.0;
  o.detail = "ratios in [" + format_double(r.min) + ", " + format_double(r.max) + "], " + fmt("%.1f s", secs);
  o.report = {{"emp_min", r.min}, {"emp_max", r.max}, {"words", d.word_count}, {"pairs", d.pair_count}};
  return o;
}

Outcome bound_formula() {
  Outcome o;
  const double e = distortion_bound(1.0, 0.5, 1.0, 1.0);
  bool ones = true;
  for (double xi : {0.1, 0.5, 0.99})
    for (double alpha : {0.25, 1.0})
      for (double diam : {0.5, 1.0, 20.0}) ones = ones && distortion_bound(0.0, xi, alpha, diam) == 1.0;
  o.pass = std::abs(e - std::exp(1.0)) <= 1e-12 && ones;
  o.detail = "L_H(1, 0.5, 1, 1) = " + format_double(e) + (ones ? ", C = 0 gives 1" : ", C = 0 does not give 1");
  o.report = {{"L_H", e}, {"c_zero_is_one", ones}};
  return o;
}

Outcome perturbed_consistency() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto c = build_construction(kParams, 1024);
  std::vector<MapSpec> gens;
  for (std::size_t i = 0; i < c.system.generators().size(); ++i)
    gens.push_back(MapSpec::perturbed(c.system.generators()[i], 0.01, 100 + i));
  const SystemSpec sys(gens);
  const GridSet delta = construction_attractor(sys);
  DistortionPipelineOptions d;
  d.empirical.word_length = 30;
  d.empirical.word_count = 1000;
  d.empirical.pair_count = 1000;
  d.empirical.seed = 12;
  const auto r = distortion_report(sys, delta, d);
  const double secs = seconds_since(t0);
  o.pass = r.consistent() && secs < 60.0;
  o.detail = "C " + fmt("%.4f", r.c) + ", xi " + fmt("%.4f", r.xi) + ", diam " + fmt("%.3f", r.diam) + ", L_H " +
             fmt("%.4f", r.l_h) + ", empirical [" + fmt("%.4f", r.emp_min) + ", " + fmt("%.4f", r.emp_max) + "], " +
             fmt("%.1f s", secs);
  o.report = distortion_json(r);
  return o;
}

Outcome construction_reproduction() {
  Outcome o;
  const auto t0 = Clock::now();
  const auto c = build_construction(kParams, 1024);
  const auto ab = check_absorbing(c.system, c.u, 1024);
  const Domain dom = construction_domain(kParams, 1024);
  const auto a = attractor(c.system, c.u, dom, 2.0 * dom.cell_width(), 200);
  const double secs = seconds_since(t0);
  const double rin = inradius(a.set);
  o.pass = c.cover_verified && ab.absorbing && a.final_distance <= 2.0 * dom.cell_width() &&
           rin >= 4.0 * dom.cell_width() && secs < 120.0;
  o.detail = "k = " + std::to_string(c.k()) + ", cover " + (c.cover_verified ? "verified" : "NOT verified") +
             ", absorbing " + (ab.absorbing ? "yes" : "no") + ", step " + fmt("%.2f", a.final_distance / dom.cell_width()) +
             " cells, inradius " + fmt("%.1f", rin / dom.cell_width()) + " cells, " + fmt("%.1f s", secs);
  o.report = construction_json(kParams, c, ab, a);
  return o;
}

Outcome shrink() {
  Outcome o;
  const SystemSpec t({MapSpec::affine_similarity(0.76, 179.0)});
  const Word w{std::vector<std::size_t>(40, 0), Direction::reverse};
  const auto s = shrink_time(t, w, Disk{{0.0, 0.0}, 16.0}, 1.0, 40);
  // Oracle: first r with 32 kappa^r < 1.
  int oracle = 0;
  while (32.0 * std::pow(0.76, oracle) >= 1.0) ++oracle;
  o.pass = oracle == 13 && s.r0 == oracle && s.diam_at_r0 < 1.0 && s.diam_before && *s.diam_before >= 1.0;
  o.detail = "r0 = " + std::to_string(s.r0) + " (oracle " + std::to_string(oracle) + "), diam " +
             fmt("%.4f", s.diam_at_r0) + " < 1 <= " + (s.diam_before ? fmt("%.4f", *s.diam_before) : "none");
  o.report = shrink_json(s);
  return o;
}

Outcome minimality() {
  Outcome o;
  const GridSet circle = GridSet::full(Domain::circle(4096));
  MinimalityOptions m;
  m.epsilon = 0.02;
  m.max_word_length = 200;
  m.samples = 8;
  const auto golden = minimality_test(SystemSpec({MapSpec::circle_rotation(kGolden)}), circle, m);
  m.epsilon = 0.05;
  const auto third = minimality_test(SystemSpec({MapSpec::circle_rotation(1.0 / 3.0)}), circle, m);
  const auto c = build_construction(kParams, 1024);
  const GridSet delta = construction_attractor(c.system);
  m.epsilon = 0.02 * rasterized_diameter(delta);
  m.max_word_length = 25;
  m.samples = 100;
  const auto planar = minimality_test(c.system, delta, m);
  o.pass = golden.eps_dense() && !third.eps_dense() && planar.eps_dense();
  o.detail = "golden " + golden.verdict() + ", 1/3 " + third.verdict() + " (uncovered " +
             fmt("%.3f", third.uncovered_fraction) + "), construction on its attractor " + planar.verdict();
  o.report = {{"golden", minimality_json(golden)}, {"third", minimality_json(third)}, {"construction", minimality_json(planar)}};
  return o;
}

Outcome ergodicity() {
  Outcome o;
  const auto t0 = Clock::now();
  const Domain d3 = Domain::circle(3072);
  const auto third = ergodicity_probe(SystemSpec({MapSpec::circle_rotation(1.0 / 3.0)}), d3, {});
  const CircleProbeSettings s;
  const auto pair = ergodicity_probe(build_circle_example({}), Domain::circle(4096),
                                     {s.seed_sets, s.refine_steps, s.saturation_steps, s.seed});
  const double secs = seconds_since(t0);
  const bool exact = third.candidate_found && third.best_defect == 0.0 &&
                     std::abs(third.best_volume - 0.5) <= 2.0 * d3.cell_width();
  const bool none = !pair.candidate_found && pair.best_defect > kRingFactor * pair.best_ring;
  o.pass = exact && none && secs < 120.0;
  o.detail = "rotation 1/3: defect " + format_double(third.best_defect) + ", volume " + fmt("%.5f", third.best_volume) +
             "; north-south + golden: " + pair.verdict() + ", best defect " + fmt("%.4f", pair.best_defect) +
             " vs 3-cell ring " + fmt("%.5f", kRingFactor * pair.best_ring) + ", " + fmt("%.1f s", secs);
  o.report = {{"third", ergodicity_json(third)}, {"pair", ergodicity_json(pair)}};
  return o;
}

// Disjoint disks inside the ambient disk, by rejection.
std::vector<Disk> random_family(const Disk& amb, Rng& rng) {
  std::vector<Disk> f;
  const int count = 1 + static_cast<int>(rng.below(12));
  for (int attempt = 0; attempt < 300 && static_cast<int>(f.size()) < count; ++attempt) {
    const double r = rng.uniform(0.02, 0.25);
    const double rho = (amb.radius - r) * std::sqrt(rng.uniform());
    const double a = rng.uniform(0.0, 2.0 * kPi);
    const Disk d{amb.center + rho * Point{std::cos(a), std::sin(a)}, r};
    bool ok = true;
    for (const auto& q : f) ok = ok && norm(q.center - d.center) > q.radius + d.radius;
    if (ok) f.push_back(d);
  }
  return f;
}

GridSet random_target(const Domain& dom, Rng& rng) {
  GridSet s(dom);
  const int blobs = static_cast<int>(rng.below(8));
  for (int i = 0; i < blobs; ++i)
    s |= GridSet::disk(dom, Disk{{rng.uniform(), rng.uniform()}, rng.uniform(0.02, 0.2)});
  return s;
}

GridSet checkerboard(const Domain& dom) {
  GridSet s(dom);
  for (int row = 0; row < dom.rows(); ++row)
    for (int col = 0; col < dom.cols(); ++col) s.set(dom.index(col, row), (col + 2 * row) % 5 != 0);
  return s;
}

Outcome packing() {
  Outcome o;
  const Domain dom = Domain::rectangle(0.0, 1.0, 0.0, 1.0, 512);
  const Disk amb{{0.5, 0.5}, 0.4};
  const double slack = 1.0 / 50.0;
  const GridSet board = checkerboard(dom);
  const auto g = greedy_pack(board, amb, 4.0 * dom.cell_width(), 64);
  const auto gc = contradiction_bound(g.instance, slack);

  // 100 instances: 80 random families, 20 greedy families on random targets.
  Rng rng(13);
  int premises = 0, violations = 0;
  for (int t = 0; t < 100; ++t) {
    const GridSet target = random_target(dom, rng);
    PackingInstance inst{amb, target, {}};
    if (t % 5 == 4) {
      inst = greedy_pack(target, amb, 0.01, 24).instance;
    } else {
      inst.family = random_family(amb, rng);
    }
    const auto r = verify_conditions(inst);
    const auto c = contradiction_bound(inst, slack);
    if (r.cond2 && r.cond3 && r.cond4) {
      ++premises;
      if (!(c.actual > 1.0 / 3.0 - slack)) ++violations;
    }
    if (!c.chain_holds) ++violations;
  }
  o.pass = g.report.density_premise > 0.75 && !g.report.feasible() && gc.infeasible_with_premise && violations == 0;
  o.detail = "checkerboard density " + fmt("%.3f", g.report.density_premise) + ", greedy feasible " +
             (g.report.feasible() ? "true" : "false") + "; implication held on " + std::to_string(100 - violations) +
             "/100 instances (" + std::to_string(premises) + " with all premises true)";
  o.report = {{"greedy", packing_json(g.report)},
              {"greedy_bound", contradiction_json(gc)},
              {"premises", premises},
              {"violations", violations}};
  return o;
}

Outcome hexagon() {
  Outcome o;
  const Disk amb{{0.5, 0.5}, 0.4};
  const double r = amb.radius / 3.0;
  std::vector<Disk> f{{amb.center, r}};
  for (int j = 0; j < 6; ++j) {
    const double a = kPi * j / 3.0;
    f.push_back({amb.center + (2.0 * r) * Point{std::cos(a), std::sin(a)}, r});
  }
  const PackingInstance inst{amb, GridSet(Domain::rectangle(0.0, 1.0, 0.0, 1.0, 1024)), f};
  const auto rep = verify_conditions(inst);
  o.pass = std::abs(rep.covered_fraction - 7.0 / 9.0) <= 0.01 * 7.0 / 9.0 && rep.cond3;
  o.detail = "covered " + fmt("%.5f", rep.covered_fraction) + " vs 7/9 = " + fmt("%.5f", 7.0 / 9.0) + ", cond3 " +
             (rep.cond3 ? "true" : "false");
  o.report = packing_json(rep);
  return o;
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"affine distortion identity", affine_identity},
      {"distortion bound formula", bound_formula},
      {"perturbed distortion consistency", perturbed_consistency},
      {"construction reproduction", construction_reproduction},
      {"shrink time", shrink},
      {"minimality probes", minimality},
      {"ergodicity probe calibration", ergodicity},
      {"packing contradiction", packing},
      {"hexagonal sanity", hexagon},
  };

  int failed = 0;
  std::vector<std::string> first;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("error: ") + e.what();
    }
    first.push_back(dump(o.report));
    if (!o.pass) ++failed;
    std::printf("criterion %zu: %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].name, o.detail.c_str());
    std::fflush(stdout);
  }

  // Determinism: rerun 1-9 and compare the reports.
  std::string mismatched;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    std::string again;
    try {
      again = dump(criteria[i].run().report);
    } catch (const std::exception& e) {
      again = e.what();
    }
    if (again != first[i]) mismatched += (mismatched.empty() ? "" : ", ") + std::to_string(i + 1);
  }
  const bool det = mismatched.empty();
  if (!det) ++failed;
  std::printf("criterion 10: %s  determinism: %s\n", det ? "PASS" : "FAIL",
              det ? "reports of criteria 1-9 byte-identical across two runs" : ("reports differ for " + mismatched).c_str());
  std::printf("%d of 10 criteria passed\n", 10 - failed);
  return failed == 0 ? 0 : 1;
}

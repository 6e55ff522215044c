// ifsprobe: command-line front end.
//
// Exit status: 0 success, 1 usage or validation error, 2 probe failure
// (budget, convergence, construction, horizon).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ifsprobe/ifsprobe.hpp"

namespace fs = std::filesystem;
using namespace ifsprobe;

namespace {

struct Globals {
  int resolution = 0;  // 0: the subcommand's default
  std::uint64_t seed = 1;
  std::string out = ".";
};

int resolution_or(const Globals& g, int def) { return g.resolution > 0 ? g.resolution : def; }

std::string out_path(const Globals& g, const std::string& name) { return (fs::path(g.out) / name).string(); }

void prepare_out(const Globals& g) {
  std::error_code ec;
  fs::create_directories(g.out, ec);
  if (ec) throw ValidationError("cannot create output directory " + g.out);
}

void write_report(const Globals& g, const std::string& command, Json body) {
  write_text(out_path(g, "report.json"), dump(envelope(command, g.seed, std::move(body))));
}

void write_system(const Globals& g, const SystemSpec& sys) {
  std::string text;
  for (std::size_t i = 0; i < sys.generators().size(); ++i) text += sys.generators()[i].describe() + "\n";
  if (sys.include_inverses()) text += "inverses=true\n";
  write_text(out_path(g, "system.txt"), text);
}

SystemSpec load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read system file " + path);
  return parse_system(in);
}

// Planar systems default to the contraction construction; --system replaces it.
struct PlanarSource {
  std::string system_file;
  ConstructionParams params;

  void add(CLI::App* app) {
    app->add_option("--system", system_file, "system file (one generator per line)");
    app->add_option("--kappa", params.kappa, "contraction factor in (3/4, 1)")->capture_default_str();
    app->add_option("--theta", params.theta, "rotation angle in degrees")->capture_default_str();
    app->add_option("--delta", params.delta, "radius of V = B(0, delta)")->capture_default_str();
    app->add_option("--u-factor", params.u_factor, "U = B(0, u-factor * delta)")->capture_default_str();
  }

  SystemSpec system(int resolution) const {
    if (!system_file.empty()) return load_system(system_file);
    return build_construction(params, resolution).system;
  }
  Disk u() const { return {{0.0, 0.0}, params.u_factor * params.delta}; }
};

struct AttractorSettings {
  double tol_cells = 2.0;
  int max_iter = 200;

  void add(CLI::App* app) {
    app->add_option("--tol-cells", tol_cells, "attractor stop: Hausdorff step distance in cell widths")->capture_default_str();
    app->add_option("--max-iter", max_iter, "attractor iteration limit")->capture_default_str();
  }
  AttractorResult run(const SystemSpec& sys, const Disk& u, const Domain& dom) const {
    return attractor(sys, u, dom, tol_cells * dom.cell_width(), max_iter);
  }
};

// ---- construct --------------------------------------------------------------

struct ConstructCmd {
  ConstructionParams params;
  AttractorSettings att;

  void add(CLI::App& app, Globals& g, std::function<void()>& action) {
    auto* sub = app.add_subcommand("construct", "build {T, S_1, ...}, check U is absorbing, compute the attractor");
    sub->add_option("--kappa", params.kappa, "contraction factor in (3/4, 1)")->capture_default_str();
    sub->add_option("--theta", params.theta, "rotation angle in degrees")->capture_default_str();
    sub->add_option("--delta", params.delta, "radius of V = B(0, delta)")->capture_default_str();
    sub->add_option("--u-factor", params.u_factor, "U = B(0, u-factor * delta)")->capture_default_str();
    att.add(sub);
    sub->callback([this, &g, &action] { action = [this, &g] { run(g); }; });
  }

  void run(const Globals& g) const {
    const int res = resolution_or(g, Domain::kDefaultResolution);
    const auto c = build_construction(params, res);
    const auto ab = check_absorbing(c.system, c.u, res);
    const Domain dom = construction_domain(params, res);
    const auto a = att.run(c.system, c.u, dom);
    prepare_out(g);
    write_pgm(a.set, out_path(g, "attractor.pgm"));
    write_system(g, c.system);
    write_report(g, "construct", {{"resolution", res}, {"construction", construction_json(params, c, ab, a)}});
  }
};

// ---- minimality -------------------------------------------------------------

struct MinimalityCmd {
  PlanarSource source;
  AttractorSettings att;
  std::optional<double> epsilon;
  double epsilon_fraction = 0.02;
  MinimalityOptions opt;

  void add(CLI::App& app, Globals& g, std::function<void()>& action) {
    auto* sub = app.add_subcommand("minimality", "epsilon-density of sampled orbits over the attractor or the circle");
    source.add(sub);
    att.add(sub);
    sub->add_option("--epsilon", epsilon, "covering radius (default: epsilon-fraction * region diameter)");
    sub->add_option("--epsilon-fraction", epsilon_fraction, "epsilon as a fraction of the region diameter")->capture_default_str();
    sub->add_option("--max-word-len", opt.max_word_length, "longest word enumerated")->capture_default_str();
    sub->add_option("--samples", opt.samples, "number of start points")->capture_default_str();
    sub->add_option("--prune-fraction", opt.prune_fraction, "orbit pruning radius as a fraction of epsilon")->capture_default_str();
    sub->callback([this, &g, &action] { action = [this, &g] { run(g); }; });
  }

  void run(const Globals& g) {
    const SystemSpec probe_sys = source.system(resolution_or(g, Domain::kDefaultResolution));
    std::optional<GridSet> region;
    if (probe_sys.is_circle()) {
      region = GridSet::full(Domain::circle(resolution_or(g, 4096)));
    } else {
      const int res = resolution_or(g, Domain::kDefaultResolution);
      const Disk u = source.u();
      const Domain dom = Domain::square(u.radius + source.params.delta, res);
      region = att.run(probe_sys, u, dom).set;
    }
    opt.epsilon = epsilon ? *epsilon : epsilon_fraction * rasterized_diameter(*region);
    opt.seed = g.seed;
    const auto rep = minimality_test(probe_sys, *region, opt);
    prepare_out(g);
    if (!probe_sys.is_circle()) write_pgm(*region, out_path(g, "region.pgm"));
    write_report(g, "minimality",
                 {{"resolution", region->domain().resolution()},
                  {"region_volume", volume(*region)},
                  {"minimality", minimality_json(rep)}});
  }
};

// ---- distortion -------------------------------------------------------------

struct DistortionCmd {
  PlanarSource source;
  AttractorSettings att;
  DistortionPipelineOptions opt;
  double perturb_amplitude = 0.0;
  std::optional<double> shrink_delta;
  int max_r = 200;
  int shrink_resolution = 512;

  void add(CLI::App& app, Globals& g, std::function<void()>& action) {
    auto* sub = app.add_subcommand("distortion", "Hölder constant, contraction factor, L_H, empirical ratios, shrink time");
    source.add(sub);
    att.add(sub);
    sub->add_option("--alpha", opt.alpha, "Hölder exponent in (0, 1]")->capture_default_str();
    sub->add_option("--perturb-amplitude", perturb_amplitude, "perturb every generator by this amplitude")->capture_default_str();
    sub->add_option("--word-length", opt.empirical.word_length, "reverse word length")->capture_default_str();
    sub->add_flag("--variable-length", opt.empirical.variable_length, "draw word lengths uniformly in [0, word-length]");
    sub->add_option("--word-count", opt.empirical.word_count, "number of random words")->capture_default_str();
    sub->add_option("--pair-count", opt.empirical.pair_count, "number of point pairs")->capture_default_str();
    sub->add_option("--holder-pairs", opt.holder_pairs, "pair samples per generator for C")->capture_default_str();
    sub->add_option("--norm-samples", opt.norm_samples, "point samples for xi")->capture_default_str();
    sub->add_option("--shrink-delta", shrink_delta, "shrink-time threshold (default: delta)");
    sub->add_option("--max-r", max_r, "shrink-time horizon")->capture_default_str();
    sub->add_option("--shrink-resolution", shrink_resolution, "grid for nested images")->capture_default_str();
    sub->callback([this, &g, &action] { action = [this, &g] { run(g); }; });
  }

  void run(const Globals& g) {
    const int res = resolution_or(g, Domain::kDefaultResolution);
    SystemSpec probe_sys = source.system(res);
    if (probe_sys.is_circle()) throw DimensionError("distortion needs a planar system");
    if (perturb_amplitude > 0.0) {
      std::vector<MapSpec> gens;
      for (std::size_t i = 0; i < probe_sys.generators().size(); ++i)
        gens.push_back(MapSpec::perturbed(probe_sys.generators()[i], perturb_amplitude, g.seed + i));
      probe_sys = SystemSpec(std::move(gens), probe_sys.include_inverses());
    }
    const Disk u = source.u();
    const Domain dom = Domain::square(u.radius + source.params.delta, res);
    const auto a = att.run(probe_sys, u, dom);
    opt.empirical.seed = g.seed;
    const auto rep = distortion_report(probe_sys, a.set, opt);

    Rng rng(g.seed ^ 0x5851f42d4c957f2dULL);
    const Word w = random_word(probe_sys.alphabet_size(), static_cast<std::size_t>(max_r), Direction::reverse, rng);
    const auto sh = shrink_time(probe_sys, w, u, shrink_delta.value_or(source.params.delta), max_r, shrink_resolution);

    prepare_out(g);
    write_pgm(a.set, out_path(g, "attractor.pgm"));
    write_report(g, "distortion",
                 {{"resolution", res},
                  {"perturb_amplitude", perturb_amplitude},
                  {"distortion", distortion_json(rep)},
                  {"shrink", shrink_json(sh)}});
  }
};

// ---- ergodicity -------------------------------------------------------------

struct ErgodicityCmd {
  std::string system_file;
  CircleExampleParams params;
  ErgodicityOptions opt;

  void add(CLI::App& app, Globals& g, std::function<void()>& action) {
    auto* sub = app.add_subcommand("ergodicity", "seeded search for an intermediate invariant set");
    sub->add_option("--system", system_file, "system file (default: north-south map plus rotation)");
    sub->add_option("--lambda", params.lambda, "north-south multiplier in (1/2, 1)")->capture_default_str();
    sub->add_option("--rotation-angle", params.rotation_angle, "rotation angle in turns")->capture_default_str();
    sub->add_option("--seed-sets", opt.seed_sets, "number of seed sets")->capture_default_str();
    sub->add_option("--refine-steps", opt.refine_steps, "majority refinement steps per seed")->capture_default_str();
    sub->add_option("--saturation-steps", opt.saturation_steps, "saturation steps per seed")->capture_default_str();
    sub->callback([this, &g, &action] { action = [this, &g] { run(g); }; });
  }

  void run(const Globals& g) {
    const SystemSpec probe_sys = system_file.empty() ? build_circle_example(params) : load_system(system_file);
    const Domain dom = probe_sys.is_circle() ? Domain::circle(resolution_or(g, 4096))
                                             : Domain::square(17.0, resolution_or(g, Domain::kDefaultResolution));
    opt.seed = g.seed;
    const auto rep = ergodicity_probe(probe_sys, dom, opt);
    prepare_out(g);
    if (rep.candidate && !dom.is_circle()) write_pgm(*rep.candidate, out_path(g, "candidate.pgm"));
    if (rep.candidate && dom.is_circle()) write_points_csv(*rep.candidate, out_path(g, "candidate.csv"));
    write_report(g, "ergodicity", {{"ergodicity", ergodicity_json(rep)}});
  }
};

// ---- circle -----------------------------------------------------------------

struct CircleCmd {
  CircleExampleParams params;
  CircleProbeSettings settings;
  std::string rational;
  std::vector<double> amplitudes{0.0, 0.001, 0.005, 0.01};

  void add(CLI::App& app, Globals& g, std::function<void()>& action) {
    auto* sub = app.add_subcommand("circle", "north-south map plus rotation: probes, rational substitution, sweep");
    sub->add_option("--lambda", params.lambda, "north-south multiplier in (1/2, 1)")->capture_default_str();
    sub->add_option("--rotation-angle", params.rotation_angle, "rotation angle in turns")->capture_default_str();
    sub->add_option("--rational-approx", rational, "rational angle p/q for the substitution experiment");
    sub->add_option("--perturb-amplitude", params.perturb_amplitude, "perturbation of the probed example")->capture_default_str();
    sub->add_option("--pole", params.pole, "attracting fixed point of f1")->capture_default_str();
    sub->add_option("--epsilon", settings.epsilon, "covering radius")->capture_default_str();
    sub->add_option("--max-word-len", settings.max_word_length, "longest word enumerated")->capture_default_str();
    sub->add_option("--samples", settings.samples, "number of start points")->capture_default_str();
    sub->add_option("--seed-sets", settings.seed_sets, "ergodicity seed sets")->capture_default_str();
    sub->add_option("--refine-steps", settings.refine_steps, "majority refinement steps")->capture_default_str();
    sub->add_option("--saturation-steps", settings.saturation_steps, "saturation steps")->capture_default_str();
    sub->add_option("--amplitudes", amplitudes, "sweep amplitudes in [0, 0.1)")->delimiter(',')->capture_default_str();
    sub->callback([this, &g, &action] { action = [this, &g] { run(g); }; });
  }

  static Fraction parse_fraction(const std::string& s) {
    const auto slash = s.find('/');
    try {
      if (slash == std::string::npos) throw std::invalid_argument(s);
      std::size_t p1 = 0, p2 = 0;
      const long long p = std::stoll(s.substr(0, slash), &p1);
      const long long q = std::stoll(s.substr(slash + 1), &p2);
      if (p1 != slash || p2 != s.size() - slash - 1) throw std::invalid_argument(s);
      return {p, q};
    } catch (const std::exception&) {
      throw ValidationError("rational approximation must look like p/q, got '" + s + "'");
    }
  }

  void run(const Globals& g) {
    settings.resolution = resolution_or(g, 4096);
    settings.seed = g.seed;
    params.seed = g.seed;
    if (!rational.empty()) params.rational_approx = parse_fraction(rational);
    const auto example = run_probes(build_circle_example(params), settings);
    Json body{{"resolution", settings.resolution},
              {"lambda", params.lambda},
              {"rotation_angle", params.rotation_angle},
              {"perturb_amplitude", params.perturb_amplitude},
              {"example", probe_json(example)}};
    if (params.rational_approx) body["rational"] = rational_json(rational_substitution_experiment(params, settings));
    const auto sweep = robustness_sweep(params, amplitudes, settings);
    body["sweep"] = robustness_json(sweep);
    prepare_out(g);
    write_sweep_csv(sweep, out_path(g, "sweep.csv"));
    write_report(g, "circle", body);
  }
};

// ---- packing ----------------------------------------------------------------

std::vector<double> parse_list(const std::string& s, std::size_t n, const std::string& what) {
  std::vector<double> v;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      v.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ValidationError(what + ": bad number '" + item + "'");
    }
  }
  if (v.size() != n) throw ValidationError(what + ": expected " + std::to_string(n) + " comma-separated numbers");
  return v;
}

Domain packing_domain(const std::string& pgm, const std::vector<double>& b) {
  const auto [w, h] = pgm_dimensions(pgm);
  if (w != h) throw DomainError(pgm + ": target image must be square");
  return Domain::rectangle(b[0], b[1], b[2], b[3], w);
}

Disk disk_from_json(const Json& j, const std::string& what) {
  try {
    return {{j.at("cx").get<double>(), j.at("cy").get<double>()}, j.at("r").get<double>()};
  } catch (const Json::exception&) {
    throw ValidationError(what + " needs numeric cx, cy, r");
  }
}

Json packing_body(const PackingInstance& inst, const std::string& target_path) {
  Json family = Json::array();
  for (const Disk& d : inst.family) family.push_back(disk_json(d));
  const Domain& dom = inst.target.domain();
  return {{"resolution", dom.resolution()},
          {"instance",
           {{"ambient", disk_json(inst.ambient)},
            {"target", target_path},
            {"bounds", {dom.x0(), dom.x1(), dom.y0(), dom.y1()}},
            {"family", family}}},
          {"packing", packing_json(verify_conditions(inst))},
          {"contradiction", contradiction_json(contradiction_bound(inst))}};
}

struct PackingCmd {
  std::string instance_file;
  std::string target;
  std::string ambient = "0.5,0.5,0.4";
  std::string bounds = "0,1,0,1";
  double min_radius = 0.0;
  int max_disks = 64;

  void add(CLI::App& app, Globals& g, std::function<void()>& action) {
    auto* sub = app.add_subcommand("packing", "disk families against a target set");
    sub->require_subcommand(1);
    auto* verify = sub->add_subcommand("verify", "check conditions (i)-(iv) for an instance file");
    verify->add_option("--instance", instance_file, "instance JSON")->required();
    verify->callback([this, &g, &action] { action = [this, &g] { run_verify(g); }; });
    auto* greedy = sub->add_subcommand("greedy", "greedy search for a family satisfying (i)-(iv)");
    greedy->add_option("--target", target, "target set B as a PGM image")->required();
    greedy->add_option("--ambient", ambient, "ambient disk cx,cy,r")->capture_default_str();
    greedy->add_option("--bounds", bounds, "chart x0,x1,y0,y1")->capture_default_str();
    greedy->add_option("--min-radius", min_radius, "smallest disk radius (default: four cell widths)");
    greedy->add_option("--max-disks", max_disks, "placement limit")->capture_default_str();
    greedy->callback([this, &g, &action] { action = [this, &g] { run_greedy(g); }; });
  }

  void run_verify(const Globals& g) const {
    std::ifstream in(instance_file);
    if (!in) throw ValidationError("cannot read instance file " + instance_file);
    Json j;
    try {
      j = Json::parse(in);
    } catch (const Json::exception& e) {
      throw ValidationError(instance_file + ": " + e.what());
    }
    if (!j.is_object() || !j.contains("ambient") || !j.contains("target") || !j.contains("family"))
      throw ValidationError(instance_file + ": needs ambient, target and family");
    if (!j["target"].is_string() || !j["family"].is_array())
      throw ValidationError(instance_file + ": target must be a path and family a list");
    std::vector<double> b{0.0, 1.0, 0.0, 1.0};
    if (j.contains("bounds")) {
      try {
        b = j["bounds"].get<std::vector<double>>();
      } catch (const Json::exception&) {
        throw ValidationError(instance_file + ": bounds must be [x0, x1, y0, y1]");
      }
      if (b.size() != 4) throw ValidationError(instance_file + ": bounds must be [x0, x1, y0, y1]");
    }
    const std::string target_name = j["target"].get<std::string>();
    fs::path tp(target_name);
    if (tp.is_relative()) tp = fs::path(instance_file).parent_path() / tp;
    const Domain dom = packing_domain(tp.string(), b);
    PackingInstance inst{disk_from_json(j["ambient"], "ambient"), read_pgm(tp.string(), dom), {}};
    for (const auto& d : j["family"]) inst.family.push_back(disk_from_json(d, "family entry"));
    prepare_out(g);
    write_report(g, "packing verify", packing_body(inst, target_name));
  }

  void run_greedy(const Globals& g) const {
    const Domain dom = packing_domain(target, parse_list(bounds, 4, "--bounds"));
    const auto a = parse_list(ambient, 3, "--ambient");
    const GridSet t = read_pgm(target, dom);
    const double r = min_radius > 0.0 ? min_radius : 4.0 * dom.cell_width();
    const auto res = greedy_pack(t, Disk{{a[0], a[1]}, a[2]}, r, max_disks);
    prepare_out(g);
    write_disks_csv(res.instance.family, out_path(g, "family.csv"));
    write_report(g, "packing greedy", packing_body(res.instance, target));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Numerical probes for iterated function systems: construction, minimality, distortion, "
               "ergodicity, circle examples and packing conditions."};
  app.set_config("--config", "", "key=value configuration file; flags override it");
  app.require_subcommand(1);
  app.fallthrough();  // global flags may follow the subcommand
  Globals g;
  app.add_option("--resolution", g.resolution, "grid cells per side (default per subcommand)");
  app.add_option("--seed", g.seed, "seed for mt19937_64")->capture_default_str();
  app.add_option("--out", g.out, "output directory")->capture_default_str();

  std::function<void()> action;
  ConstructCmd construct;
  MinimalityCmd minimality;
  DistortionCmd distortion;
  ErgodicityCmd ergodicity;
  CircleCmd circle;
  PackingCmd packing;
  construct.add(app, g, action);
  minimality.add(app, g, action);
  distortion.add(app, g, action);
  ergodicity.add(app, g, action);
  circle.add(app, g, action);
  packing.add(app, g, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (g.resolution < 0) throw ValidationError("--resolution must be positive");
    if (action) action();
    return 0;
  } catch (const ProbeError& e) {
    std::cerr << "ifsprobe: " << e.what();
    if (const auto* b = dynamic_cast<const BudgetError*>(&e))
      std::cerr << " (partial uncovered fraction " << format_double(b->partial_uncovered_fraction()) << ")";
    if (const auto* c = dynamic_cast<const ConstructionError*>(&e))
      std::cerr << " (uncovered fraction " << format_double(c->uncovered_fraction()) << ")";
    if (const auto* c = dynamic_cast<const ConvergenceError*>(&e))
      std::cerr << " (last step distance " << format_double(c->last_distance()) << ")";
    std::cerr << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "ifsprobe: " << e.what() << "\n";
    return 1;
  }
}

#include "rdescent/harness/config.hpp"

#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

namespace rdescent::harness {

namespace {

std::string join(const std::vector<std::string>& lines) {
  std::string out;
  for (const std::string& l : lines) out += (out.empty() ? "" : "\n") + l;
  return out;
}

std::string where(const YAML::Node& n) {
  const YAML::Mark m = n.Mark();
  if (m.line < 0) return "";
  return " (line " + std::to_string(m.line + 1) + ", column " + std::to_string(m.column + 1) + ")";
}

// Collects problems while reading one mapping section.
class Reader {
 public:
  Reader(const YAML::Node& node, std::string section, std::vector<std::string>& problems)
      : node_(node), section_(std::move(section)), problems_(problems) {
    if (node_.IsDefined() && !node_.IsNull() && !node_.IsMap()) problems_.push_back(section_ + ": expected a mapping" + where(node_));
  }

  bool present(const std::string& key) const { return node_.IsMap() && node_[key]; }

  template <typename T>
  std::optional<T> get(const std::string& key) {
    seen_.insert(key);
    if (!present(key)) return std::nullopt;
    const YAML::Node v = node_[key];
    try {
      return v.as<T>();
    } catch (const YAML::Exception&) {
      problems_.push_back(path(key) + ": wrong type" + where(v));
      return std::nullopt;
    }
  }

  std::optional<std::vector<double>> vector(const std::string& key) {
    seen_.insert(key);
    if (!present(key)) return std::nullopt;
    const YAML::Node v = node_[key];
    if (!v.IsSequence()) {
      problems_.push_back(path(key) + ": expected a list of numbers" + where(v));
      return std::nullopt;
    }
    return get<std::vector<double>>(key);
  }

  YAML::Node child(const std::string& key) {
    seen_.insert(key);
    return present(key) ? node_[key] : YAML::Node();
  }

  void reject_unknown() {
    if (!node_.IsMap()) return;
    for (const auto& kv : node_) {
      const std::string key = kv.first.as<std::string>();
      if (!seen_.count(key)) problems_.push_back(path(key) + ": unknown key" + where(kv.first));
    }
  }

  std::string path(const std::string& key) const { return section_.empty() ? key : section_ + "." + key; }

 private:
  YAML::Node node_;
  std::string section_;
  std::vector<std::string>& problems_;
  std::set<std::string> seen_;
};

bool valid_kind(const std::string& k, std::initializer_list<const char*> kinds) {
  for (const char* s : kinds)
    if (k == s) return true;
  return false;
}

}  // namespace

ConfigError::ConfigError(std::vector<std::string> problems)
    : std::runtime_error(join(problems)), problems_(std::move(problems)) {}

ExperimentConfig parse_config(const std::string& text, const std::string& origin) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError({origin + ": parse error at line " + std::to_string(e.mark.line + 1) + ", column " +
                       std::to_string(e.mark.column + 1) + ": " + e.msg});
  }
  if (!root.IsMap()) throw ConfigError({origin + ": top level must be a mapping"});

  std::vector<std::string> problems;
  ExperimentConfig cfg;
  cfg.source_text = text;
  Reader top(root, "", problems);
  cfg.name = top.get<std::string>("name").value_or("experiment");
  cfg.seed = top.get<std::uint64_t>("seed").value_or(0);

  Reader man(top.child("manifold"), "manifold", problems);
  if (!top.present("manifold")) problems.push_back("manifold: section is required");
  const std::string mkind = man.get<std::string>("kind").value_or("");
  if (mkind == "euclidean") {
    cfg.manifold.kind = ManifoldKind::euclidean;
  } else if (mkind == "sphere") {
    cfg.manifold.kind = ManifoldKind::sphere;
    cfg.manifold.param = man.get<double>("radius").value_or(1.0);
  } else if (mkind == "hyperboloid") {
    cfg.manifold.kind = ManifoldKind::hyperboloid;
    cfg.manifold.param = man.get<double>("kappa").value_or(1.0);
  } else if (top.present("manifold")) {
    problems.push_back("manifold.kind: expected euclidean, sphere or hyperboloid, got '" + mkind + "'");
  }
  cfg.manifold.n = man.get<int>("n").value_or(2);
  if (cfg.manifold.kind != ManifoldKind::sphere) man.get<double>("radius");
  if (cfg.manifold.kind != ManifoldKind::hyperboloid) man.get<double>("kappa");
  man.reject_unknown();

  Reader obj(top.child("objective"), "objective", problems);
  if (!top.present("objective")) problems.push_back("objective: section is required");
  cfg.objective.kind = obj.get<std::string>("kind").value_or("");
  cfg.objective.center = obj.vector("center");
  cfg.objective.weights = obj.vector("weights");
  cfg.objective.weight_range = obj.vector("weight_range");
  cfg.objective.target = obj.vector("target");
  cfg.objective.target_distance = obj.get<double>("target_distance").value_or(1.0);
  cfg.objective.samples = obj.get<int>("samples").value_or(8);
  cfg.objective.spread = obj.get<double>("spread").value_or(cfg.objective.kind == "rayleigh" ? 1.0 : 0.5);
  obj.reject_unknown();

  Reader alg(top.child("algorithm"), "algorithm", problems);
  if (!top.present("algorithm")) problems.push_back("algorithm: section is required");
  cfg.algorithm.kind = alg.get<std::string>("kind").value_or("");
  cfg.algorithm.eta = alg.get<double>("eta");
  cfg.algorithm.M = alg.get<double>("M");
  cfg.algorithm.theta = alg.get<double>("theta");
  cfg.algorithm.mode = alg.get<std::string>("mode").value_or("gconvex");
  cfg.algorithm.xi0 = alg.get<double>("xi0");
  cfg.algorithm.delta_mode = alg.get<std::string>("delta_mode").value_or("analytic");
  cfg.algorithm.oracle = alg.get<std::string>("oracle").value_or("rgd");
  cfg.algorithm.oracle_eta = alg.get<double>("oracle_eta");
  cfg.algorithm.prox_tol = alg.get<double>("prox_tol").value_or(1e-9);
  alg.reject_unknown();

  Reader run(top.child("run"), "run", problems);
  if (const auto k = run.get<int>("k_max")) {
    cfg.run.k_max = *k;
  } else {
    cfg.warnings.push_back("run.k_max missing; using 1000");
  }
  cfg.run.x0 = run.vector("x0");
  cfg.run.x0_radius = run.get<double>("x0_radius");
  cfg.run.grad_tol = run.get<double>("grad_tol").value_or(0.0);
  Reader dom(run.child("domain"), "run.domain", problems);
  if (!run.present("domain")) problems.push_back("run.domain: section with a radius is required");
  cfg.run.domain_center = dom.vector("center").value_or(std::vector<double>(static_cast<std::size_t>(cfg.manifold.n), 0.0));
  if (const auto r = dom.get<double>("radius")) {
    cfg.run.domain_radius = *r;
  } else if (run.present("domain")) {
    problems.push_back("run.domain.radius: required");
  }
  dom.reject_unknown();
  run.reject_unknown();

  Reader out(top.child("output"), "output", problems);
  cfg.output.trace = out.get<std::string>("trace").value_or(cfg.name + ".trace.jsonl");
  cfg.output.report = out.get<std::string>("report").value_or(cfg.name + ".report.json");
  cfg.output.plot = out.get<std::string>("plot");
  cfg.output.csv = out.get<std::string>("csv");
  out.reject_unknown();
  top.reject_unknown();

  for (std::string& p : validate_config(cfg)) problems.push_back(std::move(p));
  if (!problems.empty()) {
    for (std::string& p : problems) p = origin + ": " + p;
    throw ConfigError(std::move(problems));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError({path + ": cannot open file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::vector<std::string> validate_config(const ExperimentConfig& cfg) {
  std::vector<std::string> p;
  const int n = cfg.manifold.n;
  const auto dim_ok = [&](const std::optional<std::vector<double>>& v, const std::string& name) {
    if (v && static_cast<int>(v->size()) != n) p.push_back(name + ": expected " + std::to_string(n) + " entries");
  };
  if (n < 1) p.push_back("manifold.n: must be >= 1");
  if (cfg.manifold.kind != ManifoldKind::euclidean && !(cfg.manifold.param > 0.0)) {
    p.push_back(std::string("manifold.") + (cfg.manifold.kind == ManifoldKind::sphere ? "radius" : "kappa") +
                ": must be positive");
  }

  const ObjectiveConfig& o = cfg.objective;
  if (!valid_kind(o.kind, {"quadratic", "squared_distance", "frechet_mean", "rayleigh"})) {
    p.push_back("objective.kind: expected quadratic, squared_distance, frechet_mean or rayleigh, got '" + o.kind + "'");
  }
  if (o.kind == "quadratic" && cfg.manifold.kind != ManifoldKind::euclidean) {
    p.push_back("objective.kind: quadratic needs a euclidean manifold");
  }
  if (o.kind == "rayleigh" && cfg.manifold.kind != ManifoldKind::sphere) {
    p.push_back("objective.kind: rayleigh needs a sphere");
  }
  if (o.weights && o.weight_range) p.push_back("objective: give weights or weight_range, not both");
  dim_ok(o.center, "objective.center");
  dim_ok(o.weights, "objective.weights");
  dim_ok(o.target, "objective.target");
  if (o.weights) {
    for (double w : *o.weights)
      if (!(w > 0.0)) p.push_back("objective.weights: entries must be positive");
  }
  if (o.weight_range && (o.weight_range->size() != 2 || !((*o.weight_range)[0] > 0.0) ||
                         !((*o.weight_range)[1] >= (*o.weight_range)[0]))) {
    p.push_back("objective.weight_range: expected [lo, hi] with 0 < lo <= hi");
  }
  if (!(o.target_distance >= 0.0)) p.push_back("objective.target_distance: must be >= 0");
  if (o.samples < 1) p.push_back("objective.samples: must be >= 1");
  if (!(o.spread >= 0.0)) p.push_back("objective.spread: must be >= 0");

  const AlgorithmConfig& a = cfg.algorithm;
  if (!valid_kind(a.kind, {"rgd", "proximal", "cubic", "accelerated"})) {
    p.push_back("algorithm.kind: expected rgd, proximal, cubic or accelerated, got '" + a.kind + "'");
  }
  for (const auto& [name, v] : {std::pair{"eta", a.eta}, std::pair{"M", a.M}, std::pair{"theta", a.theta},
                                std::pair{"oracle_eta", a.oracle_eta}}) {
    if (v && !(*v > 0.0)) p.push_back(std::string("algorithm.") + name + ": must be positive");
  }
  if (!valid_kind(a.mode, {"gconvex", "strongly"})) p.push_back("algorithm.mode: expected gconvex or strongly");
  if (!valid_kind(a.delta_mode, {"analytic", "oracle"})) p.push_back("algorithm.delta_mode: expected analytic or oracle");
  if (!valid_kind(a.oracle, {"rgd", "proximal"})) p.push_back("algorithm.oracle: expected rgd or proximal");
  if (a.xi0 && !(*a.xi0 > 0.0 && *a.xi0 < 1.0)) p.push_back("algorithm.xi0: must lie in (0, 1)");
  if (!(a.prox_tol > 0.0)) p.push_back("algorithm.prox_tol: must be positive");
  if (a.kind == "accelerated") {
    if (a.mode == "strongly" && o.kind == "rayleigh") {
      p.push_back("algorithm.mode: strongly needs a strongly g-convex objective; rayleigh is nonconvex");
    }
    if (a.mode == "gconvex" && o.kind == "rayleigh") {
      p.push_back("algorithm.mode: gconvex needs a g-convex objective; rayleigh is nonconvex");
    }
    if (a.delta_mode == "analytic" && cfg.manifold.kind == ManifoldKind::sphere) {
      p.push_back("algorithm.delta_mode: analytic distortion needs a Hadamard manifold; use oracle on the sphere");
    }
  } else if (a.kind == "rgd" || a.kind == "proximal" || a.kind == "cubic") {
    if (a.xi0) p.push_back("algorithm.xi0: only used by accelerated runs");
    if (a.oracle_eta) p.push_back("algorithm.oracle_eta: only used by accelerated runs");
  }

  const RunConfig& r = cfg.run;
  if (r.k_max < 0) p.push_back("run.k_max: must be >= 0");
  if (!(r.grad_tol >= 0.0)) p.push_back("run.grad_tol: must be >= 0");
  dim_ok(r.x0, "run.x0");
  if (static_cast<int>(r.domain_center.size()) != n) {
    p.push_back("run.domain.center: expected " + std::to_string(n) + " entries");
  }
  if (!(r.domain_radius > 0.0)) p.push_back("run.domain.radius: must be positive");
  if (cfg.manifold.kind == ManifoldKind::sphere && cfg.manifold.param > 0.0 &&
      !(2.0 * r.domain_radius < std::numbers::pi * cfg.manifold.param)) {
    p.push_back("run.domain.radius: sphere domains need diameter below pi R");
  }
  if (r.x0 && r.x0_radius) p.push_back("run: give x0 or x0_radius, not both");
  if (r.x0_radius && !(*r.x0_radius >= 0.0 && *r.x0_radius <= r.domain_radius)) {
    p.push_back("run.x0_radius: must lie in [0, domain radius]");
  }
  if (cfg.output.trace.empty()) p.push_back("output.trace: must not be empty");
  if (cfg.output.report.empty()) p.push_back("output.report: must not be empty");
  return p;
}

DerivedSeeds derive_seeds(std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  DerivedSeeds s;
  s.objective = gen();
  s.start = gen();
  return s;
}

std::string config_hash(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rdescent::harness

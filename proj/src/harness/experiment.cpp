#include "rdescent/harness/experiment.hpp"

#include "rdescent/acceleration/accelerated.hpp"
#include "rdescent/acceleration/diagnostics.hpp"
#include "rdescent/descent/runner.hpp"
#include "rdescent/harness/analysis.hpp"
#include "rdescent/objectives/benchmarks.hpp"
#include "rdescent/objectives/checks.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <memory>

namespace rdescent::harness {

namespace {

namespace fs = std::filesystem;

constexpr double kEnergyTolerance = 1e-9;
constexpr double kXiBand = 1e-6;
constexpr int kRhoSamples = 2000;

Json to_json(const Vec& v) { return Json(std::vector<double>(v.data(), v.data() + v.size())); }

Json to_json(const std::optional<double>& v) { return v ? Json(*v) : Json(); }

Json to_json(const GuaranteeResult& g) {
  return Json{{"name", g.name},       {"status", g.status},       {"worst_slack", g.worst_slack},
              {"worst_k", g.worst_k}, {"checked", g.checked},     {"tolerance", g.tolerance},
              {"note", g.note}};
}

Json to_json(const DescentCertificate& c) {
  return Json{{"p", c.p}, {"c", c.c}, {"direction", to_string(c.direction)}};
}

std::string describe_number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Streams observations of "observed − bound" and keeps the worst margin
// over the tolerance.
class Check {
 public:
  Check(std::string name, std::string note = {}) {
    r_.name = std::move(name);
    r_.note = std::move(note);
  }

  void observe(int k, double slack, double tol) {
    ++r_.checked;
    const double margin = slack - tol;
    if (r_.worst_k < 0 || margin > worst_margin_ || std::isnan(slack)) {
      worst_margin_ = std::isnan(slack) ? std::numeric_limits<double>::infinity() : margin;
      r_.worst_slack = slack;
      r_.worst_k = k;
      r_.tolerance = tol;
    }
  }

  GuaranteeResult finish(std::optional<std::string> void_reason = std::nullopt) {
    if (void_reason) {
      r_.status = "void";
      r_.note = r_.note.empty() ? *void_reason : r_.note + "; " + *void_reason;
    } else if (r_.checked == 0) {
      r_.status = "void";
      r_.note = r_.note.empty() ? "nothing to check" : r_.note + "; nothing to check";
    } else {
      r_.status = worst_margin_ <= 0.0 ? "pass" : "fail";
    }
    return r_;
  }

 private:
  GuaranteeResult r_;
  double worst_margin_ = -std::numeric_limits<double>::infinity();
};

Json objective_section_json(const ObjectiveConfig& o) {
  Json j{{"kind", o.kind},
         {"target_distance", o.target_distance},
         {"samples", o.samples},
         {"spread", o.spread}};
  if (o.center) j["center"] = *o.center;
  if (o.weights) j["weights"] = *o.weights;
  if (o.weight_range) j["weight_range"] = *o.weight_range;
  if (o.target) j["target"] = *o.target;
  return j;
}

Vec to_vec(const std::vector<double>& v) { return Eigen::Map<const Vec>(v.data(), static_cast<Eigen::Index>(v.size())); }

bool needs_L(const AlgorithmConfig& a) { return a.kind == "rgd" || a.kind == "accelerated"; }

std::optional<std::string> exit_note(std::optional<int> k) {
  if (!k) return std::nullopt;
  return "iterate left the domain at k=" + std::to_string(*k);
}

// Rows 0, 1, 2, 5, 10, 20, 50, ... and the last.
std::vector<std::size_t> sample_rows(std::size_t n) {
  std::vector<std::size_t> rows;
  if (n == 0) return rows;
  rows.push_back(0);
  for (std::size_t step = 1; step < n; step *= 10) {
    for (std::size_t m : {1, 2, 5}) {
      if (m * step < n) rows.push_back(m * step);
    }
  }
  if (rows.back() != n - 1) rows.push_back(n - 1);
  return rows;
}

Json rate_fit_json(const std::vector<double>& gaps) {
  const int K = static_cast<int>(gaps.size()) - 1;
  const int k_lo = K >= 19 ? 10 : 1;
  const std::optional<int> end = fit_window_end(gaps, k_lo, K);
  if (!end || *end - k_lo + 1 < 10) {
    return Json{{"quantity", "gap"},
                {"status", "skipped"},
                {"reason", "fewer than 10 iterations with gap above 1e-14 from k=" + std::to_string(k_lo)}};
  }
  const RateFit f = fit_rate(gaps, k_lo, *end);
  return Json{{"quantity", "gap"}, {"status", "ok"}, {"k_lo", f.k_lo}, {"k_hi", f.k_hi},
              {"slope", f.slope},  {"intercept", f.intercept}, {"r2", f.r2}};
}

struct RunState {
  RunState(const ExperimentConfig& c, const Problem& p) : cfg(c), P(p) {}

  const ExperimentConfig& cfg;
  const Problem& P;
  double f_star = 0.0;
  double f0 = 0.0;
  Json header;
  std::unique_ptr<TraceWriter> writer;
  std::vector<GuaranteeResult> guarantees;
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  std::vector<double> gaps;
  std::vector<double> grad_norms;
  std::optional<int> domain_exit;
  bool run_failed = false;
  Json algorithm;
  Json extra;  // mode-specific report sections
};

Json base_record(int k, double f, double f_star, double grad_norm, const Point& x) {
  return Json{{"k", k}, {"f", f}, {"gap", f - f_star}, {"grad_norm", grad_norm}, {"x", to_json(x.coords)}};
}

// ---------------------------------------------------------------------------
// Plain p-descent methods.

void run_plain(RunState& s) {
  const ExperimentConfig& cfg = s.cfg;
  const Objective& obj = *s.P.objective;
  const Manifold& m = obj.manifold();
  const ObjectiveMetadata& meta = obj.metadata();
  const AlgorithmConfig& a = cfg.algorithm;

  std::unique_ptr<DescentMethod> method;
  DescentCertificate claimed;
  bool precondition_broken = false;
  if (a.kind == "rgd") {
    const double L = *meta.L;
    const double eta = a.eta.value_or(1.0 / L);
    if (eta * L >= 2.0) {
      precondition_broken = true;
      s.errors.push_back("algorithm.eta = " + describe_number(eta) + " is not below 2/L = " + describe_number(2.0 / L) +
                         "; ran without the step-size check and certified against c = 1/(2L)");
      method = std::make_unique<GradientDescent>(GradientDescent::unchecked(eta, L));
      claimed = DescentCertificate{2.0, 1.0 / (2.0 * L), Direction::backward};
    } else {
      method = std::make_unique<GradientDescent>(eta, L);
      claimed = method->certificate();
    }
    s.algorithm["eta"] = eta;
  } else if (a.kind == "proximal") {
    const double eta = a.eta.value_or(1.0);
    method = std::make_unique<ProximalPoint>(eta, ProxOptions{a.prox_tol, 20000});
    claimed = method->certificate();
    s.algorithm["eta"] = eta;
  } else {
    double rho = 0.0;
    if (meta.rho) {
      rho = *meta.rho;
    } else {
      rho = estimate_rho(obj, s.P.domain, kRhoSamples, derive_seeds(cfg.seed).objective);
      s.warnings.push_back("objective declares no Hessian-Lipschitz constant; estimated rho = " + describe_number(rho));
    }
    const double rho_eff = std::max(rho, 1e-3);
    if (rho_eff > rho) s.warnings.push_back("rho raised to 1e-3 so the cubic model stays regularized");
    const double M = a.M.value_or(rho_eff);
    const double theta = a.theta.value_or(rho_eff / 2.0);
    method = std::make_unique<CubicNewton>(M, theta, rho_eff);
    claimed = method->certificate();
    s.algorithm["M"] = M;
    s.algorithm["theta"] = theta;
    s.algorithm["rho"] = rho_eff;
  }
  s.algorithm["certificate"] = to_json(claimed);
  s.header["certificate"] = to_json(claimed);

  const double diam = s.P.domain.diameter();
  const KnownSolution& sol = *obj.solution();
  const bool convex = meta.convexity != ConvexityClass::nonconvex;
  const bool star_inside = in_domain(m, s.P.domain, sol.x_star);
  std::optional<GradDomination> gd;
  if (meta.grad_dom && meta.grad_dom->p == claimed.p) gd = meta.grad_dom;
  const bool gd_usable = gd && !(claimed.direction == Direction::backward && claimed.c > gd->tau);

  auto gap_envelope = [&](int k, double gap0) -> std::optional<double> {
    if (k < 1) return std::nullopt;
    if (gd_usable) return rate_bound_graddom(claimed.c, gd->tau, k, claimed.direction, gap0);
    if (convex && star_inside) return rate_bound_gconvex(claimed.p, claimed.c, diam, k, claimed.direction);
    return std::nullopt;
  };

  s.writer = std::make_unique<TraceWriter>(fs::path(s.cfg.output.trace).string(), s.header);
  IterateTrace seen;
  RunOptions opts;
  opts.grad_tol = cfg.run.grad_tol;
  opts.on_iterate = [&](const IterateTrace& t) {
    const int k = static_cast<int>(t.size()) - 1;
    seen.iterates.push_back(t.iterates.back());
    seen.values.push_back(t.values.back());
    seen.grad_norms.push_back(t.grad_norms.back());
    seen.domain_exit = t.domain_exit;
    if (t.prox_residuals.size() > seen.prox_residuals.size()) seen.prox_residuals.push_back(t.prox_residuals.back());
    if (t.cubic_checks.size() > seen.cubic_checks.size()) seen.cubic_checks.push_back(t.cubic_checks.back());
    const double gap = t.values.back() - s.f_star;
    Json rec = base_record(k, t.values.back(), s.f_star, t.grad_norms.back(), t.iterates.back());
    if (auto env = gap_envelope(k, t.values.front() - s.f_star)) rec["envelope"] = *env;
    if (k > 0) {
      const double g = claimed.direction == Direction::forward ? t.grad_norms[k] : t.grad_norms[k - 1];
      rec["slack"] = t.values[k] - t.values[k - 1] + claimed.c * std::pow(g, claimed.exponent());
      rec["grad_envelope"] = rate_bound_nonconvex(claimed.c, claimed.p, t.values.front() - s.f_star, k);
    }
    s.gaps.push_back(gap);
    s.grad_norms.push_back(t.grad_norms.back());
    s.writer->write(rec);
  };

  try {
    run_descent(*method, obj, s.P.x0, cfg.run.k_max, s.P.domain, opts);
  } catch (const std::exception& e) {
    s.run_failed = true;
    s.errors.push_back("run: " + std::string(e.what()) + " (after " + std::to_string(seen.size()) + " iterates)");
  }
  s.domain_exit = seen.domain_exit;
  if (seen.size() == 0) return;

  const double gap0 = seen.values.front() - s.f_star;
  const double gap_tol = default_tolerance(s.f0);
  const int K = static_cast<int>(seen.size()) - 1;

  {
    Check c("certificate", "per-step descent inequality");
    const double tol = default_tolerance(s.f0);
    for (int k = 0; k < K; ++k) {
      const double g = claimed.direction == Direction::forward ? seen.grad_norms[k + 1] : seen.grad_norms[k];
      c.observe(k, seen.values[k + 1] - seen.values[k] + claimed.c * std::pow(g, claimed.exponent()), tol);
    }
    GuaranteeResult r = c.finish();
    if (precondition_broken) r.note += "; step-size precondition violated";
    s.guarantees.push_back(r);
  }
  if (convex) {
    Check c("gconvex_envelope", "gap_k <= C diam^p / k^(p-1)");
    for (int k = 1; k <= K; ++k) {
      c.observe(k, s.gaps[k] - rate_bound_gconvex(claimed.p, claimed.c, diam, k, claimed.direction), gap_tol);
    }
    std::optional<std::string> why = exit_note(seen.domain_exit);
    if (!star_inside) why = "minimizer lies outside the domain";
    s.guarantees.push_back(c.finish(why));
  }
  {
    Check c("stationarity_envelope", "min_{t<=k} |grad f(x_t)| <= ((f0 - f*)/(c k))^((p-1)/p)");
    double best = seen.grad_norms.front();
    for (int k = 1; k <= K; ++k) {
      best = std::min(best, seen.grad_norms[k]);
      const double bound = rate_bound_nonconvex(claimed.c, claimed.p, gap0, k);
      c.observe(k, best - bound, gap_tol);
    }
    s.guarantees.push_back(c.finish());
  }
  if (gd) {
    Check c("gradient_domination_envelope", "gap_k <= rate(c/tau)^k gap_0, tau = " + describe_number(gd->tau));
    std::optional<std::string> why;
    if (!gd_usable) {
      why = "backward certificate with c above tau";
    } else {
      for (int k = 1; k <= K; ++k) {
        c.observe(k, s.gaps[k] - rate_bound_graddom(claimed.c, gd->tau, k, claimed.direction, gap0), gap_tol);
      }
    }
    GuaranteeResult r = c.finish(why);
    if (seen.domain_exit) r.note += "; " + *exit_note(seen.domain_exit) + " (not voided)";
    s.guarantees.push_back(r);
  }
  if (a.kind == "proximal") {
    Check c("prox_inner_residual", "|log(x', x) - eta grad f(x')| within prox_tol");
    for (std::size_t k = 0; k < seen.prox_residuals.size(); ++k) {
      c.observe(static_cast<int>(k), seen.prox_residuals[k], a.prox_tol);
    }
    s.guarantees.push_back(c.finish());
  }
  if (a.kind == "cubic") {
    Check c("cubic_subproblem", "model decrease and |grad m(s)| <= theta |s|^2");
    for (std::size_t k = 0; k < seen.cubic_checks.size(); ++k) {
      const CubicCheck& cc = seen.cubic_checks[k];
      const double slack = cc.stationary ? 0.0 : std::max(cc.model_change, cc.model_grad_norm - cc.theta_bound);
      c.observe(static_cast<int>(k), slack, 0.0);
    }
    s.guarantees.push_back(c.finish());
  }
}

// ---------------------------------------------------------------------------
// Accelerated scheme.

void run_accel(RunState& s) {
  const ExperimentConfig& cfg = s.cfg;
  const AlgorithmConfig& a = cfg.algorithm;
  const Objective& obj = *s.P.objective;
  const Manifold& m = obj.manifold();
  const ObjectiveMetadata& meta = obj.metadata();
  const KnownSolution& sol = *obj.solution();
  const double L = *meta.L;

  DescentOracle oracle;
  double oracle_eta = 0.0;
  if (a.oracle == "rgd") {
    oracle_eta = a.oracle_eta.value_or(1.0 / L);
    if (!(oracle_eta * L < 2.0)) {
      throw ConfigError({"algorithm.oracle_eta: " + describe_number(oracle_eta) + " is not below 2/L = " +
                         describe_number(2.0 / L)});
    }
    oracle = gradient_oracle(oracle_eta, L);
  } else {
    oracle_eta = a.oracle_eta.value_or(1.0);
    oracle = proximal_oracle(oracle_eta, L, ProxOptions{a.prox_tol, 20000});
  }
  const double c = oracle.c;
  const AccelMode mode = accel_mode_from_string(a.mode);
  const double mu = meta.mu.value_or(0.0);
  if (mode == AccelMode::strongly && !(2.0 * mu * c < 1.0)) {
    throw ConfigError({"algorithm: strongly convex schedule needs 2 mu c < 1, got " + describe_number(2.0 * mu * c)});
  }
  if (mode == AccelMode::strongly && a.xi0 && !(*a.xi0 > 2.0 * mu * c && *a.xi0 <= std::sqrt(2.0 * mu * c))) {
    throw ConfigError({"algorithm.xi0: must lie in (2 mu c, sqrt(2 mu c)] = (" + describe_number(2.0 * mu * c) + ", " +
                       describe_number(std::sqrt(2.0 * mu * c)) + "]"});
  }
  s.algorithm["oracle"] = Json{{"kind", oracle.name}, {"eta", oracle_eta}, {"c", c}};
  s.algorithm["mode"] = a.mode;
  s.algorithm["delta_mode"] = a.delta_mode;
  if (mode == AccelMode::strongly) s.algorithm["mu"] = mu;
  s.header["certificate"] = Json{{"p", 2.0}, {"c", c}, {"direction", "oracle"}};
  s.header["mode"] = a.mode;

  AccelOptions opts;
  opts.mode = mode;
  opts.delta_mode = distortion_mode_from_string(a.delta_mode);
  opts.xi0 = a.xi0;

  const double diam = s.P.domain.diameter();
  std::vector<double> energies, deltas, xis, slacks, d_y_star, f_values, envelopes;
  double E0 = 0.0;
  double delta_max = 1.0;
  double product = 1.0;

  s.writer = std::make_unique<TraceWriter>(fs::path(cfg.output.trace).string(), s.header);
  opts.on_iterate = [&](const AccelTrace& t) {
    const int k = static_cast<int>(t.size()) - 1;
    const Point& y = t.y_trace.iterates.back();
    const double f = t.y_trace.values.back();
    const ScheduleState& st = t.schedule.back();
    const EnergyRecord& er = t.energy.back();
    if (k == 0) E0 = er.E;
    delta_max = std::max(delta_max, st.delta);
    if (k > 0 && st.xi) product *= 1.0 - *st.xi;
    Json rec = base_record(k, f, s.f_star, t.y_trace.grad_norms.back(), y);
    rec["A"] = st.A;
    rec["B"] = st.B;
    rec["delta"] = st.delta;
    if (st.xi) rec["xi"] = *st.xi;
    rec["E"] = er.E;
    rec["d_xy"] = er.d_xy;
    rec["d_xz"] = er.d_xz;
    std::optional<double> env;
    if (mode == AccelMode::gconvex && k >= 1) env = accelerated_gconvex_bound(E0, c, diam, delta_max, k);
    if (mode == AccelMode::strongly) env = product * E0;
    if (env) rec["envelope"] = *env;
    if (k > 0) {
      slacks.push_back(t.oracle_slack.back());
      rec["oracle_slack"] = t.oracle_slack.back();
      if (!t.delta_refinements.empty()) rec["delta_passes"] = t.delta_refinements.back();
    }
    f_values.push_back(f);
    energies.push_back(er.E);
    deltas.push_back(st.delta);
    if (st.xi) xis.push_back(*st.xi);
    envelopes.push_back(env.value_or(std::numeric_limits<double>::quiet_NaN()));
    d_y_star.push_back(m.distance(y, sol.x_star));
    s.gaps.push_back(f - s.f_star);
    s.grad_norms.push_back(t.y_trace.grad_norms.back());
    s.domain_exit = t.domain_exit;
    s.writer->write(rec);
  };

  try {
    run_accelerated(obj, s.P.x0, cfg.run.k_max, oracle, s.P.domain, opts);
  } catch (const std::exception& e) {
    s.run_failed = true;
    s.errors.push_back("run: " + std::string(e.what()) + " (after " + std::to_string(s.gaps.size()) + " iterates)");
  }
  if (s.gaps.empty()) return;
  const int K = static_cast<int>(s.gaps.size()) - 1;
  const double gap_tol = default_tolerance(s.f0);
  s.extra["delta_max"] = delta_max;

  {
    Check ch("oracle_descent", "f(y+) - f(x+) <= -c |grad f(x+)|^2");
    for (std::size_t k = 0; k < slacks.size(); ++k) {
      ch.observe(static_cast<int>(k), slacks[k], kEnergyTolerance * (1.0 + std::abs(f_values[k + 1])));
    }
    s.guarantees.push_back(ch.finish());
  }
  if (mode == AccelMode::gconvex) {
    Check gap("accelerated_gap_bound", "gap_k <= E0/k^2 + (4/c) diam^2 (1 - 1/delta_max)/k");
    for (int k = 1; k <= K; ++k) gap.observe(k, s.gaps[k] - envelopes[k], gap_tol);
    s.guarantees.push_back(gap.finish(exit_note(s.domain_exit)));
    Check step("energy_step", "E_{k+1} - E_k <= (4/c)(1 - 1/delta_{k+1}) diam^2");
    for (int k = 0; k < K; ++k) {
      const double allowance = 4.0 / c * (1.0 - 1.0 / deltas[k + 1]) * diam * diam;
      step.observe(k, energies[k + 1] - energies[k] - allowance, kEnergyTolerance * (1.0 + std::abs(energies[k + 1])));
    }
    s.guarantees.push_back(step.finish(exit_note(s.domain_exit)));
  } else {
    Check prod("product_bound", "gap_k <= prod_{j<=k}(1 - xi_j) E0");
    for (int k = 1; k <= K; ++k) prod.observe(k, s.gaps[k] - envelopes[k], gap_tol);
    s.guarantees.push_back(prod.finish(exit_note(s.domain_exit)));
    Check dist("distance_envelope", "d(y_k, x*) <= sqrt(prod_{j<=k}(1 - xi_j) E0 2/mu)");
    for (int k = 0; k <= K; ++k) {
      const double bound = std::sqrt(envelopes[k] * 2.0 / mu);
      dist.observe(k, d_y_star[k] - bound, kEnergyTolerance * (1.0 + bound));
    }
    s.guarantees.push_back(dist.finish(exit_note(s.domain_exit)));

    const XiConvergence xc = xi_convergence_report(xis, mu, c, kXiBand);
    const double target = std::sqrt(2.0 * mu * c);
    Json table = Json::array();
    for (std::size_t k : sample_rows(xis.size())) {
      table.push_back(Json{{"k", k}, {"xi", xis[k]}, {"distance", std::abs(xis[k] - target)}});
    }
    s.extra["xi_convergence"] = Json{{"target", target},
                                     {"band", kXiBand},
                                     {"first_k_in_band", xc.first_k ? Json(*xc.first_k) : Json()},
                                     {"log_distance_slope", xc.slope},
                                     {"fitted_points", xc.fitted_points},
                                     {"table", table}};
  }
}

}  // namespace

Point point_from_coordinates(const Manifold& m, const Point& base, const std::vector<double>& coords) {
  if (static_cast<int>(coords.size()) != m.dim()) {
    throw std::invalid_argument("point_from_coordinates: expected " + std::to_string(m.dim()) + " coordinates");
  }
  return m.exp(base, from_basis(m.orthonormal_basis(base), base, to_vec(coords)));
}

Problem build_problem(const ExperimentConfig& cfg) {
  if (auto problems = validate_config(cfg); !problems.empty()) throw ConfigError(std::move(problems));
  Problem p;
  const ManifoldConfig& mc = cfg.manifold;
  p.manifold = make_manifold(ManifoldTag{mc.kind, mc.n,
                                         mc.kind == ManifoldKind::euclidean ? 0.0 : mc.param});
  const Manifold& m = *p.manifold;
  const Point o = origin(m);
  const DerivedSeeds seeds = derive_seeds(cfg.seed);
  const ObjectiveConfig& oc = cfg.objective;
  const int n = mc.n;

  try {
    p.domain = make_domain(m, point_from_coordinates(m, o, cfg.run.domain_center), cfg.run.domain_radius);
    if (oc.kind == "quadratic") {
      const Vec b = oc.center ? to_vec(*oc.center) : Vec::Ones(n);
      std::optional<Vec> w;
      if (oc.weights) {
        w = to_vec(*oc.weights);
      } else if (oc.weight_range) {
        const double lo = (*oc.weight_range)[0], hi = (*oc.weight_range)[1];
        Vec v(n);
        for (int i = 0; i < n; ++i) {
          const double t = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
          v[i] = std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)));
        }
        w = v;
      }
      p.objective = Quadratic::create(n, b, w);
      p.f_star_source = "exact";
    } else if (oc.kind == "squared_distance") {
      Point target = o;
      if (oc.target) {
        target = point_from_coordinates(m, o, *oc.target);
      } else {
        Rng rng(seeds.objective);
        target = m.exp(p.domain.center, random_tangent(m, p.domain.center, oc.target_distance, rng));
      }
      p.objective = SquaredDistance::create(p.manifold, target, p.domain);
      p.f_star_source = "exact";
    } else if (oc.kind == "frechet_mean") {
      p.objective = FrechetMean::random(p.manifold, p.domain.center, oc.spread, oc.samples, p.domain.radius,
                                        seeds.objective);
      p.f_star_source = "reference minimization to gradient norm below 1e-12";
    } else {
      p.objective = Rayleigh::random(p.manifold, oc.spread, seeds.objective);
      p.f_star_source = "exact (top eigenvector)";
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError({"objective: " + std::string(e.what())});
  }

  std::vector<std::string> problems;
  const ObjectiveMetadata& meta = p.objective->metadata();
  const AlgorithmConfig& a = cfg.algorithm;
  if (needs_L(a) && !(meta.L && *meta.L > 0.0)) {
    problems.push_back("algorithm.kind: " + a.kind + " needs a positive smoothness constant L, which " +
                       p.objective->name() + " does not declare here");
  }
  if (a.kind == "accelerated" && a.oracle == "proximal" && !(meta.L && *meta.L > 0.0)) {
    problems.push_back("algorithm.oracle: proximal oracle constant needs L");
  }
  if (a.kind == "accelerated" && a.mode == "strongly" && meta.convexity != ConvexityClass::strongly_g_convex) {
    problems.push_back("algorithm.mode: strongly needs a mu-strongly g-convex objective; " + p.objective->name() +
                       " is " + to_string(meta.convexity) + " on this domain");
  }
  if (a.kind == "accelerated" && a.mode == "gconvex" && meta.convexity == ConvexityClass::nonconvex) {
    problems.push_back("algorithm.mode: gconvex needs a g-convex objective; " + p.objective->name() +
                       " is nonconvex on this domain");
  }
  if (!p.objective->solution()) problems.push_back("objective: no reference minimizer available");

  try {
    if (cfg.run.x0) {
      p.x0 = point_from_coordinates(m, p.domain.center, *cfg.run.x0);
    } else {
      Rng rng(seeds.start);
      p.x0 = random_point_in_ball(m, p.domain.center, cfg.run.x0_radius.value_or(cfg.run.domain_radius), rng);
    }
    if (!in_domain(m, p.domain, p.x0)) problems.push_back("run.x0: starting point lies outside the domain");
  } catch (const std::exception& e) {
    problems.push_back("run.x0: " + std::string(e.what()));
  }
  if (!problems.empty()) throw ConfigError(std::move(problems));

  const Json id{{"manifold", Json{{"kind", to_string(mc.kind)}, {"n", mc.n}, {"param", p.manifold->tag().param}}},
                {"objective", objective_section_json(oc)},
                {"seed", cfg.seed},
                {"domain", Json{{"center", cfg.run.domain_center}, {"radius", cfg.run.domain_radius}}}};
  p.objective_id = config_hash(id.dump());
  return p;
}

std::string output_root_from_env() {
  const char* root = std::getenv("RDESCENT_OUTPUT_ROOT");
  return root && *root ? root : ".";
}

ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::string& output_root) {
  const Problem P = build_problem(cfg);
  const Objective& obj = *P.objective;
  const ObjectiveMetadata& meta = obj.metadata();
  const KnownSolution& sol = *obj.solution();

  ExperimentOutcome out;
  out.trace_path = (fs::path(output_root) / cfg.output.trace).string();
  out.report_path = (fs::path(output_root) / cfg.output.report).string();
  for (const std::string& path : {out.trace_path, out.report_path}) {
    const fs::path parent = fs::path(path).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
  }

  ExperimentConfig local = cfg;
  local.output.trace = out.trace_path;
  RunState s(local, P);
  s.f_star = sol.f_star;
  s.f0 = obj.value(P.x0);
  s.warnings = cfg.warnings;
  s.algorithm = Json{{"kind", cfg.algorithm.kind}};
  s.header = Json{{"schema", 1},
                  {"name", cfg.name},
                  {"config_hash", config_hash(cfg.source_text)},
                  {"objective_id", P.objective_id},
                  {"algorithm", cfg.algorithm.kind},
                  {"objective", obj.name()},
                  {"manifold", describe(obj.manifold().tag())},
                  {"f_star", sol.f_star},
                  {"x0", to_json(P.x0.coords)}};

  if (cfg.algorithm.kind == "accelerated") {
    run_accel(s);
  } else {
    run_plain(s);
  }
  s.writer.reset();

  const bool any_fail = std::any_of(s.guarantees.begin(), s.guarantees.end(),
                                    [](const GuaranteeResult& g) { return g.status == "fail"; });
  out.exit_code = (any_fail || !s.errors.empty()) ? 1 : 0;
  const std::string status = s.run_failed ? "error" : (out.exit_code ? "violation" : "ok");

  Json guarantees = Json::array();
  for (const GuaranteeResult& g : s.guarantees) guarantees.push_back(to_json(g));
  Json fits = Json::array();
  if (!s.gaps.empty()) fits.push_back(rate_fit_json(s.gaps));

  Json& r = out.report;
  r["schema"] = 1;
  r["name"] = cfg.name;
  r["config_hash"] = config_hash(cfg.source_text);
  r["objective_id"] = P.objective_id;
  r["seed"] = cfg.seed;
  r["status"] = status;
  r["exit_code"] = out.exit_code;
  r["manifold"] = describe(obj.manifold().tag());
  r["objective"] = Json{{"kind", obj.name()},
                        {"convexity", to_string(meta.convexity)},
                        {"L", to_json(meta.L)},
                        {"mu", to_json(meta.mu)},
                        {"rho", to_json(meta.rho)},
                        {"note", meta.note},
                        {"f_star_source", P.f_star_source}};
  r["f_star"] = sol.f_star;
  r["x_star"] = to_json(sol.x_star.coords);
  r["x0"] = to_json(P.x0.coords);
  r["domain"] = Json{{"center", to_json(P.domain.center.coords)}, {"radius", P.domain.radius}};
  r["algorithm"] = s.algorithm;
  r["k_run"] = s.gaps.empty() ? 0 : static_cast<int>(s.gaps.size()) - 1;
  r["final_gap"] = s.gaps.empty() ? Json() : Json(s.gaps.back());
  r["final_grad_norm"] = s.grad_norms.empty() ? Json() : Json(s.grad_norms.back());
  r["guarantees"] = guarantees;
  r["rate_fits"] = fits;
  for (auto it = s.extra.begin(); it != s.extra.end(); ++it) r[it.key()] = it.value();
  r["domain_exit"] = s.domain_exit ? Json(*s.domain_exit) : Json();
  r["warnings"] = s.warnings;
  r["errors"] = s.errors;
  r["trace"] = out.trace_path;

  if (cfg.output.plot) {
    const std::string plot = (fs::path(output_root) / *cfg.output.plot).string();
    const fs::path parent = fs::path(plot).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    write_plot_data(plot, read_trace(out.trace_path));
    r["plot"] = plot;
  }

  if (cfg.output.csv) {
    const std::string csv = (fs::path(output_root) / *cfg.output.csv).string();
    const fs::path parent = fs::path(csv).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    write_trace_csv(csv, read_trace(out.trace_path));
    r["csv"] = csv;
  }

  std::ofstream rep(out.report_path, std::ios::trunc);
  if (!rep) throw std::runtime_error("report: cannot open " + out.report_path);
  rep << r.dump(2) << '\n';
  return out;
}

}  // namespace rdescent::harness

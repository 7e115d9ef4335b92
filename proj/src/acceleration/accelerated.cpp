#include "rdescent/acceleration/accelerated.hpp"

#include <cmath>

namespace rdescent {

namespace {

constexpr int kMaxDeltaPasses = 500;

}  // namespace

DescentOracle gradient_oracle(double eta, double L) {
  if (!(L > 0.0) || !(eta > 0.0 && eta * L < 2.0)) {
    throw std::invalid_argument("gradient oracle: eta must lie in (0, 2/L)");
  }
  return DescentOracle{"rgd", eta * (1.0 - L * eta / 2.0),
                       [eta](const Objective& obj, const Point& x) { return rgd_step_unchecked(obj, x, eta); }};
}

DescentOracle proximal_oracle(double eta, double L, const ProxOptions& opts) {
  if (!(L > 0.0) || !(eta > 0.0)) throw std::invalid_argument("proximal oracle: eta and L must be positive");
  const double q = 1.0 + eta * L;
  return DescentOracle{"proximal", eta / (q * q),
                       [eta, opts](const Objective& obj, const Point& x) { return proximal_step(obj, x, eta, opts).x; }};
}

Point accel_interpolate(const Manifold& m, const Point& y, const Point& z, double tau) {
  if (tau == 0.0) return y;
  if (tau == 1.0) return z;
  return m.exp(y, tau * m.log(y, z));
}

AccelStepResult accel_step(const Objective& obj, const AccelState& s, const AccelParams& p,
                           const DescentOracle& oracle) {
  validate(p);
  const Manifold& m = obj.manifold();
  const Point x1 = accel_interpolate(m, s.y, s.z, p.tau);
  const Tangent g = obj.gradient(x1);
  const double gn = m.norm(x1, g);
  const double fx = obj.value(x1);
  Point y1 = oracle.step(obj, x1);
  const double fy = obj.value(y1);
  const double slack = fy - fx + oracle.c * gn * gn;
  if (!(slack <= 1e-9 * (1.0 + std::abs(fx)))) {
    throw OracleViolation("accel_step: oracle '" + oracle.name + "' missed its descent bound at k=" +
                          std::to_string(s.k + 1) + " (slack " + std::to_string(slack) + ")");
  }
  const Tangent lz = m.log(x1, s.z);
  Point z1 = m.exp(x1, (1.0 / (p.alpha + p.beta)) * (p.beta * lz - g));
  return AccelStepResult{AccelState{x1, std::move(y1), std::move(z1), s.k + 1}, slack};
}

EnergyRecord energy(double A, double B, const Objective& obj, const AccelState& s, const Point& x_star,
                    double f_star) {
  const Manifold& m = obj.manifold();
  EnergyRecord r;
  r.f_gap = obj.value(s.y) - f_star;
  const double pd = projected_distance(m, s.x, s.z, x_star);
  r.dist_term = pd * pd;
  r.E = A * r.f_gap + B * r.dist_term;
  r.d_xy = m.distance(s.x, s.y);
  r.d_xz = m.distance(s.x, s.z);
  return r;
}

std::string to_string(AccelMode m) { return m == AccelMode::gconvex ? "gconvex" : "strongly"; }

AccelMode accel_mode_from_string(const std::string& s) {
  if (s == "gconvex") return AccelMode::gconvex;
  if (s == "strongly") return AccelMode::strongly;
  throw std::invalid_argument("unknown acceleration mode '" + s + "'");
}

AccelTrace run_accelerated(const Objective& obj, const Point& y0, int k_max, const DescentOracle& oracle,
                           const DomainSpec& dom, const AccelOptions& opts) {
  if (k_max < 0) throw std::invalid_argument("run_accelerated: k_max must be >= 0");
  if (!(oracle.c > 0.0) || !oracle.step) throw std::invalid_argument("run_accelerated: oracle needs c > 0 and a step");
  const Manifold& m = obj.manifold();
  const auto& sol = obj.solution();
  if (opts.delta_mode == DistortionMode::oracle && !sol) {
    throw std::invalid_argument("run_accelerated: oracle distortion needs a known minimizer");
  }
  const double c = oracle.c;

  AccelTrace trace;
  trace.mode = opts.mode;
  trace.delta_mode = opts.delta_mode;
  trace.c = c;

  ScheduleState st;
  if (opts.mode == AccelMode::gconvex) {
    st = gconvex_initial(c);
  } else {
    const std::optional<double> mu = opts.mu ? opts.mu : obj.metadata().mu;
    if (!mu || !(*mu > 0.0)) throw std::invalid_argument("run_accelerated: strongly mode needs mu > 0");
    const double a = 2.0 * *mu * c;
    if (!(a < 1.0)) throw std::invalid_argument("run_accelerated: strongly mode needs c < 1/(2 mu)");
    const double xi0 = opts.xi0.value_or(std::sqrt(a));
    if (!(xi0 > a && xi0 <= std::sqrt(a) * (1.0 + 1e-15))) {
      throw std::invalid_argument("run_accelerated: xi0 must lie in (2 mu c, sqrt(2 mu c)]");
    }
    trace.mu = *mu;
    st = strongly_initial(xi0, c);
  }

  AccelState s{y0, y0, y0, 0};
  double product = 1.0;
  double D0 = 0.0;

  auto record = [&]() {
    const int k = s.k;
    const double f = obj.value(s.y);
    if (!std::isfinite(f)) throw DescentError("run_accelerated: non-finite value at k=" + std::to_string(k));
    trace.y_trace.iterates.push_back(s.y);
    trace.y_trace.values.push_back(f);
    trace.y_trace.grad_norms.push_back(obj.grad_norm(s.y));
    trace.xs.push_back(s.x);
    trace.zs.push_back(s.z);
    trace.schedule.push_back(st);
    if (!trace.domain_exit && !(in_domain(m, dom, s.x) && in_domain(m, dom, s.y) && in_domain(m, dom, s.z))) {
      trace.domain_exit = k;
    }
    if (!trace.y_trace.domain_exit && !in_domain(m, dom, s.y)) trace.y_trace.domain_exit = k;
    if (sol) {
      EnergyRecord e = energy(st.A, st.B, obj, s, sol->x_star, sol->f_star);
      if (opts.mode == AccelMode::strongly) {
        if (k == 0) D0 = e.E;
        e.envelope = std::sqrt(product * D0);
      }
      trace.energy.push_back(e);
    }
    if (opts.on_iterate) opts.on_iterate(trace);
  };

  auto schedule_for = [&](int k, double delta1) {
    ScheduleStep step;
    if (opts.mode == AccelMode::gconvex) {
      step = schedule_gconvex(k, st.A, st.B, st.delta, delta1, c);
    } else {
      const double xi1 = xi_solve(*st.xi, delta1, trace.mu, c);
      step = schedule_strongly(xi1, st.A, trace.mu, c);
    }
    step.next.delta = delta1;
    return step;
  };

  record();
  for (int k = 0; k < k_max; ++k) {
    ScheduleStep step;
    int passes = 0;
    if (opts.delta_mode == DistortionMode::analytic) {
      step = schedule_for(k, distortion_rate(m, s.x, s.z, s.x, DistortionMode::analytic));
    } else {
      double delta = 1.0;
      for (;;) {
        step = schedule_for(k, delta);
        ++passes;
        const Point x1 = accel_interpolate(m, s.y, s.z, step.params.tau);
        const double ratio = distortion_ratio(m, s.x, s.z, x1, sol->x_star);
        if (ratio <= delta * (1.0 + 1e-12)) break;
        if (passes >= kMaxDeltaPasses || !std::isfinite(ratio)) {
          throw DescentError("run_accelerated: oracle distortion did not settle at k=" + std::to_string(k));
        }
        delta = ratio;
      }
    }
    AccelStepResult r = accel_step(obj, s, step.params, oracle);
    trace.params.push_back(step.params);
    trace.oracle_slack.push_back(r.oracle_slack);
    trace.delta_refinements.push_back(passes);
    if (step.next.xi) product *= 1.0 - *step.next.xi;
    st = step.next;
    s = std::move(r.state);
    record();
  }
  return trace;
}

}  // namespace rdescent

#include "rdescent/descent/runner.hpp"

#include <cmath>

namespace rdescent {

IterateTrace run_descent(const DescentMethod& method, const Objective& obj, const Point& x0, int k_max,
                         const DomainSpec& dom, const RunOptions& opts) {
  if (k_max < 0) throw std::invalid_argument("run_descent: k_max must be >= 0");
  const Manifold& m = obj.manifold();
  const DescentCertificate cert = method.certificate();
  IterateTrace trace;

  auto record = [&](const Point& x) {
    const int k = static_cast<int>(trace.iterates.size());
    const double f = obj.value(x);
    if (!std::isfinite(f)) throw DescentError("run_descent: non-finite value at k=" + std::to_string(k));
    trace.iterates.push_back(x);
    trace.values.push_back(f);
    trace.grad_norms.push_back(obj.grad_norm(x));
    if (!trace.domain_exit && !in_domain(m, dom, x)) trace.domain_exit = k;
    if (k > 0) {
      const double g = cert.direction == Direction::forward ? trace.grad_norms[k] : trace.grad_norms[k - 1];
      trace.per_step_violation.push_back(f - trace.values[k - 1] + cert.c * std::pow(g, cert.exponent()));
    }
    if (opts.on_iterate) opts.on_iterate(trace);
  };

  record(x0);
  for (int k = 0; k < k_max; ++k) {
    if (trace.grad_norms.back() <= opts.grad_tol) break;
    StepOutcome out = method.step(obj, trace.iterates.back());
    if (out.prox_residual) trace.prox_residuals.push_back(*out.prox_residual);
    if (out.cubic) trace.cubic_checks.push_back(*out.cubic);
    record(out.next);
  }
  return trace;
}

}  // namespace rdescent

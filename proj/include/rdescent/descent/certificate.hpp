#pragma once

#include "rdescent/geometry/manifold.hpp"

#include <optional>
#include <string>
#include <vector>

namespace rdescent {

enum class Direction { forward, backward };

std::string to_string(Direction d);

/// Claim f(x_{k+1}) ≤ f(x_k) − c‖grad f(x_•)‖^{p/(p−1)}, with the gradient
/// taken at x_{k+1} (forward) or x_k (backward).
struct DescentCertificate {
  double p = 2.0;
  double c = 0.0;
  Direction direction = Direction::backward;

  double exponent() const { return p / (p - 1.0); }
};

/// Throws std::invalid_argument unless p > 1 and c is finite and positive.
void validate(const DescentCertificate& cert);

/// C_fwd = c^{1−p}(p²−p)^{p−1}, C_bwd = c^{1−p}(p−1)^{p−1}.
struct RateConstants {
  double C_fwd = 0.0;
  double C_bwd = 0.0;
};
RateConstants rate_constants(double p, double c);

/// Subproblem diagnostics of one cubic-regularized Newton step.
struct CubicCheck {
  double step_norm = 0.0;
  double model_change = 0.0;     // m(s) − m(0)
  double model_grad_norm = 0.0;  // ‖∇m(s)‖
  double theta_bound = 0.0;      // θ‖s‖²
  bool stationary = false;       // s = 0 at a stationary point with PSD Hessian
  bool accepted() const { return stationary || (model_change <= 0.0 && model_grad_norm <= theta_bound); }
};

struct IterateTrace {
  std::vector<Point> iterates;
  std::vector<double> values;
  std::vector<double> grad_norms;
  /// f(x_{k+1}) − f(x_k) + c‖g‖^{p/(p−1)} for the method's own certificate;
  /// one entry per step.
  std::vector<double> per_step_violation;
  std::vector<double> prox_residuals;
  std::vector<CubicCheck> cubic_checks;
  /// First k with x_k outside the domain.
  std::optional<int> domain_exit;

  std::size_t size() const { return iterates.size(); }
};

struct CertifyResult {
  bool pass = true;
  double worst_slack = 0.0;  // max violation; ≤ tol when passing
  int worst_step = -1;
};

/// Checks the descent inequality at every consecutive pair of the trace.
CertifyResult certify(const IterateTrace& trace, const DescentCertificate& cert, double tol);

/// Default per-step slack 1e-9·(1 + |f(x₀)|).
double default_tolerance(double f0);

/// C·diam^p / k^{p−1} with C from rate_constants.
double rate_bound_gconvex(double p, double c, double diam, int k, Direction direction);
/// (f0_gap / (c k))^{(p−1)/p}, a bound on min_{t≤k} ‖grad f(x_t)‖.
double rate_bound_nonconvex(double c, double p, double f0_gap, int k);
/// (1 + c/τ)^{−k} gap₀ (forward) or (1 − c/τ)^k gap₀ (backward; needs c ≤ τ).
double rate_bound_graddom(double c, double tau, int k, Direction direction, double f0_gap);

}  // namespace rdescent

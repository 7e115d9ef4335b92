#include "rdescent/acceleration/schedule.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace rdescent {

void validate(const AccelParams& p) {
  if (!std::isfinite(p.tau) || !std::isfinite(p.alpha) || !std::isfinite(p.beta)) {
    throw std::invalid_argument("accel params: non-finite value");
  }
  if (p.tau < 0.0 || p.tau > 1.0) throw std::invalid_argument("accel params: tau outside [0, 1]");
  if (p.alpha < 0.0) throw std::invalid_argument("accel params: alpha must be >= 0");
  if (!(p.beta > 0.0)) throw std::invalid_argument("accel params: beta must be > 0");
}

ScheduleState gconvex_initial(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("gconvex schedule: c must be positive");
  return ScheduleState{0.0, 4.0 / c, 0.0, std::nullopt, 1.0};
}

ScheduleStep schedule_gconvex(int k, double A_k, double B_k, double delta_k, double delta_k1, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("gconvex schedule: c must be positive");
  if (!(delta_k >= 1.0) || !(delta_k1 >= 1.0)) throw std::invalid_argument("gconvex schedule: delta must be >= 1");
  const double kk = static_cast<double>(k);
  const double A1 = (kk + 1.0) * (kk + 2.0) / 2.0;
  const double B1 = 4.0 / c;
  const double Abar = A1 - A_k;
  if (!(Abar > 0.0)) throw std::invalid_argument("gconvex schedule: A_{k+1} - A_k must be positive");

  ScheduleStep out;
  out.params.tau = 2.0 * Abar * B_k / (A_k * delta_k1 * B1 + 2.0 * B_k * Abar);
  out.params.alpha = (B1 - B_k / delta_k) / Abar;
  out.params.beta = (B_k / delta_k1) / Abar;
  out.next = ScheduleState{A1, B1, Abar, std::nullopt, delta_k1};
  return out;
}

double xi_solve(double xi_k, double delta_k1, double mu, double c) {
  const double a = 2.0 * mu * c;
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("xi_solve: need 0 < 2 mu c < 1");
  if (!(delta_k1 >= 1.0)) throw std::invalid_argument("xi_solve: delta must be >= 1");
  if (!(xi_k >= a && xi_k < 1.0)) throw std::invalid_argument("xi_solve: xi_k outside [2 mu c, 1)");
  const double r = xi_k * xi_k / delta_k1;
  const double root = std::sqrt((r - a) * (r - a) + 4.0 * r);
  const double xi = a - r >= 0.0 ? 0.5 * (a - r + root) : 2.0 * r / (r - a + root);
  const double slack = 8.0 * std::numeric_limits<double>::epsilon();
  if (!(xi >= a * (1.0 - slack) && xi < 1.0)) {
    throw std::domain_error("xi_solve: root " + std::to_string(xi) + " outside [2 mu c, 1)");
  }
  return std::max(xi, a);
}

ScheduleState strongly_initial(double xi0, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("strongly schedule: c must be positive");
  if (!(xi0 > 0.0 && xi0 < 1.0)) throw std::invalid_argument("strongly schedule: xi0 must lie in (0, 1)");
  return ScheduleState{1.0, xi0 * xi0 / (4.0 * c), 0.0, xi0, 1.0};
}

ScheduleStep schedule_strongly(double xi_k1, double A_k, double mu, double c) {
  const double a = 2.0 * mu * c;
  if (!(c > 0.0 && mu > 0.0)) throw std::invalid_argument("strongly schedule: mu and c must be positive");
  if (!(a < 1.0)) throw std::invalid_argument("strongly schedule: c must be below 1/(2 mu)");
  if (!(xi_k1 > a && xi_k1 < 1.0)) {
    throw std::invalid_argument("strongly schedule: xi must lie in (2 mu c, 1); xi = 2 mu c gives beta = 0");
  }
  if (!(A_k > 0.0)) throw std::invalid_argument("strongly schedule: A_k must be positive");
  ScheduleStep out;
  out.params.tau = (xi_k1 - a) / (1.0 - a);
  out.params.alpha = mu;
  out.params.beta = (xi_k1 - a) / (2.0 * c);
  const double A1 = A_k / (1.0 - xi_k1);
  const double B1 = xi_k1 * xi_k1 / (1.0 - xi_k1) * A_k / (4.0 * c);
  out.next = ScheduleState{A1, B1, A1 - A_k, xi_k1, 1.0};
  return out;
}

double accelerated_gconvex_bound(double E0, double c, double diam, double delta_max, int k) {
  if (k < 1) throw std::invalid_argument("accelerated bound: k must be >= 1");
  const double kk = static_cast<double>(k);
  return E0 / (kk * kk) + (4.0 / c) * diam * diam * (1.0 - 1.0 / delta_max) / kk;
}

}  // namespace rdescent

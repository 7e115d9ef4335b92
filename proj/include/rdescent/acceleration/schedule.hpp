#pragma once

#include <optional>

namespace rdescent {

/// Step parameters of one accelerated iteration.
struct AccelParams {
  double tau = 1.0;    // in (0, 1]
  double alpha = 0.0;  // ≥ 0
  double beta = 1.0;   // > 0
};

/// Throws std::invalid_argument unless the parameters are finite,
/// τ ∈ [0, 1], α ≥ 0 and β > 0.
void validate(const AccelParams& p);

/// Energy weights and distortion data at iteration k.
struct ScheduleState {
  double A = 0.0;
  double B = 0.0;
  double A_bar = 0.0;  // A_k − A_{k−1}; 0 at k = 0
  std::optional<double> xi;
  double delta = 1.0;
};

struct ScheduleStep {
  AccelParams params;  // τ_{k+1}, α_{k+1}, β_{k+1}
  ScheduleState next;  // A_{k+1}, B_{k+1}, Ā_k, δ_{k+1}
};

/// Initial state for the g-convex schedule: A₀ = 0, B₀ = 4/c, δ₀ = 1.
ScheduleState gconvex_initial(double c);

/// Polynomial schedule for g-convex objectives:
///   A_{k+1} = (k+1)(k+2)/2, B_{k+1} = 4/c, Ā_k = A_{k+1} − A_k,
///   τ_{k+1} = 2Ā_kB_k / (A_kδ_{k+1}B_{k+1} + 2B_kĀ_k),
///   α_{k+1} = (B_{k+1} − B_k/δ_k)/Ā_k, β_{k+1} = (B_k/δ_{k+1})/Ā_k.
/// Throws std::invalid_argument when Ā_k ≤ 0, a δ is below 1 or c ≤ 0.
ScheduleStep schedule_gconvex(int k, double A_k, double B_k, double delta_k, double delta_k1, double c);

/// Root in [2μc, 1) of ξ(ξ − 2μc)/(1 − ξ) = ξ_k²/δ, computed from
/// ξ² + (r − 2μc)ξ − r = 0 with r = ξ_k²/δ without cancellation.
double xi_solve(double xi_k, double delta_k1, double mu, double c);

/// Initial state for the strongly g-convex schedule: A₀ = 1, B₀ = ξ₀²/(4c).
ScheduleState strongly_initial(double xi0, double c);

/// Geometric schedule for μ-strongly g-convex objectives:
///   τ = (ξ − 2μc)/(1 − 2μc), α = μ, β = (ξ − 2μc)/(2c),
///   A_{k+1} = A_k/(1 − ξ), B_{k+1} = ξ²/(1 − ξ) · A_k/(4c).
/// Throws std::invalid_argument when 2μc ≥ 1 or ξ ∉ (2μc, 1).
ScheduleStep schedule_strongly(double xi_k1, double A_k, double mu, double c);

/// E₀/k² + (4/c)·diam²·(1 − 1/δ_max)/k, the gap bound of the g-convex schedule.
double accelerated_gconvex_bound(double E0, double c, double diam, double delta_max, int k);

}  // namespace rdescent

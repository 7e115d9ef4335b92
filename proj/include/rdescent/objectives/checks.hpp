#pragma once

#include "rdescent/objectives/objective.hpp"

namespace rdescent {

/// max_i |(f(exp(x, h eᵢ)) − f(exp(x, −h eᵢ)))/(2h) − ⟨grad f, eᵢ⟩| / (1 + |⟨grad f, eᵢ⟩|)
/// over the orthonormal basis at x. h must lie in [1e-7, 1e-3].
double grad_check(const Objective& obj, const Point& x, double h);

/// Relative error of the Hessian quadratic form against second differences
/// of f along geodesics, over eᵢ and (eᵢ + eⱼ)/√2. Also reports asymmetry.
struct HessianCheck {
  double max_rel_error = 0.0;
  double asymmetry = 0.0;
};
HessianCheck hessian_check(const Objective& obj, const Point& x, double h = 1e-4);

/// Worst slack over random pairs (x, y) in the domain; negative means violated.
struct PropertyCheck {
  int samples = 0;
  double worst_slack = 0.0;
  bool holds(double tol = 1e-9) const { return worst_slack >= -tol; }
};

/// f(exp_x s) − f(x) − ⟨grad f(x), s⟩ − (μ/2)‖s‖² with s = log(x, y); μ = 0 checks plain g-convexity.
PropertyCheck check_convexity(const Objective& obj, const DomainSpec& dom, double mu, int samples, Rng& rng);
/// f(x) + ⟨grad f(x), s⟩ + (L/2)‖s‖² − f(y).
PropertyCheck check_smoothness(const Objective& obj, const DomainSpec& dom, double L, int samples, Rng& rng);
/// τ‖grad f(x)‖^{p/(p−1)} − (f(x) − f*). Requires a known solution.
PropertyCheck check_grad_domination(const Objective& obj, const DomainSpec& dom, GradDomination gd, int samples,
                                    Rng& rng);
/// ρ‖s‖³/6 − |f(exp_x s) − second-order model| and ρ‖s‖²/2 − ‖Γ⁻¹grad f(y) − grad f(x) − H s‖.
PropertyCheck check_hessian_lipschitz(const Objective& obj, const DomainSpec& dom, double rho, int samples, Rng& rng);

/// Largest observed Hessian-Lipschitz ratio over sampled pairs in the domain
/// (function-value and gradient forms, ‖s‖ ≥ 1e-2), doubled.
double estimate_rho(const Objective& obj, const DomainSpec& dom, int samples, std::uint64_t seed);

}  // namespace rdescent

#pragma once

#include "rdescent/acceleration/accelerated.hpp"

namespace rdescent {

/// Distance-shrinking quantities at one iteration of a strongly convex run.
struct ShrinkRow {
  int k = 0;
  double d_xy = 0.0;
  double d_xz = 0.0;
  double d_y_star = 0.0;
  double proj_z_star = 0.0;  // ‖log_{x_k} z_k − log_{x_k} x*‖
  double envelope = 0.0;     // √(∏_{j≤k}(1 − ξ_j) D₀)
  double envelope_y = 0.0;   // envelope·√(2/μ), bounds d(y_k, x*)
  double envelope_z = 0.0;   // envelope·√(1/(μ²c)), bounds the projected z distance
  double ratio = 0.0;        // d(x_k, z_k)/envelope
};

/// One row per iterate. D₀ = f(y₀) − f* + ξ₀²/(4c)·d(z₀, x*)². Needs a
/// strongly convex trace and the minimizer.
std::vector<ShrinkRow> shrink_diagnostics(const Manifold& m, const AccelTrace& trace, const Point& x_star,
                                          double D0);

/// D₀ of a strongly convex trace from its first energy record.
double shrink_reference(const AccelTrace& trace);

struct XiConvergence {
  std::optional<int> first_k;  // first k with |ξ_k − √(2μc)| ≤ eps
  double slope = 0.0;          // least-squares slope of log|ξ_k − √(2μc)| against k
  int fitted_points = 0;
};

/// Scans ξ₀, ξ₁, ... for entry into the √(2μc) ± eps band.
XiConvergence xi_convergence_report(const std::vector<double>& xi, double mu, double c, double eps);

/// ξ sequence of a strongly convex trace.
std::vector<double> xi_sequence(const AccelTrace& trace);

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

/// Ordinary least squares of ys against xs. Throws with fewer than two points.
LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys);

struct ConjugateCheck {
  double lhs = 0.0;  // ⟨s, αu⟩ − ‖s‖^q/q
  double rhs = 0.0;  // ((q−1)/q)|α|^{q/(q−1)}‖u‖^{q/(q−1)}
  bool holds = false;
};

/// Evaluates both sides of the conjugate inequality; holds when
/// lhs ≤ rhs + 1e-12(1 + |rhs|). Throws unless q > 1.
ConjugateCheck conjugate_bound_check(const Vec& s, const Vec& u, double alpha, double q);

}  // namespace rdescent

#pragma once

#include "rdescent/descent/certificate.hpp"
#include "rdescent/objectives/objective.hpp"

#include <memory>

namespace rdescent {

class DescentError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// exp(x, −η grad f(x)). Throws std::invalid_argument unless 0 < η < 2/L.
Point rgd_step(const Objective& obj, const Point& x, double eta);
/// Same update without the step-size precondition.
Point rgd_step_unchecked(const Objective& obj, const Point& x, double eta);
/// (2, η(1 − Lη/2), backward).
DescentCertificate rgd_certificate(double eta, double L);

struct ProxOptions {
  double tol_prox = 1e-9;
  int max_inner = 20000;
};

struct ProxResult {
  Point x;
  double residual = 0.0;  // ‖log(x′, x) − η grad f(x′)‖
  int inner_iterations = 0;
};

/// Approximate argmin_y f(y) + d²(y, x)/(2η) by Armijo gradient descent
/// started at x. Throws DescentError if the residual stays above tol_prox.
ProxResult proximal_step(const Objective& obj, const Point& x, double eta, const ProxOptions& opts = {});
/// (2, η/2, forward).
DescentCertificate proximal_certificate(double eta);

struct CubicResult {
  Point x;
  Tangent s;
  CubicCheck check;
};

/// Minimizes m(s) = f + ⟨g, s⟩ + ½⟨s, Hs⟩ + (M/3)‖s‖³ in orthonormal tangent
/// coordinates (eigendecomposition plus secular equation), verifies both
/// acceptance conditions and returns exp(x, s).
CubicResult cubic_newton_step(const Objective& obj, const Point& x, double M, double theta);
/// (3, (M/3 − ρ/6)(θ + ρ/2 + M)^{−3/2}, forward). Throws unless M > ρ/2, θ > 0.
DescentCertificate cubic_certificate(double M, double theta, double rho);

/// Coordinates s minimizing gᵀs + ½sᵀHs + (M/3)‖s‖³, the global minimizer of
/// the cubic model.
Vec solve_cubic_model(const Vec& g, const Mat& H, double M);

struct StepOutcome {
  Point next;
  std::optional<double> prox_residual;
  std::optional<CubicCheck> cubic;
};

/// A p-descent method: one update rule plus the certificate it carries.
class DescentMethod {
 public:
  virtual ~DescentMethod() = default;
  virtual std::string name() const = 0;
  virtual DescentCertificate certificate() const = 0;
  virtual StepOutcome step(const Objective& obj, const Point& x) const = 0;
};

using DescentMethodPtr = std::shared_ptr<const DescentMethod>;

class GradientDescent final : public DescentMethod {
 public:
  /// Throws std::invalid_argument unless 0 < η < 2/L.
  GradientDescent(double eta, double L);
  /// Skips the step-size precondition; used to demonstrate certificate failure.
  static GradientDescent unchecked(double eta, double L);

  std::string name() const override { return "rgd"; }
  DescentCertificate certificate() const override;
  StepOutcome step(const Objective& obj, const Point& x) const override;
  double eta() const { return eta_; }

 private:
  GradientDescent(double eta, double L, bool checked);
  double eta_;
  double L_;
  bool checked_;
};

class ProximalPoint final : public DescentMethod {
 public:
  explicit ProximalPoint(double eta, ProxOptions opts = {});

  std::string name() const override { return "proximal"; }
  DescentCertificate certificate() const override { return proximal_certificate(eta_); }
  StepOutcome step(const Objective& obj, const Point& x) const override;
  double eta() const { return eta_; }

 private:
  double eta_;
  ProxOptions opts_;
};

class CubicNewton final : public DescentMethod {
 public:
  CubicNewton(double M, double theta, double rho);
  /// θ = ρ/2, M = ρ.
  static CubicNewton with_defaults(double rho) { return CubicNewton(rho, rho / 2.0, rho); }

  std::string name() const override { return "cubic_newton"; }
  DescentCertificate certificate() const override { return cubic_certificate(M_, theta_, rho_); }
  StepOutcome step(const Objective& obj, const Point& x) const override;

 private:
  double M_;
  double theta_;
  double rho_;
};

}  // namespace rdescent

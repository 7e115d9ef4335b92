#pragma once

#include "rdescent/geometry/manifold.hpp"

namespace rdescent {

/// Flat ℝⁿ: exp/log/transport are +, −, identity.
class Euclidean final : public Manifold {
 public:
  explicit Euclidean(int n);

  int ambient_dim() const override { return dim(); }
  CurvatureBounds curvature() const override { return {0.0, 0.0, true}; }
  double sectional_curvature() const override { return 0.0; }
  double injectivity_radius() const override;
  double ambient_inner(const Vec& a, const Vec& b) const override { return a.dot(b); }

 protected:
  double constraint_residual(const Vec& x) const override;
  double tangency_residual(const Vec& x, const Vec& v) const override;
  Vec project_impl(Vec x) const override { return x; }
  Vec project_tangent_impl(const Vec&, const Vec& w) const override { return w; }
  Vec exp_impl(const Vec& x, const Vec& v) const override { return x + v; }
  Vec log_impl(const Vec& x, const Vec& y) const override { return y - x; }
  double distance_impl(const Vec& x, const Vec& y) const override { return (y - x).norm(); }
  Vec transport_impl(const Vec&, const Vec&, const Vec& v) const override { return v; }
  std::vector<Vec> basis_impl(const Vec& x) const override;
};

/// Sphere of radius R in ℝⁿ⁺¹, sectional curvature 1/R².
class Sphere final : public Manifold {
 public:
  Sphere(int n, double radius);

  double radius() const { return tag().param; }
  int ambient_dim() const override { return dim() + 1; }
  CurvatureBounds curvature() const override;
  double sectional_curvature() const override;
  double injectivity_radius() const override;
  double ambient_inner(const Vec& a, const Vec& b) const override { return a.dot(b); }

  /// cos of the angle between x and y, rejecting near-antipodal pairs.
  double checked_cosine(const Vec& x, const Vec& y) const;

 protected:
  double constraint_residual(const Vec& x) const override;
  double tangency_residual(const Vec& x, const Vec& v) const override;
  Vec project_impl(Vec x) const override;
  Vec project_tangent_impl(const Vec& x, const Vec& w) const override;
  Vec exp_impl(const Vec& x, const Vec& v) const override;
  Vec log_impl(const Vec& x, const Vec& y) const override;
  double distance_impl(const Vec& x, const Vec& y) const override;
  Vec transport_impl(const Vec& x, const Vec& y, const Vec& v) const override;
  std::vector<Vec> basis_impl(const Vec& x) const override;
};

/// Hyperboloid model of hyperbolic space with sectional curvature −κ:
/// {x ∈ ℝⁿ⁺¹ : ⟨x,x⟩_L = −1/κ, x₀ > 0} with ⟨a,b⟩_L = −a₀b₀ + Σ aᵢbᵢ.
class Hyperboloid final : public Manifold {
 public:
  Hyperboloid(int n, double kappa);

  double kappa() const { return tag().param; }
  int ambient_dim() const override { return dim() + 1; }
  CurvatureBounds curvature() const override;
  double sectional_curvature() const override { return -kappa(); }
  double injectivity_radius() const override;
  double ambient_inner(const Vec& a, const Vec& b) const override { return minkowski(a, b); }

  static double minkowski(const Vec& a, const Vec& b);
  /// Point with the given spatial coordinates (x₁..xₙ).
  Point lift(const Vec& spatial) const;

 protected:
  double constraint_residual(const Vec& x) const override;
  double tangency_residual(const Vec& x, const Vec& v) const override;
  Vec project_impl(Vec x) const override;
  Vec project_tangent_impl(const Vec& x, const Vec& w) const override;
  Vec exp_impl(const Vec& x, const Vec& v) const override;
  Vec log_impl(const Vec& x, const Vec& y) const override;
  double distance_impl(const Vec& x, const Vec& y) const override;
  Vec transport_impl(const Vec& x, const Vec& y, const Vec& v) const override;
  std::vector<Vec> basis_impl(const Vec& x) const override;

 private:
  // Tangent component of y at x together with its Minkowski norm.
  std::pair<Vec, double> radial(const Vec& x, const Vec& y) const;
};

}  // namespace rdescent

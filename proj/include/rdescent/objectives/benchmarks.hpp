#pragma once

#include "rdescent/objectives/objective.hpp"

#include <vector>

namespace rdescent {

/// Hessian eigenvalue of ½d(·, y)² orthogonal to the geodesic, at distance d
/// in a space of constant curvature K: √(−K)d·coth(√(−K)d), 1, or √K d·cot(√K d).
double squared_distance_curvature_factor(double K, double d);

/// ½ Σ wᵢ(xᵢ − bᵢ)² on ℝⁿ. Unit weights give ½‖x − b‖².
class Quadratic final : public Objective {
 public:
  static std::shared_ptr<const Quadratic> create(int n, Vec b, std::optional<Vec> weights = std::nullopt);

  std::string name() const override { return "quadratic"; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian_matrix(const Point& x) const override;

  const Vec& center() const { return b_; }
  const Vec& weights() const { return w_; }

 private:
  Quadratic(ManifoldPtr m, Vec b, Vec w, ObjectiveMetadata meta);
  Vec b_;
  Vec w_;
};

/// ½ d(x, y₀)². x* = y₀ exactly.
class SquaredDistance final : public Objective {
 public:
  /// Constants are derived on `domain` when given (L, μ) and ρ is estimated
  /// on it numerically.
  static std::shared_ptr<const SquaredDistance> create(ManifoldPtr m, Point target,
                                                       std::optional<DomainSpec> domain = std::nullopt);

  std::string name() const override { return "squared_distance"; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian_matrix(const Point& x) const override;

  const Point& target() const { return target_; }

 private:
  SquaredDistance(ManifoldPtr m, Point target, ObjectiveMetadata meta);
  Point target_;
};

/// (1/2N) Σ d(x, yᵢ)² over fixed samples. x* found by gradient descent to
/// gradient norm below 1e-12.
class FrechetMean final : public Objective {
 public:
  /// `domain` must contain the iterates; L and μ come from curvature
  /// comparison on the ball of radius (domain radius + sample spread).
  static std::shared_ptr<const FrechetMean> create(ManifoldPtr m, std::vector<Point> samples, DomainSpec domain);
  /// N samples drawn uniformly in the tangent ball of `spread` at `center`.
  static std::shared_ptr<const FrechetMean> random(ManifoldPtr m, const Point& center, double spread, int count,
                                                   double domain_radius, std::uint64_t seed);

  std::string name() const override { return "frechet_mean"; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian_matrix(const Point& x) const override;

  const std::vector<Point>& samples() const { return samples_; }

 private:
  FrechetMean(ManifoldPtr m, std::vector<Point> samples, ObjectiveMetadata meta);
  std::vector<Point> samples_;
};

/// −½ xᵀQx on the sphere of radius R (non-convex). f* = −½λ_max R².
class Rayleigh final : public Objective {
 public:
  static std::shared_ptr<const Rayleigh> create(ManifoldPtr sphere, Mat Q);
  /// Q with eigenvalues evenly spaced in [0, spread], rotated by a seeded
  /// random orthogonal matrix.
  static std::shared_ptr<const Rayleigh> random(ManifoldPtr sphere, double spread, std::uint64_t seed);

  std::string name() const override { return "rayleigh"; }
  double value(const Point& x) const override;
  Tangent gradient(const Point& x) const override;
  bool has_hessian() const override { return true; }
  Mat hessian_matrix(const Point& x) const override;

  const Mat& matrix() const { return Q_; }

 private:
  Rayleigh(ManifoldPtr m, Mat Q, ObjectiveMetadata meta);
  Mat Q_;
};

}  // namespace rdescent

#pragma once

#include "rdescent/geometry/domain.hpp"

#include <optional>
#include <string>

namespace rdescent {

enum class ConvexityClass { nonconvex, g_convex, strongly_g_convex };

std::string to_string(ConvexityClass c);

/// (τ, p) with f(x) − f* ≤ τ‖grad f(x)‖^{p/(p−1)}.
struct GradDomination {
  double tau = 0.0;
  double p = 2.0;
};

/// Declared regularity constants, valid on `domain` when one is recorded.
struct ObjectiveMetadata {
  std::optional<double> L;
  std::optional<double> mu;
  std::optional<double> rho;
  std::optional<GradDomination> grad_dom;
  ConvexityClass convexity = ConvexityClass::nonconvex;
  std::optional<DomainSpec> domain;
  std::string note;
};

struct KnownSolution {
  Point x_star;
  double f_star = 0.0;
};

class ObjectiveError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnsupportedOperation : public ObjectiveError {
 public:
  using ObjectiveError::ObjectiveError;
};

/// Smooth function on a manifold with exact gradient and (optionally)
/// Hessian. Immutable once returned from a factory.
class Objective {
 public:
  virtual ~Objective() = default;
  Objective(const Objective&) = delete;
  Objective& operator=(const Objective&) = delete;

  virtual std::string name() const = 0;
  virtual double value(const Point& x) const = 0;
  virtual Tangent gradient(const Point& x) const = 0;
  virtual bool has_hessian() const { return false; }
  /// Riemannian Hessian in orthonormal_basis(x) coordinates.
  virtual Mat hessian_matrix(const Point& x) const;

  double grad_norm(const Point& x) const { return manifold().norm(x, gradient(x)); }

  const Manifold& manifold() const { return *manifold_; }
  const ManifoldPtr& manifold_ptr() const { return manifold_; }
  const ObjectiveMetadata& metadata() const { return meta_; }
  const std::optional<KnownSolution>& solution() const { return solution_; }

 protected:
  Objective(ManifoldPtr m, ObjectiveMetadata meta);

  void require_point(const Point& x) const;
  /// Records x* and f(x*); throws unless ‖grad f(x*)‖ < 1e-10.
  void set_solution(const Point& x_star);
  ObjectiveMetadata& mutable_metadata() { return meta_; }

 private:
  ManifoldPtr manifold_;
  ObjectiveMetadata meta_;
  std::optional<KnownSolution> solution_;
};

using ObjectivePtr = std::shared_ptr<const Objective>;

}  // namespace rdescent

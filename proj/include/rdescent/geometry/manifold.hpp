#pragma once

#include "rdescent/geometry/types.hpp"

#include <memory>
#include <vector>

namespace rdescent {

struct CurvatureBounds {
  double lower = 0.0;
  double upper = 0.0;
  bool is_hadamard = false;
};

/// Riemannian manifold embedded in an ambient coordinate space.
///
/// The public operations validate their arguments (manifold tags, base
/// points, finiteness) and then dispatch to the closed-form kernels of the
/// concrete manifold. Instances are immutable and safe to share between
/// threads.
class Manifold {
 public:
  explicit Manifold(ManifoldTag tag) : tag_(tag) {}
  virtual ~Manifold() = default;

  Manifold(const Manifold&) = delete;
  Manifold& operator=(const Manifold&) = delete;

  const ManifoldTag& tag() const { return tag_; }
  int dim() const { return tag_.dim; }
  virtual int ambient_dim() const = 0;
  virtual CurvatureBounds curvature() const = 0;
  /// Constant sectional curvature of the model space.
  virtual double sectional_curvature() const = 0;
  /// Radius within which exp is a diffeomorphism onto its image.
  virtual double injectivity_radius() const = 0;

  /// Validates `coords` against the manifold constraint and tags it.
  Point point(Vec coords) const;
  /// Validates tangency of `coords` at `x`.
  Tangent tangent(const Point& x, Vec coords) const;
  Tangent zero(const Point& x) const;
  /// Nearest point on the manifold (renormalization), no validation.
  Point project(Vec coords) const;
  /// Orthogonal projection of an ambient vector onto T_x M.
  Tangent project_tangent(const Point& x, const Vec& ambient) const;

  Point exp(const Point& x, const Tangent& v) const;
  Tangent log(const Point& x, const Point& y) const;
  double distance(const Point& x, const Point& y) const;
  Tangent transport(const Point& x, const Point& y, const Tangent& v) const;
  double inner(const Point& x, const Tangent& v, const Tangent& w) const;
  double norm(const Point& x, const Tangent& v) const;
  /// n tangent vectors at x, orthonormal in the Riemannian metric.
  /// Deterministic in x.
  std::vector<Tangent> orthonormal_basis(const Point& x) const;

  bool on_manifold(const Vec& coords) const { return constraint_residual(coords) <= 1e-10; }
  bool is_tangent(const Vec& x, const Vec& v) const { return tangency_residual(x, v) <= 1e-10; }

  /// Metric in ambient coordinates (Euclidean dot, or the Minkowski form).
  virtual double ambient_inner(const Vec& a, const Vec& b) const = 0;

 protected:
  virtual double constraint_residual(const Vec& x) const = 0;
  virtual double tangency_residual(const Vec& x, const Vec& v) const = 0;
  virtual Vec project_impl(Vec x) const = 0;
  virtual Vec project_tangent_impl(const Vec& x, const Vec& w) const = 0;
  virtual Vec exp_impl(const Vec& x, const Vec& v) const = 0;
  virtual Vec log_impl(const Vec& x, const Vec& y) const = 0;
  virtual double distance_impl(const Vec& x, const Vec& y) const = 0;
  virtual Vec transport_impl(const Vec& x, const Vec& y, const Vec& v) const = 0;
  /// Orthonormal tangent basis at x in ambient coordinates.
  virtual std::vector<Vec> basis_impl(const Vec& x) const = 0;
  /// Gram-Schmidt (in the ambient metric) of the tangent projections of `seeds`.
  std::vector<Vec> gram_schmidt(const Vec& x, const std::vector<Vec>& seeds) const;

  void require_same_manifold(const Point& p, const char* what) const;
  void require_base(const Point& x, const Tangent& v, const char* what) const;

 private:
  ManifoldTag tag_;
};

using ManifoldPtr = std::shared_ptr<const Manifold>;

ManifoldPtr make_manifold(const ManifoldTag& tag);
ManifoldPtr make_euclidean(int n);
ManifoldPtr make_sphere(int n, double radius = 1.0);
ManifoldPtr make_hyperboloid(int n, double kappa = 1.0);

/// ‖Log_x(w) − Log_x(v)‖_x: the squared-distance surrogate used by the
/// accelerated scheme's energy.
double projected_distance(const Manifold& m, const Point& x, const Point& w, const Point& v);

/// Coefficients of `v` in an orthonormal basis at the same base point.
Vec to_basis(const Manifold& m, const std::vector<Tangent>& basis, const Tangent& v);
Tangent from_basis(const std::vector<Tangent>& basis, const Point& x, const Vec& coeffs);

bool same_point(const Point& a, const Point& b, double tol = 1e-12);

// Tangent-space arithmetic; operands must share their base point.
Tangent operator+(const Tangent& a, const Tangent& b);
Tangent operator-(const Tangent& a, const Tangent& b);
Tangent operator*(double s, const Tangent& v);
Tangent operator-(const Tangent& v);

}  // namespace rdescent

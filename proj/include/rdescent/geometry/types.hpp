#pragma once

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace rdescent {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

enum class ManifoldKind { euclidean, sphere, hyperboloid };

// Identifies the owning manifold of a point. `param` is the sphere radius R
// or the hyperboloid curvature magnitude kappa (sectional curvature -kappa);
// it is zero for Euclidean space.
struct ManifoldTag {
  ManifoldKind kind = ManifoldKind::euclidean;
  int dim = 0;
  double param = 0.0;

  friend bool operator==(const ManifoldTag&, const ManifoldTag&) = default;
};

std::string to_string(ManifoldKind kind);
std::string describe(const ManifoldTag& tag);

// A point in ambient coordinates. Construct through Manifold::point() so the
// manifold invariant is checked.
struct Point {
  Vec coords;
  ManifoldTag tag;
};

// A tangent vector in ambient coordinates, pointed at `base`.
struct Tangent {
  Point base;
  Vec coords;
};

class GeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class AntipodalPoints : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class BaseMismatch : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class ManifoldMismatch : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class NonFiniteCoordinates : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

class InvalidPoint : public GeometryError {
 public:
  using GeometryError::GeometryError;
};

}  // namespace rdescent

#pragma once

#include "rdescent/geometry/manifold.hpp"

#include <random>

namespace rdescent {

/// Geodesic ball standing in for the set A of the convergence theorems.
struct DomainSpec {
  Point center;
  double radius = 0.0;

  double diameter() const { return 2.0 * radius; }
};

/// Throws std::invalid_argument when the ball is not geodesically unique
/// (on the sphere the diameter must stay below πR).
DomainSpec make_domain(const Manifold& m, Point center, double radius);

/// distance(center, x) ≤ radius + 1e-9.
bool in_domain(const Manifold& m, const DomainSpec& dom, const Point& x);

// Sampling helpers used to generate benchmark data and property-test inputs.
using Rng = std::mt19937_64;

/// Direction uniform on the unit sphere of T_x M, scaled to `length`.
Tangent random_tangent(const Manifold& m, const Point& x, double length, Rng& rng);
/// Point at geodesic distance ≤ radius from `center`, uniform in the tangent
/// ball at `center` mapped through exp.
Point random_point_in_ball(const Manifold& m, const Point& center, double radius, Rng& rng);
/// The canonical origin: 0 in ℝⁿ, the north pole R·eₙ of the sphere,
/// (1/√κ, 0, ..., 0) on the hyperboloid.
Point origin(const Manifold& m);

}  // namespace rdescent

#include "rdescent/geometry/spaces.hpp"

#include <cmath>
#include <numbers>

namespace rdescent {

Sphere::Sphere(int n, double radius) : Manifold(ManifoldTag{ManifoldKind::sphere, n, radius}) {
  if (n < 1) throw std::invalid_argument("sphere: dimension must be positive");
  if (!(radius > 0.0) || !std::isfinite(radius)) throw std::invalid_argument("sphere: radius must be positive");
}

CurvatureBounds Sphere::curvature() const {
  const double k = sectional_curvature();
  return {k, k, false};
}

double Sphere::sectional_curvature() const { return 1.0 / (radius() * radius()); }

double Sphere::injectivity_radius() const { return std::numbers::pi * radius(); }

double Sphere::checked_cosine(const Vec& x, const Vec& y) const {
  const double r2 = radius() * radius();
  const double cosine = x.dot(y) / r2;
  if (cosine < -1.0 + 1e-8) throw AntipodalPoints("sphere: points are (nearly) antipodal");
  return std::min(1.0, cosine);
}

double Sphere::constraint_residual(const Vec& x) const { return std::abs(x.norm() - radius()); }

double Sphere::tangency_residual(const Vec& x, const Vec& v) const {
  return std::abs(x.dot(v)) / (radius() * (1.0 + v.norm()));
}

Vec Sphere::project_impl(Vec x) const {
  const double n = x.norm();
  if (n == 0.0) throw InvalidPoint("sphere: cannot project the origin");
  return x * (radius() / n);
}

Vec Sphere::project_tangent_impl(const Vec& x, const Vec& w) const {
  return w - (x.dot(w) / (radius() * radius())) * x;
}

Vec Sphere::exp_impl(const Vec& x, const Vec& v) const {
  const double t = v.norm();
  const double R = radius();
  if (t < 1e-300) return x + v;
  return std::cos(t / R) * x + (R * std::sin(t / R) / t) * v;
}

Vec Sphere::log_impl(const Vec& x, const Vec& y) const {
  const double R = radius();
  const double cosine = checked_cosine(x, y);
  Vec u = y - cosine * x;
  const double un = u.norm();
  if (un < 1e-300) return Vec::Zero(x.size());
  const double theta = std::atan2(un / R, cosine);
  return (R * theta / un) * u;
}

double Sphere::distance_impl(const Vec& x, const Vec& y) const {
  const double R = radius();
  const double cosine = x.dot(y) / (R * R);
  const double un = (y - cosine * x).norm();
  return R * std::atan2(un / R, cosine);
}

Vec Sphere::transport_impl(const Vec& x, const Vec& y, const Vec& v) const {
  const double R = radius();
  checked_cosine(x, y);
  return v - (y.dot(v) / (R * R + x.dot(y))) * (x + y);
}

std::vector<Vec> Sphere::basis_impl(const Vec& x) const {
  Eigen::Index skip = 0;
  x.cwiseAbs().maxCoeff(&skip);
  std::vector<Vec> seeds;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (i != skip) seeds.push_back(Vec::Unit(x.size(), i));
  }
  return gram_schmidt(x, seeds);
}

}  // namespace rdescent

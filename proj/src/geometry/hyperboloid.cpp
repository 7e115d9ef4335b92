#include "rdescent/geometry/spaces.hpp"

#include <cmath>
#include <limits>

namespace rdescent {

Hyperboloid::Hyperboloid(int n, double kappa) : Manifold(ManifoldTag{ManifoldKind::hyperboloid, n, kappa}) {
  if (n < 1) throw std::invalid_argument("hyperboloid: dimension must be positive");
  if (!(kappa > 0.0) || !std::isfinite(kappa)) throw std::invalid_argument("hyperboloid: kappa must be positive");
}

CurvatureBounds Hyperboloid::curvature() const { return {-kappa(), -kappa(), true}; }

double Hyperboloid::injectivity_radius() const { return std::numeric_limits<double>::infinity(); }

double Hyperboloid::minkowski(const Vec& a, const Vec& b) {
  return a.tail(a.size() - 1).dot(b.tail(b.size() - 1)) - a[0] * b[0];
}

Point Hyperboloid::lift(const Vec& spatial) const {
  if (spatial.size() != dim()) throw InvalidPoint("hyperboloid lift: expected n spatial coordinates");
  Vec x(dim() + 1);
  x.tail(dim()) = spatial;
  x[0] = 0.0;
  return point(project_impl(std::move(x)));
}

double Hyperboloid::constraint_residual(const Vec& x) const {
  if (!(x[0] > 0.0)) return std::numeric_limits<double>::infinity();
  // Rounding in the Minkowski form grows with ‖x‖², so scale it out for far points.
  return std::abs(minkowski(x, x) + 1.0 / kappa()) / (1.0 + 1e-4 * kappa() * x.squaredNorm());
}

double Hyperboloid::tangency_residual(const Vec& x, const Vec& v) const {
  return std::abs(minkowski(x, v)) / ((1.0 + x.norm()) * (1.0 + v.norm()));
}

Vec Hyperboloid::project_impl(Vec x) const {
  x[0] = std::sqrt(1.0 / kappa() + x.tail(x.size() - 1).squaredNorm());
  return x;
}

Vec Hyperboloid::project_tangent_impl(const Vec& x, const Vec& w) const {
  return w + (kappa() * minkowski(x, w)) * x;
}

Vec Hyperboloid::exp_impl(const Vec& x, const Vec& v) const {
  const double t = std::sqrt(std::max(0.0, minkowski(v, v)));
  const double s = std::sqrt(kappa()) * t;
  const double sinhc = s < 1e-8 ? 1.0 + s * s / 6.0 : std::sinh(s) / s;
  return std::cosh(s) * x + sinhc * v;
}

std::pair<Vec, double> Hyperboloid::radial(const Vec& x, const Vec& y) const {
  Vec u = y + (kappa() * minkowski(x, y)) * x;
  const double un = std::sqrt(std::max(0.0, minkowski(u, u)));
  return {std::move(u), un};
}

Vec Hyperboloid::log_impl(const Vec& x, const Vec& y) const {
  auto [u, un] = radial(x, y);
  if (un < 1e-300) return Vec::Zero(x.size());
  const double sk = std::sqrt(kappa());
  const double d = std::asinh(sk * un) / sk;
  return (d / un) * u;
}

double Hyperboloid::distance_impl(const Vec& x, const Vec& y) const {
  const double sk = std::sqrt(kappa());
  return std::asinh(sk * radial(x, y).second) / sk;
}

Vec Hyperboloid::transport_impl(const Vec& x, const Vec& y, const Vec& v) const {
  return v + (minkowski(y, v) / (1.0 / kappa() - minkowski(x, y))) * (x + y);
}

// Parallel transport of the spatial axes from the origin. Exact, so no
// Gram-Schmidt cancellation for points far from the origin.
std::vector<Vec> Hyperboloid::basis_impl(const Vec& x) const {
  const double sk = std::sqrt(kappa());
  Vec o = Vec::Zero(x.size());
  o[0] = 1.0 / sk;
  const Vec sum = o + x;
  const double denom = 1.0 / kappa() + x[0] / sk;
  std::vector<Vec> basis;
  for (Eigen::Index i = 1; i < x.size(); ++i) {
    Vec e = Vec::Unit(x.size(), i);
    e += (x[i] / denom) * sum;
    basis.push_back(std::move(e));
  }
  return basis;
}

}  // namespace rdescent

#include "rdescent/geometry/domain.hpp"

#include "rdescent/geometry/spaces.hpp"

#include <cmath>
#include <numbers>

namespace rdescent {

DomainSpec make_domain(const Manifold& m, Point center, double radius) {
  if (!(radius >= 0.0) || !std::isfinite(radius)) throw std::invalid_argument("domain: radius must be finite and >= 0");
  if (!(center.tag == m.tag())) throw std::invalid_argument("domain: center lies on another manifold");
  if (m.tag().kind == ManifoldKind::sphere && !(2.0 * radius < std::numbers::pi * m.tag().param)) {
    throw std::invalid_argument("domain: sphere ball must have diameter below pi*R");
  }
  return DomainSpec{std::move(center), radius};
}

bool in_domain(const Manifold& m, const DomainSpec& dom, const Point& x) {
  return m.distance(dom.center, x) <= dom.radius + 1e-9;
}

Tangent random_tangent(const Manifold& m, const Point& x, double length, Rng& rng) {
  std::normal_distribution<double> gauss;
  const auto basis = m.orthonormal_basis(x);
  Vec c(m.dim());
  double n = 0.0;
  while (n < 1e-12) {
    for (Eigen::Index i = 0; i < c.size(); ++i) c[i] = gauss(rng);
    n = c.norm();
  }
  return from_basis(basis, x, c * (length / n));
}

Point random_point_in_ball(const Manifold& m, const Point& center, double radius, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const double r = radius * std::pow(unif(rng), 1.0 / m.dim());
  return m.exp(center, random_tangent(m, center, r, rng));
}

Point origin(const Manifold& m) {
  Vec x = Vec::Zero(m.ambient_dim());
  switch (m.tag().kind) {
    case ManifoldKind::euclidean: break;
    case ManifoldKind::sphere: x[x.size() - 1] = m.tag().param; break;
    case ManifoldKind::hyperboloid: x[0] = 1.0 / std::sqrt(m.tag().param); break;
  }
  return m.point(std::move(x));
}

}  // namespace rdescent

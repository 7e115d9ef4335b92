#include "rdescent/geometry/manifold.hpp"

#include "rdescent/geometry/spaces.hpp"

#include <cmath>
#include <sstream>

namespace rdescent {

std::string to_string(ManifoldKind kind) {
  switch (kind) {
    case ManifoldKind::euclidean: return "euclidean";
    case ManifoldKind::sphere: return "sphere";
    case ManifoldKind::hyperboloid: return "hyperbolic";
  }
  return "unknown";
}

std::string describe(const ManifoldTag& tag) {
  std::ostringstream os;
  os << to_string(tag.kind) << "(n=" << tag.dim;
  if (tag.kind == ManifoldKind::sphere) os << ", R=" << tag.param;
  if (tag.kind == ManifoldKind::hyperboloid) os << ", kappa=" << tag.param;
  os << ")";
  return os.str();
}

namespace {

void require_finite(const Vec& v, const char* what) {
  if (!v.allFinite()) throw NonFiniteCoordinates(std::string(what) + ": non-finite coordinates");
}

}  // namespace

bool same_point(const Point& a, const Point& b, double tol) {
  if (!(a.tag == b.tag) || a.coords.size() != b.coords.size()) return false;
  const double scale = 1.0 + a.coords.lpNorm<Eigen::Infinity>();
  return (a.coords - b.coords).lpNorm<Eigen::Infinity>() <= tol * scale;
}

void Manifold::require_same_manifold(const Point& p, const char* what) const {
  if (!(p.tag == tag_)) {
    throw ManifoldMismatch(std::string(what) + ": point on " + describe(p.tag) + ", expected " +
                           describe(tag_));
  }
  if (p.coords.size() != ambient_dim()) {
    throw ManifoldMismatch(std::string(what) + ": wrong ambient dimension");
  }
  require_finite(p.coords, what);
}

void Manifold::require_base(const Point& x, const Tangent& v, const char* what) const {
  require_same_manifold(x, what);
  if (!same_point(v.base, x)) throw BaseMismatch(std::string(what) + ": tangent vector based elsewhere");
  if (v.coords.size() != ambient_dim()) throw BaseMismatch(std::string(what) + ": wrong tangent dimension");
  require_finite(v.coords, what);
}

Point Manifold::point(Vec coords) const {
  if (coords.size() != ambient_dim()) throw InvalidPoint("point: expected " + std::to_string(ambient_dim()) + " coordinates");
  require_finite(coords, "point");
  if (!on_manifold(coords)) throw InvalidPoint("point: coordinates violate the " + describe(tag_) + " constraint");
  return Point{std::move(coords), tag_};
}

Tangent Manifold::tangent(const Point& x, Vec coords) const {
  require_same_manifold(x, "tangent");
  if (coords.size() != ambient_dim()) throw InvalidPoint("tangent: wrong dimension");
  require_finite(coords, "tangent");
  if (!is_tangent(x.coords, coords)) throw InvalidPoint("tangent: vector is not tangent at base point");
  return Tangent{x, std::move(coords)};
}

Tangent Manifold::zero(const Point& x) const {
  require_same_manifold(x, "zero");
  return Tangent{x, Vec::Zero(ambient_dim())};
}

Point Manifold::project(Vec coords) const {
  require_finite(coords, "project");
  return Point{project_impl(std::move(coords)), tag_};
}

Tangent Manifold::project_tangent(const Point& x, const Vec& ambient) const {
  require_same_manifold(x, "project_tangent");
  require_finite(ambient, "project_tangent");
  return Tangent{x, project_tangent_impl(x.coords, ambient)};
}

Point Manifold::exp(const Point& x, const Tangent& v) const {
  require_base(x, v, "exp");
  Vec y = project_impl(exp_impl(x.coords, v.coords));
  require_finite(y, "exp");
  return Point{std::move(y), tag_};
}

Tangent Manifold::log(const Point& x, const Point& y) const {
  require_same_manifold(x, "log");
  require_same_manifold(y, "log");
  Vec v = log_impl(x.coords, y.coords);
  require_finite(v, "log");
  return Tangent{x, project_tangent_impl(x.coords, v)};
}

double Manifold::distance(const Point& x, const Point& y) const {
  require_same_manifold(x, "distance");
  require_same_manifold(y, "distance");
  return distance_impl(x.coords, y.coords);
}

Tangent Manifold::transport(const Point& x, const Point& y, const Tangent& v) const {
  require_base(x, v, "transport");
  require_same_manifold(y, "transport");
  return Tangent{y, project_tangent_impl(y.coords, transport_impl(x.coords, y.coords, v.coords))};
}

double Manifold::inner(const Point& x, const Tangent& v, const Tangent& w) const {
  require_base(x, v, "inner");
  require_base(x, w, "inner");
  return ambient_inner(v.coords, w.coords);
}

double Manifold::norm(const Point& x, const Tangent& v) const {
  return std::sqrt(std::max(0.0, inner(x, v, v)));
}

std::vector<Vec> Manifold::gram_schmidt(const Vec& x, const std::vector<Vec>& seeds) const {
  std::vector<Vec> basis;
  basis.reserve(seeds.size());
  for (const Vec& seed : seeds) {
    Vec w = project_tangent_impl(x, seed);
    // Two passes keep the basis orthonormal to rounding.
    for (int pass = 0; pass < 2; ++pass) {
      for (const Vec& b : basis) w -= ambient_inner(b, w) * b;
      w = project_tangent_impl(x, w);
    }
    const double n = std::sqrt(std::max(0.0, ambient_inner(w, w)));
    if (n < 1e-12) throw GeometryError("orthonormal_basis: degenerate seed");
    basis.push_back(w / n);
  }
  return basis;
}

std::vector<Tangent> Manifold::orthonormal_basis(const Point& x) const {
  require_same_manifold(x, "orthonormal_basis");
  std::vector<Tangent> out;
  for (Vec& b : basis_impl(x.coords)) out.push_back(Tangent{x, std::move(b)});
  return out;
}

double projected_distance(const Manifold& m, const Point& x, const Point& w, const Point& v) {
  const Tangent lw = m.log(x, w);
  const Tangent lv = m.log(x, v);
  return m.norm(x, lw - lv);
}

Vec to_basis(const Manifold& m, const std::vector<Tangent>& basis, const Tangent& v) {
  Vec c(static_cast<Eigen::Index>(basis.size()));
  for (std::size_t i = 0; i < basis.size(); ++i) c[static_cast<Eigen::Index>(i)] = m.inner(v.base, basis[i], v);
  return c;
}

Tangent from_basis(const std::vector<Tangent>& basis, const Point& x, const Vec& coeffs) {
  if (static_cast<std::size_t>(coeffs.size()) != basis.size()) throw GeometryError("from_basis: size mismatch");
  Vec v = Vec::Zero(x.coords.size());
  for (std::size_t i = 0; i < basis.size(); ++i) v += coeffs[static_cast<Eigen::Index>(i)] * basis[i].coords;
  return Tangent{x, std::move(v)};
}

namespace {

void require_common_base(const Tangent& a, const Tangent& b, const char* op) {
  if (!same_point(a.base, b.base)) throw BaseMismatch(std::string("tangent ") + op + ": different base points");
}

}  // namespace

Tangent operator+(const Tangent& a, const Tangent& b) {
  require_common_base(a, b, "+");
  return Tangent{a.base, a.coords + b.coords};
}

Tangent operator-(const Tangent& a, const Tangent& b) {
  require_common_base(a, b, "-");
  return Tangent{a.base, a.coords - b.coords};
}

Tangent operator*(double s, const Tangent& v) { return Tangent{v.base, s * v.coords}; }

Tangent operator-(const Tangent& v) { return Tangent{v.base, -v.coords}; }

ManifoldPtr make_manifold(const ManifoldTag& tag) {
  switch (tag.kind) {
    case ManifoldKind::euclidean: return make_euclidean(tag.dim);
    case ManifoldKind::sphere: return make_sphere(tag.dim, tag.param);
    case ManifoldKind::hyperboloid: return make_hyperboloid(tag.dim, tag.param);
  }
  throw GeometryError("make_manifold: unknown kind");
}

ManifoldPtr make_euclidean(int n) { return std::make_shared<const Euclidean>(n); }
ManifoldPtr make_sphere(int n, double radius) { return std::make_shared<const Sphere>(n, radius); }
ManifoldPtr make_hyperboloid(int n, double kappa) { return std::make_shared<const Hyperboloid>(n, kappa); }

}  // namespace rdescent

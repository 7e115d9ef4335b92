#include "rdescent/objectives/checks.hpp"

#include <cmath>
#include <limits>

namespace rdescent {

double grad_check(const Objective& obj, const Point& x, double h) {
  if (!(h >= 1e-7 && h <= 1e-3)) throw std::invalid_argument("grad_check: h must lie in [1e-7, 1e-3]");
  const Manifold& m = obj.manifold();
  const Tangent g = obj.gradient(x);
  double worst = 0.0;
  for (const Tangent& e : m.orthonormal_basis(x)) {
    const double fd = (obj.value(m.exp(x, h * e)) - obj.value(m.exp(x, -h * e))) / (2.0 * h);
    const double exact = m.inner(x, g, e);
    worst = std::max(worst, std::abs(fd - exact) / (1.0 + std::abs(exact)));
  }
  return worst;
}

HessianCheck hessian_check(const Objective& obj, const Point& x, double h) {
  const Manifold& m = obj.manifold();
  const Mat H = obj.hessian_matrix(x);
  const auto basis = m.orthonormal_basis(x);
  const double f0 = obj.value(x);
  const int n = static_cast<int>(basis.size());
  HessianCheck out;
  out.asymmetry = (H - H.transpose()).lpNorm<Eigen::Infinity>();
  auto probe = [&](const Vec& c) {
    const Tangent v = from_basis(basis, x, c);
    const double fd = (obj.value(m.exp(x, h * v)) - 2.0 * f0 + obj.value(m.exp(x, -h * v))) / (h * h);
    const double q = c.dot(H * c);
    out.max_rel_error = std::max(out.max_rel_error, std::abs(fd - q) / (1.0 + std::abs(q)));
  };
  for (int i = 0; i < n; ++i) {
    probe(Vec::Unit(n, i));
    for (int j = i + 1; j < n; ++j) probe((Vec::Unit(n, i) + Vec::Unit(n, j)) / std::sqrt(2.0));
  }
  return out;
}

namespace {

template <class F>
PropertyCheck sample_pairs(const Objective& obj, const DomainSpec& dom, int samples, Rng& rng, F&& slack) {
  const Manifold& m = obj.manifold();
  PropertyCheck out;
  out.worst_slack = std::numeric_limits<double>::infinity();
  for (int i = 0; i < samples; ++i) {
    const Point x = random_point_in_ball(m, dom.center, dom.radius, rng);
    const Point y = random_point_in_ball(m, dom.center, dom.radius, rng);
    out.worst_slack = std::min(out.worst_slack, slack(x, y));
    ++out.samples;
  }
  return out;
}

}  // namespace

PropertyCheck check_convexity(const Objective& obj, const DomainSpec& dom, double mu, int samples, Rng& rng) {
  const Manifold& m = obj.manifold();
  return sample_pairs(obj, dom, samples, rng, [&](const Point& x, const Point& y) {
    const Tangent s = m.log(x, y);
    const double ns = m.norm(x, s);
    return obj.value(y) - obj.value(x) - m.inner(x, obj.gradient(x), s) - 0.5 * mu * ns * ns;
  });
}

PropertyCheck check_smoothness(const Objective& obj, const DomainSpec& dom, double L, int samples, Rng& rng) {
  const Manifold& m = obj.manifold();
  return sample_pairs(obj, dom, samples, rng, [&](const Point& x, const Point& y) {
    const Tangent s = m.log(x, y);
    const double ns = m.norm(x, s);
    return obj.value(x) + m.inner(x, obj.gradient(x), s) + 0.5 * L * ns * ns - obj.value(y);
  });
}

PropertyCheck check_grad_domination(const Objective& obj, const DomainSpec& dom, GradDomination gd, int samples,
                                    Rng& rng) {
  if (!obj.solution()) throw ObjectiveError("check_grad_domination: no known solution");
  const double f_star = obj.solution()->f_star;
  return sample_pairs(obj, dom, samples, rng, [&](const Point& x, const Point&) {
    return gd.tau * std::pow(obj.grad_norm(x), gd.p / (gd.p - 1.0)) - (obj.value(x) - f_star);
  });
}

namespace {

// Function-value and gradient defects of the second-order model at x toward y.
struct ModelDefect {
  double step = 0.0;
  double value = 0.0;
  double gradient = 0.0;
};

ModelDefect model_defect(const Objective& obj, const Point& x, const Point& y) {
  const Manifold& m = obj.manifold();
  const auto basis = m.orthonormal_basis(x);
  const Tangent s = m.log(x, y);
  const Vec sc = to_basis(m, basis, s);
  const Mat H = obj.hessian_matrix(x);
  const Tangent g = obj.gradient(x);
  const Vec gc = to_basis(m, basis, g);
  ModelDefect d;
  d.step = sc.norm();
  d.value = std::abs(obj.value(y) - obj.value(x) - gc.dot(sc) - 0.5 * sc.dot(H * sc));
  const Vec back = to_basis(m, basis, m.transport(y, x, obj.gradient(y)));
  d.gradient = (back - gc - H * sc).norm();
  return d;
}

}  // namespace

PropertyCheck check_hessian_lipschitz(const Objective& obj, const DomainSpec& dom, double rho, int samples, Rng& rng) {
  return sample_pairs(obj, dom, samples, rng, [&](const Point& x, const Point& y) {
    const ModelDefect d = model_defect(obj, x, y);
    const double s3 = d.step * d.step * d.step;
    return std::min(rho * s3 / 6.0 - d.value, rho * d.step * d.step / 2.0 - d.gradient);
  });
}

double estimate_rho(const Objective& obj, const DomainSpec& dom, int samples, std::uint64_t seed) {
  const Manifold& m = obj.manifold();
  Rng rng(seed);
  double worst = 0.0;
  for (int i = 0; i < samples; ++i) {
    const Point x = random_point_in_ball(m, dom.center, dom.radius, rng);
    const Point y = random_point_in_ball(m, dom.center, dom.radius, rng);
    const ModelDefect d = model_defect(obj, x, y);
    if (d.step < 1e-2) continue;
    worst = std::max({worst, 6.0 * d.value / (d.step * d.step * d.step), 2.0 * d.gradient / (d.step * d.step)});
  }
  return 2.0 * worst;
}

}  // namespace rdescent

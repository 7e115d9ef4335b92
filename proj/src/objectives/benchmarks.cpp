#include "rdescent/objectives/benchmarks.hpp"

#include "rdescent/objectives/checks.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <cmath>
#include <numbers>

namespace rdescent {

namespace {

constexpr int kRhoSamples = 2000;
constexpr std::uint64_t kRhoSeed = 0x5eed;

GradDomination from_strong_convexity(double mu) { return {1.0 / (2.0 * mu), 2.0}; }

// T·I + (1 − T)ûûᵀ in basis coordinates, û the unit direction of log(x, y).
Mat squared_distance_hessian(const Manifold& m, const Point& x, const Point& y) {
  const auto basis = m.orthonormal_basis(x);
  const Vec u = to_basis(m, basis, m.log(x, y));
  const int n = m.dim();
  const double d = u.norm();
  const double T = squared_distance_curvature_factor(m.sectional_curvature(), d);
  Mat H = T * Mat::Identity(n, n);
  if (d > 0.0) {
    const Vec uh = u / d;
    H += (1.0 - T) * uh * uh.transpose();
  }
  return H;
}

// Curvature-comparison constants for ½d(·, y)² with d ranging over [0, D].
struct ComparisonConstants {
  std::optional<double> L;
  std::optional<double> mu;
};

ComparisonConstants squared_distance_constants(const Manifold& m, double D) {
  const double K = m.sectional_curvature();
  if (K <= 0.0) return {squared_distance_curvature_factor(K, D), 1.0};
  // Positive curvature: eigenvalues (√K d)cot(√K d) ∈ (0, 1] while √K D < π/2.
  if (std::sqrt(K) * D < std::numbers::pi / 2.0) return {1.0, squared_distance_curvature_factor(K, D)};
  return {};
}

void finish_convexity(ObjectiveMetadata& meta) {
  if (meta.mu && *meta.mu > 0.0) {
    meta.convexity = ConvexityClass::strongly_g_convex;
    meta.grad_dom = from_strong_convexity(*meta.mu);
  } else if (meta.mu) {
    meta.convexity = ConvexityClass::g_convex;
  }
}

}  // namespace

double squared_distance_curvature_factor(double K, double d) {
  if (d < 0.0) throw std::invalid_argument("curvature factor: negative distance");
  const double a = std::sqrt(std::abs(K)) * d;
  if (K == 0.0) return 1.0;
  if (a < 1e-6) return K < 0.0 ? 1.0 + a * a / 3.0 : 1.0 - a * a / 3.0;
  if (K < 0.0) return a / std::tanh(a);
  return a / std::tan(a);
}

// ---------------------------------------------------------------------------

Quadratic::Quadratic(ManifoldPtr m, Vec b, Vec w, ObjectiveMetadata meta)
    : Objective(std::move(m), std::move(meta)), b_(std::move(b)), w_(std::move(w)) {}

std::shared_ptr<const Quadratic> Quadratic::create(int n, Vec b, std::optional<Vec> weights) {
  auto m = make_euclidean(n);
  if (b.size() != n) throw std::invalid_argument("quadratic: center has wrong dimension");
  Vec w = weights.value_or(Vec::Ones(n));
  if (w.size() != n || !(w.minCoeff() > 0.0) || !w.allFinite()) {
    throw std::invalid_argument("quadratic: weights must be positive and of dimension n");
  }
  ObjectiveMetadata meta;
  meta.L = w.maxCoeff();
  meta.mu = w.minCoeff();
  meta.rho = 0.0;
  finish_convexity(meta);
  meta.note = "separable quadratic; constants exact on all of R^n";
  std::shared_ptr<Quadratic> obj(new Quadratic(m, b, std::move(w), std::move(meta)));
  obj->set_solution(m->point(b));
  return obj;
}

double Quadratic::value(const Point& x) const {
  require_point(x);
  const Vec r = x.coords - b_;
  return 0.5 * r.dot(w_.cwiseProduct(r));
}

Tangent Quadratic::gradient(const Point& x) const {
  require_point(x);
  return Tangent{x, w_.cwiseProduct(x.coords - b_)};
}

Mat Quadratic::hessian_matrix(const Point& x) const {
  require_point(x);
  return w_.asDiagonal();
}

// ---------------------------------------------------------------------------

SquaredDistance::SquaredDistance(ManifoldPtr m, Point target, ObjectiveMetadata meta)
    : Objective(std::move(m), std::move(meta)), target_(std::move(target)) {}

std::shared_ptr<const SquaredDistance> SquaredDistance::create(ManifoldPtr m, Point target,
                                                               std::optional<DomainSpec> domain) {
  ObjectiveMetadata meta;
  if (!(target.tag == m->tag())) throw ManifoldMismatch("squared_distance: target on another manifold");
  if (m->tag().kind == ManifoldKind::euclidean) {
    meta.L = 1.0;
    meta.mu = 1.0;
    meta.rho = 0.0;
  } else if (m->curvature().is_hadamard) {
    meta.mu = 1.0;
  }
  if (domain) {
    const double D = m->distance(domain->center, target) + domain->radius;
    const ComparisonConstants cc = squared_distance_constants(*m, D);
    meta.L = cc.L;
    meta.mu = cc.mu;
    meta.domain = domain;
    meta.note = "constants from curvature comparison at distance " + std::to_string(D);
  }
  finish_convexity(meta);
  std::shared_ptr<SquaredDistance> obj(new SquaredDistance(m, target, std::move(meta)));
  obj->set_solution(target);
  if (domain && !obj->metadata().rho) obj->mutable_metadata().rho = estimate_rho(*obj, *domain, kRhoSamples, kRhoSeed);
  return obj;
}

double SquaredDistance::value(const Point& x) const {
  require_point(x);
  const double d = manifold().distance(x, target_);
  return 0.5 * d * d;
}

Tangent SquaredDistance::gradient(const Point& x) const {
  require_point(x);
  return -manifold().log(x, target_);
}

Mat SquaredDistance::hessian_matrix(const Point& x) const {
  require_point(x);
  return squared_distance_hessian(manifold(), x, target_);
}

// ---------------------------------------------------------------------------

FrechetMean::FrechetMean(ManifoldPtr m, std::vector<Point> samples, ObjectiveMetadata meta)
    : Objective(std::move(m), std::move(meta)), samples_(std::move(samples)) {}

std::shared_ptr<const FrechetMean> FrechetMean::create(ManifoldPtr m, std::vector<Point> samples,
                                                       DomainSpec domain) {
  if (samples.empty()) throw std::invalid_argument("frechet_mean: need at least one sample");
  double spread = 0.0;
  for (const Point& y : samples) {
    if (!(y.tag == m->tag())) throw ManifoldMismatch("frechet_mean: sample on another manifold");
    spread = std::max(spread, m->distance(domain.center, y));
  }
  const double D = domain.radius + spread;
  const ComparisonConstants cc = squared_distance_constants(*m, D);
  if (!cc.L || !cc.mu) {
    throw std::invalid_argument("frechet_mean: domain plus sample spread exceeds the convexity radius");
  }
  ObjectiveMetadata meta;
  meta.L = cc.L;
  meta.mu = cc.mu;
  meta.domain = domain;
  meta.note = "constants from curvature comparison on the ball of radius " + std::to_string(D);
  finish_convexity(meta);

  std::shared_ptr<FrechetMean> obj(new FrechetMean(m, std::move(samples), std::move(meta)));
  // Reference minimizer by gradient descent with step 1/L.
  Point x = domain.center;
  const double eta = 1.0 / *cc.L;
  for (int k = 0; k < 200000; ++k) {
    const Tangent g = obj->gradient(x);
    if (m->norm(x, g) < 1e-12) break;
    x = m->exp(x, -eta * g);
  }
  obj->set_solution(x);
  obj->mutable_metadata().rho = estimate_rho(*obj, domain, kRhoSamples, kRhoSeed);
  return obj;
}

std::shared_ptr<const FrechetMean> FrechetMean::random(ManifoldPtr m, const Point& center, double spread, int count,
                                                       double domain_radius, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point> samples;
  for (int i = 0; i < count; ++i) samples.push_back(random_point_in_ball(*m, center, spread, rng));
  return create(m, std::move(samples), make_domain(*m, center, domain_radius));
}

double FrechetMean::value(const Point& x) const {
  require_point(x);
  double acc = 0.0;
  for (const Point& y : samples_) {
    const double d = manifold().distance(x, y);
    acc += d * d;
  }
  return acc / (2.0 * static_cast<double>(samples_.size()));
}

Tangent FrechetMean::gradient(const Point& x) const {
  require_point(x);
  Vec acc = Vec::Zero(x.coords.size());
  for (const Point& y : samples_) acc -= manifold().log(x, y).coords;
  return Tangent{x, acc / static_cast<double>(samples_.size())};
}

Mat FrechetMean::hessian_matrix(const Point& x) const {
  require_point(x);
  Mat H = Mat::Zero(manifold().dim(), manifold().dim());
  for (const Point& y : samples_) H += squared_distance_hessian(manifold(), x, y);
  return H / static_cast<double>(samples_.size());
}

// ---------------------------------------------------------------------------

Rayleigh::Rayleigh(ManifoldPtr m, Mat Q, ObjectiveMetadata meta)
    : Objective(std::move(m), std::move(meta)), Q_(std::move(Q)) {}

std::shared_ptr<const Rayleigh> Rayleigh::create(ManifoldPtr sphere, Mat Q) {
  if (sphere->tag().kind != ManifoldKind::sphere) throw std::invalid_argument("rayleigh: needs a sphere");
  if (Q.rows() != sphere->ambient_dim() || Q.cols() != sphere->ambient_dim()) {
    throw std::invalid_argument("rayleigh: Q has wrong shape");
  }
  if ((Q - Q.transpose()).lpNorm<Eigen::Infinity>() > 1e-12 * (1.0 + Q.lpNorm<Eigen::Infinity>())) {
    throw std::invalid_argument("rayleigh: Q must be symmetric");
  }
  Q = 0.5 * (Q + Q.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> eig(Q);
  const Vec& lam = eig.eigenvalues();
  const double R = sphere->tag().param;
  ObjectiveMetadata meta;
  meta.L = lam.maxCoeff() - lam.minCoeff();
  meta.convexity = ConvexityClass::nonconvex;
  meta.note = "L = spread of the spectrum of Q";
  std::shared_ptr<Rayleigh> obj(new Rayleigh(sphere, Q, std::move(meta)));
  obj->set_solution(sphere->project(eig.eigenvectors().col(lam.size() - 1) * R));
  return obj;
}

std::shared_ptr<const Rayleigh> Rayleigh::random(ManifoldPtr sphere, double spread, std::uint64_t seed) {
  const int N = sphere->ambient_dim();
  Rng rng(seed);
  std::normal_distribution<double> gauss;
  Mat G(N, N);
  for (int i = 0; i < N; ++i)
    for (int j = 0; j < N; ++j) G(i, j) = gauss(rng);
  const Mat U = Eigen::HouseholderQR<Mat>(G).householderQ();
  Vec lam = Vec::LinSpaced(N, 0.0, spread);
  return create(sphere, U * lam.asDiagonal() * U.transpose());
}

double Rayleigh::value(const Point& x) const {
  require_point(x);
  return -0.5 * x.coords.dot(Q_ * x.coords);
}

Tangent Rayleigh::gradient(const Point& x) const {
  require_point(x);
  const double R = manifold().tag().param;
  const Vec qx = Q_ * x.coords;
  return Tangent{x, -qx + (x.coords.dot(qx) / (R * R)) * x.coords};
}

Mat Rayleigh::hessian_matrix(const Point& x) const {
  require_point(x);
  const double R = manifold().tag().param;
  const auto basis = manifold().orthonormal_basis(x);
  const int n = manifold().dim();
  Mat E(x.coords.size(), n);
  for (int i = 0; i < n; ++i) E.col(i) = basis[static_cast<std::size_t>(i)].coords;
  const double rq = x.coords.dot(Q_ * x.coords) / (R * R);
  return -E.transpose() * Q_ * E + rq * Mat::Identity(n, n);
}

}  // namespace rdescent

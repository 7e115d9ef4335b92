#include "rdescent/descent/runner.hpp"
#include "rdescent/objectives/benchmarks.hpp"

#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include <cmath>

using namespace rdescent;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

struct HyperbolicSetup {
  ManifoldPtr m = make_hyperboloid(2);
  Point x0 = origin(*m);
  Point y0 = m->exp(x0, m->tangent(x0, v3(0, 0.6, 0.8)));  // distance 1
  DomainSpec dom = make_domain(*m, y0, 1.0);
  std::shared_ptr<const SquaredDistance> f = SquaredDistance::create(m, y0, dom);
};

}  // namespace

TEST(RgdStep, ExactOnUnitQuadratic) {
  auto q = Quadratic::create(2, v2(0, 0));
  Point x = q->manifold().point(v2(3, 4));
  EXPECT_EQ(rgd_step(*q, x, 1.0).coords, v2(0, 0));
  Point star = q->solution()->x_star;
  EXPECT_EQ(rgd_step(*q, star, 1.0).coords, star.coords);
}

TEST(RgdStep, RejectsStepOutsideStableRange) {
  auto q = Quadratic::create(2, v2(0, 0));
  Point x = q->manifold().point(v2(3, 4));
  EXPECT_THROW(rgd_step(*q, x, 2.0), std::invalid_argument);
  EXPECT_THROW(rgd_step(*q, x, 0.0), std::invalid_argument);
  EXPECT_THROW(GradientDescent(2.5, 1.0), std::invalid_argument);
  EXPECT_NO_THROW(GradientDescent::unchecked(2.5, 1.0));
}

TEST(RgdStep, HyperbolicDecreaseMeetsCertificate) {
  HyperbolicSetup s;
  const double L = *s.f->metadata().L;
  for (double eta : {0.05, 0.2, 1.0 / L}) {
    const DescentCertificate cert = rgd_certificate(eta, L);
    Point x1 = rgd_step(*s.f, s.x0, eta);
    const double g = s.f->grad_norm(s.x0);
    EXPECT_LE(s.f->value(x1) - s.f->value(s.x0), -cert.c * g * g + 1e-15);
  }
  EXPECT_DOUBLE_EQ(rgd_certificate(1.0 / L, L).c, 1.0 / (2.0 * L));
}

TEST(ProximalStep, QuadraticClosedForm) {
  auto q = Quadratic::create(2, v2(0, 0));
  ProxResult r = proximal_step(*q, q->manifold().point(v2(2, 0)), 1.0);
  EXPECT_LT((r.x.coords - v2(1, 0)).norm(), 1e-9);
  EXPECT_LE(r.residual, 1e-9);

  Vec w = v3(0.5, 1, 4), b = v3(1, -1, 2), x = v3(-3, 2, 0.5);
  auto qw = Quadratic::create(3, b, w);
  for (double eta : {0.1, 1.0, 7.0}) {
    Vec oracle = (x + eta * w.cwiseProduct(b)).cwiseQuotient(Vec::Ones(3) + eta * w);
    ProxResult rw = proximal_step(*qw, qw->manifold().point(x), eta);
    EXPECT_LT((rw.x.coords - oracle).norm(), 1e-8) << eta;
  }
}

TEST(ProximalStep, FixedPointAtMinimizer) {
  HyperbolicSetup s;
  ProxResult r = proximal_step(*s.f, s.y0, 0.7);
  EXPECT_LT(s.m->distance(r.x, s.y0), 1e-12);
  EXPECT_EQ(r.inner_iterations, 0);
}

// One-dimensional reduction: the prox point lies on the geodesic toward y₀
// with d(x′, y₀) = d(x, y₀)/(1 + η).
TEST(ProximalStep, HyperbolicGeodesicReduction) {
  HyperbolicSetup s;
  for (double eta : {0.3, 1.0, 3.0}) {
    ProxResult r = proximal_step(*s.f, s.x0, eta);
    Point oracle = s.m->exp(s.x0, (eta / (1.0 + eta)) * s.m->log(s.x0, s.y0));
    EXPECT_LT(s.m->distance(r.x, oracle), 1e-6);
    EXPECT_NEAR(s.m->distance(r.x, s.y0), 1.0 / (1.0 + eta), 1e-6);
    EXPECT_LE(r.residual, 1e-9);
  }
}

TEST(CubicModel, UnitHessianSecularEquation) {
  const Vec g = v3(0.3, -1.2, 2.0);
  for (double M : {0.1, 1.0, 10.0}) {
    const double gn = g.norm();
    const double t = (-1.0 + std::sqrt(1.0 + 4.0 * M * gn)) / (2.0 * M * gn);
    const Vec s = solve_cubic_model(g, Mat::Identity(3, 3), M);
    EXPECT_LT((s + t * g).norm(), 1e-13) << M;
  }
}

TEST(CubicModel, HardCase) {
  Mat H = Vec(v2(-1, 2)).asDiagonal();
  const Vec s = solve_cubic_model(v2(0, 0), H, 1.0);
  EXPECT_NEAR(s.norm(), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(s[0]), 1.0, 1e-14);
  EXPECT_LT((H * s + s.norm() * s).norm(), 1e-14);
}

TEST(CubicModel, SatisfiesGlobalOptimalityConditions) {
  Rng rng(4);
  std::normal_distribution<double> gauss;
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + trial % 5;
    Mat A(n, n);
    Vec g(n);
    for (int i = 0; i < n; ++i) {
      g[i] = gauss(rng) * std::pow(10.0, (trial % 7) - 4);
      for (int j = 0; j < n; ++j) A(i, j) = gauss(rng);
    }
    const Mat H = 0.5 * (A + A.transpose());
    const double M = std::exp(gauss(rng));
    const Vec s = solve_cubic_model(g, H, M);
    const double r = s.norm();
    // Global minimizer: (H + M r I)s = −g with H + M r I positive semidefinite.
    EXPECT_LT((g + H * s + M * r * s).norm(), 1e-10 * (1.0 + g.norm()));
    const Mat shifted = H + M * r * Mat::Identity(n, n);
    EXPECT_GE(Eigen::SelfAdjointEigenSolver<Mat>(shifted).eigenvalues()[0], -1e-9);
  }
}

TEST(CubicStep, StationaryPointGivesZeroStep) {
  auto q = Quadratic::create(2, v2(1, 1));
  CubicResult r = cubic_newton_step(*q, q->solution()->x_star, 1.0, 0.5);
  EXPECT_TRUE(r.check.stationary);
  EXPECT_EQ(r.check.step_norm, 0.0);
  EXPECT_TRUE(r.check.accepted());
  EXPECT_EQ(r.x.coords, q->solution()->x_star.coords);
}

TEST(CubicStep, HyperbolicForwardDecrease) {
  HyperbolicSetup s;
  const double rho = *s.f->metadata().rho;
  const DescentCertificate cert = cubic_certificate(rho, rho / 2.0, rho);
  EXPECT_NEAR(cert.c, 1.0 / (12.0 * std::sqrt(2.0) * std::sqrt(rho)), 1e-15);
  CubicResult r = cubic_newton_step(*s.f, s.x0, rho, rho / 2.0);
  EXPECT_TRUE(r.check.accepted());
  const double g1 = s.f->grad_norm(r.x);
  EXPECT_LE(s.f->value(r.x) - s.f->value(s.x0), -cert.c * std::pow(g1, 1.5));
}

TEST(CubicStep, RejectsWeakRegularization) {
  EXPECT_THROW(cubic_certificate(0.5, 0.5, 1.0), std::invalid_argument);
  EXPECT_THROW(CubicNewton(1.0, 0.0, 1.0), std::invalid_argument);
}

TEST(Certify, ConstantTracePasses) {
  auto q = Quadratic::create(2, v2(0, 0));
  IterateTrace t;
  for (int i = 0; i < 3; ++i) {
    t.iterates.push_back(q->solution()->x_star);
    t.values.push_back(0.0);
    t.grad_norms.push_back(0.0);
  }
  CertifyResult r = certify(t, DescentCertificate{2.0, 1.0, Direction::forward}, 0.0);
  EXPECT_TRUE(r.pass);
  EXPECT_EQ(r.worst_slack, 0.0);
}

TEST(Certify, RgdOnQuadraticAndDoubledConstant) {
  auto q = Quadratic::create(1, Vec::Zero(1));
  const Point x0 = q->manifold().point(Vec::Ones(1));
  const DomainSpec dom = make_domain(q->manifold(), x0, 2.0);
  IterateTrace t = run_descent(GradientDescent(1.0, 1.0), *q, x0, 5, dom);
  EXPECT_TRUE(certify(t, DescentCertificate{2.0, 0.5, Direction::backward}, 1e-9).pass);
  // The first step drops f by exactly ½‖grad f(x₀)‖², so c = 1/L overshoots by ½.
  CertifyResult doubled = certify(t, DescentCertificate{2.0, 1.0, Direction::backward}, 1e-9);
  EXPECT_FALSE(doubled.pass);
  EXPECT_NEAR(doubled.worst_slack, 0.5, 1e-15);
  EXPECT_EQ(doubled.worst_step, 0);
}

TEST(RateBounds, GConvexSubstitutions) {
  const double L = 3.0, diam = 1.7;
  EXPECT_NEAR(rate_bound_gconvex(2, 1 / (2 * L), diam, 4, Direction::backward), 2 * L * diam * diam / 4, 1e-14);
  EXPECT_NEAR(rate_bound_gconvex(2, 0.3, diam, 4, Direction::forward), 2 * diam * diam / (0.3 * 4), 1e-13);
  const double rho = 2.0;
  const double c = 1.0 / (12.0 * std::sqrt(2.0) * std::sqrt(rho));
  EXPECT_NEAR(rate_bound_gconvex(3, c, diam, 5, Direction::forward), 36.0 * 288.0 * rho * std::pow(diam, 3) / 25.0,
              1e-9);
  RateConstants rc = rate_constants(2.5, 0.2);
  EXPECT_LE(rc.C_bwd, rc.C_fwd);
  EXPECT_GT(rc.C_bwd, 0.0);
}

TEST(RateBounds, NonconvexAndGradientDominated) {
  EXPECT_EQ(rate_bound_nonconvex(0.5, 2, 0.0, 3), 0.0);
  EXPECT_NEAR(rate_bound_nonconvex(0.5, 2, 3.0, 4), std::sqrt(3.0 / 2.0), 1e-15);
  EXPECT_EQ(rate_bound_graddom(0.25, 0.5, 0, Direction::backward, 7.0), 7.0);
  EXPECT_NEAR(rate_bound_graddom(0.25, 0.5, 2, Direction::backward, 7.0), 0.25 * 7.0, 1e-15);
  EXPECT_NEAR(rate_bound_graddom(0.25, 0.5, 2, Direction::forward, 1.0), 1.0 / 2.25, 1e-15);
  EXPECT_THROW(rate_bound_graddom(0.6, 0.5, 2, Direction::backward, 1.0), std::invalid_argument);
}

TEST(RunDescent, ZeroStepsAndOneStepConvergence) {
  auto q = Quadratic::create(2, v2(0, 0));
  Point x0 = q->manifold().point(v2(3, 4));
  DomainSpec dom = make_domain(q->manifold(), q->solution()->x_star, 5.0);
  IterateTrace t0 = run_descent(GradientDescent(1.0, 1.0), *q, x0, 0, dom);
  EXPECT_EQ(t0.size(), 1u);
  IterateTrace t1 = run_descent(GradientDescent(1.0, 1.0), *q, x0, 10, dom, RunOptions{1e-12, {}});
  EXPECT_EQ(t1.size(), 2u);
  EXPECT_EQ(t1.values.back(), 0.0);
}

TEST(RunDescent, FrechetMeanConverges) {
  auto m = make_hyperboloid(2);
  auto f = FrechetMean::random(m, origin(*m), 1.0, 10, 1.2, 99);
  IterateTrace t = run_descent(GradientDescent(1.0 / *f->metadata().L, *f->metadata().L), *f, origin(*m), 200,
                               *f->metadata().domain);
  EXPECT_LT(t.grad_norms.back(), 1e-6);
  EXPECT_FALSE(t.domain_exit);
  EXPECT_EQ(t.per_step_violation.size(), 200u);
}

TEST(RunDescent, RecordsDomainExit) {
  auto q = Quadratic::create(1, Vec::Zero(1));
  Point x0 = q->manifold().point(Vec::Ones(1));
  DomainSpec dom = make_domain(q->manifold(), x0, 0.5);
  IterateTrace t = run_descent(GradientDescent(0.9, 1.0), *q, x0, 3, dom);
  ASSERT_TRUE(t.domain_exit);
  EXPECT_EQ(*t.domain_exit, 1);
  EXPECT_EQ(t.size(), 4u);
}

TEST(RunDescent, CallbackSeesEveryIterate) {
  auto q = Quadratic::create(2, v2(0, 0));
  Point x0 = q->manifold().point(v2(3, 4));
  std::vector<std::size_t> seen;
  RunOptions opts;
  opts.on_iterate = [&](const IterateTrace& t) { seen.push_back(t.size()); };
  run_descent(GradientDescent(0.5, 1.0), *q, x0, 4, make_domain(q->manifold(), x0, 10.0), opts);
  EXPECT_EQ(seen, (std::vector<std::size_t>{1, 2, 3, 4, 5}));
}

TEST(Properties, MethodsPassTheirCertificates) {
  auto h = make_hyperboloid(2);
  auto fm = FrechetMean::random(h, origin(*h), 1.0, 8, 1.5, 3);
  HyperbolicSetup s;
  std::vector<ObjectivePtr> objs = {fm, s.f, Quadratic::create(2, v2(1, 2), v2(0.3, 2.0))};
  for (const auto& f : objs) {
    const auto& meta = f->metadata();
    const DomainSpec dom = meta.domain ? *meta.domain : make_domain(f->manifold(), f->solution()->x_star, 4.0);
    const Point x0 = f->name() == "quadratic" ? f->manifold().point(v2(-1, 0)) : origin(f->manifold());
    const double rho = std::max(*meta.rho, 1e-3);
    std::vector<std::shared_ptr<const DescentMethod>> methods = {
        std::make_shared<GradientDescent>(1.0 / *meta.L, *meta.L), std::make_shared<ProximalPoint>(1.0),
        std::make_shared<CubicNewton>(CubicNewton::with_defaults(rho))};
    for (const auto& method : methods) {
      IterateTrace t = run_descent(*method, *f, x0, 60, dom);
      CertifyResult r = certify(t, method->certificate(), default_tolerance(t.values[0]));
      EXPECT_TRUE(r.pass) << f->name() << " " << method->name() << " worst " << r.worst_slack;
      for (double res : t.prox_residuals) EXPECT_LE(res, 1e-9);
      for (const CubicCheck& c : t.cubic_checks) {
        EXPECT_TRUE(c.accepted()) << f->name() << " dm " << c.model_change << " |grad m| " << c.model_grad_norm
                                  << " theta|s|^2 " << c.theta_bound;
      }
    }
  }
}

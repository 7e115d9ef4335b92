#include "rdescent/acceleration/diagnostics.hpp"
#include "rdescent/objectives/benchmarks.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace rdescent;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

// Bisection on ξ(ξ − a)/(1 − ξ) − r over [a, 1).
double xi_bisect(double xi_k, double delta, double mu, double c) {
  const double a = 2.0 * mu * c;
  const double r = xi_k * xi_k / delta;
  double lo = a, hi = 1.0 - 1e-15;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (mid * (mid - a) / (1.0 - mid) < r ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct HyperbolicRun {
  ManifoldPtr m = make_hyperboloid(2);
  Point o = origin(*m);
  Point target = m->exp(o, m->tangent(o, v3(0, 0.6, 0.8)));
  DomainSpec dom = make_domain(*m, o, 1.5);
  std::shared_ptr<const SquaredDistance> f = SquaredDistance::create(m, target, dom);
};

}  // namespace

TEST(Schedule, GConvexExamples) {
  for (double c : {0.1, 1.0, 7.0}) {
    ScheduleStep s = schedule_gconvex(1, 1.0, 4.0 / c, 1.0, 1.0, c);
    EXPECT_DOUBLE_EQ(s.next.A, 3.0);
    EXPECT_DOUBLE_EQ(s.next.A_bar, 2.0);
    EXPECT_DOUBLE_EQ(s.next.B, 4.0 / c);
    EXPECT_NEAR(s.params.tau, 0.8, 1e-15);
    EXPECT_EQ(s.params.alpha, 0.0);
    EXPECT_NEAR(s.params.beta, (4.0 / c) / 2.0, 1e-14);
  }
  const ScheduleState init = gconvex_initial(0.5);
  ScheduleStep first = schedule_gconvex(0, init.A, init.B, init.delta, 1.7, 0.5);
  EXPECT_EQ(first.params.tau, 1.0);
  EXPECT_DOUBLE_EQ(first.next.A, 1.0);
}

TEST(Schedule, GConvexUsesBothDistortions) {
  const double c = 0.25, B = 4.0 / c;
  ScheduleStep s = schedule_gconvex(3, 6.0, B, 1.5, 2.0, c);
  const double Abar = 10.0 - 6.0;
  EXPECT_NEAR(s.params.tau, 2.0 * Abar * B / (6.0 * 2.0 * B + 2.0 * B * Abar), 1e-15);
  EXPECT_NEAR(s.params.alpha, (B - B / 1.5) / Abar, 1e-15);
  EXPECT_NEAR(s.params.beta, (B / 2.0) / Abar, 1e-15);
  EXPECT_THROW(schedule_gconvex(1, 3.0, B, 1.0, 1.0, c), std::invalid_argument);
  EXPECT_THROW(schedule_gconvex(1, 1.0, B, 0.9, 1.0, c), std::invalid_argument);
}

TEST(Schedule, XiSolveExamples) {
  EXPECT_NEAR(xi_solve(0.4, 1.0, 1.0, 0.08), 0.4, 1e-15);
  EXPECT_NEAR(xi_solve(0.4, 1e12, 1.0, 0.08), 0.16, 1e-6);
  EXPECT_NEAR(xi_solve(0.4, 2.0, 1.0, 0.08), (0.08 + std::sqrt(0.3264)) / 2.0, 1e-15);
  EXPECT_NEAR(xi_solve(0.4, 2.0, 1.0, 0.08), xi_bisect(0.4, 2.0, 1.0, 0.08), 1e-14);
  EXPECT_THROW(xi_solve(0.1, 1.0, 1.0, 0.08), std::invalid_argument);
  EXPECT_THROW(xi_solve(0.4, 0.5, 1.0, 0.08), std::invalid_argument);
  EXPECT_THROW(xi_solve(0.4, 1.0, 1.0, 0.6), std::invalid_argument);
}

TEST(Schedule, XiSolveMatchesBisectionAndKeepsBracket) {
  Rng rng(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100000; ++i) {
    const double a = std::pow(10.0, -6.0 * u(rng)) * 0.999;
    const double mu = 0.1 + 10.0 * u(rng);
    const double c = a / (2.0 * mu);
    const double xi_k = a + (1.0 - a) * u(rng) * 0.999;
    const double delta = std::exp(10.0 * u(rng));
    const double xi = xi_solve(xi_k, delta, mu, c);
    ASSERT_GE(xi, a);
    ASSERT_LT(xi, 1.0);
    if (xi_k <= std::sqrt(a)) {
      ASSERT_LE(xi, std::sqrt(a) * (1.0 + 1e-14));
    }
    if (i % 100 == 0) {
      ASSERT_NEAR(xi, xi_bisect(xi_k, delta, mu, c), 1e-12 * (1.0 + xi));
    }
  }
}

TEST(Schedule, XiIncreasesToFullAcceleration) {
  const double mu = 1.0, c = 0.08, a = 0.16, target = 0.4;
  double xi = a + 1e-3;
  int hit = -1;
  for (int k = 1; k <= 200; ++k) {
    const double next = xi_solve(xi, 1.0, mu, c);
    if (target - xi > 1e-12) {
      EXPECT_GT(next, xi);
    }
    EXPECT_GE(next, xi);
    EXPECT_LE(next, target + 1e-15);
    xi = next;
    if (hit < 0 && std::abs(xi - target) <= 1e-6) hit = k;
  }
  EXPECT_GT(hit, 0);
  EXPECT_LE(hit, 200);
}

TEST(Schedule, StronglyExamples) {
  ScheduleStep s = schedule_strongly(0.4, 1.0, 1.0, 0.08);
  EXPECT_NEAR(s.params.tau, 0.24 / 0.84, 1e-15);
  EXPECT_EQ(s.params.alpha, 1.0);
  EXPECT_NEAR(s.params.beta, 1.5, 1e-14);
  EXPECT_NEAR(s.next.A, 1.0 / 0.6, 1e-15);
  EXPECT_NEAR(s.next.B, (0.16 / 0.6) / 0.32, 1e-15);
  EXPECT_THROW(schedule_strongly(0.16, 1.0, 1.0, 0.08), std::invalid_argument);
  EXPECT_THROW(schedule_strongly(0.9, 1.0, 1.0, 0.5), std::invalid_argument);
  // B_{k+1} = ξ²A_{k+1}/(4c): the energy weights keep the same ratio as at k = 0.
  const ScheduleState init = strongly_initial(0.4, 0.08);
  EXPECT_NEAR(init.B, 0.4 * 0.4 * init.A / (4.0 * 0.08), 1e-15);
  EXPECT_NEAR(s.next.B, 0.4 * 0.4 * s.next.A / (4.0 * 0.08), 1e-15);
}

TEST(Schedule, AcceleratedBoundExamples) {
  EXPECT_DOUBLE_EQ(accelerated_gconvex_bound(3.0, 0.1, 2.0, 1.0, 7), 3.0 / 49.0);
  EXPECT_DOUBLE_EQ(accelerated_gconvex_bound(1.0, 1.0, 0.0, 1.0, 1), 1.0);
  EXPECT_NEAR(accelerated_gconvex_bound(5.0, 0.1, 2.0, 2.0, 10), 8.05, 1e-13);
  EXPECT_THROW(accelerated_gconvex_bound(1.0, 1.0, 1.0, 1.0, 0), std::invalid_argument);
}

TEST(Distortion, ComparisonFunctions) {
  EXPECT_EQ(distortion_comparison(1.0, 0.0), 1.0);
  EXPECT_NEAR(distortion_comparison(1.0, 1.0), std::pow(std::sinh(1.0), 2), 1e-15);
  EXPECT_NEAR(distortion_comparison(1.0, 1.0), 1.381098, 1e-6);
  EXPECT_NEAR(distortion_comparison(4.0, 1e-5), 1.0 + 4e-10 / 3.0, 1e-16);
  EXPECT_NEAR(coth_comparison(1.0, 1.0), 1.313035, 1e-6);
  EXPECT_EQ(coth_comparison(1.0, 0.0), 1.0);
  auto e = make_euclidean(3);
  Point p = e->point(v3(1, 2, 3)), q = e->point(v3(-1, 0, 4));
  EXPECT_EQ(distortion_rate(*e, p, q, p, DistortionMode::analytic), 1.0);
  auto s = make_sphere(2);
  EXPECT_THROW(distortion_rate(*s, origin(*s), origin(*s), origin(*s), DistortionMode::analytic),
               std::invalid_argument);
  EXPECT_THROW(distortion_rate(*e, p, q, p, DistortionMode::oracle), std::invalid_argument);
}

// With z at distance 1 from x and x* close to z in nearly the same direction,
// the ratio approaches sinh(1)², above the coth comparison value.
TEST(Distortion, CothComparisonIsNotValid) {
  auto m = make_hyperboloid(2);
  const Point x = origin(*m);
  const Point z = m->exp(x, m->tangent(x, v3(0, 1, 0)));
  const double th = 1e-3;
  const Point star = m->exp(x, m->tangent(x, v3(0, std::cos(th), std::sin(th))));
  const double ratio = distortion_ratio(*m, x, z, z, star);
  EXPECT_GT(ratio, coth_comparison(1.0, 1.0) + 0.05);
  EXPECT_LE(ratio, distortion_comparison(1.0, 1.0));
  EXPECT_NEAR(ratio, distortion_comparison(1.0, 1.0), 1e-5);
}

TEST(Distortion, AnalyticRateIsValidOnRandomConfigurations) {
  Rng rng(21);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (double kappa : {1.0, 0.25, 4.0}) {
    auto m = make_hyperboloid(2, kappa);
    const Point o = origin(*m);
    int violations = 0;
    for (int i = 0; i < 10000; ++i) {
      const Point xp = random_point_in_ball(*m, o, 2.0, rng);
      const Point zp = m->exp(xp, random_tangent(*m, xp, u(rng), rng));
      const Point xn = random_point_in_ball(*m, xp, 3.0, rng);
      const Point star = random_point_in_ball(*m, xp, 3.0 * u(rng), rng);
      const double delta = distortion_rate(*m, xp, zp, xn, DistortionMode::analytic);
      const double lhs = std::pow(projected_distance(*m, xn, zp, star), 2);
      const double rhs = delta * std::pow(projected_distance(*m, xp, zp, star), 2);
      if (lhs > rhs + 1e-10) ++violations;
    }
    EXPECT_EQ(violations, 0) << kappa;
  }
}

TEST(AccelStep, InterpolationEndpoints) {
  auto m = make_hyperboloid(2);
  const Point y = origin(*m);
  const Point z = m->exp(y, m->tangent(y, v3(0, 0.3, -0.4)));
  EXPECT_EQ(accel_interpolate(*m, y, z, 1.0).coords, z.coords);
  EXPECT_EQ(accel_interpolate(*m, y, z, 0.0).coords, y.coords);
  EXPECT_LT(m->distance(accel_interpolate(*m, y, z, 1e-12), y), 1e-12);
}

TEST(AccelStep, EuclideanDualStep) {
  auto q = Quadratic::create(2, v2(1, -2), v2(0.5, 2));
  const Manifold& m = q->manifold();
  AccelState s{m.point(v2(0, 0)), m.point(v2(3, 1)), m.point(v2(-1, 4)), 0};
  const AccelParams p{0.3, 0.0, 2.5};
  AccelStepResult r = accel_step(*q, s, p, gradient_oracle(0.25, 2.0));
  const Vec x1 = s.y.coords + 0.3 * (s.z.coords - s.y.coords);
  EXPECT_LT((r.state.x.coords - x1).norm(), 1e-15);
  const Vec g = q->gradient(r.state.x).coords;
  EXPECT_LT((r.state.z.coords - (s.z.coords - g / 2.5)).norm(), 1e-14);
  EXPECT_LT((r.state.y.coords - (x1 - 0.25 * g)).norm(), 1e-15);
  EXPECT_EQ(r.state.k, 1);
}

TEST(AccelStep, UpdateIsExactInTangentSpace) {
  HyperbolicRun h;
  Rng rng(5);
  const DescentOracle oracle = gradient_oracle(0.3, *h.f->metadata().L);
  for (int i = 0; i < 200; ++i) {
    AccelState s{h.o, random_point_in_ball(*h.m, h.o, 1.0, rng), random_point_in_ball(*h.m, h.o, 1.0, rng), 0};
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const AccelParams p{u(rng), 2.0 * u(rng), 0.1 + 3.0 * u(rng)};
    AccelStepResult r = accel_step(*h.f, s, p, oracle);
    const Point& x1 = r.state.x;
    const Tangent res = (p.alpha + p.beta) * h.m->log(x1, r.state.z) + h.f->gradient(x1) - p.beta * h.m->log(x1, s.z);
    EXPECT_LT(h.m->norm(x1, res), 1e-9);
    EXPECT_LE(r.oracle_slack, 0.0);
  }
}

TEST(AccelStep, RejectsOracleWithoutDescent) {
  HyperbolicRun h;
  const DescentOracle lazy{"identity", 0.1, [](const Objective&, const Point& x) { return x; }};
  AccelState s{h.o, h.o, h.o, 0};
  EXPECT_THROW(accel_step(*h.f, s, AccelParams{1.0, 0.0, 1.0}, lazy), OracleViolation);
  EXPECT_THROW(accel_step(*h.f, s, AccelParams{1.0, 0.0, 0.0}, gradient_oracle(0.1, 1.0)), std::invalid_argument);
}

TEST(Energy, Examples) {
  auto q = Quadratic::create(2, v2(1, 1));
  const Manifold& m = q->manifold();
  const Point star = q->solution()->x_star;
  EnergyRecord zero = energy(3.0, 5.0, *q, AccelState{star, star, star, 0}, star, 0.0);
  EXPECT_EQ(zero.E, 0.0);
  const Point z = m.point(v2(2, 3));
  for (const Vec& x : {v2(0, 0), v2(-4, 7)}) {
    EnergyRecord e = energy(1.0, 1.0, *q, AccelState{m.point(x), m.point(v2(2, 1)), z, 0}, star, 0.0);
    EXPECT_NEAR(e.dist_term, 5.0, 1e-13);
    EXPECT_NEAR(e.f_gap, 0.5, 1e-15);
    EXPECT_NEAR(e.E, 5.5, 1e-13);
  }
}

TEST(Run, ZeroIterationsGivesInitialEnergy) {
  HyperbolicRun h;
  AccelTrace t = run_accelerated(*h.f, h.o, 0, gradient_oracle(0.2, *h.f->metadata().L), h.dom);
  ASSERT_EQ(t.size(), 1u);
  ASSERT_EQ(t.energy.size(), 1u);
  EXPECT_EQ(t.energy[0].f_gap, h.f->value(h.o));
  EXPECT_NEAR(t.energy[0].E, 0.0 * t.energy[0].f_gap + t.schedule[0].B * 1.0, 1e-12);
}

TEST(Run, EuclideanQuadraticInverseSquareRate) {
  const int n = 20;
  Vec w(n);
  for (int i = 0; i < n; ++i) w[i] = std::pow(10.0, -6.0 * i / (n - 1));
  auto q = Quadratic::create(n, Vec::Ones(n), w);
  const Point x0 = q->manifold().point(Vec::Zero(n));
  AccelTrace t = run_accelerated(*q, x0, 300, gradient_oracle(1.0, 1.0), make_domain(q->manifold(), x0, 10.0));
  for (std::size_t k = 1; k < t.size(); ++k) {
    EXPECT_EQ(t.schedule[k].delta, 1.0);
    const double kk = static_cast<double>(k);
    EXPECT_LE(t.energy[k].f_gap, t.energy[0].E / (kk * kk));
  }
}

TEST(Run, StronglyConvexProductBound) {
  HyperbolicRun h;
  const DescentOracle oracle = gradient_oracle(1.0 / *h.f->metadata().L, *h.f->metadata().L);
  AccelOptions opts;
  opts.mode = AccelMode::strongly;
  AccelTrace t = run_accelerated(*h.f, h.o, 200, oracle, h.dom, opts);
  const double E0 = t.energy[0].E;
  EXPECT_NEAR(E0, h.f->value(h.o) + std::pow(*t.schedule[0].xi, 2) / (4.0 * oracle.c) * 1.0, 1e-12);
  double product = 1.0;
  for (std::size_t k = 1; k < t.size(); ++k) {
    product *= 1.0 - *t.schedule[k].xi;
    EXPECT_LE(t.energy[k].f_gap, product * E0 + 1e-15);
    EXPECT_GE(t.schedule[k].delta, 1.0);
  }
  EXPECT_FALSE(t.domain_exit.has_value());
}

TEST(Run, OracleDistortionEnergyStepBound) {
  HyperbolicRun h;
  auto fm = FrechetMean::random(h.m, h.o, 1.0, 6, 1.5, 3);
  const double L = *fm->metadata().L;
  const DescentOracle oracle = gradient_oracle(1.0 / L, L);
  AccelOptions opts;
  opts.delta_mode = DistortionMode::oracle;
  AccelTrace t = run_accelerated(*fm, h.o, 150, oracle, h.dom, opts);
  EXPECT_TRUE(t.diagnostic());
  const double diam = h.dom.diameter();
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double d1 = t.schedule[k + 1].delta;
    const double change = t.energy[k + 1].E - t.energy[k].E;
    EXPECT_LE(change, (4.0 / oracle.c) * (1.0 - 1.0 / d1) * diam * diam + 1e-9 * (1.0 + t.energy[k].E)) << k;
    // The realized ratio at the chosen x_{k+1} is covered by δ_{k+1}.
    const double ratio = distortion_ratio(*h.m, t.xs[k], t.zs[k], t.xs[k + 1], fm->solution()->x_star);
    EXPECT_LE(ratio, d1 * (1.0 + 1e-12));
  }
}

TEST(Run, ProximalOracleKeepsContract) {
  HyperbolicRun h;
  const double L = *h.f->metadata().L;
  const DescentOracle oracle = proximal_oracle(0.5, L);
  EXPECT_NEAR(oracle.c, 0.5 / std::pow(1.0 + 0.5 * L, 2), 1e-15);
  AccelOptions opts;
  opts.mode = AccelMode::strongly;
  AccelTrace t = run_accelerated(*h.f, h.o, 60, oracle, h.dom, opts);
  for (double s : t.oracle_slack) EXPECT_LE(s, 1e-9);
  EXPECT_LT(t.energy.back().f_gap, 1e-10);
}

TEST(Run, RejectsInconsistentSetup) {
  HyperbolicRun h;
  AccelOptions opts;
  opts.mode = AccelMode::strongly;
  opts.xi0 = 0.99;
  EXPECT_THROW(run_accelerated(*h.f, h.o, 5, gradient_oracle(0.2, 2.0), h.dom, opts), std::invalid_argument);
  opts.xi0.reset();
  opts.mu = 0.0;
  EXPECT_THROW(run_accelerated(*h.f, h.o, 5, gradient_oracle(0.2, 2.0), h.dom, opts), std::invalid_argument);
}

TEST(Diagnostics, ShrinkAndXiReports) {
  HyperbolicRun h;
  const double L = *h.f->metadata().L;
  const DescentOracle oracle = gradient_oracle(0.18 / L, L);
  AccelOptions opts;
  opts.mode = AccelMode::strongly;
  AccelTrace t = run_accelerated(*h.f, h.o, 200, oracle, h.dom, opts);
  const auto rows = shrink_diagnostics(*h.m, t, h.target, shrink_reference(t));
  ASSERT_EQ(rows.size(), t.size());
  EXPECT_EQ(rows[0].d_xz, 0.0);
  for (const ShrinkRow& r : rows) EXPECT_LE(r.d_y_star, r.envelope_y + 1e-12) << r.k;

  const auto xi = xi_sequence(t);
  XiConvergence rep = xi_convergence_report(xi, t.mu, oracle.c, 1e-3);
  ASSERT_TRUE(rep.first_k.has_value());
  EXPECT_EQ(*rep.first_k, 0);

  std::vector<double> flat(50, std::sqrt(0.16));
  EXPECT_EQ(*xi_convergence_report(flat, 1.0, 0.08, 1e-12).first_k, 0);
  std::vector<double> rising{0.161};
  for (int k = 0; k < 60; ++k) rising.push_back(xi_solve(rising.back(), 1.0, 1.0, 0.08));
  XiConvergence up = xi_convergence_report(rising, 1.0, 0.08, 1e-3);
  ASSERT_TRUE(up.first_k.has_value());
  EXPECT_GT(*up.first_k, 0);
  EXPECT_LT(up.slope, 0.0);
}

TEST(Diagnostics, LeastSquaresRecoversLine) {
  std::vector<double> x{1, 2, 3, 4}, y{1, 3, 5, 7};
  LinearFit f = least_squares(x, y);
  EXPECT_NEAR(f.slope, 2.0, 1e-15);
  EXPECT_NEAR(f.intercept, -1.0, 1e-14);
  EXPECT_NEAR(f.r2, 1.0, 1e-15);
  EXPECT_THROW(least_squares({1.0}, {2.0}), std::invalid_argument);
}

TEST(ConjugateBound, ZeroAndEqualityCases) {
  const Vec u = v3(0.5, -1.0, 2.0);
  EXPECT_TRUE(conjugate_bound_check(Vec::Zero(3), u, 1.7, 2.5).holds);
  for (double q : {1.5, 2.0, 3.0, 4.0}) {
    for (double alpha : {-2.0, 0.3, 1.0}) {
      const double r = std::pow(std::abs(alpha) * u.norm(), 1.0 / (q - 1.0));
      const Vec s = (alpha > 0 ? 1.0 : -1.0) * r * u.normalized();
      ConjugateCheck c = conjugate_bound_check(s, u, alpha, q);
      EXPECT_TRUE(c.holds);
      EXPECT_NEAR(c.lhs, c.rhs, 1e-10 * (1.0 + c.rhs)) << q << " " << alpha;
    }
  }
  EXPECT_THROW(conjugate_bound_check(u, u, 1.0, 1.0), std::invalid_argument);
}

TEST(ConjugateBound, RandomSamples) {
  Rng rng(99);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> g;
  int failures = 0;
  for (int i = 0; i < 100000; ++i) {
    const int n = 1 + i % 6;
    Vec s(n), w(n);
    for (int j = 0; j < n; ++j) {
      s[j] = 3.0 * g(rng);
      w[j] = 3.0 * g(rng);
    }
    if (!conjugate_bound_check(s, w, 4.0 * g(rng), 1.5 + 2.5 * u(rng)).holds) ++failures;
  }
  EXPECT_EQ(failures, 0);
}

#include "rdescent/geometry/domain.hpp"
#include "rdescent/geometry/spaces.hpp"
#include "support/ode_oracle.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace rdescent;

namespace {

Vec v2(double a, double b) { return (Vec(2) << a, b).finished(); }
Vec v3(double a, double b, double c) { return (Vec(3) << a, b, c).finished(); }

void expect_vec_near(const Vec& a, const Vec& b, double tol) {
  ASSERT_EQ(a.size(), b.size());
  EXPECT_LE((a - b).lpNorm<Eigen::Infinity>(), tol) << "got " << a.transpose() << " want " << b.transpose();
}

std::vector<ManifoldPtr> all_manifolds() {
  return {make_euclidean(3), make_sphere(2), make_sphere(3, 2.5), make_hyperboloid(2), make_hyperboloid(3, 0.5)};
}

}  // namespace

TEST(Euclidean, ExpLogAreAdditionAndSubtraction) {
  auto m = make_euclidean(2);
  Point x = m->point(v2(1, 2));
  Point y = m->exp(x, m->tangent(x, v2(0.5, -1)));
  expect_vec_near(y.coords, v2(1.5, 1), 0);
  expect_vec_near(m->log(x, y).coords, v2(0.5, -1), 0);
  Point z = m->point(v2(-3, 7));
  Tangent w = m->tangent(x, v2(4, 5));
  expect_vec_near(m->transport(x, z, w).coords, w.coords, 0);
}

TEST(Euclidean, StandardBasis) {
  auto m = make_euclidean(2);
  auto b = m->orthonormal_basis(m->point(v2(3, -1)));
  ASSERT_EQ(b.size(), 2u);
  expect_vec_near(b[0].coords, v2(1, 0), 0);
  expect_vec_near(b[1].coords, v2(0, 1), 0);
}

TEST(Sphere, QuarterTurnExp) {
  auto m = make_sphere(2);
  Point x = m->point(v3(0, 0, 1));
  Point y = m->exp(x, m->tangent(x, v3(std::numbers::pi / 2, 0, 0)));
  expect_vec_near(y.coords, v3(1, 0, 0), 1e-15);
  EXPECT_NEAR(m->distance(x, y), std::numbers::pi / 2, 1e-15);
}

TEST(Sphere, TransportOrthogonalToPlaneIsInvariant) {
  auto m = make_sphere(2);
  Point x = m->point(v3(0, 0, 1));
  Point y = m->point(v3(1, 0, 0));
  expect_vec_near(m->transport(x, y, m->tangent(x, v3(0, 1, 0))).coords, v3(0, 1, 0), 1e-15);
}

TEST(Sphere, BasisAtNorthPole) {
  auto m = make_sphere(2);
  auto b = m->orthonormal_basis(m->point(v3(0, 0, 1)));
  ASSERT_EQ(b.size(), 2u);
  expect_vec_near(b[0].coords, v3(1, 0, 0), 1e-15);
  expect_vec_near(b[1].coords, v3(0, 1, 0), 1e-15);
}

TEST(Sphere, AntipodalLogRejected) {
  auto m = make_sphere(2);
  Point x = m->point(v3(0, 0, 1));
  Point y = m->point(v3(0, 0, -1));
  EXPECT_THROW(m->log(x, y), AntipodalPoints);
  EXPECT_THROW(m->transport(x, y, m->zero(x)), AntipodalPoints);
  Point near = m->project(v3(1e-3, 0, -1));
  EXPECT_NO_THROW(m->log(x, near));
}

TEST(Hyperboloid, UnitGeodesic) {
  auto m = make_hyperboloid(2);
  Point x = m->point(v3(1, 0, 0));
  Point y = m->exp(x, m->tangent(x, v3(0, 1, 0)));
  expect_vec_near(y.coords, v3(std::cosh(1.0), std::sinh(1.0), 0), 1e-14);
  expect_vec_near(m->log(x, y).coords, v3(0, 1, 0), 1e-14);
  EXPECT_NEAR(m->distance(x, y), 1.0, 1e-14);
  EXPECT_NEAR(m->distance(x, y), std::acosh(-Hyperboloid::minkowski(x.coords, y.coords)), 1e-12);
}

TEST(Hyperboloid, OrthogonalTransportAndInner) {
  auto m = make_hyperboloid(2);
  Point x = m->point(v3(1, 0, 0));
  Point y = m->point(v3(std::cosh(1.0), std::sinh(1.0), 0));
  expect_vec_near(m->transport(x, y, m->tangent(x, v3(0, 0, 1))).coords, v3(0, 0, 1), 1e-15);
  EXPECT_EQ(m->inner(x, m->tangent(x, v3(0, 1, 0)), m->tangent(x, v3(0, 0, 1))), 0.0);
  EXPECT_EQ(m->norm(x, m->zero(x)), 0.0);
}

TEST(Hyperboloid, ProjectedDistanceContracts) {
  auto m = make_hyperboloid(2);
  const double c = std::cosh(1.0), s = std::sinh(1.0);
  Point x = m->point(v3(1, 0, 0));
  Point w = m->point(v3(c, s, 0));
  Point v = m->point(v3(c, 0, s));
  EXPECT_NEAR(projected_distance(*m, x, w, v), std::sqrt(2.0), 1e-14);
  EXPECT_NEAR(m->distance(w, v), std::acosh(c * c), 1e-12);
  EXPECT_NEAR(m->distance(w, v), 1.513374, 1e-6);
  EXPECT_GT(m->distance(w, v), std::sqrt(2.0));
  EXPECT_EQ(projected_distance(*m, x, w, w), 0.0);
  EXPECT_NEAR(projected_distance(*m, x, w, x), m->distance(x, w), 1e-14);
}

TEST(Hyperboloid, CurvatureScaling) {
  auto m = make_hyperboloid(2, 4.0);
  Point o = origin(*m);
  EXPECT_NEAR(Hyperboloid::minkowski(o.coords, o.coords), -0.25, 1e-15);
  Point y = m->exp(o, m->tangent(o, v3(0, 0.7, 0)));
  EXPECT_NEAR(m->distance(o, y), 0.7, 1e-14);
  EXPECT_TRUE(m->curvature().is_hadamard);
  EXPECT_EQ(m->curvature().upper, -4.0);
}

TEST(Validation, RejectsForeignAndInvalidInputs) {
  auto s = make_sphere(2);
  auto h = make_hyperboloid(2);
  EXPECT_THROW(s->point(v3(0, 0, 2)), InvalidPoint);
  EXPECT_THROW(h->point(v3(-1, 0, 0)), InvalidPoint);
  EXPECT_THROW(s->tangent(s->point(v3(0, 0, 1)), v3(0, 0, 1)), InvalidPoint);
  Point sx = s->point(v3(0, 0, 1));
  Point hx = h->point(v3(1, 0, 0));
  EXPECT_THROW(s->distance(sx, hx), ManifoldMismatch);
  Point sy = s->point(v3(1, 0, 0));
  EXPECT_THROW(s->exp(sy, s->tangent(sx, v3(1, 0, 0))), BaseMismatch);
  Vec bad = v3(0, 0, 1);
  bad[0] = std::nan("");
  EXPECT_THROW(s->point(bad), NonFiniteCoordinates);
  EXPECT_THROW(s->tangent(sx, v3(1, 0, 0)) + s->tangent(sy, v3(0, 1, 0)), BaseMismatch);
}

TEST(Domain, BallMembership) {
  auto m = make_euclidean(2);
  DomainSpec dom = make_domain(*m, m->point(v2(0, 0)), 1.0);
  EXPECT_TRUE(in_domain(*m, dom, dom.center));
  EXPECT_TRUE(in_domain(*m, dom, m->point(v2(1, 0))));
  EXPECT_FALSE(in_domain(*m, dom, m->point(v2(2, 0))));
  EXPECT_DOUBLE_EQ(dom.diameter(), 2.0);
  auto s = make_sphere(2);
  EXPECT_THROW(make_domain(*s, origin(*s), 2.0), std::invalid_argument);
  EXPECT_NO_THROW(make_domain(*s, origin(*s), 1.5));
}

TEST(Properties, LogIsZeroAtBase) {
  for (const auto& m : all_manifolds()) {
    Rng rng(1);
    Point x = random_point_in_ball(*m, origin(*m), 1.0, rng);
    EXPECT_EQ(m->norm(x, m->log(x, x)), 0.0) << describe(m->tag());
    EXPECT_EQ(m->distance(x, x), 0.0);
  }
}

TEST(Properties, ExpLogInversionAndDistanceConsistency) {
  for (const auto& m : all_manifolds()) {
    Rng rng(7);
    const double reach = std::min(3.0, 0.9 * m->injectivity_radius());
    for (int i = 0; i < 300; ++i) {
      Point x = random_point_in_ball(*m, origin(*m), 2.0, rng);
      std::uniform_real_distribution<double> len(0.0, reach);
      Tangent v = random_tangent(*m, x, len(rng), rng);
      Point y = m->exp(x, v);
      ASSERT_TRUE(m->on_manifold(y.coords));
      Tangent back = m->log(x, y);
      EXPECT_LT(m->norm(x, back - v), 1e-8) << describe(m->tag());
      EXPECT_LT(std::abs(m->distance(x, y) - m->norm(x, back)), 1e-8);
      EXPECT_LT(std::abs(m->distance(x, y) - m->norm(x, v)), 1e-8);
    }
  }
}

TEST(Properties, DistanceIsAMetric) {
  for (const auto& m : all_manifolds()) {
    Rng rng(11);
    for (int i = 0; i < 200; ++i) {
      Point a = random_point_in_ball(*m, origin(*m), 1.5, rng);
      Point b = random_point_in_ball(*m, origin(*m), 1.5, rng);
      Point c = random_point_in_ball(*m, origin(*m), 1.5, rng);
      EXPECT_NEAR(m->distance(a, b), m->distance(b, a), 1e-12);
      EXPECT_GE(m->distance(a, b), 0.0);
      EXPECT_LE(m->distance(a, c), m->distance(a, b) + m->distance(b, c) + 1e-12);
    }
  }
}

TEST(Properties, TransportIsAnIsometry) {
  for (const auto& m : all_manifolds()) {
    Rng rng(3);
    for (int i = 0; i < 300; ++i) {
      Point x = random_point_in_ball(*m, origin(*m), 1.5, rng);
      Point y = random_point_in_ball(*m, origin(*m), 1.5, rng);
      Tangent v = random_tangent(*m, x, 1.7, rng);
      Tangent w = random_tangent(*m, x, 0.4, rng);
      Tangent tv = m->transport(x, y, v);
      Tangent tw = m->transport(x, y, w);
      ASSERT_TRUE(m->is_tangent(y.coords, tv.coords));
      EXPECT_LT(std::abs(m->norm(y, tv) - m->norm(x, v)), 1e-10) << describe(m->tag());
      EXPECT_LT(std::abs(m->inner(y, tv, tw) - m->inner(x, v, w)), 1e-10);
    }
  }
}

TEST(Properties, TransportCarriesLogToNegatedLog) {
  for (const auto& m : all_manifolds()) {
    Rng rng(5);
    Point x = random_point_in_ball(*m, origin(*m), 1.0, rng);
    Point y = random_point_in_ball(*m, origin(*m), 1.0, rng);
    Tangent t = m->transport(x, y, m->log(x, y));
    EXPECT_LT(m->norm(y, t + m->log(y, x)), 1e-12) << describe(m->tag());
  }
}

TEST(Properties, BasisIsOrthonormalAndTangent) {
  for (const auto& m : all_manifolds()) {
    Rng rng(9);
    Point x = random_point_in_ball(*m, origin(*m), 1.0, rng);
    auto b = m->orthonormal_basis(x);
    ASSERT_EQ(static_cast<int>(b.size()), m->dim());
    for (std::size_t i = 0; i < b.size(); ++i) {
      EXPECT_TRUE(m->is_tangent(x.coords, b[i].coords));
      for (std::size_t j = 0; j < b.size(); ++j) {
        EXPECT_NEAR(m->inner(x, b[i], b[j]), i == j ? 1.0 : 0.0, 1e-13);
      }
    }
    auto again = m->orthonormal_basis(x);
    for (std::size_t i = 0; i < b.size(); ++i) EXPECT_EQ(b[i].coords, again[i].coords);
    Tangent v = random_tangent(*m, x, 0.8, rng);
    EXPECT_LT(m->norm(x, from_basis(b, x, to_basis(*m, b, v)) - v), 1e-13);
  }
}

TEST(Properties, ClosedFormsMatchOdeIntegration) {
  for (const auto& m : all_manifolds()) {
    Rng rng(13);
    for (int i = 0; i < 40; ++i) {
      Point x = random_point_in_ball(*m, origin(*m), 1.0, rng);
      std::uniform_real_distribution<double> len(0.0, 2.0);
      Tangent v = random_tangent(*m, x, len(rng), rng);
      Tangent w = random_tangent(*m, x, 1.0, rng);
      auto ode = oracle::integrate_geodesic(m->tag(), x.coords, v.coords, w.coords);
      Point y = m->exp(x, v);
      EXPECT_LT((y.coords - ode.position).norm(), 1e-6) << describe(m->tag());
      EXPECT_LT((m->transport(x, y, w).coords - ode.transported).norm(), 1e-6);
    }
  }
}

TEST(Properties, HadamardProjectedDistanceContracts) {
  auto m = make_hyperboloid(3);
  Rng rng(17);
  for (int i = 0; i < 500; ++i) {
    Point x = random_point_in_ball(*m, origin(*m), 2.0, rng);
    Point w = random_point_in_ball(*m, origin(*m), 2.0, rng);
    Point v = random_point_in_ball(*m, origin(*m), 2.0, rng);
    EXPECT_LE(projected_distance(*m, x, w, v), m->distance(w, v) + 1e-12);
  }
}

TEST(Properties, LongChainsStayOnManifold) {
  for (const auto& m : all_manifolds()) {
    Rng rng(19);
    Point x = origin(*m);
    for (int i = 0; i < 2000; ++i) x = m->exp(x, random_tangent(*m, x, 0.05, rng));
    EXPECT_TRUE(m->on_manifold(x.coords)) << describe(m->tag());
  }
}

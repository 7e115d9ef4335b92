#include "rdescent/descent/methods.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include <cmath>
#include <limits>

namespace rdescent {

// ---------------------------------------------------------------------------
// Gradient step

Point rgd_step_unchecked(const Objective& obj, const Point& x, double eta) {
  return obj.manifold().exp(x, -eta * obj.gradient(x));
}

Point rgd_step(const Objective& obj, const Point& x, double eta) {
  const auto& L = obj.metadata().L;
  if (!(eta > 0.0) || (L && !(eta * *L < 2.0))) {
    throw std::invalid_argument("rgd_step: eta must lie in (0, 2/L)");
  }
  return rgd_step_unchecked(obj, x, eta);
}

DescentCertificate rgd_certificate(double eta, double L) {
  return {2.0, eta * (1.0 - L * eta / 2.0), Direction::backward};
}

// ---------------------------------------------------------------------------
// Proximal step

ProxResult proximal_step(const Objective& obj, const Point& x, double eta, const ProxOptions& opts) {
  if (!(eta > 0.0)) throw std::invalid_argument("proximal_step: eta must be positive");
  const Manifold& m = obj.manifold();

  auto phi = [&](const Point& y) {
    const double d = m.distance(y, x);
    return obj.value(y) + d * d / (2.0 * eta);
  };
  // η·grad φ(y) = η grad f(y) − log(y, x); its norm is the optimality residual.
  auto scaled_grad = [&](const Point& y) { return eta * obj.gradient(y) - m.log(y, x); };

  const auto& L = obj.metadata().L;
  const double t0 = L ? 1.0 / (*L + 1.0 / eta) : eta / (1.0 + eta);
  double t = t0;
  Point y = x;
  double fy = phi(y);
  Tangent G = scaled_grad(y);
  double res = m.norm(y, G);
  Point best = y;
  double best_res = res;
  int since_best = 0;
  int it = 0;
  for (; it < opts.max_inner && res > 1e-3 * opts.tol_prox; ++it) {
    const double gg = res * res / (eta * eta);
    bool accepted = false;
    bool first_trial = true;
    while (t > 1e-16 * t0) {
      Point cand = m.exp(y, -(t / eta) * G);
      const double fc = phi(cand);
      // Below rounding resolution of φ, fall back to requiring a smaller residual.
      const bool resolvable = 0.5 * t * gg > 1e-13 * (1.0 + std::abs(fy));
      Tangent Gc = scaled_grad(cand);
      const double rc = m.norm(cand, Gc);
      if (resolvable ? fc <= fy - 0.5 * t * gg : rc < res) {
        y = std::move(cand);
        fy = fc;
        G = std::move(Gc);
        res = rc;
        accepted = true;
        break;
      }
      t *= 0.5;
      first_trial = false;
    }
    if (!accepted) break;
    if (first_trial) t = std::min(2.0 * t, t0);
    if (res < best_res) {
      best = y;
      best_res = res;
      since_best = 0;
    } else if (++since_best > 200) {
      break;
    }
  }
  if (!(best_res <= opts.tol_prox)) {
    throw DescentError("proximal_step: optimality residual " + std::to_string(best_res) + " above tol_prox after " +
                       std::to_string(it) + " inner iterations");
  }
  return ProxResult{best, best_res, it};
}

DescentCertificate proximal_certificate(double eta) { return {2.0, eta / 2.0, Direction::forward}; }

// ---------------------------------------------------------------------------
// Cubic-regularized Newton step

namespace {

// Model m(s) − m(0) and ∇m(s) in coordinates.
double model_change(const Vec& g, const Mat& H, double M, const Vec& s) {
  const double r = s.norm();
  return g.dot(s) + 0.5 * s.dot(H * s) + M / 3.0 * r * r * r;
}

Vec model_grad(const Vec& g, const Mat& H, double M, const Vec& s) { return g + H * s + (M * s.norm()) * s; }

// Newton refinement of ∇m(s) = 0.
Vec newton_refine(const Vec& g, const Mat& H, double M, Vec s, int steps) {
  const Eigen::Index n = s.size();
  for (int i = 0; i < steps; ++i) {
    const double r = s.norm();
    if (r == 0.0) break;
    Mat J = H + M * r * Mat::Identity(n, n) + (M / r) * s * s.transpose();
    Vec next = s - J.partialPivLu().solve(model_grad(g, H, M, s));
    if (!next.allFinite() || model_grad(g, H, M, next).norm() >= model_grad(g, H, M, s).norm()) break;
    s = std::move(next);
  }
  return s;
}

// Backtracking gradient descent on the model.
Vec model_descent(const Vec& g, const Mat& H, double M, double theta, Vec s, int steps) {
  double t = 1.0 / (H.norm() + M * (s.norm() + 1.0) + 1.0);
  for (int i = 0; i < steps; ++i) {
    const Vec grad = model_grad(g, H, M, s);
    const double r = s.norm();
    if (grad.norm() <= theta * r * r && model_change(g, H, M, s) <= 0.0) break;
    const double m0 = model_change(g, H, M, s);
    while (t > 1e-300) {
      Vec cand = s - t * grad;
      if (model_change(g, H, M, cand) <= m0 - 0.5 * t * grad.squaredNorm()) {
        s = std::move(cand);
        t *= 1.5;
        break;
      }
      t *= 0.5;
    }
  }
  return s;
}

}  // namespace

Vec solve_cubic_model(const Vec& g, const Mat& H, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("solve_cubic_model: M must be positive");
  const Eigen::Index n = g.size();
  Eigen::SelfAdjointEigenSolver<Mat> eig(0.5 * (H + H.transpose()));
  const Vec& lam = eig.eigenvalues();
  const Mat& V = eig.eigenvectors();
  const Vec gh = V.transpose() * g;
  const double lmin = lam[0];
  const double scale = 1.0 + lam.cwiseAbs().maxCoeff();
  const double gnorm = g.norm();
  if (gnorm == 0.0 && lmin >= 0.0) return Vec::Zero(n);

  const double r_lo = std::max(0.0, -lmin / M);
  // Indices whose shifted eigenvalue vanishes at r_lo.
  std::vector<bool> degenerate(static_cast<std::size_t>(n), false);
  bool forcing = false;
  for (Eigen::Index i = 0; i < n; ++i) {
    if (r_lo > 0.0 && lam[i] + M * r_lo <= 1e-12 * scale) {
      degenerate[static_cast<std::size_t>(i)] = true;
      if (std::abs(gh[i]) > 1e-14 * (gnorm + 1e-300)) forcing = true;
    }
  }
  auto coeffs = [&](double r, bool skip_degenerate) {
    Vec c = Vec::Zero(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      if (skip_degenerate && degenerate[static_cast<std::size_t>(i)]) continue;
      c[i] = -gh[i] / (lam[i] + M * r);
    }
    return c;
  };

  if (r_lo > 0.0 && !forcing) {
    Vec c = coeffs(r_lo, true);
    const double cn = c.norm();
    if (cn <= r_lo) {
      // Hard case: fill the remaining length along the bottom eigenvector.
      Eigen::Index j = 0;
      while (!degenerate[static_cast<std::size_t>(j)]) ++j;
      c[j] += std::sqrt(std::max(0.0, r_lo * r_lo - cn * cn));
      return V * c;
    }
  }

  // Easy case: φ(r) = ‖s(r)‖ − r is decreasing on (r_lo, ∞) with one root.
  auto phi = [&](double r) { return coeffs(r, false).norm() - r; };
  double lo = r_lo;
  double hi = r_lo + std::max(1.0, std::sqrt(gnorm / M));
  while (phi(hi) > 0.0) hi *= 2.0;
  double r = hi;
  for (int it = 0; it < 500; ++it) {
    const Vec c = coeffs(r, false);
    const double sn = c.norm();
    const double f = sn - r;
    if (f > 0.0) lo = r; else hi = r;
    if (std::abs(f) <= 4e-16 * r || hi - lo <= 4e-16 * hi) break;
    double ds = 0.0;
    for (Eigen::Index i = 0; i < n; ++i) {
      const double den = lam[i] + M * r;
      ds += gh[i] * gh[i] / (den * den * den);
    }
    const double dphi = -M * ds / std::max(sn, 1e-300) - 1.0;
    double next = r - f / dphi;
    if (!(next > lo && next < hi) || !std::isfinite(next)) next = 0.5 * (lo + hi);
    r = next;
  }
  // The root can sit close to the pole at r_lo; polish the stationarity residual.
  return newton_refine(g, H, M, V * coeffs(r, false), 3);
}

DescentCertificate cubic_certificate(double M, double theta, double rho) {
  if (!(theta > 0.0)) throw std::invalid_argument("cubic_certificate: theta must be positive");
  if (!(rho >= 0.0)) throw std::invalid_argument("cubic_certificate: rho must be >= 0");
  if (!(M > rho / 2.0)) throw std::invalid_argument("cubic_certificate: M must exceed rho/2");
  return {3.0, (M / 3.0 - rho / 6.0) * std::pow(theta + rho / 2.0 + M, -1.5), Direction::forward};
}

CubicResult cubic_newton_step(const Objective& obj, const Point& x, double M, double theta) {
  if (!(M > 0.0) || !(theta > 0.0)) throw std::invalid_argument("cubic_newton_step: M and theta must be positive");
  const Manifold& m = obj.manifold();
  const auto basis = m.orthonormal_basis(x);
  const Vec g = to_basis(m, basis, obj.gradient(x));
  Mat H = obj.hessian_matrix(x);
  H = 0.5 * (H + H.transpose()).eval();

  CubicCheck check;
  Vec s = Vec::Zero(g.size());
  const double lmin = Eigen::SelfAdjointEigenSolver<Mat>(H, Eigen::EigenvaluesOnly).eigenvalues()[0];
  if (g.norm() <= 1e-13 && lmin >= -1e-14 * (1.0 + H.norm())) {
    check.stationary = true;
  } else {
    s = solve_cubic_model(g, H, M);
    auto ok = [&](const Vec& v) {
      const double r = v.norm();
      return model_change(g, H, M, v) <= 0.0 && model_grad(g, H, M, v).norm() <= theta * r * r;
    };
    if (!ok(s)) s = newton_refine(g, H, M, s, 8);
    if (!ok(s)) s = model_descent(g, H, M, theta, s, 20000);
    if (!ok(s)) {
      throw DescentError("cubic_newton_step: subproblem solution misses the theta condition (|grad m| = " +
                         std::to_string(model_grad(g, H, M, s).norm()) + ")");
    }
  }
  // Independent re-evaluation of both acceptance conditions.
  check.step_norm = s.norm();
  check.model_change = model_change(g, H, M, s);
  check.model_grad_norm = model_grad(g, H, M, s).norm();
  check.theta_bound = theta * check.step_norm * check.step_norm;
  Tangent st = from_basis(basis, x, s);
  Point next = m.exp(x, st);
  return CubicResult{std::move(next), std::move(st), check};
}

// ---------------------------------------------------------------------------
// Method objects

GradientDescent::GradientDescent(double eta, double L) : GradientDescent(eta, L, true) {}

GradientDescent::GradientDescent(double eta, double L, bool checked) : eta_(eta), L_(L), checked_(checked) {
  if (!(L > 0.0)) throw std::invalid_argument("rgd: L must be positive");
  if (checked && !(eta > 0.0 && eta * L < 2.0)) throw std::invalid_argument("rgd: eta must lie in (0, 2/L)");
}

GradientDescent GradientDescent::unchecked(double eta, double L) { return GradientDescent(eta, L, false); }

DescentCertificate GradientDescent::certificate() const { return rgd_certificate(eta_, L_); }

StepOutcome GradientDescent::step(const Objective& obj, const Point& x) const {
  return StepOutcome{rgd_step_unchecked(obj, x, eta_), std::nullopt, std::nullopt};
}

ProximalPoint::ProximalPoint(double eta, ProxOptions opts) : eta_(eta), opts_(opts) {
  if (!(eta > 0.0)) throw std::invalid_argument("proximal: eta must be positive");
}

StepOutcome ProximalPoint::step(const Objective& obj, const Point& x) const {
  ProxResult r = proximal_step(obj, x, eta_, opts_);
  return StepOutcome{std::move(r.x), r.residual, std::nullopt};
}

CubicNewton::CubicNewton(double M, double theta, double rho) : M_(M), theta_(theta), rho_(rho) {
  cubic_certificate(M, theta, rho);
}

StepOutcome CubicNewton::step(const Objective& obj, const Point& x) const {
  CubicResult r = cubic_newton_step(obj, x, M_, theta_);
  return StepOutcome{std::move(r.x), std::nullopt, r.check};
}

}  // namespace rdescent

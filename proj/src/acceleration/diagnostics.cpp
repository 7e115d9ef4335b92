#include "rdescent/acceleration/diagnostics.hpp"

#include <cmath>

namespace rdescent {

double shrink_reference(const AccelTrace& trace) {
  if (trace.mode != AccelMode::strongly || trace.energy.empty()) {
    throw std::invalid_argument("shrink diagnostics: need a strongly convex trace with energies");
  }
  return trace.energy.front().E;
}

std::vector<ShrinkRow> shrink_diagnostics(const Manifold& m, const AccelTrace& trace, const Point& x_star,
                                          double D0) {
  if (trace.mode != AccelMode::strongly) throw std::invalid_argument("shrink diagnostics: need a strongly convex trace");
  if (!(trace.mu > 0.0)) throw std::invalid_argument("shrink diagnostics: trace has no mu");
  const double mu = trace.mu;
  const double c = trace.c;
  std::vector<ShrinkRow> rows;
  double product = 1.0;
  for (std::size_t k = 0; k < trace.size(); ++k) {
    if (k > 0) product *= 1.0 - *trace.schedule[k].xi;
    const Point& x = trace.xs[k];
    const Point& y = trace.y_trace.iterates[k];
    const Point& z = trace.zs[k];
    ShrinkRow r;
    r.k = static_cast<int>(k);
    r.d_xy = m.distance(x, y);
    r.d_xz = m.distance(x, z);
    r.d_y_star = m.distance(y, x_star);
    r.proj_z_star = projected_distance(m, x, z, x_star);
    r.envelope = std::sqrt(product * D0);
    r.envelope_y = r.envelope * std::sqrt(2.0 / mu);
    r.envelope_z = r.envelope * std::sqrt(1.0 / (mu * mu * c));
    r.ratio = r.envelope > 0.0 ? r.d_xz / r.envelope : 0.0;
    rows.push_back(r);
  }
  return rows;
}

std::vector<double> xi_sequence(const AccelTrace& trace) {
  std::vector<double> xi;
  for (const ScheduleState& s : trace.schedule) {
    if (!s.xi) throw std::invalid_argument("xi_sequence: trace has no xi values");
    xi.push_back(*s.xi);
  }
  return xi;
}

LinearFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  if (xs.size() != ys.size() || xs.size() < 2) throw std::invalid_argument("least_squares: need two or more points");
  const double n = static_cast<double>(xs.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (!(sxx > 0.0)) throw std::invalid_argument("least_squares: abscissae are all equal");
  LinearFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r2 = syy > 0.0 ? std::min(1.0, sxy * sxy / (sxx * syy)) : 1.0;
  return fit;
}

XiConvergence xi_convergence_report(const std::vector<double>& xi, double mu, double c, double eps) {
  const double target = std::sqrt(2.0 * mu * c);
  XiConvergence out;
  std::vector<double> ks, logs;
  for (std::size_t k = 0; k < xi.size(); ++k) {
    const double gap = std::abs(xi[k] - target);
    if (!out.first_k && gap <= eps) out.first_k = static_cast<int>(k);
    if (gap > 1e-15) {
      ks.push_back(static_cast<double>(k));
      logs.push_back(std::log(gap));
    }
  }
  out.fitted_points = static_cast<int>(ks.size());
  if (ks.size() >= 2) out.slope = least_squares(ks, logs).slope;
  return out;
}

ConjugateCheck conjugate_bound_check(const Vec& s, const Vec& u, double alpha, double q) {
  if (!(q > 1.0)) throw std::invalid_argument("conjugate bound: q must exceed 1");
  if (s.size() != u.size()) throw std::invalid_argument("conjugate bound: s and u differ in dimension");
  const double qs = q / (q - 1.0);
  ConjugateCheck r;
  r.lhs = alpha * s.dot(u) - std::pow(s.norm(), q) / q;
  r.rhs = (q - 1.0) / q * std::pow(std::abs(alpha), qs) * std::pow(u.norm(), qs);
  r.holds = r.lhs <= r.rhs + 1e-12 * (1.0 + std::abs(r.rhs));
  return r;
}

}  // namespace rdescent

#include "rdescent/acceleration/distortion.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rdescent {

std::string to_string(DistortionMode m) { return m == DistortionMode::analytic ? "analytic" : "oracle"; }

DistortionMode distortion_mode_from_string(const std::string& s) {
  if (s == "analytic") return DistortionMode::analytic;
  if (s == "oracle") return DistortionMode::oracle;
  throw std::invalid_argument("unknown distortion mode '" + s + "'");
}

double distortion_comparison(double kappa, double d) {
  if (!(kappa >= 0.0) || !(d >= 0.0)) throw std::invalid_argument("distortion: need kappa >= 0 and d >= 0");
  const double a = std::sqrt(kappa) * d;
  if (a < 1e-4) {
    const double a2 = a * a;
    return 1.0 + a2 / 3.0 + 2.0 * a2 * a2 / 45.0;
  }
  const double s = std::sinh(a) / a;
  return s * s;
}

double coth_comparison(double kappa, double d) {
  if (!(kappa >= 0.0) || !(d >= 0.0)) throw std::invalid_argument("distortion: need kappa >= 0 and d >= 0");
  const double a = std::sqrt(kappa) * d;
  if (a < 1e-6) return 1.0 + a * a / 3.0;
  return a / std::tanh(a);
}

double distortion_ratio(const Manifold& m, const Point& x_prev, const Point& z_prev, const Point& x_new,
                        const Point& x_star) {
  const double num = projected_distance(m, x_new, z_prev, x_star);
  const double den = projected_distance(m, x_prev, z_prev, x_star);
  if (den == 0.0) return num == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return std::max(1.0, (num * num) / (den * den));
}

double distortion_rate(const Manifold& m, const Point& x_prev, const Point& z_prev, const Point& x_new,
                       DistortionMode mode, const std::optional<Point>& x_star) {
  if (mode == DistortionMode::oracle) {
    if (!x_star) throw std::invalid_argument("distortion_rate: oracle mode needs the minimizer");
    return distortion_ratio(m, x_prev, z_prev, x_new, *x_star);
  }
  const double K = m.sectional_curvature();
  if (K > 0.0) throw std::invalid_argument("distortion_rate: analytic mode needs a Hadamard manifold");
  if (K == 0.0) return 1.0;
  return distortion_comparison(-K, m.distance(x_prev, z_prev));
}

}  // namespace rdescent

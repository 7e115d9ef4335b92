#pragma once

#include "rdescent/geometry/manifold.hpp"

#include <optional>
#include <string>

namespace rdescent {

enum class DistortionMode {
  analytic,  // comparison function of d(x_prev, z_prev); needs no minimizer
  oracle,    // definitional ratio through x*; diagnostic only
};

std::string to_string(DistortionMode m);
DistortionMode distortion_mode_from_string(const std::string& s);

/// (sinh(√κ d)/(√κ d))², with value 1 at d = 0. Bounds the ratio
/// d(z, v)² / ‖log_x z − log_x v‖² on a Hadamard space of curvature ≥ −κ
/// whenever d(x, z) ≤ d.
double distortion_comparison(double kappa, double d);

/// √κ d·coth(√κ d). Kept for comparison: it is not a valid distortion rate.
double coth_comparison(double kappa, double d);

/// Ratio ‖log_{x_new} z − log_{x_new} x*‖² / ‖log_{x_prev} z − log_{x_prev} x*‖²,
/// floored at 1. Equal to 1 when both distances vanish.
double distortion_ratio(const Manifold& m, const Point& x_prev, const Point& z_prev, const Point& x_new,
                        const Point& x_star);

/// Analytic mode: distortion_comparison at d(x_prev, z_prev), 1 on flat
/// spaces; throws std::invalid_argument on positively curved spaces.
/// Oracle mode: distortion_ratio; throws when x_star is missing.
double distortion_rate(const Manifold& m, const Point& x_prev, const Point& z_prev, const Point& x_new,
                       DistortionMode mode, const std::optional<Point>& x_star = std::nullopt);

}  // namespace rdescent

#pragma once

#include "rdescent/descent/methods.hpp"

#include <functional>

namespace rdescent {

struct RunOptions {
  /// Stop once ‖grad f(x_k)‖ ≤ grad_tol (0 runs all k_max steps).
  double grad_tol = 0.0;
  /// Invoked after every recorded iterate with the trace so far.
  std::function<void(const IterateTrace&)> on_iterate;
};

/// Runs up to k_max steps from x0, recording values, gradient norms, the
/// per-step certificate slack and the first exit from `dom`.
IterateTrace run_descent(const DescentMethod& method, const Objective& obj, const Point& x0, int k_max,
                         const DomainSpec& dom, const RunOptions& opts = {});

}  // namespace rdescent

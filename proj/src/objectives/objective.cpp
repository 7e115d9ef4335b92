#include "rdescent/objectives/objective.hpp"

namespace rdescent {

std::string to_string(ConvexityClass c) {
  switch (c) {
    case ConvexityClass::nonconvex: return "nonconvex";
    case ConvexityClass::g_convex: return "g_convex";
    case ConvexityClass::strongly_g_convex: return "strongly_g_convex";
  }
  return "unknown";
}

Objective::Objective(ManifoldPtr m, ObjectiveMetadata meta) : manifold_(std::move(m)), meta_(std::move(meta)) {
  if (!manifold_) throw std::invalid_argument("objective: null manifold");
}

Mat Objective::hessian_matrix(const Point&) const {
  throw UnsupportedOperation(name() + ": no second-order information");
}

void Objective::require_point(const Point& x) const {
  if (!(x.tag == manifold_->tag())) {
    throw ManifoldMismatch(name() + ": point on " + describe(x.tag) + ", objective lives on " +
                           describe(manifold_->tag()));
  }
  if (!x.coords.allFinite()) throw NonFiniteCoordinates(name() + ": non-finite point");
}

void Objective::set_solution(const Point& x_star) {
  const double g = grad_norm(x_star);
  if (!(g < 1e-10)) {
    throw ObjectiveError(name() + ": claimed minimizer has gradient norm " + std::to_string(g));
  }
  solution_ = KnownSolution{x_star, value(x_star)};
}

}  // namespace rdescent

#include "rdescent/geometry/spaces.hpp"

#include <limits>

namespace rdescent {

Euclidean::Euclidean(int n) : Manifold(ManifoldTag{ManifoldKind::euclidean, n, 0.0}) {
  if (n < 1) throw std::invalid_argument("euclidean: dimension must be positive");
}

double Euclidean::injectivity_radius() const { return std::numeric_limits<double>::infinity(); }

double Euclidean::constraint_residual(const Vec&) const { return 0.0; }

double Euclidean::tangency_residual(const Vec&, const Vec&) const { return 0.0; }

std::vector<Vec> Euclidean::basis_impl(const Vec&) const {
  std::vector<Vec> seeds;
  for (int i = 0; i < dim(); ++i) seeds.push_back(Vec::Unit(dim(), i));
  return seeds;
}

}  // namespace rdescent

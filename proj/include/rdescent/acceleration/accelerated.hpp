#pragma once

#include "rdescent/acceleration/distortion.hpp"
#include "rdescent/acceleration/schedule.hpp"
#include "rdescent/descent/methods.hpp"
#include "rdescent/geometry/domain.hpp"

#include <functional>

namespace rdescent {

/// The three coupled sequences.
struct AccelState {
  Point x;
  Point y;
  Point z;
  int k = 0;
};

/// Descent map G_c with f(G_c(x)) − f(x) ≤ −c‖grad f(x)‖².
struct DescentOracle {
  std::string name;
  double c = 0.0;
  std::function<Point(const Objective&, const Point&)> step;
};

/// Gradient step exp(x, −η grad f(x)), c = η(1 − Lη/2). Needs 0 < η < 2/L.
DescentOracle gradient_oracle(double eta, double L);
/// Proximal step with parameter η. For g-convex f with L-Lipschitz gradient,
/// f(x) − f(x⁺) ≥ η‖grad f(x⁺)‖² and ‖grad f(x)‖ ≤ (1 + ηL)‖grad f(x⁺)‖,
/// so c = η/(1 + ηL)².
DescentOracle proximal_oracle(double eta, double L, const ProxOptions& opts = {});

/// Raised when an oracle step misses its descent inequality.
class OracleViolation : public DescentError {
 public:
  using DescentError::DescentError;
};

struct AccelStepResult {
  AccelState state;
  double oracle_slack = 0.0;  // f(y⁺) − f(x⁺) + c‖grad f(x⁺)‖²
};

/// x⁺ = exp(y, τ log_y z), y⁺ = G_c(x⁺),
/// z⁺ = exp(x⁺, (β log_{x⁺} z − grad f(x⁺))/(α + β)).
/// Throws OracleViolation when f(y⁺) − f(x⁺) > −c‖grad f(x⁺)‖² + 1e-9(1 + |f(x⁺)|).
AccelStepResult accel_step(const Objective& obj, const AccelState& s, const AccelParams& p,
                           const DescentOracle& oracle);

/// The point x⁺ = exp(y, τ log_y z) alone.
Point accel_interpolate(const Manifold& m, const Point& y, const Point& z, double tau);

struct EnergyRecord {
  double E = 0.0;
  double f_gap = 0.0;
  double dist_term = 0.0;  // ‖log_x z − log_x x*‖²
  double d_xy = 0.0;
  double d_xz = 0.0;
  std::optional<double> envelope;  // √(∏(1 − ξ_j) D₀) on strongly convex runs
};

/// E = A(f(y) − f*) + B‖log_x z − log_x x*‖².
EnergyRecord energy(double A, double B, const Objective& obj, const AccelState& s, const Point& x_star,
                    double f_star);

enum class AccelMode { gconvex, strongly };

struct AccelTrace;

std::string to_string(AccelMode m);
AccelMode accel_mode_from_string(const std::string& s);

struct AccelOptions {
  AccelMode mode = AccelMode::gconvex;
  DistortionMode delta_mode = DistortionMode::analytic;
  /// Strongly convex start ξ₀ ∈ (2μc, √(2μc)]; defaults to √(2μc).
  std::optional<double> xi0;
  /// Overrides the objective's μ for the strongly convex schedule.
  std::optional<double> mu;
  /// Called after every iteration with the trace so far.
  std::function<void(const AccelTrace&)> on_iterate;
};

struct AccelTrace {
  IterateTrace y_trace;  // iterates, values and gradient norms of y_k
  std::vector<Point> xs;
  std::vector<Point> zs;
  std::vector<ScheduleState> schedule;  // entry k holds A_k, B_k, δ_k, ξ_k
  std::vector<AccelParams> params;      // entry k holds the parameters producing iterate k+1
  std::vector<EnergyRecord> energy;     // empty when the minimizer is unknown
  std::vector<double> oracle_slack;     // one entry per step
  std::vector<int> delta_refinements;   // fixed-point passes per step (oracle mode)
  AccelMode mode = AccelMode::gconvex;
  DistortionMode delta_mode = DistortionMode::analytic;
  double c = 0.0;
  double mu = 0.0;
  std::optional<int> domain_exit;  // first k with x_k, y_k or z_k outside the domain

  std::size_t size() const { return xs.size(); }
  bool diagnostic() const { return delta_mode == DistortionMode::oracle; }
};

/// Runs k_max accelerated iterations from y₀ = z₀ = x₀.
/// Analytic δ never reads the minimizer; oracle δ solves the coupling between
/// δ_{k+1} and x_{k+1} by raising δ until the realized ratio at x_{k+1} is
/// covered. Energies are recorded whenever the objective has a known solution.
AccelTrace run_accelerated(const Objective& obj, const Point& y0, int k_max, const DescentOracle& oracle,
                           const DomainSpec& dom, const AccelOptions& opts = {});

}  // namespace rdescent

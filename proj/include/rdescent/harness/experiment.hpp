#pragma once

#include "rdescent/harness/config.hpp"
#include "rdescent/harness/trace_io.hpp"
#include "rdescent/objectives/objective.hpp"

#include <string>

namespace rdescent::harness {

/// Problem instance assembled from a config.
struct Problem {
  ManifoldPtr manifold;
  ObjectivePtr objective;
  DomainSpec domain;
  Point x0;
  std::string objective_id;  // digest of the manifold, objective section and seed
  std::string f_star_source;
};

/// Maps tangent coordinates at `base` (orthonormal basis) through exp.
Point point_from_coordinates(const Manifold& m, const Point& base, const std::vector<double>& coords);

/// Builds manifold, objective, domain and x₀. Throws ConfigError when the
/// config is statically valid but the instance is not (μ missing for the
/// strongly convex schedule, x₀ outside the domain, ...).
Problem build_problem(const ExperimentConfig& cfg);

/// Per-guarantee outcome: "pass", "fail" or "void" (preconditions not met,
/// e.g. an iterate left the domain).
struct GuaranteeResult {
  std::string name;
  std::string status = "pass";
  double worst_slack = 0.0;  // max(observed − bound)
  int worst_k = -1;
  int checked = 0;
  double tolerance = 0.0;
  std::string note;
};

struct ExperimentOutcome {
  int exit_code = 0;  // 0 ok, 1 guarantee violation or run error, 2 config error
  Json report;
  std::string trace_path;
  std::string report_path;
};

/// Runs one experiment, streaming the trace and writing the JSON report
/// below `output_root`. Config problems found while building throw
/// ConfigError; errors during the run are recorded in the report.
ExperimentOutcome run_experiment(const ExperimentConfig& cfg, const std::string& output_root);

/// $RDESCENT_OUTPUT_ROOT, or "." when unset.
std::string output_root_from_env();

}  // namespace rdescent::harness

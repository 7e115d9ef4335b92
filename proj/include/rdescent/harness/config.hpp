#pragma once

#include "rdescent/geometry/types.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdescent::harness {

struct ManifoldConfig {
  ManifoldKind kind = ManifoldKind::euclidean;
  int n = 2;
  double param = 0.0;  // κ on the hyperboloid, R on the sphere
};

struct ObjectiveConfig {
  std::string kind;  // quadratic | squared_distance | frechet_mean | rayleigh
  std::optional<std::vector<double>> center;        // quadratic minimizer
  std::optional<std::vector<double>> weights;       // quadratic weights
  std::optional<std::vector<double>> weight_range;  // [lo, hi], log-spaced weights
  std::optional<std::vector<double>> target;        // squared_distance target, tangent coordinates at the origin
  double target_distance = 1.0;                     // random-direction target when `target` is absent
  int samples = 8;                                  // frechet_mean
  double spread = 0.5;                              // frechet_mean sample radius, rayleigh spectrum width
};

struct AlgorithmConfig {
  std::string kind;  // rgd | proximal | cubic | accelerated
  std::optional<double> eta;
  std::optional<double> M;
  std::optional<double> theta;
  std::string mode = "gconvex";         // accelerated: gconvex | strongly
  std::optional<double> xi0;            // accelerated, strongly mode
  std::string delta_mode = "analytic";  // accelerated: analytic | oracle
  std::string oracle = "rgd";           // accelerated: rgd | proximal
  std::optional<double> oracle_eta;
  double prox_tol = 1e-9;
};

struct RunConfig {
  int k_max = 1000;
  std::optional<std::vector<double>> x0;  // tangent coordinates at the domain center
  std::optional<double> x0_radius;        // random start within this distance of the center
  std::vector<double> domain_center;      // tangent coordinates at the origin
  double domain_radius = 0.0;
  double grad_tol = 0.0;
};

struct OutputConfig {
  std::string trace;
  std::string report;
  std::optional<std::string> plot;
  std::optional<std::string> csv;
};

struct ExperimentConfig {
  std::string name;
  std::uint64_t seed = 0;
  ManifoldConfig manifold;
  ObjectiveConfig objective;
  AlgorithmConfig algorithm;
  RunConfig run;
  OutputConfig output;
  std::vector<std::string> warnings;
  std::string source_text;  // raw file contents, hashed into the report
};

/// Raised with every problem found; `what()` joins them one per line.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> problems);
  const std::vector<std::string>& problems() const { return problems_; }

 private:
  std::vector<std::string> problems_;
};

/// Parses and validates a YAML experiment file. Missing `run.k_max` defaults
/// to 1000 with a warning. Throws ConfigError listing every violation, with
/// line and column for parse errors.
ExperimentConfig load_config(const std::string& path);
ExperimentConfig parse_config(const std::string& text, const std::string& origin = "<string>");

/// Static consistency rules; returns the list of violations (empty when valid).
std::vector<std::string> validate_config(const ExperimentConfig& cfg);

/// Seeds for objective data and for x₀, expanded from the single config seed.
struct DerivedSeeds {
  std::uint64_t objective = 0;
  std::uint64_t start = 0;
};
DerivedSeeds derive_seeds(std::uint64_t seed);

/// 64-bit FNV-1a digest of the config text, as 16 hex digits.
std::string config_hash(const std::string& text);

}  // namespace rdescent::harness

#pragma once

#include "rdescent/harness/trace_io.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace rdescent::harness {

struct RateFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int k_lo = 1;
  int k_hi = 1;
};

class AnalysisError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least squares of log gap_k against log k over k ∈ [k_lo, k_hi], where
/// gaps[k] is the gap at iteration k. Throws AnalysisError when k_lo < 1,
/// the window holds fewer than 10 points or a gap is not above 1e-14.
RateFit fit_rate(const std::vector<double>& gaps, int k_lo, int k_hi);
RateFit fit_rate(const Trace& trace, int k_lo, int k_hi);

/// Largest k_hi ≤ k_max such that every gap on [k_lo, k_hi] is above 1e-14.
std::optional<int> fit_window_end(const std::vector<double>& gaps, int k_lo, int k_max);

/// Side-by-side view of traces over their common iterations.
struct Comparison {
  std::vector<std::string> names;
  std::vector<int> ks;
  std::vector<std::vector<double>> gaps;                    // [trace][row]
  std::vector<std::vector<std::optional<double>>> envelopes;  // [trace][row]
  /// For trace i > 0: first k from which its gap stays below the first
  /// trace's gap through the last common iteration.
  std::vector<std::optional<int>> crossover;
  /// max |gap_i − gap_0| over rows, per trace (0 for the first).
  std::vector<double> max_difference;

  std::string csv() const;
  std::string table() const;
};

/// Throws AnalysisError unless all traces carry the same objective id and
/// the same starting point.
Comparison compare_traces(const std::vector<Trace>& traces);

}  // namespace rdescent::harness

#include "rdescent/harness/analysis.hpp"

#include "rdescent/acceleration/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace rdescent::harness {

namespace {

constexpr double kGapFloor = 1e-14;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

}  // namespace

RateFit fit_rate(const std::vector<double>& gaps, int k_lo, int k_hi) {
  if (k_lo < 1) throw AnalysisError("fit_rate: k_lo must be >= 1");
  if (k_hi >= static_cast<int>(gaps.size())) {
    throw AnalysisError("fit_rate: window ends at " + std::to_string(k_hi) + " but the trace stops at " +
                        std::to_string(static_cast<int>(gaps.size()) - 1));
  }
  if (k_hi - k_lo + 1 < 10) throw AnalysisError("fit_rate: window holds fewer than 10 points");
  std::vector<double> xs, ys;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double g = gaps[static_cast<std::size_t>(k)];
    if (!(g > kGapFloor)) throw AnalysisError("fit_rate: gap underflow at k=" + std::to_string(k));
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(g));
  }
  const LinearFit lf = least_squares(xs, ys);
  return RateFit{lf.slope, lf.intercept, lf.r2, k_lo, k_hi};
}

RateFit fit_rate(const Trace& trace, int k_lo, int k_hi) {
  std::vector<double> gaps(trace.records.size(), 0.0);
  for (std::size_t i = 0; i < trace.records.size(); ++i) {
    const TraceRecord& r = trace.records[i];
    if (r.k != static_cast<int>(i)) throw AnalysisError("fit_rate: trace records are not consecutive");
    if (!r.gap) throw AnalysisError("fit_rate: trace has no gaps (unknown f*)");
    gaps[i] = *r.gap;
  }
  return fit_rate(gaps, k_lo, k_hi);
}

std::optional<int> fit_window_end(const std::vector<double>& gaps, int k_lo, int k_max) {
  std::optional<int> end;
  for (int k = k_lo; k <= k_max && k < static_cast<int>(gaps.size()); ++k) {
    if (!(gaps[static_cast<std::size_t>(k)] > kGapFloor)) break;
    end = k;
  }
  return end;
}

Comparison compare_traces(const std::vector<Trace>& traces) {
  if (traces.empty()) throw AnalysisError("compare: no traces");
  const Trace& ref = traces.front();
  const auto id = ref.header.value("objective_id", "");
  for (const Trace& t : traces) {
    if (t.header.value("objective_id", "") != id) {
      throw AnalysisError("compare: objectives differ (" + ref.header.value("name", "") + " vs " +
                          t.header.value("name", "") + ")");
    }
    if (t.header.value("x0", Json()) != ref.header.value("x0", Json())) {
      throw AnalysisError("compare: starting points differ (" + ref.header.value("name", "") + " vs " +
                          t.header.value("name", "") + ")");
    }
  }

  std::size_t rows = ref.records.size();
  for (const Trace& t : traces) rows = std::min(rows, t.records.size());
  Comparison c;
  for (std::size_t r = 0; r < rows; ++r) c.ks.push_back(ref.records[r].k);
  for (const Trace& t : traces) {
    c.names.push_back(t.header.value("name", ""));
    std::vector<double> g;
    std::vector<std::optional<double>> env;
    for (std::size_t r = 0; r < rows; ++r) {
      const TraceRecord& rec = t.records[r];
      if (rec.k != c.ks[r]) throw AnalysisError("compare: iteration numbers do not line up");
      if (!rec.gap) throw AnalysisError("compare: trace " + c.names.back() + " has no gaps");
      g.push_back(*rec.gap);
      if (rec.raw.contains("envelope") && rec.raw["envelope"].is_number()) {
        env.push_back(rec.raw["envelope"].get<double>());
      } else {
        env.push_back(std::nullopt);
      }
    }
    c.gaps.push_back(std::move(g));
    c.envelopes.push_back(std::move(env));
  }

  for (std::size_t i = 0; i < traces.size(); ++i) {
    double diff = 0.0;
    for (std::size_t r = 0; r < rows; ++r) diff = std::max(diff, std::abs(c.gaps[i][r] - c.gaps[0][r]));
    c.max_difference.push_back(diff);
    std::optional<int> cross;
    if (i > 0) {
      for (std::size_t r = rows; r-- > 0;) {
        if (!(c.gaps[i][r] < c.gaps[0][r])) break;
        cross = c.ks[r];
      }
    }
    c.crossover.push_back(cross);
  }
  return c;
}

std::string Comparison::csv() const {
  std::string out = "k";
  for (const std::string& n : names) out += "," + n + "_gap," + n + "_envelope";
  out += '\n';
  char buf[32];
  for (std::size_t r = 0; r < ks.size(); ++r) {
    out += std::to_string(ks[r]);
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::snprintf(buf, sizeof buf, ",%.17g", gaps[i][r]);
      out += buf;
      if (envelopes[i][r]) {
        std::snprintf(buf, sizeof buf, ",%.17g", *envelopes[i][r]);
        out += buf;
      } else {
        out += ",";
      }
    }
    out += '\n';
  }
  return out;
}

std::string Comparison::table() const {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof buf, "%8s", "k");
  out += buf;
  for (const std::string& n : names) {
    std::snprintf(buf, sizeof buf, "  %24s", (n + " gap").c_str());
    out += buf;
  }
  out += '\n';
  // Rows at 0, 1, 2, 5, 10, 20, 50, ... plus the last common iteration.
  std::vector<std::size_t> shown{0};
  for (std::size_t step = 1; step < ks.size(); step *= 10) {
    for (std::size_t m : {1, 2, 5}) {
      if (m * step < ks.size()) shown.push_back(m * step);
    }
  }
  if (ks.size() > 1 && shown.back() != ks.size() - 1) shown.push_back(ks.size() - 1);
  for (std::size_t r : shown) {
    if (r >= ks.size()) continue;
    std::snprintf(buf, sizeof buf, "%8d", ks[r]);
    out += buf;
    for (std::size_t i = 0; i < names.size(); ++i) {
      std::snprintf(buf, sizeof buf, "  %24s", fmt(gaps[i][r]).c_str());
      out += buf;
    }
    out += '\n';
  }
  for (std::size_t i = 1; i < names.size(); ++i) {
    out += names[i] + " vs " + names[0] + ": max |gap difference| " + fmt(max_difference[i]) + ", ";
    out += crossover[i] ? "below from k=" + std::to_string(*crossover[i]) + " on\n" : "no crossover\n";
  }
  return out;
}

}  // namespace rdescent::harness

#pragma once

#include <json.hpp>

#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace rdescent::harness {

using Json = nlohmann::json;

/// One iterate record of a trace file.
struct TraceRecord {
  int k = 0;
  double f = 0.0;
  std::optional<double> gap;  // f − f*, absent when f* is unknown
  double grad_norm = 0.0;
  Json raw;                   // the full record as written
};

struct Trace {
  Json header;
  std::vector<TraceRecord> records;
  bool truncated = false;  // last line was incomplete and dropped

  std::optional<double> f_star() const;
  std::vector<double> gaps() const;  // gap per record; throws when one is missing
};

/// JSON-lines writer: a header line, then one self-contained line per
/// iterate, flushed as it is written.
class TraceWriter {
 public:
  TraceWriter(const std::string& path, const Json& header);
  void write(const Json& record);
  const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
};

/// Reads a trace. A malformed final line (an interrupted write) is dropped
/// and flagged; a malformed line elsewhere throws std::runtime_error.
Trace read_trace(const std::string& path);

/// Whitespace-separated "k gap" lines with a '#' comment header.
void write_plot_data(const std::string& path, const Trace& trace);

/// Numeric CSV: k, f, gap, grad_norm, slack, envelope, x_0 ... x_{m−1};
/// absent values are written as nan.
void write_trace_csv(const std::string& path, const Trace& trace);

}  // namespace rdescent::harness

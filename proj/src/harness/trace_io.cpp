#include "rdescent/harness/trace_io.hpp"

#include <cstdio>
#include <stdexcept>

namespace rdescent::harness {

std::optional<double> Trace::f_star() const {
  if (header.contains("f_star") && header["f_star"].is_number()) return header["f_star"].get<double>();
  return std::nullopt;
}

std::vector<double> Trace::gaps() const {
  std::vector<double> out;
  out.reserve(records.size());
  for (const TraceRecord& r : records) {
    if (!r.gap) throw std::runtime_error("trace: record " + std::to_string(r.k) + " has no gap");
    out.push_back(*r.gap);
  }
  return out;
}

TraceWriter::TraceWriter(const std::string& path, const Json& header) : path_(path), out_(path, std::ios::trunc) {
  if (!out_) throw std::runtime_error("trace: cannot open " + path + " for writing");
  Json h = header;
  h["type"] = "header";
  out_ << h.dump() << '\n';
  out_.flush();
}

void TraceWriter::write(const Json& record) {
  out_ << record.dump() << '\n';
  out_.flush();
  if (!out_) throw std::runtime_error("trace: write to " + path_ + " failed");
}

Trace read_trace(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("trace: cannot open " + path);
  std::vector<std::string> lines;
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  // An interrupted write leaves a last line without its newline.
  Trace t;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    Json j = Json::parse(lines[i], nullptr, false);
    if (j.is_discarded() || !j.is_object()) {
      if (i + 1 == lines.size()) {
        t.truncated = true;
        break;
      }
      throw std::runtime_error(path + ": malformed line " + std::to_string(i + 1));
    }
    if (i == 0) {
      if (j.value("type", "") != "header") throw std::runtime_error(path + ": first line is not a header");
      t.header = std::move(j);
      continue;
    }
    TraceRecord r;
    try {
      r.k = j.at("k").get<int>();
      r.f = j.at("f").get<double>();
      if (j.contains("gap") && j["gap"].is_number()) r.gap = j["gap"].get<double>();
      r.grad_norm = j.at("grad_norm").get<double>();
    } catch (const Json::exception& e) {
      if (i + 1 == lines.size()) {
        t.truncated = true;
        break;
      }
      throw std::runtime_error(path + ": line " + std::to_string(i + 1) + ": " + e.what());
    }
    r.raw = std::move(j);
    t.records.push_back(std::move(r));
  }
  if (t.header.is_null()) throw std::runtime_error(path + ": no header line");
  return t;
}

void write_plot_data(const std::string& path, const Trace& trace) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("plot: cannot open " + path + " for writing");
  std::fprintf(f, "# %s\n# k gap\n", trace.header.value("name", "").c_str());
  for (const TraceRecord& r : trace.records) {
    if (r.gap) std::fprintf(f, "%d %.17g\n", r.k, *r.gap);
  }
  std::fclose(f);
}

void write_trace_csv(const std::string& path, const Trace& trace) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("csv: cannot open " + path + " for writing");
  std::size_t coords = 0;
  if (!trace.records.empty() && trace.records.front().raw.contains("x")) coords = trace.records.front().raw["x"].size();
  std::fprintf(f, "k,f,gap,grad_norm,slack,envelope");
  for (std::size_t i = 0; i < coords; ++i) std::fprintf(f, ",x_%zu", i);
  std::fprintf(f, "\n");
  auto number = [&](const Json& r, const char* key) {
    if (r.contains(key) && r[key].is_number()) {
      std::fprintf(f, ",%.17g", r[key].get<double>());
    } else {
      std::fprintf(f, ",nan");
    }
  };
  for (const TraceRecord& r : trace.records) {
    std::fprintf(f, "%d", r.k);
    for (const char* key : {"f", "gap", "grad_norm", "slack", "envelope"}) number(r.raw, key);
    const Json x = r.raw.value("x", Json::array());
    for (std::size_t i = 0; i < coords; ++i) {
      if (i < x.size() && x[i].is_number()) {
        std::fprintf(f, ",%.17g", x[i].get<double>());
      } else {
        std::fprintf(f, ",nan");
      }
    }
    std::fprintf(f, "\n");
  }
  std::fclose(f);
}

}  // namespace rdescent::harness

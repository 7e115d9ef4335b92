#include "rdescent/harness/analysis.hpp"
#include "rdescent/harness/experiment.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace rdescent::harness;

namespace {

constexpr int kOk = 0;
constexpr int kUsage = 2;

void print_problems(const ConfigError& e) {
  for (const std::string& p : e.problems()) std::cerr << "error: " << p << '\n';
}

std::string summary(const ExperimentOutcome& out) {
  std::ostringstream s;
  const Json& r = out.report;
  s << r["name"].get<std::string>() << ": " << r["status"].get<std::string>() << " (exit " << out.exit_code << ")\n";
  s << "  k_run " << r["k_run"] << ", final gap " << r["final_gap"] << '\n';
  for (const Json& g : r["guarantees"]) {
    s << "  " << g["status"].get<std::string>() << "  " << g["name"].get<std::string>() << "  worst slack "
      << g["worst_slack"] << " at k=" << g["worst_k"] << '\n';
  }
  for (const Json& f : r["rate_fits"]) {
    if (f["status"] == "ok") {
      s << "  rate fit on [" << f["k_lo"] << ", " << f["k_hi"] << "]: slope " << f["slope"] << ", r2 " << f["r2"]
        << '\n';
    }
  }
  for (const Json& e : r["errors"]) s << "  error: " << e.get<std::string>() << '\n';
  for (const Json& w : r["warnings"]) s << "  warning: " << w.get<std::string>() << '\n';
  s << "  trace " << out.trace_path << "\n  report " << out.report_path << '\n';
  return s.str();
}

int cmd_run(const std::string& path) {
  try {
    const ExperimentConfig cfg = load_config(path);
    const ExperimentOutcome out = run_experiment(cfg, output_root_from_env());
    std::cout << summary(out);
    return out.exit_code;
  } catch (const ConfigError& e) {
    print_problems(e);
    return kUsage;
  }
}

int cmd_validate(const std::string& path) {
  try {
    const ExperimentConfig cfg = load_config(path);
    build_problem(cfg);
    for (const std::string& w : cfg.warnings) std::cerr << "warning: " << w << '\n';
    std::cout << path << ": valid\n";
    return kOk;
  } catch (const ConfigError& e) {
    print_problems(e);
    return kUsage;
  }
}

int cmd_batch(const std::string& dir, unsigned jobs) {
  std::vector<std::string> paths;
  std::error_code ec;
  for (const auto& entry : fs::directory_iterator(dir, ec)) {
    const std::string ext = entry.path().extension().string();
    if (entry.is_regular_file() && (ext == ".yaml" || ext == ".yml")) paths.push_back(entry.path().string());
  }
  if (ec) {
    std::cerr << "error: cannot read directory " << dir << ": " << ec.message() << '\n';
    return kUsage;
  }
  std::sort(paths.begin(), paths.end());
  if (paths.empty()) {
    std::cerr << "error: no .yaml configs in " << dir << '\n';
    return kUsage;
  }

  // Load everything first so output collisions are caught before any run.
  std::vector<ExperimentConfig> configs;
  std::map<std::string, std::string> owners;
  int worst = kOk;
  for (const std::string& p : paths) {
    try {
      ExperimentConfig cfg = load_config(p);
      bool clash = false;
      for (const std::string& out : {cfg.output.trace, cfg.output.report}) {
        const std::string key = fs::weakly_canonical(fs::path(output_root_from_env()) / out).string();
        if (auto [it, fresh] = owners.emplace(key, p); !fresh) {
          std::cerr << "error: " << p << " and " << it->second << " both write " << key << '\n';
          clash = true;
        }
      }
      if (clash) {
        worst = kUsage;
        continue;
      }
      configs.push_back(std::move(cfg));
    } catch (const ConfigError& e) {
      print_problems(e);
      worst = kUsage;
    }
  }

  std::vector<std::string> logs(configs.size());
  std::vector<int> codes(configs.size(), kOk);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const ExperimentOutcome out = run_experiment(configs[i], output_root_from_env());
        logs[i] = summary(out);
        codes[i] = out.exit_code;
      } catch (const ConfigError& e) {
        logs[i] = configs[i].name + ": config error\n  " + e.what() + '\n';
        codes[i] = kUsage;
      } catch (const std::exception& e) {
        logs[i] = configs[i].name + ": failed: " + e.what() + '\n';
        codes[i] = 1;
      }
    }
  };
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::cout << logs[i];
    worst = std::max(worst, codes[i]);
  }
  return worst;
}

int cmd_fit(const std::string& path, int from, int to, bool json) {
  try {
    const RateFit f = fit_rate(read_trace(path), from, to);
    if (json) {
      std::cout << Json{{"k_lo", f.k_lo}, {"k_hi", f.k_hi}, {"slope", f.slope}, {"intercept", f.intercept},
                        {"r2", f.r2}}.dump()
                << '\n';
    } else {
      std::printf("window [%d, %d]\nslope %.10g\nintercept %.10g\nr2 %.10g\n", f.k_lo, f.k_hi, f.slope, f.intercept,
                  f.r2);
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

int cmd_compare(const std::vector<std::string>& paths, const std::string& csv, const std::string& plot_dir) {
  try {
    std::vector<Trace> traces;
    for (const std::string& p : paths) traces.push_back(read_trace(p));
    const Comparison c = compare_traces(traces);
    std::cout << c.table();
    if (!csv.empty()) {
      std::ofstream out(csv);
      if (!out) throw std::runtime_error("cannot open " + csv);
      out << c.csv();
    }
    if (!plot_dir.empty()) {
      fs::create_directories(plot_dir);
      std::map<std::string, int> used;
      for (std::size_t i = 0; i < traces.size(); ++i) {
        std::string name = traces[i].header.value("name", fs::path(paths[i]).stem().string());
        if (used[name]++ > 0) name += "_" + std::to_string(i);
        write_plot_data((fs::path(plot_dir) / (name + ".dat")).string(), traces[i]);
        std::cout << "plot data " << (fs::path(plot_dir) / (name + ".dat")).string() << '\n';
      }
    }
    return kOk;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Run and analyze descent and acceleration experiments on Riemannian manifolds"};
  app.require_subcommand(1);

  std::string config, dir, trace_path, csv, plot_dir;
  std::vector<std::string> traces;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  int from = 1, to = 1;
  bool json = false;

  auto* run = app.add_subcommand("run", "Run one experiment");
  run->add_option("config", config, "Experiment config (YAML)")->required();
  auto* batch = app.add_subcommand("batch", "Run every config in a directory");
  batch->add_option("dir", dir, "Directory of .yaml configs")->required();
  batch->add_option("--jobs,-j", jobs, "Concurrent experiments");
  auto* fit = app.add_subcommand("fit", "Fit log gap against log k on a window");
  fit->add_option("trace", trace_path, "Trace file (JSON lines)")->required();
  fit->add_option("--from", from, "First iteration")->required();
  fit->add_option("--to", to, "Last iteration")->required();
  fit->add_flag("--json", json, "Print the fit as JSON");
  auto* compare = app.add_subcommand("compare", "Compare traces of one objective");
  compare->add_option("traces", traces, "Trace files")->required()->expected(1, -1);
  compare->add_option("--csv", csv, "Write the per-k table as CSV");
  compare->add_option("--plot-dir", plot_dir, "Write two-column (k, gap) files here");
  auto* validate = app.add_subcommand("validate", "Check a config without running it");
  validate->add_option("config", config, "Experiment config (YAML)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  if (run->parsed()) return cmd_run(config);
  if (batch->parsed()) return cmd_batch(dir, jobs);
  if (fit->parsed()) return cmd_fit(trace_path, from, to, json);
  if (compare->parsed()) return cmd_compare(traces, csv, plot_dir);
  return cmd_validate(config);
}

#include "wigner/harness.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "wigner/error.hpp"
#include "wigner/oracle.hpp"
#include "wigner/spectral.hpp"

#ifndef WIGNER_VERSION
#define WIGNER_VERSION "0.0.0"
#endif

namespace wigner {

namespace {

std::filesystem::path resolve_output(const std::filesystem::path& configured) {
  if (const char* env = std::getenv("WIGNER_OUTPUT_DIR"); env && *env) return env;
  return configured;
}

std::string format_double(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace

std::string version_string() { return WIGNER_VERSION; }

void validate(const ExperimentConfig& config) {
  validate(config.ensemble);
  if (config.n_grid.empty()) throw Error(ErrorCode::invalid_spec, "N_grid is empty");
  for (std::size_t i = 0; i < config.n_grid.size(); ++i) {
    if (config.n_grid[i] < 1) throw Error(ErrorCode::invalid_spec, "N must be >= 1");
    if (i > 0 && config.n_grid[i] <= config.n_grid[i - 1]) {
      throw Error(ErrorCode::invalid_spec, "N_grid must be ascending");
    }
  }
  if (config.samples_per_n < 1) throw Error(ErrorCode::invalid_spec, "samples_per_N must be >= 1");
  for (int k : config.moments) {
    if (k < 1) throw Error(ErrorCode::invalid_spec, "moment orders must be >= 1");
  }
  if (config.workers < 1) throw Error(ErrorCode::invalid_spec, "workers must be >= 1");
  if (config.bins < 1) throw Error(ErrorCode::invalid_spec, "bins must be >= 1");
}

nlohmann::json to_json(const ExperimentConfig& config) {
  nlohmann::json formats = nlohmann::json::array();
  if (config.write_csv) formats.push_back("csv");
  if (config.write_json) formats.push_back("json");
  return {{"ensemble", to_json(config.ensemble)},
          {"N_grid", config.n_grid},
          {"samples_per_N", config.samples_per_n},
          {"moments", config.moments},
          {"seed", config.seed},
          {"output_dir", config.output_dir.string()},
          {"report_formats", formats},
          {"workers", config.workers},
          {"bins", config.bins}};
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  try {
    ExperimentConfig c;
    c.ensemble = ensemble_from_json(j.at("ensemble"));
    c.n_grid = j.at("N_grid").get<std::vector<int>>();
    c.samples_per_n = j.value("samples_per_N", c.samples_per_n);
    c.moments = j.value("moments", c.moments);
    c.seed = j.value("seed", c.seed);
    c.output_dir = j.value("output_dir", c.output_dir.string());
    if (j.contains("report_formats")) {
      c.write_csv = c.write_json = false;
      for (const auto& f : j.at("report_formats")) {
        const auto name = f.get<std::string>();
        if (name == "csv") {
          c.write_csv = true;
        } else if (name == "json") {
          c.write_json = true;
        } else {
          throw Error(ErrorCode::invalid_spec, "unknown report format '" + name + "'");
        }
      }
    }
    c.workers = j.value("workers", c.workers);
    c.bins = j.value("bins", c.bins);
    validate(c);
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_spec, std::string("experiment config: ") + e.what());
  }
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::io_failure, "cannot open " + path.string());
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::invalid_spec, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
}

std::string content_hash(const nlohmann::json& j) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string config_hash(const ExperimentConfig& config) {
  auto j = to_json(config);
  j.erase("workers");
  j.erase("output_dir");
  return content_hash(j);
}

std::string artifact_header(const std::string& hash) { return "# wigner " + version_string() + " config " + hash; }

ConvergenceReport run_convergence(const ExperimentConfig& config) {
  validate(config);
  const std::string hash = config_hash(config);
  const auto out_dir = resolve_output(config.output_dir);
  double alpha = 1.0;
  if (const auto* g = std::get_if<GueSpec>(&config.ensemble)) alpha = g->alpha;
  if (const auto* c = std::get_if<CommonNoiseSpec>(&config.ensemble)) alpha = c->alpha;
  if (const auto* w = std::get_if<WignerIidSpec>(&config.ensemble)) alpha = std::sqrt(2 * w->offdiag.variance());
  const SemicircleLaw law{alpha};

  ConvergenceReport report;
  nlohmann::json per_n = nlohmann::json::array();
  for (int n : config.n_grid) {
    std::vector<HermitianMatrix> samples;
    try {
      samples = sample_batch(config.ensemble, n, config.seed, config.samples_per_n, config.workers);
    } catch (const Error& e) {
      throw Error(e.code(), "N=" + std::to_string(n) + ": " + e.what());
    }
    const SpectralSample spectrum = analyze(samples, config.moments, config.workers, true);
    const double ks = ks_distance(spectrum, law);
    report.ks_by_n.emplace_back(n, ks);

    nlohmann::json moments = nlohmann::json::array();
    for (const auto& [k, m] : spectrum.trace_moments) {
      const double target = law.moment(k);
      const double z = m.standard_error > 0 ? (m.estimate - target) / m.standard_error : 0.0;
      report.rows.push_back({n, k, m.estimate, m.standard_error, target, z});
      moments.push_back({{"k", k}, {"estimate", m.estimate}, {"stderr", m.standard_error},
                         {"semicircle", target}, {"z_score", z}});
    }
    per_n.push_back({{"N", n}, {"ks_distance", ks}, {"moments", moments}});

    if (config.write_csv) {
      std::ostringstream mcsv, hcsv;
      mcsv << artifact_header(hash) << '\n' << std::setprecision(12);
      write_moment_table_csv(mcsv, spectrum, law);
      hcsv << artifact_header(hash) << '\n' << std::setprecision(12);
      write_histogram_csv(hcsv, histogram(spectrum, law, config.bins), law);
      const auto mpath = out_dir / ("moments_N" + std::to_string(n) + ".csv");
      const auto hpath = out_dir / ("histogram_N" + std::to_string(n) + ".csv");
      write_text_file(mpath, mcsv.str());
      write_text_file(hpath, hcsv.str());
      report.files.push_back(mpath);
      report.files.push_back(hpath);
    }
  }
  report.summary = {{"tool", "wigner"},
                    {"version", version_string()},
                    {"config_hash", hash},
                    {"config", to_json(config)},
                    {"semicircle_alpha", alpha},
                    {"results", per_n}};
  report.summary["config"].erase("workers");
  report.summary["config"].erase("output_dir");
  if (config.write_json) {
    const auto spath = out_dir / "summary.json";
    write_text_file(spath, report.summary.dump(2) + "\n");
    report.files.push_back(spath);
  }
  return report;
}

ConditionReport run_condition_check(const CumulantSpec& spec, int max_vertices, int max_edges,
                                    const std::vector<long long>& n_grid, const std::filesystem::path& output) {
  const auto graphs = enumerate_graphs(max_vertices, max_edges);
  ConditionReport report = theorem_condition_report(spec, graphs, n_grid);
  if (!output.empty()) {
    nlohmann::json j = to_json(report);
    const nlohmann::json inputs = {{"spec", to_json(spec)}, {"max_vertices", max_vertices},
                                   {"max_edges", max_edges}, {"N_grid", n_grid}};
    j["tool"] = "wigner";
    j["version"] = version_string();
    j["config_hash"] = content_hash(inputs);
    write_text_file(resolve_output(output.parent_path()) / output.filename(), j.dump(2) + "\n");
  }
  return report;
}

FlowRun run_flow_experiment(const CumulantSpec& spec, const FlowTruncation& truncation, int workers,
                            const std::filesystem::path& output_dir) {
  FlowRun run{run_flow(spec, truncation, workers), {}, {}};
  run.series = green_series(run.state, truncation.max_t + 2);
  run.ledger = check_bound_propagation(run.state);
  if (!output_dir.empty()) {
    const nlohmann::json inputs = {{"spec", to_json(spec)},
                                   {"max_t", truncation.max_t},
                                   {"max_vertices", truncation.max_vertices},
                                   {"max_edges", truncation.max_edges},
                                   {"prune_irrelevant", truncation.prune_irrelevant}};
    const std::string hash = content_hash(inputs);
    const auto dir = resolve_output(output_dir);
    std::ostringstream csv;
    csv << artifact_header(hash) << '\n';
    write_series_csv(csv, run.series);
    write_text_file(dir / "series.csv", csv.str());
    nlohmann::json ledger = to_json(run.ledger);
    ledger["tool"] = "wigner";
    ledger["version"] = version_string();
    ledger["config_hash"] = hash;
    ledger["notices"] = run.state.notices;
    write_text_file(dir / "ledger.json", ledger.dump(2) + "\n");
  }
  return run;
}

std::vector<OracleRow> run_oracle(const CumulantSpec& spec, const std::vector<long long>& n_grid,
                                  const std::vector<int>& ks, int workers, const std::filesystem::path& output) {
  OracleOptions options;
  options.workers = workers;
  std::vector<OracleRow> rows;
  for (int k : ks) {
    const TrendResult trend = asymptotic_trend(spec, k, n_grid, options);
    for (std::size_t i = 0; i < n_grid.size(); ++i) {
      OracleRow row{n_grid[i], k, "", trend.values[i], trend.limit};
      if (trend.exact_values) row.exact = to_string((*trend.exact_values)[i]);
      rows.push_back(row);
    }
  }
  if (!output.empty()) {
    const nlohmann::json inputs = {{"spec", to_json(spec)}, {"N_grid", n_grid}, {"k", ks}};
    std::ostringstream csv;
    csv << artifact_header(content_hash(inputs)) << '\n' << "N,k,exact,extrapolated\n";
    for (const auto& r : rows) {
      csv << r.n << ',' << r.k << ',' << (r.exact.empty() ? format_double(r.value) : r.exact) << ','
          << format_double(r.extrapolated) << '\n';
    }
    write_text_file(resolve_output(output.parent_path()) / output.filename(), csv.str());
  }
  return rows;
}

}  // namespace wigner

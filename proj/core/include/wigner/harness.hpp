#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "wigner/cumulant.hpp"
#include "wigner/ensemble.hpp"
#include "wigner/flow.hpp"

namespace wigner {

std::string version_string();

struct ExperimentConfig {
  EnsembleSpec ensemble = GueSpec{};
  std::vector<int> n_grid;
  int samples_per_n = 1;
  std::vector<int> moments{2, 4};
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "wigner-out";
  bool write_csv = true;
  bool write_json = true;
  int workers = 1;
  int bins = 61;
};

void validate(const ExperimentConfig& config);
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);

nlohmann::json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// FNV-1a of the compact JSON dump, as 16 hex digits. Worker count and output
/// directory are excluded: they do not change results.
std::string config_hash(const ExperimentConfig& config);
std::string content_hash(const nlohmann::json& j);

// "# wigner <version> config <hash>"
std::string artifact_header(const std::string& hash);

struct ConvergenceRow {
  int n = 0;
  int k = 0;
  double estimate = 0.0;
  double standard_error = 0.0;
  double semicircle = 0.0;
  double z_score = 0.0;
};

struct ConvergenceReport {
  std::vector<ConvergenceRow> rows;
  std::vector<std::pair<int, double>> ks_by_n;
  std::vector<std::filesystem::path> files;
  nlohmann::json summary;
};

/// Samples every N of the grid, writes moments_N<N>.csv, histogram_N<N>.csv and summary.json.
ConvergenceReport run_convergence(const ExperimentConfig& config);

/// Scaling conditions over enumerate_graphs(max_vertices, max_edges).
ConditionReport run_condition_check(const CumulantSpec& spec, int max_vertices, int max_edges,
                                    const std::vector<long long>& n_grid,
                                    const std::filesystem::path& output = {});

struct FlowRun {
  FlowState state;
  GreenSeries series;
  PropagationReport ledger;
};

/// Flow to t^max_t; series up to 1/z^(max_t + 2); files series.csv and ledger.json when output_dir is set.
FlowRun run_flow_experiment(const CumulantSpec& spec, const FlowTruncation& truncation, int workers = 1,
                            const std::filesystem::path& output_dir = {});

struct OracleRow {
  long long n = 0;
  int k = 0;
  std::string exact;
  double value = 0.0;
  double extrapolated = 0.0;
};

std::vector<OracleRow> run_oracle(const CumulantSpec& spec, const std::vector<long long>& n_grid,
                                  const std::vector<int>& ks, int workers = 1,
                                  const std::filesystem::path& output = {});

}  // namespace wigner

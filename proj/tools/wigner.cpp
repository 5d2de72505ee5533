// wigner: command line front end for sampling, spectra, cumulant checks,
// the exact moment oracle and the replica flow.

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include <CLI11.hpp>

#include "wigner/ensemble.hpp"
#include "wigner/error.hpp"
#include "wigner/flow.hpp"
#include "wigner/harness.hpp"
#include "wigner/oracle.hpp"
#include "wigner/spectral.hpp"

namespace {

using namespace wigner;

enum ExitCode { kOk = 0, kFailure = 1, kInvalidConfig = 2, kBackendFailure = 3, kBudgetExceeded = 4 };

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_argument:
    case ErrorCode::invalid_spec:
    case ErrorCode::io_failure:
    case ErrorCode::unsupported:
    case ErrorCode::unbounded_potential:
    case ErrorCode::truncation_too_small:
    case ErrorCode::empty_grid:
    case ErrorCode::odd_order:
      return kInvalidConfig;
    case ErrorCode::backend_failure: return kBackendFailure;
    case ErrorCode::budget_exceeded:
    case ErrorCode::limit_exceeded: return kBudgetExceeded;
    default: return kFailure;
  }
}

struct Common {
  std::string config;
  std::string spec;
  std::string out;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
  int bins = 61;
};

ExperimentConfig load_experiment(const Common& c) {
  if (c.config.empty()) throw Error(ErrorCode::invalid_spec, "--config is required");
  ExperimentConfig config = experiment_config_from_json(read_json_file(c.config));
  if (c.seed_set) config.seed = c.seed;
  if (!c.out.empty()) config.output_dir = c.out;
  config.workers = c.workers;
  config.bins = c.bins;
  validate(config);
  return config;
}

// A cumulant spec file, or the analytic cumulants of the ensemble in a config file.
CumulantSpec load_spec(const Common& c) {
  if (!c.spec.empty()) return cumulant_spec_from_json(read_json_file(c.spec));
  if (!c.config.empty()) return cumulant_spec_of(load_experiment(c).ensemble);
  throw Error(ErrorCode::invalid_spec, "--spec or --config is required");
}

std::filesystem::path out_dir(const Common& c) { return c.out.empty() ? "wigner-out" : c.out; }

int cmd_sample(const Common& c, int n, int count) {
  ExperimentConfig config = load_experiment(c);
  const auto samples = sample_batch(config.ensemble, n, config.seed, count, config.workers);
  const auto path = out_dir(c) / ("samples_N" + std::to_string(n) + ".bin");
  std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  for (const auto& m : samples) write_matrix_binary(os, m);
  if (!os) throw Error(ErrorCode::io_failure, "cannot write " + path.string());
  std::cout << "wrote " << samples.size() << " matrices to " << path.string() << '\n';
  return kOk;
}

int cmd_spectrum(const Common& c, int n, int count, double eps) {
  ExperimentConfig config = load_experiment(c);
  const auto samples = sample_batch(config.ensemble, n, config.seed, count, config.workers);
  const std::vector<int> ks;
  const SpectralSample spectrum = analyze(samples, ks, config.workers, true);
  double alpha = 1.0;
  if (const auto* g = std::get_if<GueSpec>(&config.ensemble)) alpha = g->alpha;
  if (const auto* cn = std::get_if<CommonNoiseSpec>(&config.ensemble)) alpha = cn->alpha;
  if (const auto* w = std::get_if<WignerIidSpec>(&config.ensemble)) alpha = std::sqrt(2 * w->offdiag.variance());
  const SemicircleLaw law{alpha};
  const std::string header = artifact_header(config_hash(config));

  std::ostringstream hist;
  hist << header << '\n' << std::setprecision(12);
  const Histogram h = histogram(spectrum, law, config.bins);
  write_histogram_csv(hist, h, law);
  write_text_file(out_dir(c) / ("histogram_N" + std::to_string(n) + ".csv"), hist.str());

  std::ostringstream green;
  green << header << '\n' << std::setprecision(12) << "lambda,semicircle_density,green_boundary_density\n";
  for (std::size_t b = 0; b < h.counts.size(); ++b) {
    const double x = 0.5 * (h.edges[b] + h.edges[b + 1]);
    const double boundary = -green_function_closed({x, eps}, alpha).imag() / std::numbers::pi;
    green << x << ',' << law.density(x) << ',' << boundary << '\n';
  }
  write_text_file(out_dir(c) / ("green_N" + std::to_string(n) + ".csv"), green.str());
  std::cout << "KS distance " << ks_distance(spectrum, law) << '\n';
  return kOk;
}

int cmd_moments(const Common& c) {
  ExperimentConfig config = load_experiment(c);
  const std::string header = artifact_header(config_hash(config));
  double alpha = 1.0;
  if (const auto* g = std::get_if<GueSpec>(&config.ensemble)) alpha = g->alpha;
  if (const auto* cn = std::get_if<CommonNoiseSpec>(&config.ensemble)) alpha = cn->alpha;
  if (const auto* w = std::get_if<WignerIidSpec>(&config.ensemble)) alpha = std::sqrt(2 * w->offdiag.variance());
  const SemicircleLaw law{alpha};
  for (int n : config.n_grid) {
    const auto samples = sample_batch(config.ensemble, n, config.seed, config.samples_per_n, config.workers);
    const SpectralSample spectrum = analyze(samples, config.moments, config.workers, false);
    std::ostringstream csv;
    csv << header << '\n' << std::setprecision(12);
    write_moment_table_csv(csv, spectrum, law);
    write_text_file(out_dir(c) / ("moments_N" + std::to_string(n) + ".csv"), csv.str());
    std::cout << "N=" << n << '\n' << csv.str().substr(csv.str().find('\n') + 1);
  }
  return kOk;
}

int cmd_check(const Common& c, int vertices, int edges, std::vector<long long> grid) {
  const CumulantSpec spec = load_spec(c);
  if (grid.empty() && !c.config.empty()) {
    for (int n : load_experiment(c).n_grid) grid.push_back(n);
  }
  const auto path = out_dir(c) / "conditions.json";
  const ConditionReport report = run_condition_check(spec, vertices, edges, grid, path);
  int failing = 0;
  for (const auto& r : report.records) {
    if (!r.pass) {
      ++failing;
      std::cout << "violates: " << describe(r.graph) << " (" << r.bullet << ")\n";
    }
  }
  std::cout << report.records.size() << " graphs, " << failing << " failing; report in " << path.string() << '\n';
  return report.all_pass ? kOk : kFailure;
}

int cmd_oracle(const Common& c, const std::vector<long long>& grid, const std::vector<int>& ks) {
  const CumulantSpec spec = load_spec(c);
  const auto path = out_dir(c) / "oracle.csv";
  const auto rows = run_oracle(spec, grid, ks, c.workers, path);
  std::cout << "N,k,exact,extrapolated\n";
  for (const auto& r : rows) {
    std::cout << r.n << ',' << r.k << ',' << (r.exact.empty() ? std::to_string(r.value) : r.exact) << ','
              << r.extrapolated << '\n';
  }
  return kOk;
}

int cmd_flow(const Common& c, int orders, const std::string& truncation, bool prune) {
  const CumulantSpec spec = load_spec(c);
  FlowTruncation t;
  t.max_t = orders;
  t.prune_irrelevant = prune;
  const auto comma = truncation.find(',');
  if (comma == std::string::npos) throw Error(ErrorCode::invalid_spec, "--truncation expects v,e");
  try {
    t.max_vertices = std::stoi(truncation.substr(0, comma));
    t.max_edges = std::stoi(truncation.substr(comma + 1));
  } catch (const std::exception&) {
    throw Error(ErrorCode::invalid_spec, "--truncation expects two integers v,e");
  }
  const FlowRun run = run_flow_experiment(spec, t, c.workers, out_dir(c));
  for (std::size_t p = 0; p < run.series.limit.size(); ++p) {
    std::cout << "1/z^" << p << ": " << to_string(run.series.limit[p]) << (run.series.divergent[p] ? " (divergent)" : "")
              << '\n';
  }
  for (const auto& notice : run.state.notices) std::cout << "notice: " << notice << '\n';
  std::cout << "ledger " << (run.ledger.pass ? "pass" : "FAIL")
            << (run.ledger.hypotheses_hold ? "" : " (inputs violate the scaling hypotheses)") << '\n';
  return run.ledger.pass || !run.ledger.hypotheses_hold ? kOk : kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Semicircle-law experiments: sampling, spectra, cumulant scaling checks, exact moments, replica flow"};
  app.set_version_flag("--version", wigner::version_string());
  app.require_subcommand(1);

  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", common.config, "experiment config (JSON)");
    sub->add_option("--out", common.out, "output directory");
    sub->add_option("--workers", common.workers, "worker threads")->check(CLI::PositiveNumber);
    auto* seed = sub->add_option("--seed", common.seed, "override the config seed");
    sub->callback([&common, seed] { common.seed_set = seed->count() > 0; });
  };

  int n = 64, count = 10, vertices = 4, edges = 4, orders = 4;
  double eps = 1e-3;
  bool prune = false;
  std::string truncation = "4,4";
  std::vector<long long> grid;
  std::vector<int> ks{2, 4, 6};

  auto* sample = app.add_subcommand("sample", "draw matrices and dump them as little-endian binary");
  add_common(sample);
  sample->add_option("--N", n, "dimension")->check(CLI::PositiveNumber);
  sample->add_option("--count", count, "number of matrices")->check(CLI::PositiveNumber);

  auto* spectrum = app.add_subcommand("spectrum", "eigenvalue histogram, KS distance, Green boundary values");
  add_common(spectrum);
  spectrum->add_option("--N", n, "dimension")->check(CLI::PositiveNumber);
  spectrum->add_option("--count", count, "number of matrices")->check(CLI::PositiveNumber);
  spectrum->add_option("--bins", common.bins, "histogram bins")->check(CLI::PositiveNumber);
  spectrum->add_option("--eps", eps, "distance above the real axis for the Green function")
      ->check(CLI::PositiveNumber);

  auto* moments = app.add_subcommand("moments", "normalized trace moments for every N of the config");
  add_common(moments);

  auto* check = app.add_subcommand("check-cumulants", "scaling conditions on every graph up to the limits");
  add_common(check);
  check->add_option("--spec", common.spec, "cumulant spec (JSON); defaults to the config ensemble");
  check->add_option("--vertices", vertices, "largest vertex count")->check(CLI::Range(1, 8));
  check->add_option("--edges", edges, "largest edge count")->check(CLI::Range(1, 8));
  check->add_option("--N", grid, "N grid; defaults to the config N_grid");

  auto* oracle = app.add_subcommand("oracle", "exact finite-N trace moments and their extrapolation");
  add_common(oracle);
  oracle->add_option("--spec", common.spec, "cumulant spec (JSON)");
  oracle->add_option("--N", grid, "N grid")->required();
  oracle->add_option("--k", ks, "moment orders");

  auto* flow = app.add_subcommand("flow", "iterate the effective-potential flow; Green series and ledger");
  add_common(flow);
  flow->add_option("--spec", common.spec, "cumulant spec (JSON)");
  flow->add_option("--orders", orders, "highest power of t")->check(CLI::NonNegativeNumber);
  flow->add_option("--truncation", truncation, "vertex and edge limits, v,e");
  flow->add_flag("--prune", prune, "drop terms that cannot reach the Green function");

  auto* convergence = app.add_subcommand("convergence", "moments, histograms and summary for every N");
  add_common(convergence);
  convergence->add_option("--bins", common.bins, "histogram bins")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalidConfig;
  }

  try {
    if (*sample) return cmd_sample(common, n, count);
    if (*spectrum) return cmd_spectrum(common, n, count, eps);
    if (*moments) return cmd_moments(common);
    if (*check) return cmd_check(common, vertices, edges, grid);
    if (*oracle) return cmd_oracle(common, grid, ks);
    if (*flow) return cmd_flow(common, orders, truncation, prune);
    if (*convergence) {
      const ExperimentConfig config = load_experiment(common);
      const ConvergenceReport report = run_convergence(config);
      for (const auto& row : report.rows) {
        std::cout << "N=" << row.n << " k=" << row.k << " estimate=" << row.estimate << " stderr=" << row.standard_error
                  << " semicircle=" << row.semicircle << " z=" << row.z_score << '\n';
      }
      for (const auto& f : report.files) std::cout << "wrote " << f.string() << '\n';
      return kOk;
    }
  } catch (const wigner::Error& e) {
    std::cerr << "wigner: " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "wigner: " << e.what() << '\n';
    return kFailure;
  }
  return kFailure;
}

// Command-line front end: scenario sweeps, MSC surfaces, non-Markovianity
// tables, and the self-verification suite.
//
// Exit codes: 0 success, 1 invalid input, 2 verification failure, 3 I/O error.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mscsim/scenario.hpp"
#include "mscsim/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalidInput = 1;
constexpr int kExitVerifyFailed = 2;
constexpr int kExitIoError = 3;

struct CommonOptions {
  std::string config_path;
  std::string output_path;
  std::string format;
  std::uint64_t seed = 1;
  bool has_alpha_sq = false;
  double alpha_sq = 0.5;
  std::string family;
  bool has_gamma = false;
  double gamma_over_lambda = 0.2;
  int n_a = 0;
  int n_b = 0;
  bool has_t_max = false;
  double t_lambda_max = 15.0;
  int steps = 0;
  std::string measures;
};

void add_scenario_flags(CLI::App* cmd, CommonOptions* opt) {
  cmd->add_option("--config", opt->config_path, "Scenario JSON file (flags override its values)");
  cmd->add_option("--output", opt->output_path, "Output file; stdout when omitted");
  cmd->add_option("--format", opt->format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--seed", opt->seed,
                  "Accepted on every subcommand; the dataset pipelines are deterministic and "
                  "ignore it");
  cmd->add_option("--alpha-sq", opt->alpha_sq, "|alpha|^2 of the initial Bell-like state")
      ->check(CLI::Range(0.0, 1.0))
      ->each([opt](const std::string&) { opt->has_alpha_sq = true; });
  cmd->add_option("--family", opt->family, "psi or phi")
      ->check(CLI::IsMember({"psi", "phi"}));
  cmd->add_option("--gamma-over-lambda", opt->gamma_over_lambda, "Coupling ratio gamma/lambda")
      ->each([opt](const std::string&) { opt->has_gamma = true; });
  cmd->add_option("--n-a", opt->n_a, "Reservoirs on qubit A")->check(CLI::PositiveNumber);
  cmd->add_option("--n-b", opt->n_b, "Reservoirs on qubit B")->check(CLI::PositiveNumber);
  cmd->add_option("--t-lambda-max", opt->t_lambda_max, "Sweep end in lambda*t units")
      ->each([opt](const std::string&) { opt->has_t_max = true; });
  cmd->add_option("--steps", opt->steps, "Number of time steps");
  cmd->add_option("--measures", opt->measures,
                  "Comma list: msc_l1,msc_re,concurrence_ab,conversion,nonmarkov,unassisted");
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

mscsim::ScenarioConfig build_config(const CommonOptions& opt) {
  mscsim::ScenarioConfig config;
  if (!opt.config_path.empty()) config = mscsim::parse_config(read_file(opt.config_path));

  if (opt.has_alpha_sq) config.alpha_sq = opt.alpha_sq;
  if (!opt.family.empty())
    config.family = opt.family == "phi" ? mscsim::BellFamily::Phi : mscsim::BellFamily::Psi;
  if (opt.has_gamma) config.gamma_over_lambda = opt.gamma_over_lambda;
  if (opt.n_a > 0) config.n_a = opt.n_a;
  if (opt.n_b > 0) config.n_b = opt.n_b;
  if (opt.has_t_max) config.t_lambda_max = opt.t_lambda_max;
  if (opt.steps > 0) config.steps = opt.steps;
  if (!opt.measures.empty()) {
    // Reuse the strict config parser for the measure names.
    std::string json = "{\"measures\":[";
    std::stringstream ss(opt.measures);
    std::string item;
    bool first = true;
    while (std::getline(ss, item, ',')) {
      if (!first) json += ',';
      json += '"' + item + '"';
      first = false;
    }
    json += "]}";
    config.measures = mscsim::parse_config(json).measures;
  }
  if (!opt.output_path.empty()) config.output_path = opt.output_path;
  if (!opt.format.empty())
    config.format = opt.format == "json" ? mscsim::OutputFormat::Json : mscsim::OutputFormat::Csv;

  mscsim::validate_config(config);
  return config;
}

std::vector<int> parse_n_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::size_t dash = item.find('-');
    if (dash != std::string::npos) {
      const int lo = std::stoi(item.substr(0, dash));
      const int hi = std::stoi(item.substr(dash + 1));
      for (int n = lo; n <= hi; ++n) out.push_back(n);
    } else {
      out.push_back(std::stoi(item));
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Steered-coherence dynamics in multiple Lorentzian reservoirs"};
  app.require_subcommand(1);

  CommonOptions sweep_opt, surface_opt;

  auto* sweep = app.add_subcommand("sweep", "Time sweep of MSC and entanglement columns");
  add_scenario_flags(sweep, &sweep_opt);

  auto* surface = app.add_subcommand("surface", "MSC over a |p_A| x |p_B| grid");
  add_scenario_flags(surface, &surface_opt);
  int surface_grid = 21;
  surface->add_option("--grid", surface_grid, "Grid points per axis (>= 11)");

  auto* nonmarkov = app.add_subcommand("nonmarkov", "Regime and non-Markovianity table over N");
  double nm_lambda = 1.0, nm_gamma = 0.2;
  std::string nm_list = "1-5";
  std::string nm_output, nm_format = "csv";
  nonmarkov->add_option("--lambda", nm_lambda, "Spectral width");
  nonmarkov->add_option("--gamma", nm_gamma, "Relaxation-rate parameter");
  nonmarkov->add_option("--n-list", nm_list, "Reservoir counts, e.g. 1,2,3 or 1-5");
  nonmarkov->add_option("--output", nm_output, "Output file; stdout when omitted");
  nonmarkov->add_option("--format", nm_format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  std::uint64_t nm_seed = 1;
  nonmarkov->add_option("--seed", nm_seed,
                        "Accepted on every subcommand; this table is deterministic and ignores it");

  auto* verify = app.add_subcommand("verify", "Run every cross-module invariant suite");
  std::uint64_t seed = 1;
  int samples = 200;
  bool inject_failure = false;
  verify->add_option("--seed", seed, "Deterministic RNG seed");
  verify->add_option("--samples", samples, "Sample count for the generic property checks")
      ->check(CLI::PositiveNumber);
  verify->add_flag("--inject-failure", inject_failure, "Corrupt one tolerance (harness self-test)")
      ->group("");  // hidden

  CLI11_PARSE(app, argc, argv);

  try {
    if (sweep->parsed()) {
      const auto config = build_config(sweep_opt);
      const auto rows = mscsim::compute_sweep(config);
      mscsim::write_output(config.output_path, mscsim::render_sweep(config, rows));
      return kExitOk;
    }
    if (surface->parsed()) {
      const auto config = build_config(surface_opt);
      const auto points = mscsim::compute_surface(config, surface_grid);
      mscsim::write_output(config.output_path, mscsim::render_surface(config, points));
      return kExitOk;
    }
    if (nonmarkov->parsed()) {
      const auto rows = mscsim::compute_nonmarkov(nm_lambda, nm_gamma, parse_n_list(nm_list));
      const auto format =
          nm_format == "json" ? mscsim::OutputFormat::Json : mscsim::OutputFormat::Csv;
      mscsim::write_output(nm_output, mscsim::render_nonmarkov(format, rows));
      return kExitOk;
    }
    if (verify->parsed()) {
      const auto report = mscsim::run_verification(seed, samples, inject_failure);
      std::cout << mscsim::render_report(report);
      return report.all_passed ? kExitOk : kExitVerifyFailed;
    }
  } catch (const mscsim::config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvalidInput;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIoError;
  }
  return kExitInvalidInput;
}

// Scenario configuration and the plot-ready dataset pipelines behind the
// CLI: time sweeps, |p_A| x |p_B| surfaces, and non-Markovianity tables,
// with deterministic CSV/JSON rendering.
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mscsim/evolution.hpp"
#include "mscsim/reservoir.hpp"

namespace mscsim {

/// Invalid configuration content; the message names the offending field.
class config_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class OutputFormat { Csv, Json };

enum class SweepMeasure { MscL1, MscRe, ConcurrenceAb, Conversion, NonMarkov, Unassisted };

const char* to_string(OutputFormat f);
const char* to_string(SweepMeasure m);
const char* to_string(BellFamily f);

/// Full sweep description. Time is in lambda*t units: lambda is normalized
/// to 1 internally and gamma enters as the dimensionless ratio gamma/lambda.
struct ScenarioConfig {
  double alpha_sq = 0.5;       // |alpha|^2; alpha, beta taken real and >= 0
  BellFamily family = BellFamily::Psi;
  double gamma_over_lambda = 0.2;
  int n_a = 1;
  int n_b = 1;
  double t_lambda_max = 15.0;
  int steps = 1000;
  std::vector<SweepMeasure> measures = {SweepMeasure::MscL1, SweepMeasure::MscRe,
                                        SweepMeasure::ConcurrenceAb, SweepMeasure::Conversion,
                                        SweepMeasure::Unassisted};
  std::string output_path;     // empty = stdout
  OutputFormat format = OutputFormat::Csv;

  bool operator==(const ScenarioConfig&) const = default;

  bool has_measure(SweepMeasure m) const;
  BellLikeState initial_state() const;
  ReservoirBank bank_a() const { return ReservoirBank{1.0, gamma_over_lambda, n_a}; }
  ReservoirBank bank_b() const { return ReservoirBank{1.0, gamma_over_lambda, n_b}; }
};

/// Strict parse of a flat JSON object with exactly the ScenarioConfig field
/// names; unknown keys are a hard error. Throws config_error.
ScenarioConfig parse_config(const std::string& json_text);

/// Canonical JSON rendering; parse_config(render_config(c)) == c.
std::string render_config(const ScenarioConfig& config);

void validate_config(const ScenarioConfig& config);

struct SweepRow {
  double t_lambda = 0.0;
  double p_a = 1.0;
  double p_b = 1.0;
  double msc_l1 = 0.0;
  double msc_re = 0.0;          // bits
  double concurrence_ab = 0.0;
  double bc_concurrence = 0.0;
  double success_prob = 0.0;
  double unassisted_l1 = 0.0;
};

/// One pipeline evaluation at a fixed lambda*t. Only the columns selected by
/// config.measures are computed; the rest stay zero.
SweepRow compute_sweep_row(const ScenarioConfig& config, double t_lambda);

/// The full time sweep: `steps` rows from t = 0 to t_lambda_max inclusive.
std::vector<SweepRow> compute_sweep(const ScenarioConfig& config);

/// Column names emitted for this config: t_lambda, p_a, p_b always, then the
/// selected measure columns in the fixed SweepRow order.
std::vector<std::string> sweep_columns(const ScenarioConfig& config);

std::string render_sweep(const ScenarioConfig& config, const std::vector<SweepRow>& rows);

struct SurfacePoint {
  double p_a = 0.0;
  double p_b = 0.0;
  double msc_l1 = 0.0;
  double msc_re = 0.0;
};

/// MSC over a uniform |p_A| x |p_B| grid on [0,1]^2. grid is the number of
/// points per axis, at least 11.
std::vector<SurfacePoint> compute_surface(const ScenarioConfig& config, int grid);

std::string render_surface(const ScenarioConfig& config, const std::vector<SurfacePoint>& points);

struct NonMarkovRow {
  int n = 1;
  Regime reg = Regime::Markovian;
  double d = 0.0;
  int n_cr = 1;
  std::optional<double> t_z1;          // non-Markovian only
  std::optional<double> t_p2;
  double bri = 0.0;
  double blp = 0.0;
  std::optional<double> blp_numeric;   // quadrature oracle, non-Markovian only
};

std::vector<NonMarkovRow> compute_nonmarkov(double lambda, double gamma,
                                            const std::vector<int>& n_list);

std::string render_nonmarkov(OutputFormat format, const std::vector<NonMarkovRow>& rows);

/// Shortest text that reproduces the value at 12 significant digits.
std::string format_value(double v);

/// Writes text to path, or to stdout when path is empty. Throws
/// std::runtime_error on I/O failure.
void write_output(const std::string& path, const std::string& text);

}  // namespace mscsim

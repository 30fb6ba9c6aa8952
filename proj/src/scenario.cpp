#include "mscsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>

#include "mscsim/entanglement.hpp"
#include "mscsim/steering.hpp"

#include <json.hpp>

namespace mscsim {

namespace {

using ordered_json = nlohmann::ordered_json;

const std::vector<std::pair<SweepMeasure, const char*>>& measure_names() {
  static const std::vector<std::pair<SweepMeasure, const char*>> names = {
      {SweepMeasure::MscL1, "msc_l1"},
      {SweepMeasure::MscRe, "msc_re"},
      {SweepMeasure::ConcurrenceAb, "concurrence_ab"},
      {SweepMeasure::Conversion, "conversion"},
      {SweepMeasure::NonMarkov, "nonmarkov"},
      {SweepMeasure::Unassisted, "unassisted"},
  };
  return names;
}

SweepMeasure parse_measure(const std::string& s) {
  for (const auto& [m, name] : measure_names())
    if (s == name) return m;
  throw config_error("measures: unknown measure '" + s + "'");
}

BellFamily parse_family(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "psi") return BellFamily::Psi;
  if (s == "phi") return BellFamily::Phi;
  throw config_error("family: expected 'psi' or 'phi', got '" + s + "'");
}

OutputFormat parse_format(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw config_error("format: expected 'csv' or 'json', got '" + s + "'");
}

}  // namespace

const char* to_string(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

const char* to_string(SweepMeasure m) {
  for (const auto& [mm, name] : measure_names())
    if (mm == m) return name;
  return "?";
}

const char* to_string(BellFamily f) { return f == BellFamily::Psi ? "psi" : "phi"; }

bool ScenarioConfig::has_measure(SweepMeasure m) const {
  return std::find(measures.begin(), measures.end(), m) != measures.end();
}

BellLikeState ScenarioConfig::initial_state() const {
  BellLikeState s;
  s.alpha = std::sqrt(alpha_sq);
  s.beta = std::sqrt(std::max(0.0, 1.0 - alpha_sq));
  s.family = family;
  return s;
}

void validate_config(const ScenarioConfig& c) {
  if (!(c.alpha_sq >= 0.0 && c.alpha_sq <= 1.0))
    throw config_error("alpha_sq: must be in [0, 1]");
  if (!(c.gamma_over_lambda > 0.0))
    throw config_error("gamma_over_lambda: must be > 0");
  if (c.n_a < 1) throw config_error("n_a: must be >= 1");
  if (c.n_b < 1) throw config_error("n_b: must be >= 1");
  if (!(c.t_lambda_max > 0.0)) throw config_error("t_lambda_max: must be > 0");
  if (c.steps < 2) throw config_error("steps: must be >= 2");
  if (c.measures.empty()) throw config_error("measures: must not be empty");
}

ScenarioConfig parse_config(const std::string& json_text) {
  ordered_json j;
  try {
    j = ordered_json::parse(json_text);
  } catch (const std::exception& e) {
    throw config_error(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw config_error("config must be a flat JSON object");

  ScenarioConfig c;
  for (const auto& [key, value] : j.items()) {
    try {
      if (key == "alpha_sq") c.alpha_sq = value.get<double>();
      else if (key == "family") c.family = parse_family(value.get<std::string>());
      else if (key == "gamma_over_lambda") c.gamma_over_lambda = value.get<double>();
      else if (key == "n_a") c.n_a = value.get<int>();
      else if (key == "n_b") c.n_b = value.get<int>();
      else if (key == "t_lambda_max") c.t_lambda_max = value.get<double>();
      else if (key == "steps") c.steps = value.get<int>();
      else if (key == "measures") {
        c.measures.clear();
        for (const auto& item : value) c.measures.push_back(parse_measure(item.get<std::string>()));
      } else if (key == "output_path") c.output_path = value.get<std::string>();
      else if (key == "format") c.format = parse_format(value.get<std::string>());
      else throw config_error("unknown config field '" + key + "'");
    } catch (const config_error&) {
      throw;
    } catch (const std::exception&) {
      throw config_error(key + ": wrong JSON type");
    }
  }
  validate_config(c);
  return c;
}

std::string render_config(const ScenarioConfig& c) {
  ordered_json j;
  j["alpha_sq"] = c.alpha_sq;
  j["family"] = to_string(c.family);
  j["gamma_over_lambda"] = c.gamma_over_lambda;
  j["n_a"] = c.n_a;
  j["n_b"] = c.n_b;
  j["t_lambda_max"] = c.t_lambda_max;
  j["steps"] = c.steps;
  ordered_json ms = ordered_json::array();
  for (SweepMeasure m : c.measures) ms.push_back(to_string(m));
  j["measures"] = ms;
  j["output_path"] = c.output_path;
  j["format"] = to_string(c.format);
  return j.dump(2) + "\n";
}

SweepRow compute_sweep_row(const ScenarioConfig& config, double t_lambda) {
  const BellLikeState state = config.initial_state();
  SweepRow row;
  row.t_lambda = t_lambda;
  row.p_a = decay_amplitude(config.bank_a(), t_lambda).value;
  row.p_b = decay_amplitude(config.bank_b(), t_lambda).value;

  if (config.has_measure(SweepMeasure::MscL1))
    row.msc_l1 = msc_l1_closed_form(state.alpha, row.p_a, state.beta, row.p_b);

  const bool needs_state = config.has_measure(SweepMeasure::MscRe) ||
                           config.has_measure(SweepMeasure::ConcurrenceAb) ||
                           config.has_measure(SweepMeasure::Conversion);
  if (needs_state) {
    const Mat4 rho_t = bell_like_evolved(state, row.p_a, row.p_b);
    if (config.has_measure(SweepMeasure::MscRe))
      row.msc_re = msc_numeric(rho_t, CoherenceMeasure::RelativeEntropy).value;
    if (config.has_measure(SweepMeasure::ConcurrenceAb))
      row.concurrence_ab = concurrence_x_state(rho_t);
    if (config.has_measure(SweepMeasure::Conversion)) {
      const double theta0 = optimal_polar_angle(state.alpha, row.p_a);
      try {
        const ConditionalOutcome outcome = conditional_state(rho_t, MeasurementDirection{theta0, 0.0});
        const ConversionReport report = cnot_convert(outcome.state, outcome.probability);
        row.bc_concurrence = report.bc_concurrence;
        row.success_prob = outcome.probability;
      } catch (const degenerate_outcome_error&) {
        // p_a (numerically) at a zero crossing: the optimal outcome has
        // vanishing probability and creates nothing.
        row.bc_concurrence = 0.0;
        row.success_prob = optimal_success_probability(state.alpha, row.p_a);
      }
    }
  }
  if (config.has_measure(SweepMeasure::Unassisted))
    row.unassisted_l1 = unassisted_coherence(state.alpha, state.beta, row.p_b);
  return row;
}

std::vector<SweepRow> compute_sweep(const ScenarioConfig& config) {
  validate_config(config);
  std::vector<SweepRow> rows;
  rows.reserve(static_cast<std::size_t>(config.steps));
  const double dt = config.t_lambda_max / (config.steps - 1);
  for (int i = 0; i < config.steps; ++i)
    rows.push_back(compute_sweep_row(config, i * dt));
  return rows;
}

std::vector<std::string> sweep_columns(const ScenarioConfig& config) {
  std::vector<std::string> cols = {"t_lambda", "p_a", "p_b"};
  if (config.has_measure(SweepMeasure::MscL1)) cols.emplace_back("msc_l1");
  if (config.has_measure(SweepMeasure::MscRe)) cols.emplace_back("msc_re");
  if (config.has_measure(SweepMeasure::ConcurrenceAb)) cols.emplace_back("concurrence_ab");
  if (config.has_measure(SweepMeasure::Conversion)) {
    cols.emplace_back("bc_concurrence");
    cols.emplace_back("success_prob");
  }
  if (config.has_measure(SweepMeasure::Unassisted)) cols.emplace_back("unassisted_l1");
  return cols;
}

namespace {

std::vector<double> row_values(const ScenarioConfig& config, const SweepRow& r) {
  std::vector<double> v = {r.t_lambda, r.p_a, r.p_b};
  if (config.has_measure(SweepMeasure::MscL1)) v.push_back(r.msc_l1);
  if (config.has_measure(SweepMeasure::MscRe)) v.push_back(r.msc_re);
  if (config.has_measure(SweepMeasure::ConcurrenceAb)) v.push_back(r.concurrence_ab);
  if (config.has_measure(SweepMeasure::Conversion)) {
    v.push_back(r.bc_concurrence);
    v.push_back(r.success_prob);
  }
  if (config.has_measure(SweepMeasure::Unassisted)) v.push_back(r.unassisted_l1);
  return v;
}

std::string render_table_csv(const std::vector<std::string>& columns,
                             const std::vector<std::vector<std::string>>& cells) {
  std::string out;
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out += ',';
    out += columns[i];
  }
  out += '\n';
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += row[i];
    }
    out += '\n';
  }
  return out;
}

}  // namespace

std::string render_sweep(const ScenarioConfig& config, const std::vector<SweepRow>& rows) {
  const auto columns = sweep_columns(config);
  if (config.format == OutputFormat::Csv) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows) {
      std::vector<std::string> line;
      for (double v : row_values(config, r)) line.push_back(format_value(v));
      cells.push_back(std::move(line));
    }
    return render_table_csv(columns, cells);
  }
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj;
    const auto values = row_values(config, r);
    for (std::size_t i = 0; i < columns.size(); ++i) obj[columns[i]] = values[i];
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<SurfacePoint> compute_surface(const ScenarioConfig& config, int grid) {
  validate_config(config);
  if (grid < 11) throw config_error("grid: surface resolution must be >= 11 per axis");
  const BellLikeState state = config.initial_state();

  // The surface row format is fixed; both measures are always computed.
  std::vector<SurfacePoint> points;
  points.reserve(static_cast<std::size_t>(grid) * grid);
  for (int i = 0; i < grid; ++i) {
    const double p_a = static_cast<double>(i) / (grid - 1);
    for (int j = 0; j < grid; ++j) {
      const double p_b = static_cast<double>(j) / (grid - 1);
      SurfacePoint pt;
      pt.p_a = p_a;
      pt.p_b = p_b;
      pt.msc_l1 = msc_l1_closed_form(state.alpha, p_a, state.beta, p_b);
      pt.msc_re = msc_numeric(bell_like_evolved(state, p_a, p_b),
                              CoherenceMeasure::RelativeEntropy)
                      .value;
      points.push_back(pt);
    }
  }
  return points;
}

std::string render_surface(const ScenarioConfig& config, const std::vector<SurfacePoint>& points) {
  const std::vector<std::string> columns = {"p_a", "p_b", "msc_l1", "msc_re"};
  if (config.format == OutputFormat::Csv) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(points.size());
    for (const auto& p : points)
      cells.push_back({format_value(p.p_a), format_value(p.p_b), format_value(p.msc_l1),
                       format_value(p.msc_re)});
    return render_table_csv(columns, cells);
  }
  ordered_json arr = ordered_json::array();
  for (const auto& p : points) {
    ordered_json obj;
    obj["p_a"] = p.p_a;
    obj["p_b"] = p.p_b;
    obj["msc_l1"] = p.msc_l1;
    obj["msc_re"] = p.msc_re;
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::vector<NonMarkovRow> compute_nonmarkov(double lambda, double gamma,
                                            const std::vector<int>& n_list) {
  if (n_list.empty()) throw config_error("n_list: must not be empty");
  std::vector<NonMarkovRow> rows;
  rows.reserve(n_list.size());
  for (int n : n_list) {
    const ReservoirBank bank{lambda, gamma, n};
    require_valid(bank);
    NonMarkovRow row;
    row.n = n;
    row.reg = regime(bank);
    row.d = d_parameter(bank);
    row.n_cr = critical_reservoir_number(lambda, gamma);
    row.bri = bri_measure(bank);
    row.blp = blp_measure(bank);
    if (row.reg == Regime::NonMarkovian) {
      row.t_z1 = zero_time(bank, 1);
      row.t_p2 = peak_time(bank, 2);
      const double period = 2.0 * std::numbers::pi / row.d;
      row.blp_numeric = blp_numeric_oracle(bank, 8.0 * period, period / 1200.0);
    }
    rows.push_back(row);
  }
  return rows;
}

std::string render_nonmarkov(OutputFormat format, const std::vector<NonMarkovRow>& rows) {
  const std::vector<std::string> columns = {"n",   "regime", "d",   "n_cr",       "t_z1",
                                            "t_p2", "bri",    "blp", "blp_numeric"};
  auto opt_str = [](const std::optional<double>& v) {
    return v ? format_value(*v) : std::string{};
  };
  if (format == OutputFormat::Csv) {
    std::vector<std::vector<std::string>> cells;
    cells.reserve(rows.size());
    for (const auto& r : rows)
      cells.push_back({std::to_string(r.n), to_string(r.reg), format_value(r.d),
                       std::to_string(r.n_cr), opt_str(r.t_z1), opt_str(r.t_p2),
                       format_value(r.bri), format_value(r.blp), opt_str(r.blp_numeric)});
    return render_table_csv(columns, cells);
  }
  ordered_json arr = ordered_json::array();
  for (const auto& r : rows) {
    ordered_json obj;
    obj["n"] = r.n;
    obj["regime"] = to_string(r.reg);
    obj["d"] = r.d;
    obj["n_cr"] = r.n_cr;
    obj["t_z1"] = r.t_z1 ? ordered_json(*r.t_z1) : ordered_json(nullptr);
    obj["t_p2"] = r.t_p2 ? ordered_json(*r.t_p2) : ordered_json(nullptr);
    obj["bri"] = r.bri;
    obj["blp"] = r.blp;
    obj["blp_numeric"] = r.blp_numeric ? ordered_json(*r.blp_numeric) : ordered_json(nullptr);
    arr.push_back(std::move(obj));
  }
  return arr.dump(2) + "\n";
}

std::string format_value(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
    if (!std::cout) throw std::runtime_error("write_output: stdout write failed");
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("write_output: cannot open '" + path + "'");
  out << text;
  out.flush();
  if (!out) throw std::runtime_error("write_output: write to '" + path + "' failed");
}

}  // namespace mscsim

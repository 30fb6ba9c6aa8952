#include <doctest.h>

#include <cmath>
#include <string>

#include "mscsim/scenario.hpp"
#include "mscsim/steering.hpp"
#include "mscsim/verify.hpp"

using namespace mscsim;

TEST_CASE("config defaults and round trip") {
  const ScenarioConfig defaults;
  CHECK(defaults.alpha_sq == 0.5);
  CHECK(defaults.gamma_over_lambda == 0.2);
  CHECK(defaults.steps == 1000);
  CHECK(defaults.t_lambda_max == 15.0);

  const ScenarioConfig parsed = parse_config(render_config(defaults));
  CHECK(parsed == defaults);

  ScenarioConfig custom;
  custom.alpha_sq = 0.37;
  custom.family = BellFamily::Phi;
  custom.gamma_over_lambda = 2.0;
  custom.n_a = 1;
  custom.n_b = 4;
  custom.t_lambda_max = 25.0;
  custom.steps = 500;
  custom.measures = {SweepMeasure::MscL1, SweepMeasure::Unassisted};
  custom.output_path = "out.json";
  custom.format = OutputFormat::Json;
  CHECK(parse_config(render_config(custom)) == custom);
}

TEST_CASE("config parsing rejects bad input with the field name") {
  CHECK_THROWS_AS(parse_config("not json"), config_error);
  CHECK_THROWS_AS(parse_config("[1,2]"), config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"alpha_square": 0.5})"),
                       doctest::Contains("alpha_square"), config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"alpha_sq": 1.5})"), doctest::Contains("alpha_sq"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"steps": 1})"), doctest::Contains("steps"), config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"gamma_over_lambda": -0.2})"),
                       doctest::Contains("gamma_over_lambda"), config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"measures": ["msc_l2"]})"), doctest::Contains("msc_l2"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"family": "pssi"})"), doctest::Contains("family"),
                       config_error);
  CHECK_THROWS_WITH_AS(parse_config(R"({"steps": "many"})"), doctest::Contains("steps"),
                       config_error);
}

TEST_CASE("sweep columns follow the measure selection in fixed order") {
  ScenarioConfig config;
  config.measures = {SweepMeasure::Unassisted, SweepMeasure::MscL1};
  const auto cols = sweep_columns(config);
  const std::vector<std::string> expected = {"t_lambda", "p_a", "p_b", "msc_l1", "unassisted_l1"};
  CHECK(cols == expected);

  config.measures = {SweepMeasure::Conversion};
  const auto conv = sweep_columns(config);
  const std::vector<std::string> expected_conv = {"t_lambda", "p_a", "p_b", "bc_concurrence",
                                                  "success_prob"};
  CHECK(conv == expected_conv);
}

TEST_CASE("sweep rows reproduce the closed forms") {
  ScenarioConfig config;
  config.steps = 51;
  config.t_lambda_max = 10.0;
  config.measures = {SweepMeasure::MscL1, SweepMeasure::ConcurrenceAb, SweepMeasure::Conversion,
                     SweepMeasure::Unassisted};
  const auto rows = compute_sweep(config);
  REQUIRE(rows.size() == 51);

  const BellLikeState st = config.initial_state();
  CHECK(rows.front().t_lambda == 0.0);
  CHECK(rows.front().p_a == 1.0);
  CHECK(rows.front().msc_l1 == doctest::Approx(1.0));
  CHECK(rows.front().concurrence_ab == doctest::Approx(1.0));
  CHECK(rows.back().t_lambda == doctest::Approx(10.0));

  for (const auto& row : rows) {
    CHECK(std::abs(row.msc_l1 - msc_l1_closed_form(st.alpha, row.p_a, st.beta, row.p_b)) <
          1e-12);
    CHECK(std::abs(row.unassisted_l1 - 2.0 * 0.5 * std::abs(row.p_b)) < 1e-12);
    CHECK(row.bc_concurrence == doctest::Approx(row.msc_l1).epsilon(1e-9));
  }

  // Markovian default decays monotonically.
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].msc_l1 <= rows[i - 1].msc_l1 + 1e-14);
}

TEST_CASE("sweeps keep only selected columns in the output") {
  ScenarioConfig config;
  config.steps = 5;
  config.t_lambda_max = 2.0;
  config.measures = {SweepMeasure::MscL1};
  const std::string csv = render_sweep(config, compute_sweep(config));
  CHECK(csv.substr(0, csv.find('\n')) == "t_lambda,p_a,p_b,msc_l1");
  // Header plus five rows, LF endings.
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 6);
  CHECK(csv.find('\r') == std::string::npos);
}

TEST_CASE("rendering is deterministic and 12-digit") {
  ScenarioConfig config;
  config.steps = 12;
  config.t_lambda_max = 6.0;
  config.n_b = 4;
  config.measures = {SweepMeasure::MscL1, SweepMeasure::Conversion};
  const auto rows = compute_sweep(config);
  CHECK(render_sweep(config, rows) == render_sweep(config, compute_sweep(config)));

  CHECK(format_value(0.5) == "0.5");
  CHECK(format_value(1.0 / 3.0) == "0.333333333333");
  CHECK(format_value(12345.6789) == "12345.6789");

  config.format = OutputFormat::Json;
  const std::string json = render_sweep(config, rows);
  CHECK(json.find("\"msc_l1\"") != std::string::npos);
  CHECK(json.find("\"msc_re\"") == std::string::npos);
}

TEST_CASE("surface grid hits the known corners") {
  ScenarioConfig config;
  const auto points = compute_surface(config, 11);
  REQUIRE(points.size() == 121);
  CHECK(points.front().p_a == 0.0);
  CHECK(points.front().msc_l1 == 0.0);            // p_b = 0 kills the MSC
  CHECK(points.back().p_a == 1.0);
  CHECK(points.back().p_b == 1.0);
  CHECK(points.back().msc_l1 == doctest::Approx(1.0));
  CHECK(points.back().msc_re == doctest::Approx(1.0).epsilon(1e-9));  // one bit

  // Linear in p_b at fixed p_a.
  for (std::size_t i = 0; i < 11; ++i) {
    const auto& base = points[5 * 11 + 10];  // p_a = 0.5, p_b = 1
    const auto& pt = points[5 * 11 + i];
    CHECK(std::abs(pt.msc_l1 - pt.p_b * base.msc_l1) < 1e-12);
  }
  CHECK_THROWS_AS(compute_surface(config, 5), config_error);
}

TEST_CASE("nonmarkov table matches the reservoir module") {
  const auto rows = compute_nonmarkov(1.0, 0.2, {1, 2, 3, 4, 5});
  REQUIRE(rows.size() == 5);
  CHECK(rows[0].reg == Regime::Markovian);
  CHECK(rows[1].reg == Regime::Markovian);
  CHECK(rows[2].reg == Regime::NonMarkovian);
  CHECK(rows[0].bri == 0.0);
  CHECK(rows[0].n_cr == 3);
  CHECK_FALSE(rows[0].t_z1.has_value());
  CHECK(rows[2].t_z1.has_value());
  CHECK(rows[3].bri > rows[2].bri);
  CHECK(rows[4].bri > rows[3].bri);
  for (const auto& row : rows)
    if (row.blp_numeric)
      CHECK(std::abs(*row.blp_numeric - row.blp) / row.blp < 1e-3);

  const std::string csv = render_nonmarkov(OutputFormat::Csv, rows);
  CHECK(csv.substr(0, csv.find('\n')) == "n,regime,d,n_cr,t_z1,t_p2,bri,blp,blp_numeric");
  const std::string json = render_nonmarkov(OutputFormat::Json, rows);
  CHECK(json.find("\"regime\": \"Markovian\"") != std::string::npos);
}

TEST_CASE("verification suite passes and the failure path works") {
  const auto report = run_verification(1, 60);
  for (const auto& check : report.checks) {
    INFO(check.name, " max_dev=", check.max_deviation, " tol=", check.tolerance, " ",
         check.note);
    CHECK(check.passed);
  }
  CHECK(report.all_passed);

  CHECK(render_report(report) == render_report(run_verification(1, 60)));
  CHECK(render_report(report) != render_report(run_verification(2, 60)));

  const auto sabotaged = run_verification(1, 10, true);
  CHECK_FALSE(sabotaged.all_passed);
  CHECK(render_report(sabotaged).find("FAIL") != std::string::npos);
}

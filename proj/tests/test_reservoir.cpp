#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mscsim/reservoir.hpp"

using namespace mscsim;

namespace {

constexpr double kPi = std::numbers::pi;

ReservoirBank random_bank(std::mt19937_64& rng, bool non_markovian) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  ReservoirBank bank;
  bank.lambda = 0.5 + 1.5 * u01(rng);
  bank.n_reservoirs = 1 + static_cast<int>(4.0 * u01(rng));
  const double boundary = bank.lambda / (2.0 * bank.n_reservoirs);
  bank.gamma = non_markovian ? boundary * (1.2 + 4.0 * u01(rng))
                             : boundary * (0.05 + 0.75 * u01(rng));
  return bank;
}

}  // namespace

TEST_CASE("d parameter") {
  CHECK(d_parameter({1.0, 0.2, 3}) == doctest::Approx(std::sqrt(0.2)).epsilon(1e-14));
  CHECK(d_parameter({1.0, 0.5, 1}) == doctest::Approx(0.0));
  CHECK(d_parameter({1.0, 2.0, 1}) == doctest::Approx(std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("regime classification and the critical reservoir number") {
  CHECK(critical_reservoir_number(1.0, 0.2) == 3);
  CHECK(critical_reservoir_number(1.0, 2.0) == 1);
  // lambda / 2 gamma an exact integer: the formula still says floor + 1, and
  // the bank at N = lambda / 2 gamma sits exactly on the critical boundary.
  CHECK(critical_reservoir_number(1.0, 0.5) == 2);
  CHECK(regime({1.0, 0.5, 1}) == Regime::Critical);

  CHECK(regime({1.0, 0.2, 1}) == Regime::Markovian);
  CHECK(regime({1.0, 0.2, 2}) == Regime::Markovian);
  CHECK(regime({1.0, 0.2, 3}) == Regime::NonMarkovian);
  CHECK(regime({1.0, 2.0, 1}) == Regime::NonMarkovian);

  CHECK_THROWS_AS(critical_reservoir_number(-1.0, 0.2), std::invalid_argument);
  CHECK_THROWS_AS(regime({0.0, 0.2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(regime({1.0, 0.2, 0}), std::invalid_argument);
}

TEST_CASE("decay amplitude branches") {
  CHECK(decay_amplitude({1.0, 0.2, 1}, 0.0).value == 1.0);
  CHECK(decay_amplitude({1.0, 2.0, 1}, 0.0).value == 1.0);
  CHECK(decay_amplitude({1.0, 0.5, 1}, 0.0).value == 1.0);

  // Hyperbolic branch at lambda=1, gamma=0.2, N=1, t=1; frozen from an
  // independent high-precision evaluation.
  CHECK(decay_amplitude({1.0, 0.2, 1}, 1.0).value ==
        doctest::Approx(0.963495961280410).epsilon(1e-13));

  // Critical branch is the analytic limit.
  const double t = 3.7;
  CHECK(decay_amplitude({1.0, 0.5, 1}, t).value ==
        doctest::Approx(std::exp(-0.5 * t) * (1.0 + 0.5 * t)).epsilon(1e-14));

  CHECK_THROWS_AS(decay_amplitude({1.0, 0.2, 1}, -0.1), std::invalid_argument);
}

TEST_CASE("zero and peak times") {
  const ReservoirBank bank{1.0, 0.2, 3};
  CHECK(peak_time(bank, 1) == 0.0);
  // t_z1 = 2 (pi - arctan(sqrt(0.2))) / sqrt(0.2), frozen value.
  CHECK(zero_time(bank, 1) == doctest::Approx(12.1689427409462).epsilon(1e-13));
  CHECK(std::abs(decay_amplitude(bank, zero_time(bank, 1)).value) < 1e-12);

  const ReservoirBank strong{1.0, 2.0, 1};
  CHECK(peak_time(strong, 2) == doctest::Approx(2.0 * kPi / std::sqrt(3.0)).epsilon(1e-14));

  CHECK_THROWS_AS(zero_time({1.0, 0.2, 1}, 1), regime_error);
  CHECK_THROWS_AS(peak_time({1.0, 0.5, 1}, 2), regime_error);
  CHECK_THROWS_AS(zero_time(strong, 0), std::invalid_argument);
}

TEST_CASE("peak times are local maxima of |p|") {
  const ReservoirBank bank{1.0, 2.0, 1};
  for (int l = 2; l <= 4; ++l) {
    const double tp = peak_time(bank, l);
    const double at = std::abs(decay_amplitude(bank, tp).value);
    const double eps = 1e-4;
    CHECK(at >= std::abs(decay_amplitude(bank, tp - eps).value));
    CHECK(at >= std::abs(decay_amplitude(bank, tp + eps).value));
  }
}

TEST_CASE("backflow-ratio measure") {
  CHECK(bri_measure({1.0, 0.2, 1}) == 0.0);
  CHECK(bri_measure({1.0, 0.5, 1}) == 0.0);  // critical counts as no backflow
  CHECK(bri_measure({1.0, 2.0, 1}) == doctest::Approx(0.163033534821580).epsilon(1e-13));
  CHECK(bri_measure({1.0, 0.2, 3}) == doctest::Approx(8.89532307064496e-4).epsilon(1e-12));
}

TEST_CASE("BLP measure closed form") {
  CHECK(blp_measure({1.0, 0.2, 1}) == 0.0);
  CHECK(blp_measure({1.0, 2.0, 1}) == doctest::Approx(0.194791000123077).epsilon(1e-13));
  CHECK(blp_measure({1.0, 0.2, 4}) > blp_measure({1.0, 0.2, 3}));
}

TEST_CASE("BLP numeric oracle against the closed form") {
  for (const ReservoirBank bank : {ReservoirBank{1.0, 2.0, 1}, ReservoirBank{1.0, 0.2, 3}}) {
    const double period = 2.0 * kPi / d_parameter(bank);
    const double numeric = blp_numeric_oracle(bank, 8.0 * period, period / 1200.0);
    const double closed = blp_measure(bank);
    CHECK(std::abs(numeric - closed) / closed < 1e-3);
  }
  CHECK_THROWS_AS(blp_numeric_oracle({1.0, 0.2, 1}, 100.0, 0.01), regime_error);
  const ReservoirBank ok{1.0, 2.0, 1};
  CHECK_THROWS_AS(blp_numeric_oracle(ok, 2.0, 0.01), std::invalid_argument);  // too short
}

TEST_CASE("decay amplitude stays inside [-1, 1] and zeros alternate") {
  std::mt19937_64 rng(41);
  for (int s = 0; s < 40; ++s) {
    const ReservoirBank bank = random_bank(rng, s % 2 == 0);
    for (int i = 0; i <= 60; ++i) {
      const double p = decay_amplitude(bank, 0.3 * i / bank.lambda).value;
      CHECK(std::abs(p) <= 1.0);
    }
    if (regime(bank) == Regime::NonMarkovian) {
      double prev_sign = 0.0;
      for (int l = 1; l <= 5; ++l) {
        CHECK(std::abs(decay_amplitude(bank, zero_time(bank, l)).value) < 1e-12);
        const double mid = 0.5 * (zero_time(bank, l) + zero_time(bank, l + 1));
        const double sign = decay_amplitude(bank, mid).value > 0.0 ? 1.0 : -1.0;
        if (l > 1) CHECK(sign == -prev_sign);
        prev_sign = sign;
      }
    } else if (regime(bank) == Regime::Markovian) {
      double prev = 1.0;
      for (int i = 1; i <= 100; ++i) {
        const double cur = std::abs(decay_amplitude(bank, 0.15 * i / bank.lambda).value);
        CHECK(cur <= prev + 1e-14);
        prev = cur;
      }
    }
  }
}

TEST_CASE("branches agree near the critical boundary") {
  for (double side : {-1.0, 1.0}) {
    for (double rel : {1e-9, 5e-9}) {
      const double gamma = 0.4;
      const int n = 2;
      const ReservoirBank bank{2.0 * n * gamma * (1.0 + side * rel), gamma, n};
      for (int i = 0; i <= 40; ++i) {
        const double t = 0.25 * i / bank.lambda;
        const double limit = std::exp(-0.5 * bank.lambda * t) * (1.0 + 0.5 * bank.lambda * t);
        CHECK(std::abs(decay_amplitude(bank, t).value - limit) < 1e-6);
      }
    }
  }
}

TEST_CASE("measures rise with the number of reservoirs past critical") {
  const double lambda = 1.0, gamma = 0.2;
  const int n_cr = critical_reservoir_number(lambda, gamma);
  double prev_bri = 0.0, prev_blp = 0.0;
  for (int n = n_cr; n < n_cr + 4; ++n) {
    const ReservoirBank bank{lambda, gamma, n};
    CHECK(regime(bank) == Regime::NonMarkovian);
    CHECK(bri_measure(bank) > prev_bri);
    CHECK(blp_measure(bank) > prev_blp);
    prev_bri = bri_measure(bank);
    prev_blp = blp_measure(bank);
  }
}

#include "mscsim/reservoir.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace mscsim {

namespace {

constexpr double kPi = std::numbers::pi;

double boundary_gap(const ReservoirBank& bank) {
  return bank.lambda - 2.0 * bank.n_reservoirs * bank.gamma;
}

}  // namespace

const char* to_string(Regime r) {
  switch (r) {
    case Regime::Markovian: return "Markovian";
    case Regime::Critical: return "Critical";
    case Regime::NonMarkovian: return "NonMarkovian";
  }
  return "?";
}

void require_valid(const ReservoirBank& bank) {
  if (!(bank.lambda > 0.0) || !std::isfinite(bank.lambda))
    throw std::invalid_argument("ReservoirBank: lambda must be positive");
  if (!(bank.gamma > 0.0) || !std::isfinite(bank.gamma))
    throw std::invalid_argument("ReservoirBank: gamma must be positive");
  if (bank.n_reservoirs < 1)
    throw std::invalid_argument("ReservoirBank: n_reservoirs must be >= 1");
}

double d_parameter(const ReservoirBank& bank) {
  require_valid(bank);
  return std::sqrt(std::abs(bank.lambda * bank.lambda -
                            2.0 * bank.n_reservoirs * bank.gamma * bank.lambda));
}

Regime regime(const ReservoirBank& bank) {
  require_valid(bank);
  const double gap = boundary_gap(bank);
  if (std::abs(gap) <= kCriticalBandRel * bank.lambda) return Regime::Critical;
  return gap > 0.0 ? Regime::Markovian : Regime::NonMarkovian;
}

int critical_reservoir_number(double lambda, double gamma) {
  if (!(lambda > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("critical_reservoir_number: parameters must be positive");
  return static_cast<int>(std::floor(lambda / (2.0 * gamma))) + 1;
}

DecayAmplitude decay_amplitude(const ReservoirBank& bank, double t) {
  require_valid(bank);
  if (t < 0.0 || !std::isfinite(t))
    throw std::invalid_argument("decay_amplitude: time must be finite and >= 0");

  const double lam = bank.lambda;
  const double half_t = 0.5 * t;
  const double envelope = std::exp(-lam * half_t);

  double p = 0.0;
  switch (regime(bank)) {
    case Regime::Critical:
      p = envelope * (1.0 + lam * half_t);
      break;
    case Regime::NonMarkovian: {
      const double d = d_parameter(bank);
      p = envelope * (std::cos(d * half_t) + (lam / d) * std::sin(d * half_t));
      break;
    }
    case Regime::Markovian: {
      const double d = d_parameter(bank);
      // cosh/sinh grow like exp(d t / 2) with d < lambda, so fold the
      // envelope in first to keep everything finite at large t.
      const double x = d * half_t;
      const double ep = std::exp(x - lam * half_t);
      const double em = std::exp(-x - lam * half_t);
      p = 0.5 * (ep + em) + (lam / d) * 0.5 * (ep - em);
      break;
    }
  }
  // |p| <= 1 holds analytically in every branch; clip rounding overshoot at t ~ 0.
  p = std::clamp(p, -1.0, 1.0);
  return DecayAmplitude{p, t};
}

namespace {

void require_non_markovian(const ReservoirBank& bank, const char* where) {
  const Regime r = regime(bank);
  if (r != Regime::NonMarkovian)
    throw regime_error(std::string(where) + ": bank is " + to_string(r) +
                       " (needs lambda < 2 N gamma)");
}

}  // namespace

double zero_time(const ReservoirBank& bank, int l) {
  require_non_markovian(bank, "zero_time");
  if (l < 1) throw std::invalid_argument("zero_time: l must be >= 1");
  const double d = d_parameter(bank);
  const double theta = std::atan(d / bank.lambda);
  return 2.0 * (l * kPi - theta) / d;
}

double peak_time(const ReservoirBank& bank, int l) {
  require_non_markovian(bank, "peak_time");
  if (l < 1) throw std::invalid_argument("peak_time: l must be >= 1");
  const double d = d_parameter(bank);
  return 2.0 * (l - 1) * kPi / d;
}

double bri_measure(const ReservoirBank& bank) {
  if (regime(bank) != Regime::NonMarkovian) return 0.0;
  return std::exp(-bank.lambda * kPi / d_parameter(bank));
}

double blp_measure(const ReservoirBank& bank) {
  const double r = bri_measure(bank);
  return r / (1.0 - r);
}

double blp_numeric_oracle(const ReservoirBank& bank, double t_max, double dt) {
  require_non_markovian(bank, "blp_numeric_oracle");
  if (!(dt > 0.0) || !(t_max > 0.0))
    throw std::invalid_argument("blp_numeric_oracle: t_max and dt must be positive");

  const double d = d_parameter(bank);
  const double period = 2.0 * kPi / d;
  if (t_max < 6.0 * period)
    throw std::invalid_argument("blp_numeric_oracle: t_max must cover >= 6 periods");

  // Information flows back over the intervals [t_{z,l}, t_{p,l+1}] where |p|
  // rises from zero to its next peak. Integrate d|p|/dt there numerically;
  // interval boundaries come from the analytic critical times so the sign of
  // the derivative is never read off the noisy grid near extrema.
  const int complete = static_cast<int>(std::floor(t_max / period));

  double total = 0.0;
  for (int l = 1; l <= complete; ++l) {
    const double a = zero_time(bank, l);
    const double b = peak_time(bank, l + 1);
    const int cells = std::max(4, static_cast<int>(std::ceil((b - a) / dt)));
    const double h = (b - a) / cells;

    // Trapezoid rule on eps(t) = d|p|/dt from centered differences
    // (second-order one-sided stencils at the interval endpoints).
    auto absp = [&](double t) { return std::abs(decay_amplitude(bank, t).value); };
    std::vector<double> f(static_cast<std::size_t>(cells) + 1);
    for (int i = 0; i <= cells; ++i) f[static_cast<std::size_t>(i)] = absp(a + i * h);

    auto eps = [&](int i) {
      if (i == 0) return (-3.0 * f[0] + 4.0 * f[1] - f[2]) / (2.0 * h);
      if (i == cells)
        return (3.0 * f[static_cast<std::size_t>(cells)] -
                4.0 * f[static_cast<std::size_t>(cells - 1)] +
                f[static_cast<std::size_t>(cells - 2)]) /
               (2.0 * h);
      return (f[static_cast<std::size_t>(i + 1)] - f[static_cast<std::size_t>(i - 1)]) /
             (2.0 * h);
    };

    double integral = 0.5 * (eps(0) + eps(cells));
    for (int i = 1; i < cells; ++i) integral += eps(i);
    total += integral * h;
  }

  // Analytic geometric tail for the revival intervals beyond t_max.
  const double r = bri_measure(bank);
  total += std::pow(r, complete + 1) / (1.0 - r);
  return total;
}

}  // namespace mscsim

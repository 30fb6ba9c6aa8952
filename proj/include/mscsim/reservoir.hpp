// Exact decay amplitude of a qubit coupled to N identical Lorentzian
// reservoirs, regime classification, critical times, and the BLP and
// backflow-ratio non-Markovianity measures.
#pragma once

#include <stdexcept>

namespace mscsim {

/// Thrown when an operation needs the non-Markovian regime (oscillatory
/// decay) but the bank is Markovian or exactly critical.
class regime_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A set of identical Lorentzian reservoirs acting on one qubit.
/// lambda is the spectral width, gamma the relaxation-rate parameter,
/// both in the same inverse-time units.
struct ReservoirBank {
  double lambda = 1.0;
  double gamma = 0.2;
  int n_reservoirs = 1;
};

enum class Regime { Markovian, Critical, NonMarkovian };

const char* to_string(Regime r);

struct DecayAmplitude {
  double value = 1.0;
  double time = 0.0;
};

/// Relative width of the band around lambda = 2 N gamma treated as the
/// critical boundary; both branches agree with the analytic limit there.
inline constexpr double kCriticalBandRel = 1e-9;

void require_valid(const ReservoirBank& bank);

/// d = sqrt(|lambda^2 - 2 N gamma lambda|), the oscillation (or hyperbolic)
/// rate of the decay amplitude.
double d_parameter(const ReservoirBank& bank);

Regime regime(const ReservoirBank& bank);

/// Smallest reservoir count that makes the dynamics non-Markovian:
/// floor(lambda / 2 gamma) + 1.
int critical_reservoir_number(double lambda, double gamma);

/// p(t): exp(-lambda t / 2) (cos(d t / 2) + (lambda / d) sin(d t / 2)) in the
/// non-Markovian regime, cosh/sinh in the Markovian one, and the limit
/// exp(-lambda t / 2)(1 + lambda t / 2) on the critical boundary.
DecayAmplitude decay_amplitude(const ReservoirBank& bank, double t);

/// l-th zero of p(t), l >= 1: 2 (l pi - arctan(d / lambda)) / d.
double zero_time(const ReservoirBank& bank, int l);

/// l-th local extremum of |p(t)|, l >= 1: 2 (l - 1) pi / d. The first peak
/// is at t = 0.
double peak_time(const ReservoirBank& bank, int l);

/// Backflow-ratio measure: exp(-lambda pi / d) in the non-Markovian regime,
/// 0 otherwise.
double bri_measure(const ReservoirBank& bank);

/// BLP measure, geometric closed form r / (1 - r) with r the backflow ratio;
/// 0 in the Markovian and critical regimes.
double blp_measure(const ReservoirBank& bank);

/// Independent numerical route to the BLP measure: quadrature of the positive
/// part of d|p|/dt over [0, t_max] plus the analytic geometric tail for the
/// revival intervals beyond t_max. Requires the non-Markovian regime and
/// t_max >= 6 oscillation periods.
double blp_numeric_oracle(const ReservoirBank& bank, double t_max, double dt);

}  // namespace mscsim

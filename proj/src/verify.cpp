#include "mscsim/verify.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <random>

#include "mscsim/entanglement.hpp"
#include "mscsim/evolution.hpp"
#include "mscsim/matrix.hpp"
#include "mscsim/reservoir.hpp"
#include "mscsim/scenario.hpp"
#include "mscsim/steering.hpp"

namespace mscsim {

namespace {

constexpr double kPi = std::numbers::pi;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

cplx random_phase(Rng& rng) {
  const double ph = uniform(rng, 0.0, 2.0 * kPi);
  return cplx{std::cos(ph), std::sin(ph)};
}

template <std::size_t N>
SquareMatrix<N> random_density(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SquareMatrix<N> g;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) g(i, j) = cplx{gauss(rng), gauss(rng)};
  SquareMatrix<N> rho = g * g.adjoint();
  const double tr = rho.trace().real();
  rho = (1.0 / tr) * rho;
  // Exact Hermitization: g g^dag is Hermitian up to rounding only.
  SquareMatrix<N> out;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) out(i, j) = 0.5 * (rho(i, j) + std::conj(rho(j, i)));
  return out;
}

template <std::size_t N>
SquareMatrix<N> random_hermitian(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  SquareMatrix<N> m;
  for (std::size_t i = 0; i < N; ++i) {
    m(i, i) = gauss(rng);
    for (std::size_t j = i + 1; j < N; ++j) {
      m(i, j) = cplx{gauss(rng), gauss(rng)};
      m(j, i) = std::conj(m(i, j));
    }
  }
  return m;
}

Mat2 random_pure(Rng& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec2 v{cplx{gauss(rng), gauss(rng)}, cplx{gauss(rng), gauss(rng)}};
  const double n = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
  Mat2 rho;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) rho(i, j) = v[i] * std::conj(v[j]) / (n * n);
  return rho;
}

Mat2 random_unitary2(Rng& rng) {
  // Gram-Schmidt on two Gaussian columns gives a Haar-like unitary.
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vec2 a{cplx{gauss(rng), gauss(rng)}, cplx{gauss(rng), gauss(rng)}};
  Vec2 b{cplx{gauss(rng), gauss(rng)}, cplx{gauss(rng), gauss(rng)}};
  double na = std::sqrt(std::norm(a[0]) + std::norm(a[1]));
  a[0] /= na;
  a[1] /= na;
  const cplx proj = std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  b[0] -= proj * a[0];
  b[1] -= proj * a[1];
  double nb = std::sqrt(std::norm(b[0]) + std::norm(b[1]));
  b[0] /= nb;
  b[1] /= nb;
  Mat2 u;
  u(0, 0) = a[0];
  u(1, 0) = a[1];
  u(0, 1) = b[0];
  u(1, 1) = b[1];
  return u;
}

// Random X-form state: simplex populations, anti-diagonal coherences drawn
// inside their PSD bounds with random phases.
Mat4 random_x_state(Rng& rng) {
  std::array<double, 4> pop;
  double s = 0.0;
  for (double& p : pop) {
    p = -std::log(uniform(rng, 1e-12, 1.0));
    s += p;
  }
  for (double& p : pop) p /= s;
  Mat4 rho;
  for (std::size_t i = 0; i < 4; ++i) rho(i, i) = pop[i];
  const double c14 = uniform(rng, 0.0, 1.0) * std::sqrt(pop[0] * pop[3]);
  const double c23 = uniform(rng, 0.0, 1.0) * std::sqrt(pop[1] * pop[2]);
  rho(0, 3) = c14 * random_phase(rng);
  rho(3, 0) = std::conj(rho(0, 3));
  rho(1, 2) = c23 * random_phase(rng);
  rho(2, 1) = std::conj(rho(1, 2));
  return rho;
}

BellLikeState random_bell_state(Rng& rng, BellFamily family) {
  const double a2 = uniform(rng, 0.02, 0.98);
  BellLikeState st;
  st.alpha = std::sqrt(a2) * random_phase(rng);
  st.beta = std::sqrt(1.0 - a2) * random_phase(rng);
  st.family = family;
  return st;
}

double random_decay_value(Rng& rng) {
  const double mag = uniform(rng, 0.05, 1.0);
  return uniform(rng, 0.0, 1.0) < 0.5 ? -mag : mag;
}

ReservoirBank random_bank(Rng& rng, bool non_markovian) {
  ReservoirBank bank;
  bank.lambda = uniform(rng, 0.5, 2.0);
  bank.n_reservoirs = 1 + static_cast<int>(uniform(rng, 0.0, 4.0));
  // Place gamma well inside the requested regime.
  const double boundary = bank.lambda / (2.0 * bank.n_reservoirs);
  bank.gamma = non_markovian ? boundary * uniform(rng, 1.2, 6.0)
                             : boundary * uniform(rng, 0.05, 0.8);
  return bank;
}

struct Deviation {
  double value = 0.0;
  std::string note;
  void record(double dev, const std::string& context = {}) {
    if (dev > value) {
      value = dev;
      if (!context.empty()) note = context;
    }
  }
};

using CheckFn = std::function<void(Rng&, int, Deviation&)>;

struct CheckSpec {
  const char* name;
  double tolerance;
  int pinned_samples;  // 0 = use the caller's sample count
  CheckFn fn;
};

// ---------------------------------------------------------------------------
// quantum-core
// ---------------------------------------------------------------------------

void check_eigensystem_reconstruction(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat4 m = random_hermitian<4>(rng);
    const auto es = eigensystem_hermitian(m);
    Mat4 rebuilt;
    for (std::size_t k = 0; k < 4; ++k)
      for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
          rebuilt(i, j) += es.values[k] * es.vectors[k][i] * std::conj(es.vectors[k][j]);
    dev.record(m.max_abs_diff(rebuilt));
    for (double lam : es.values)
      if (!std::isfinite(lam)) dev.record(1.0, "non-finite eigenvalue");
    // Descending order.
    for (std::size_t k = 1; k < 4; ++k)
      dev.record(std::max(0.0, es.values[k] - es.values[k - 1]), "eigenvalue order");
  }
}

void check_trace_distance_metric(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat2 a = random_density<2>(rng);
    const Mat2 b = random_density<2>(rng);
    const Mat2 c = random_density<2>(rng);
    const double dab = trace_distance(a, b);
    dev.record(std::abs(dab - trace_distance(b, a)), "symmetry");
    dev.record(std::max(0.0, dab - trace_distance(a, c) - trace_distance(c, b)), "triangle");
    dev.record(std::max(0.0, dab - 1.0), "range");
    dev.record(std::max(0.0, -dab), "range");
  }
}

void check_entropy_range(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat2 rho2 = random_density<2>(rng);
    const double s2 = von_neumann_entropy(rho2);
    dev.record(std::max(0.0, -s2));
    dev.record(std::max(0.0, s2 - 1.0));
    const Mat4 rho4 = random_density<4>(rng);
    const double s4 = von_neumann_entropy(rho4);
    dev.record(std::max(0.0, -s4));
    dev.record(std::max(0.0, s4 - 2.0));
    const Mat2 pure = random_pure(rng);
    if (std::abs(purity(pure) - 1.0) < 1e-9) dev.record(von_neumann_entropy(pure), "pure state");
  }
}

void check_partial_trace_product(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat2 sigma = random_density<2>(rng);
    const Mat2 tau = random_density<2>(rng);
    const Mat4 prod = tensor_product(sigma, tau);
    dev.record(partial_trace_A(prod).max_abs_diff(tau));
    dev.record(partial_trace_B(prod).max_abs_diff(sigma));
  }
}

void check_density_closure(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat4 rho = random_density<4>(rng);
    auto score = [](const ValidationReport& r) {
      return std::max({r.hermiticity_deviation - kHermTol, r.trace_deviation - kTraceTol,
                       -r.min_eigenvalue - kPsdTol, 0.0});
    };
    dev.record(score(validate(rho)));
    dev.record(score(validate(partial_trace_A(rho))));
    dev.record(score(validate(partial_trace_B(rho))));
    const double theta = uniform(rng, 0.1, kPi - 0.1);
    try {
      const auto outcome = conditional_state(rho, MeasurementDirection{theta, uniform(rng, 0.0, 2.0 * kPi)});
      dev.record(score(validate(outcome.state)));
    } catch (const degenerate_outcome_error&) {
    }
  }
}

// ---------------------------------------------------------------------------
// reservoir-dynamics
// ---------------------------------------------------------------------------

void check_decay_bounds(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const ReservoirBank bank = random_bank(rng, s % 2 == 0);
    dev.record(std::abs(decay_amplitude(bank, 0.0).value - 1.0), "p(0)");
    for (int i = 1; i <= 40; ++i) {
      const double t = i * 0.5 / bank.lambda;
      dev.record(std::max(0.0, std::abs(decay_amplitude(bank, t).value) - 1.0), "|p|<=1");
    }
  }
}

void check_markovian_monotone(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const ReservoirBank bank = random_bank(rng, false);
    double prev = 1.0;
    for (int i = 1; i <= 200; ++i) {
      const double t = i * 0.1 / bank.lambda;
      const double cur = std::abs(decay_amplitude(bank, t).value);
      dev.record(std::max(0.0, cur - prev), "|p| increased");
      prev = cur;
    }
  }
}

void check_zeros_alternation(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const ReservoirBank bank = random_bank(rng, true);
    if (regime(bank) != Regime::NonMarkovian) continue;
    double prev_sign = 0.0;
    for (int l = 1; l <= 6; ++l) {
      dev.record(std::abs(decay_amplitude(bank, zero_time(bank, l)).value), "p(t_z)");
      const double mid = 0.5 * (zero_time(bank, l) + zero_time(bank, l + 1));
      const double sign = decay_amplitude(bank, mid).value > 0.0 ? 1.0 : -1.0;
      if (l > 1 && sign == prev_sign) dev.record(1.0, "no sign alternation");
      prev_sign = sign;
    }
  }
}

void check_critical_continuity(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const double gamma = uniform(rng, 0.2, 2.0);
    const int n = 1 + static_cast<int>(uniform(rng, 0.0, 3.0));
    for (double side : {-1.0, 1.0}) {
      for (double eps : {1e-9, 5e-9}) {
        ReservoirBank bank{2.0 * n * gamma * (1.0 + side * eps), gamma, n};
        for (int i = 0; i <= 20; ++i) {
          const double t = i * 0.5 / bank.lambda;
          const double limit =
              std::exp(-0.5 * bank.lambda * t) * (1.0 + 0.5 * bank.lambda * t);
          dev.record(std::abs(decay_amplitude(bank, t).value - limit));
        }
      }
    }
  }
}

void check_trace_distance_identity(Rng& rng, int samples, Deviation& dev) {
  // sigma_x eigenstate pair evolved through the damping map: D = |p(t)|.
  Mat2 plus, minus;
  plus(0, 0) = plus(1, 1) = 0.5;
  plus(0, 1) = plus(1, 0) = 0.5;
  minus(0, 0) = minus(1, 1) = 0.5;
  minus(0, 1) = minus(1, 0) = -0.5;
  for (int s = 0; s < samples; ++s) {
    const ReservoirBank bank = random_bank(rng, s % 2 == 0);
    const double t = uniform(rng, 0.0, 15.0 / bank.lambda);
    const double p = decay_amplitude(bank, t).value;
    const double dist = trace_distance(evolve_single(plus, p), evolve_single(minus, p));
    dev.record(std::abs(dist - std::abs(p)));
  }
}

void check_measures_monotone(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const double lambda = uniform(rng, 0.5, 2.0);
    const double gamma = uniform(rng, 0.1, 2.0);
    const int n_cr = critical_reservoir_number(lambda, gamma);
    double prev_bri = -1.0, prev_blp = -1.0;
    for (int n = n_cr; n < n_cr + 4; ++n) {
      const ReservoirBank bank{lambda, gamma, n};
      if (regime(bank) != Regime::NonMarkovian) continue;
      const double bri = bri_measure(bank);
      const double blp = blp_measure(bank);
      if (prev_bri >= 0.0) {
        dev.record(std::max(0.0, prev_bri - bri), "bri not increasing");
        dev.record(std::max(0.0, prev_blp - blp), "blp not increasing");
      }
      prev_bri = bri;
      prev_blp = blp;
    }
  }
}

void check_blp_numeric(Rng& rng, int samples, Deviation& dev) {
  std::vector<ReservoirBank> banks = {{1.0, 2.0, 1}, {1.0, 0.2, 3}};
  const int extra = std::min(4, samples / 50);
  for (int s = 0; s < extra; ++s) banks.push_back(random_bank(rng, true));
  for (const auto& bank : banks) {
    if (regime(bank) != Regime::NonMarkovian) continue;
    const double period = 2.0 * kPi / d_parameter(bank);
    const double numeric = blp_numeric_oracle(bank, 8.0 * period, period / 1200.0);
    const double closed = blp_measure(bank);
    dev.record(std::abs(numeric - closed) / closed);
  }
}

// ---------------------------------------------------------------------------
// evolution
// ---------------------------------------------------------------------------

void check_evolve_cptp(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat2 rho = random_density<2>(rng);
    const double p = random_decay_value(rng);
    const auto report = validate(evolve_single(rho, p));
    dev.record(std::max({report.hermiticity_deviation, report.trace_deviation,
                         std::max(0.0, -report.min_eigenvalue)}));
  }
}

void check_semigroup(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat2 rho = random_density<2>(rng);
    const double p1 = random_decay_value(rng);
    const double p2 = random_decay_value(rng);
    dev.record(evolve_single(evolve_single(rho, p1), p2).max_abs_diff(
        evolve_single(rho, p1 * p2)));
  }
}

void check_pair_marginals(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat4 rho = random_density<4>(rng);
    const double p = random_decay_value(rng);
    const Mat4 evolved = evolve_pair(rho, p, 1.0);
    dev.record(partial_trace_A(evolved).max_abs_diff(partial_trace_A(rho)), "B marginal moved");
    dev.record(partial_trace_B(evolved).max_abs_diff(evolve_single(partial_trace_B(rho), p)),
               "A marginal mismatch");
  }
}

void check_bell_closed_form(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const double pa = random_decay_value(rng);
    const double pb = random_decay_value(rng);
    const Mat4 closed = bell_like_evolved(st, pa, pb);
    dev.record(closed.max_abs_diff(evolve_pair(bell_like_projector(st), pa, pb)),
               "closed form vs generic map");
    Mat2 marginal;
    marginal(0, 0) = std::norm(st.beta) * pb * pb;
    marginal(1, 1) = 1.0 - marginal(0, 0).real();
    dev.record(partial_trace_A(closed).max_abs_diff(marginal), "B marginal");
  }
}

// ---------------------------------------------------------------------------
// steering
// ---------------------------------------------------------------------------

void check_msc_oracle(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const double pa = random_decay_value(rng);
    const double pb = random_decay_value(rng);
    const auto numeric = msc_numeric(bell_like_evolved(st, pa, pb), CoherenceMeasure::L1);
    const double closed = msc_l1_closed_form(st.alpha, pa, st.beta, pb);
    dev.record(std::abs(numeric.value - closed));
    const double theta0 = optimal_polar_angle(st.alpha, pa);
    if (closed > 1e-3)
      dev.record(std::max(0.0, std::abs(numeric.optimal_theta - theta0) - kPi / 2000.0),
                 "theta far from theta_0");
  }
}

void check_phi_independence(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const Mat4 rho = bell_like_evolved(st, random_decay_value(rng), random_decay_value(rng));
    const auto basis = reference_basis(partial_trace_A(rho)).basis;
    const double theta = uniform(rng, 0.2, kPi - 0.2);
    double lo = 2.0, hi = -1.0;
    for (int i = 0; i < 12; ++i) {
      const auto outcome = conditional_state(rho, MeasurementDirection{theta, i * kPi / 6.0});
      const double v = l1_coherence(outcome.state, basis);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    dev.record(hi - lo);
  }
}

void check_msc_monotone(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const double pb = std::abs(random_decay_value(rng));
    double prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double pa = i / 20.0;
      const double v = msc_l1_closed_form(st.alpha, pa, st.beta, pb);
      if (prev >= 0.0) dev.record(std::max(0.0, prev - v), "not monotone in p_a");
      prev = v;
    }
    const double pa = std::abs(random_decay_value(rng));
    prev = -1.0;
    for (int i = 0; i <= 20; ++i) {
      const double v = msc_l1_closed_form(st.alpha, pa, st.beta, i / 20.0);
      if (prev >= 0.0) dev.record(std::max(0.0, prev - v), "not monotone in p_b");
      prev = v;
    }
  }
}

void check_msc_linear_in_pb(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const double pa = random_decay_value(rng);
    const double at_one = msc_l1_closed_form(st.alpha, pa, st.beta, 1.0);
    for (int i = 0; i <= 10; ++i) {
      const double pb = i / 10.0;
      dev.record(std::abs(msc_l1_closed_form(st.alpha, pa, st.beta, pb) - pb * at_one));
    }
  }
}

void check_unitary_dominance(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const double pa = random_decay_value(rng);
    const double pb = random_decay_value(rng);
    const double plain = msc_l1_closed_form(st.alpha, pa, st.beta, pb);
    const double optimized = msc_l1_unitary_optimized(st.alpha, pa, st.beta, pb);
    dev.record(std::max(0.0, plain - optimized));
  }
}

void check_unassisted_threshold(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const double pa = uniform(rng, 0.05, 1.0);
    const double threshold = steering_advantage_threshold(pa);
    const double a2 = uniform(rng, 0.01, 0.99) * threshold;
    const cplx alpha = std::sqrt(a2) * random_phase(rng);
    const cplx beta = std::sqrt(1.0 - a2) * random_phase(rng);
    const double pb = uniform(rng, 0.05, 1.0);
    const double advantage =
        msc_l1_closed_form(alpha, pa, beta, pb) - unassisted_coherence(alpha, beta, pb);
    dev.record(std::max(0.0, -advantage), "unassisted beat steering inside threshold");
  }
}

void check_re_maximality(Rng& rng, int samples, Deviation& dev) {
  const int n = std::max(10, samples / 10);
  for (int s = 0; s < n; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const Mat4 rho = bell_like_evolved(st, random_decay_value(rng), random_decay_value(rng));
    const auto result = msc_numeric(rho, CoherenceMeasure::RelativeEntropy);
    for (int i = 0; i < 12; ++i) {
      const double theta = uniform(rng, 0.0, kPi);
      try {
        const auto outcome = conditional_state(rho, MeasurementDirection{theta, 0.0});
        const double v = rel_entropy_coherence(outcome.state, result.reference.basis);
        dev.record(std::max(0.0, v - result.value), "sampled theta beat the optimizer");
      } catch (const degenerate_outcome_error&) {
      }
    }
  }
}

void check_psi_phi_equivalence(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Phi);
    const double pa = random_decay_value(rng);
    const double pb = random_decay_value(rng);
    const auto numeric = msc_numeric(bell_like_evolved(st, pa, pb), CoherenceMeasure::L1);
    dev.record(std::abs(numeric.value - msc_l1_closed_form(st.alpha, pa, st.beta, pb)));
  }
}

// ---------------------------------------------------------------------------
// entanglement
// ---------------------------------------------------------------------------

void check_wootters_x_oracle(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat4 rho = random_x_state(rng);
    dev.record(std::abs(concurrence_general(rho) - concurrence_x_state(rho)));
  }
}

void check_local_unitary_invariance(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat4 rho = random_x_state(rng);
    const Mat4 u = tensor_product(random_unitary2(rng), random_unitary2(rng));
    const Mat4 rotated = u * rho * u.adjoint();
    dev.record(std::abs(concurrence_general(rotated) - concurrence_general(rho)));
  }
}

void check_conversion_identity(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const Mat2 rho = random_density<2>(rng);
    const auto report = cnot_convert(rho);
    dev.record(std::abs(report.bc_concurrence - report.source_l1_coherence));
    dev.record(std::abs(report.source_l1_coherence - l1_coherence(rho, computational_basis())));
  }
}

void check_ratio_bound(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const double a2 = uniform(rng, 0.05, 0.95);
    const cplx alpha{std::sqrt(a2), 0.0};
    const cplx beta{std::sqrt(1.0 - a2), 0.0};
    const double pa = std::abs(random_decay_value(rng));
    const double pb = std::abs(random_decay_value(rng));
    const double ratio = entanglement_ratio(alpha, pa);
    dev.record(std::max(0.0, ratio - 1.0), "ratio above 1");

    const BellLikeState st{alpha, beta, BellFamily::Psi};
    const Mat4 rho_t = bell_like_evolved(st, pa, pb);
    const double c_ab = concurrence_x_state(rho_t);
    const double theta0 = optimal_polar_angle(alpha, pa);
    try {
      const auto outcome = conditional_state(rho_t, MeasurementDirection{theta0, 0.0});
      const double bc = cnot_convert(outcome.state, outcome.probability).bc_concurrence;
      if (bc > 1e-9) dev.record(std::abs(ratio - c_ab / bc), "ratio vs C/bc");
      dev.record(std::max(0.0, c_ab - bc), "converted entanglement weaker");
    } catch (const degenerate_outcome_error&) {
    }
  }
  // Equality point |alpha p_a|^2 = 1/2, representable exactly.
  dev.record(std::abs(entanglement_ratio(cplx{0.5, 0.5}, 1.0) - 1.0), "equality at 1/2");
}

void check_success_probability(Rng& rng, int samples, Deviation& dev) {
  for (int s = 0; s < samples; ++s) {
    const BellLikeState st = random_bell_state(rng, BellFamily::Psi);
    const double pa = random_decay_value(rng);
    const double pb = random_decay_value(rng);
    const double theta0 = optimal_polar_angle(st.alpha, pa);
    try {
      const auto outcome =
          conditional_state(bell_like_evolved(st, pa, pb), MeasurementDirection{theta0, 0.0});
      dev.record(std::abs(outcome.probability - optimal_success_probability(st.alpha, pa)));
    } catch (const degenerate_outcome_error&) {
    }
  }
  // |Psi+>: p_M,op shrinks along with |p_a|.
  const cplx half{1.0 / std::numbers::sqrt2, 0.0};
  double prev = -1.0;
  for (int i = 0; i <= 20; ++i) {
    const double v = optimal_success_probability(half, i / 20.0);
    if (prev >= 0.0) dev.record(std::max(0.0, prev - v), "p_M,op not monotone for |Psi+>");
    prev = v;
  }
}

// ---------------------------------------------------------------------------
// cli / scenario
// ---------------------------------------------------------------------------

void check_config_roundtrip(Rng& rng, int samples, Deviation& dev) {
  const std::vector<SweepMeasure> all = {SweepMeasure::MscL1,       SweepMeasure::MscRe,
                                         SweepMeasure::ConcurrenceAb, SweepMeasure::Conversion,
                                         SweepMeasure::NonMarkov,     SweepMeasure::Unassisted};
  for (int s = 0; s < std::max(10, samples / 10); ++s) {
    ScenarioConfig c;
    c.alpha_sq = uniform(rng, 0.0, 1.0);
    c.family = s % 2 ? BellFamily::Phi : BellFamily::Psi;
    c.gamma_over_lambda = uniform(rng, 0.05, 3.0);
    c.n_a = 1 + static_cast<int>(uniform(rng, 0.0, 5.0));
    c.n_b = 1 + static_cast<int>(uniform(rng, 0.0, 5.0));
    c.t_lambda_max = uniform(rng, 1.0, 40.0);
    c.steps = 2 + static_cast<int>(uniform(rng, 0.0, 2000.0));
    c.measures.clear();
    for (SweepMeasure m : all)
      if (uniform(rng, 0.0, 1.0) < 0.5) c.measures.push_back(m);
    if (c.measures.empty()) c.measures.push_back(SweepMeasure::MscL1);
    c.output_path = s % 3 ? "out/run.csv" : "";
    c.format = s % 2 ? OutputFormat::Json : OutputFormat::Csv;
    if (!(parse_config(render_config(c)) == c)) dev.record(1.0, "round trip changed the config");
  }
}

void check_sweep_consistency(Rng&, int, Deviation& dev) {
  ScenarioConfig c;
  c.steps = 101;
  c.measures = {SweepMeasure::MscL1, SweepMeasure::ConcurrenceAb, SweepMeasure::Conversion,
                SweepMeasure::Unassisted};
  const auto rows = compute_sweep(c);
  const BellLikeState st = c.initial_state();
  for (const auto& row : rows)
    dev.record(std::abs(row.msc_l1 - msc_l1_closed_form(st.alpha, row.p_a, st.beta, row.p_b)));
  dev.record(std::abs(rows.front().msc_l1 - 1.0), "t=0 row of |Psi+>");
  dev.record(std::abs(rows.front().concurrence_ab - 1.0), "t=0 concurrence");
}

void check_sweep_determinism(Rng&, int, Deviation& dev) {
  ScenarioConfig c;
  c.steps = 40;
  c.n_b = 4;
  c.measures = {SweepMeasure::MscL1, SweepMeasure::MscRe, SweepMeasure::Conversion};
  const std::string once = render_sweep(c, compute_sweep(c));
  const std::string twice = render_sweep(c, compute_sweep(c));
  if (once != twice) dev.record(1.0, "repeated sweep differs");
  const auto table = compute_nonmarkov(1.0, 0.2, {1, 2, 3, 4});
  if (render_nonmarkov(OutputFormat::Csv, table) !=
      render_nonmarkov(OutputFormat::Csv, compute_nonmarkov(1.0, 0.2, {1, 2, 3, 4})))
    dev.record(1.0, "repeated nonmarkov table differs");
}

const std::vector<CheckSpec>& check_registry() {
  static const std::vector<CheckSpec> registry = {
      {"core.eigensystem-reconstruction", 1e-10, 0, check_eigensystem_reconstruction},
      {"core.trace-distance-metric", 1e-12, 0, check_trace_distance_metric},
      {"core.entropy-range", 1e-9, 0, check_entropy_range},
      {"core.partial-trace-product", 1e-12, 0, check_partial_trace_product},
      {"core.density-validity-closure", 1e-12, 0, check_density_closure},
      {"reservoir.decay-bounds", 1e-15, 0, check_decay_bounds},
      {"reservoir.markovian-monotone", 1e-14, 0, check_markovian_monotone},
      {"reservoir.zeros-and-alternation", 1e-12, 0, check_zeros_alternation},
      {"reservoir.critical-continuity", 1e-6, 20, check_critical_continuity},
      {"reservoir.trace-distance-identity", 1e-10, 0, check_trace_distance_identity},
      {"reservoir.measures-monotone-in-n", 1e-15, 0, check_measures_monotone},
      {"reservoir.blp-numeric-vs-closed", 1e-3, 0, check_blp_numeric},
      {"evolution.single-cptp", 1e-12, 0, check_evolve_cptp},
      {"evolution.semigroup-composition", 1e-12, 0, check_semigroup},
      {"evolution.pair-marginals", 1e-12, 0, check_pair_marginals},
      {"evolution.bell-closed-form", 1e-12, 0, check_bell_closed_form},
      {"steering.msc-oracle-equivalence", 1e-6, 200, check_msc_oracle},
      {"steering.phi-independence", 1e-12, 0, check_phi_independence},
      {"steering.msc-monotone-in-p", 1e-15, 0, check_msc_monotone},
      {"steering.msc-linear-in-pb", 1e-12, 0, check_msc_linear_in_pb},
      {"steering.unitary-dominance", 1e-12, 0, check_unitary_dominance},
      {"steering.unassisted-threshold", 1e-12, 0, check_unassisted_threshold},
      {"steering.re-maximality", 1e-9, 0, check_re_maximality},
      {"steering.psi-phi-equivalence", 1e-6, 100, check_psi_phi_equivalence},
      {"entanglement.wootters-x-oracle", 1e-8, 500, check_wootters_x_oracle},
      {"entanglement.local-unitary-invariance", 1e-8, 0, check_local_unitary_invariance},
      {"entanglement.conversion-identity", 1e-9, 500, check_conversion_identity},
      {"entanglement.ratio-bound", 1e-10, 0, check_ratio_bound},
      {"entanglement.success-probability", 1e-12, 0, check_success_probability},
      {"cli.config-roundtrip", 0.0, 0, check_config_roundtrip},
      {"cli.sweep-msc-consistency", 1e-12, 0, check_sweep_consistency},
      {"cli.sweep-determinism", 0.0, 0, check_sweep_determinism},
  };
  return registry;
}

}  // namespace

VerifyReport run_verification(std::uint64_t seed, int samples, bool inject_failure) {
  VerifyReport report;
  report.all_passed = true;
  bool first = true;
  for (const auto& spec : check_registry()) {
    // Independent stream per check so one suite's draw count cannot shift
    // another's data.
    std::seed_seq seq{seed, static_cast<std::uint64_t>(std::hash<std::string>{}(spec.name))};
    Rng rng(seq);

    CheckResult result;
    result.name = spec.name;
    result.tolerance = spec.tolerance;
    if (inject_failure && first) {
      result.tolerance = -1.0;  // cannot be met; harness self-test
      first = false;
    }
    Deviation dev;
    const int n = spec.pinned_samples > 0 ? spec.pinned_samples : samples;
    try {
      spec.fn(rng, n, dev);
      result.max_deviation = dev.value;
      result.note = dev.note;
      result.passed = dev.value <= result.tolerance;
    } catch (const std::exception& e) {
      result.passed = false;
      result.max_deviation = std::numeric_limits<double>::infinity();
      result.note = std::string("exception: ") + e.what();
    }
    report.all_passed = report.all_passed && result.passed;
    report.checks.push_back(std::move(result));
  }
  return report;
}

std::string render_report(const VerifyReport& report) {
  std::string out;
  int passed = 0;
  for (const auto& check : report.checks) {
    char line[256];
    std::snprintf(line, sizeof(line), "%s  %-42s  max_dev=%.3e  tol=%.3e%s%s\n",
                  check.passed ? "PASS" : "FAIL", check.name.c_str(), check.max_deviation,
                  check.tolerance, check.note.empty() ? "" : "  ", check.note.c_str());
    out += line;
    if (check.passed) ++passed;
  }
  char tail[96];
  std::snprintf(tail, sizeof(tail), "%d/%zu checks passed\n", passed, report.checks.size());
  out += tail;
  return out;
}

}  // namespace mscsim

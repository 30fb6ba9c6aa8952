#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mscsim/steering.hpp"

using namespace mscsim;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

BellLikeState psi_plus() { return BellLikeState{}; }

Mat2 diag2(double a, double b) {
  Mat2 m;
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST_CASE("conditional state of the Bell state at theta = pi/2") {
  const Mat4 bell = bell_like_evolved(psi_plus(), 1.0, 1.0);
  const auto outcome = conditional_state(bell, MeasurementDirection{0.5 * kPi, 0.0});
  CHECK(outcome.probability == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(purity(outcome.state) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("theta = 0 produces a diagonal conditional state") {
  const Mat4 rho = bell_like_evolved(psi_plus(), 0.8, 0.6);
  const auto outcome = conditional_state(rho, MeasurementDirection{0.0, 0.0});
  CHECK(std::abs(outcome.state(0, 1)) < 1e-14);
  CHECK(l1_coherence(outcome.state, computational_basis()) < 1e-14);
}

TEST_CASE("conditional state entries at the optimal angle") {
  // alpha = beta = 1/sqrt2, p_a = 0.8, p_b = 0.6: p_M = 2s(1-s) with s = 0.32,
  // excited population 0.18 sin^2(theta0/2) / p_M, coherence = MSC / 2.
  const Mat4 rho = bell_like_evolved(psi_plus(), 0.8, 0.6);
  const double theta0 = optimal_polar_angle(kInvSqrt2, 0.8);
  CHECK(theta0 == doctest::Approx(1.20252843335826).epsilon(1e-13));
  const auto outcome = conditional_state(rho, MeasurementDirection{theta0, 0.0});
  CHECK(outcome.probability == doctest::Approx(0.4352).epsilon(1e-13));
  CHECK(outcome.state(0, 0).real() == doctest::Approx(0.18 * 0.32 / 0.4352).epsilon(1e-12));
  CHECK(std::abs(outcome.state(0, 1)) ==
        doctest::Approx(0.5 * 0.514495755427527).epsilon(1e-12));

  // The probability follows the cos(theta) law of the measured marginal.
  const double theta = 1.234;
  const auto generic = conditional_state(rho, MeasurementDirection{theta, 0.3});
  CHECK(generic.probability ==
        doctest::Approx(0.5 * (1.0 + (2.0 * 0.32 - 1.0) * std::cos(theta))).epsilon(1e-13));
}

TEST_CASE("degenerate outcomes are an error") {
  Mat4 ground;
  ground(3, 3) = 1.0;  // |00><00|: measuring A along +z never clicks
  CHECK_THROWS_AS(conditional_state(ground, MeasurementDirection{0.0, 0.0}),
                  degenerate_outcome_error);
}

TEST_CASE("coherence measures in a basis") {
  CHECK(l1_coherence(diag2(0.3, 0.7), computational_basis()) == 0.0);
  CHECK(rel_entropy_coherence(diag2(0.3, 0.7), computational_basis()) == 0.0);

  Mat2 coherent;
  coherent(0, 0) = coherent(0, 1) = coherent(1, 0) = coherent(1, 1) = 0.5;
  CHECK(l1_coherence(coherent, computational_basis()) == doctest::Approx(1.0));
  CHECK(rel_entropy_coherence(coherent, computational_basis()) ==
        doctest::Approx(1.0).epsilon(1e-12));

  Mat2 evolved;
  evolved(0, 0) = 0.18;
  evolved(0, 1) = evolved(1, 0) = 0.30;
  evolved(1, 1) = 0.82;
  CHECK(l1_coherence(evolved, computational_basis()) == doctest::Approx(0.60));
}

TEST_CASE("reference basis selection") {
  const auto plain = reference_basis(diag2(0.3, 0.7));
  CHECK_FALSE(plain.degenerate);
  // Eigenbasis of a diagonal state is computational (order irrelevant).
  CHECK(std::abs(std::abs(plain.basis.first[0]) + std::abs(plain.basis.second[0]) - 1.0) < 1e-12);

  const auto mixed = reference_basis(diag2(0.5, 0.5));
  CHECK(mixed.degenerate);
  CHECK(std::abs(mixed.basis.first[0] - cplx{1.0, 0.0}) < 1e-15);

  // 0.7 / 0.3 mixture of sigma_x eigenstates diagonalizes in the Hadamard basis.
  Mat2 rho;
  rho(0, 0) = rho(1, 1) = 0.5;
  rho(0, 1) = rho(1, 0) = 0.2;
  const auto hadamard = reference_basis(rho);
  CHECK_FALSE(hadamard.degenerate);
  CHECK(std::abs(hadamard.basis.first[0] - cplx{kInvSqrt2, 0.0}) < 1e-12);
  CHECK(std::abs(hadamard.basis.first[1] - cplx{kInvSqrt2, 0.0}) < 1e-12);
  CHECK(std::abs(hadamard.basis.second[0] * hadamard.basis.second[1] +
                 cplx{0.5, 0.0}) < 1e-12);
}

TEST_CASE("closed-form MSC") {
  CHECK(msc_l1_closed_form(kInvSqrt2, 1.0, kInvSqrt2, 1.0) == doctest::Approx(1.0));
  CHECK(msc_l1_closed_form(1.0, 0.9, 0.0, 0.9) == 0.0);
  CHECK(msc_l1_closed_form(0.0, 0.9, 1.0, 0.9) == 0.0);
  CHECK(msc_l1_closed_form(kInvSqrt2, 0.8, kInvSqrt2, 0.6) ==
        doctest::Approx(0.514495755427527).epsilon(1e-14));
  // Negative decay amplitudes enter through their magnitude.
  CHECK(msc_l1_closed_form(kInvSqrt2, -0.8, kInvSqrt2, -0.6) ==
        doctest::Approx(0.514495755427527).epsilon(1e-14));
}

TEST_CASE("optimal polar angle") {
  CHECK(optimal_polar_angle(kInvSqrt2, 1.0) == doctest::Approx(0.5 * kPi));
  CHECK(optimal_polar_angle(0.0, 0.7) == doctest::Approx(0.0));
  CHECK(optimal_polar_angle(kInvSqrt2, 0.8) == doctest::Approx(std::acos(0.36)));
}

TEST_CASE("numeric MSC agrees with the closed form on the worked example") {
  const Mat4 rho = bell_like_evolved(psi_plus(), 0.8, 0.6);
  const auto result = msc_numeric(rho, CoherenceMeasure::L1);
  CHECK(std::abs(result.value - 0.514495755427527) < 1e-8);
  CHECK(std::abs(result.optimal_theta - optimal_polar_angle(kInvSqrt2, 0.8)) < 1e-3);
}

TEST_CASE("numeric MSC on random Bell-like states matches the closed form") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ua(0.02, 0.98);
  std::uniform_real_distribution<double> up(0.05, 1.0);
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  for (int s = 0; s < 50; ++s) {
    BellLikeState st;
    const double a2 = ua(rng);
    st.alpha = std::sqrt(a2);
    st.beta = std::sqrt(1.0 - a2);
    const double pa = up(rng) * (u01(rng) < 0.5 ? -1.0 : 1.0);
    const double pb = up(rng) * (u01(rng) < 0.5 ? -1.0 : 1.0);
    const auto result = msc_numeric(bell_like_evolved(st, pa, pb), CoherenceMeasure::L1);
    CHECK(std::abs(result.value - msc_l1_closed_form(st.alpha, pa, st.beta, pb)) < 1e-6);
  }
}

TEST_CASE("MSC vanishes for zero-discord diagonal states") {
  Mat4 diagonal;
  diagonal(0, 0) = 0.4;
  diagonal(1, 1) = 0.3;
  diagonal(2, 2) = 0.2;
  diagonal(3, 3) = 0.1;
  CHECK(msc_numeric(diagonal, CoherenceMeasure::L1).value == 0.0);
  // The two entropies travel different numerical routes, so "zero" is eps-sized.
  CHECK(msc_numeric(diagonal, CoherenceMeasure::RelativeEntropy).value < 1e-12);
}

TEST_CASE("relative-entropy MSC of the Bell state is one bit") {
  const auto result =
      msc_numeric(bell_like_evolved(psi_plus(), 1.0, 1.0), CoherenceMeasure::RelativeEntropy);
  CHECK(result.value == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(result.reference.degenerate);
}

TEST_CASE("l1 coherence of conditional states is phi-independent") {
  const Mat4 rho = bell_like_evolved(psi_plus(), 0.7, -0.5);
  const auto basis = reference_basis(partial_trace_A(rho)).basis;
  const double theta = 1.1;
  const double first =
      l1_coherence(conditional_state(rho, {theta, 0.0}).state, basis);
  for (int i = 1; i < 16; ++i) {
    const double phi = i * kPi / 8.0;
    CHECK(std::abs(l1_coherence(conditional_state(rho, {theta, phi}).state, basis) - first) <
          1e-12);
  }
}

TEST_CASE("MSC peak values from the backflow ratio") {
  const ReservoirBank bank{1.0, 2.0, 1};
  CHECK(msc_peak_value(psi_plus(), bank, 1) == doctest::Approx(1.0));
  CHECK(msc_peak_value(psi_plus(), bank, 2) ==
        doctest::Approx(0.116055886911057).epsilon(1e-13));

  BellLikeState lopsided;
  lopsided.alpha = 1.0;
  lopsided.beta = 0.0;
  CHECK(msc_peak_value(lopsided, bank, 2) == 0.0);

  CHECK_THROWS_AS(msc_peak_value(psi_plus(), ReservoirBank{1.0, 0.2, 1}, 1), regime_error);
  BellLikeState phi = psi_plus();
  phi.family = BellFamily::Phi;
  CHECK_THROWS_AS(msc_peak_value(phi, bank, 1), std::invalid_argument);
}

TEST_CASE("maximal coherence under unitaries is the Bloch norm") {
  CHECK(max_coherence_under_unitary(diag2(0.5, 0.5)) == doctest::Approx(0.0));
  Mat2 pure;
  pure(0, 0) = pure(0, 1) = pure(1, 0) = pure(1, 1) = 0.5;
  CHECK(max_coherence_under_unitary(pure) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(max_coherence_under_unitary(diag2(0.9, 0.1)) == doctest::Approx(0.8).epsilon(1e-13));
}

TEST_CASE("unitary-optimized MSC") {
  CHECK(msc_l1_unitary_optimized(1.0, 0.8, 0.0, 0.6) == doctest::Approx(1.0));
  CHECK(msc_l1_unitary_optimized(kInvSqrt2, 1.0, kInvSqrt2, 1.0) == doctest::Approx(1.0));
  CHECK(msc_l1_unitary_optimized(kInvSqrt2, 0.8, kInvSqrt2, 0.6) ==
        doctest::Approx(0.897420370728962).epsilon(1e-13));

  // Dominates the plain closed form everywhere sampled; strictly so when the
  // conditional state is off the Bloch equator.
  CHECK(msc_l1_unitary_optimized(kInvSqrt2, 0.8, kInvSqrt2, 0.6) >
        msc_l1_closed_form(kInvSqrt2, 0.8, kInvSqrt2, 0.6) + 0.1);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> ua(0.02, 0.98);
  std::uniform_real_distribution<double> up(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double a2 = ua(rng);
    const cplx alpha{std::sqrt(a2), 0.0};
    const cplx beta{std::sqrt(1.0 - a2), 0.0};
    const double pa = up(rng), pb = up(rng);
    CHECK(msc_l1_unitary_optimized(alpha, pa, beta, pb) >=
          msc_l1_closed_form(alpha, pa, beta, pb) - 1e-12);
  }
}

TEST_CASE("unassisted coherence and the advantage threshold") {
  CHECK(unassisted_coherence(kInvSqrt2, kInvSqrt2, 0.6) == doctest::Approx(0.6).epsilon(1e-14));
  CHECK(unassisted_coherence(0.0, 1.0, 0.6) == 0.0);
  CHECK(steering_advantage_threshold(1.0) == doctest::Approx(0.5));
  CHECK(steering_advantage_threshold(0.0) == doctest::Approx(0.25));
  // Inside the threshold the MSC wins.
  for (double pa : {0.2, 0.5, 0.9, 1.0}) {
    const double threshold = steering_advantage_threshold(pa);
    const double a2 = 0.8 * threshold;
    const cplx alpha{std::sqrt(a2), 0.0};
    const cplx beta{std::sqrt(1.0 - a2), 0.0};
    for (double pb : {0.3, 0.7, 1.0})
      CHECK(unassisted_coherence(alpha, beta, pb) < msc_l1_closed_form(alpha, pa, beta, pb));
  }
}

TEST_CASE("Psi and Phi families give the same l1 MSC") {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> ua(0.05, 0.95);
  std::uniform_real_distribution<double> up(0.05, 1.0);
  for (int s = 0; s < 25; ++s) {
    BellLikeState st;
    const double a2 = ua(rng);
    st.alpha = std::sqrt(a2);
    st.beta = std::sqrt(1.0 - a2);
    st.family = BellFamily::Phi;
    const double pa = up(rng), pb = up(rng);
    const auto numeric = msc_numeric(bell_like_evolved(st, pa, pb), CoherenceMeasure::L1);
    CHECK(std::abs(numeric.value - msc_l1_closed_form(st.alpha, pa, st.beta, pb)) < 1e-6);
  }
}

TEST_CASE("degeneracy diagnostic reports both values") {
  // Bell state: rho_B is maximally mixed, the definition's infimum corner.
  const auto diag = msc_degeneracy_diagnostic(bell_like_evolved(psi_plus(), 1.0, 1.0),
                                              CoherenceMeasure::L1, 60, 3);
  CHECK(diag.rho_b_degenerate);
  CHECK(diag.default_value == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(diag.infimum_value <= diag.default_value + 1e-12);
  // Steering a Bell state reaches every pure state, so the coherence maximum
  // stays 1 in any reference basis.
  CHECK(diag.infimum_value == doctest::Approx(1.0).epsilon(1e-4));
}

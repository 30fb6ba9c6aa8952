#include "mscsim/entanglement.hpp"

#include <algorithm>
#include <cmath>

#include "mscsim/steering.hpp"

namespace mscsim {

namespace {

// sigma_y x sigma_y is antidiag(-1, 1, 1, -1) in the {|11>,|10>,|01>,|00>}
// ordering (the same spin-flip matrix as in the standard ordering).
Mat4 spin_flip_matrix() {
  Mat4 m;
  m(0, 3) = -1.0;
  m(1, 2) = 1.0;
  m(2, 1) = 1.0;
  m(3, 0) = -1.0;
  return m;
}

}  // namespace

double concurrence_x_state(const Mat4& rho) {
  require_valid(rho, "concurrence_x_state");
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      if (i == j || i + j == 3) continue;
      if (std::abs(rho(i, j)) > 1e-12)
        throw std::invalid_argument("concurrence_x_state: state is not X-form");
    }
  const double inner = std::abs(rho(1, 2)) -
                       std::sqrt(std::max(0.0, rho(0, 0).real() * rho(3, 3).real()));
  const double outer = std::abs(rho(0, 3)) -
                       std::sqrt(std::max(0.0, rho(1, 1).real() * rho(2, 2).real()));
  return 2.0 * std::max({0.0, inner, outer});
}

double concurrence_general(const Mat4& rho) {
  require_valid(rho, "concurrence_general");
  const Mat4 flip = spin_flip_matrix();
  const Mat4 rho_tilde = flip * rho.conjugate() * flip;
  const Mat4 sq = matrix_sqrt_psd(rho);
  const auto es = eigensystem_hermitian(sq * rho_tilde * sq);

  // Eigenvalues that are zero in exact arithmetic come back as O(eps) noise;
  // taking their square root would inflate them to ~1e-8, so deflate
  // relative to the leading eigenvalue before the root.
  const double floor = 1e-13 * std::max(es.values[0], 0.0);
  std::array<double, 4> l{};
  for (std::size_t k = 0; k < 4; ++k)
    l[k] = es.values[k] > floor ? std::sqrt(es.values[k]) : 0.0;
  std::sort(l.begin(), l.end(), std::greater<>());
  return std::max(0.0, l[0] - l[1] - l[2] - l[3]);
}

Mat4 cnot_unitary() {
  // |11> <-> |10>, |01> and |00> fixed.
  Mat4 u;
  u(0, 1) = 1.0;
  u(1, 0) = 1.0;
  u(2, 2) = 1.0;
  u(3, 3) = 1.0;
  return u;
}

ConversionReport cnot_convert(const Mat2& rho_b, double success_probability) {
  require_valid(rho_b, "cnot_convert");
  Mat2 ground;
  ground(1, 1) = 1.0;
  const Mat4 u = cnot_unitary();
  ConversionReport report;
  report.bc_state = u * tensor_product(rho_b, ground) * u.adjoint();
  report.bc_concurrence = concurrence_general(report.bc_state);
  report.source_l1_coherence = l1_coherence(rho_b, computational_basis());
  report.success_probability = success_probability;
  return report;
}

double entanglement_ratio(cplx alpha, double p_a) {
  const double s = std::norm(alpha) * p_a * p_a;
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("entanglement_ratio: need |alpha p_a| <= 1");
  return 2.0 * std::sqrt(s * (1.0 - s));
}

double optimal_success_probability(cplx alpha, double p_a) {
  const double s = std::norm(alpha) * p_a * p_a;
  if (!(s >= 0.0 && s <= 1.0))
    throw std::invalid_argument("optimal_success_probability: need |alpha p_a| <= 1");
  return 2.0 * s * (1.0 - s);
}

double unsteered_conversion_check(const Mat4& rho_ab_t) {
  return cnot_convert(partial_trace_A(rho_ab_t)).bc_concurrence;
}

}  // namespace mscsim

// Two-qubit concurrence (X-state closed form and the Wootters construction)
// and the CNOT conversion of single-qubit coherence into BC entanglement.
#pragma once

#include "mscsim/matrix.hpp"

namespace mscsim {

/// Result of converting a steered qubit's coherence into entanglement with an
/// incoherent ancilla via CNOT. The concurrence of the output equals the l1
/// coherence of the input in the computational basis.
struct ConversionReport {
  Mat4 bc_state;
  double bc_concurrence = 0.0;
  double source_l1_coherence = 0.0;
  double success_probability = 1.0;  // reporting only; 1 when no steering step was involved
};

/// Closed-form concurrence for X-form states (nonzero entries on the diagonal
/// and anti-diagonal only): 2 max(0, |rho_23| - sqrt(rho_11 rho_44),
/// |rho_14| - sqrt(rho_22 rho_33)). Throws std::invalid_argument when the
/// state is not X-form within 1e-12.
double concurrence_x_state(const Mat4& rho);

/// Wootters concurrence for arbitrary states: max(0, l1 - l2 - l3 - l4) with
/// l_i the descending square roots of the eigenvalues of
/// sqrt(rho) rho_tilde sqrt(rho), rho_tilde = (sy x sy) conj(rho) (sy x sy).
double concurrence_general(const Mat4& rho);

/// The CNOT unitary on BC in the {|11>, |10>, |01>, |00>} ordering with B
/// (first factor) the control: |b, c> -> |b, c xor b>.
Mat4 cnot_unitary();

/// Builds rho_BC = U (rho_B x |0><0|) U^dag and reports its concurrence.
/// success_probability is carried through for reporting when the input came
/// from a measurement outcome.
ConversionReport cnot_convert(const Mat2& rho_b, double success_probability = 1.0);

/// C(rho_AB) / C(converted), the closed form 2 |alpha p_a| sqrt(1 - |alpha p_a|^2).
/// Boundary values |alpha p_a| in {0, 1} give the limit 0.
double entanglement_ratio(cplx alpha, double p_a);

/// Probability of the optimal steering outcome: 2 |alpha p_a|^2 (1 - |alpha p_a|^2).
double optimal_success_probability(cplx alpha, double p_a);

/// Concurrence created by CNOT from B's *unsteered* marginal of an evolved
/// Bell-like state; it vanishes because that marginal is diagonal.
double unsteered_conversion_check(const Mat4& rho_ab_t);

}  // namespace mscsim

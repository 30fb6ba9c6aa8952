// Exact reduced dynamics generated by the Lorentzian decay amplitude: the
// single-qubit damping map, its transfer-coefficient form, the product map
// on two qubits, and the closed-form evolved Bell-like states.
#pragma once

#include "mscsim/matrix.hpp"

namespace mscsim {

enum class BellFamily { Psi, Phi };

/// |Psi> = alpha|10> + beta|01> or |Phi> = alpha|11> + beta|00>,
/// normalized to |alpha|^2 + |beta|^2 = 1.
struct BellLikeState {
  cplx alpha{1.0 / std::numbers::sqrt2, 0.0};
  cplx beta{1.0 / std::numbers::sqrt2, 0.0};
  BellFamily family = BellFamily::Psi;
};

void require_valid(const BellLikeState& state);

/// The five nonzero transfer coefficients of the damping map written as
/// rho_out(i,i') = sum S(i,i'|l,l') rho_in(l,l'), indexed by excited (1) /
/// ground (0) level pairs. Everything is a function of one real p.
struct TransferCoefficients {
  double excited_to_excited = 1.0;   // (1,1) <- (1,1): p^2
  double coherence_upper = 1.0;      // (1,0) <- (1,0): p
  double coherence_lower = 1.0;      // (0,1) <- (0,1): p (conjugate of a real p)
  double ground_to_ground = 1.0;     // (0,0) <- (0,0): 1
  double excited_to_ground = 0.0;    // (0,0) <- (1,1): 1 - p^2
};

TransferCoefficients transfer_coefficients(double p);

/// The damping map of one qubit: excited population scaled by p^2,
/// coherences by p. Requires |p| <= 1 and a valid input state.
Mat2 evolve_single(const Mat2& rho0, double p);

/// Independent product evolution of both qubits via the full tensor
/// contraction of the two transfer-coefficient sets. Supports arbitrary
/// (valid) initial two-qubit states.
Mat4 evolve_pair(const Mat4& rho0, double p_a, double p_b);

///|Psi>: the closed-form evolved matrix
///   diag(0, |alpha p_a|^2, |beta p_b|^2, 1 - |alpha p_a|^2 - |beta p_b|^2)
/// with coherence alpha conj(beta) p_a p_b between |10> and |01>.
/// |Phi>: produced through evolve_pair from the projector; the generic map
/// is exact, so no separate closed form is carried for this family.
Mat4 bell_like_evolved(const BellLikeState& state, double p_a, double p_b);

/// Projector onto the (normalized) Bell-like state itself.
Mat4 bell_like_projector(const BellLikeState& state);

}  // namespace mscsim

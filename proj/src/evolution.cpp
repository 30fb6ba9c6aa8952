#include "mscsim/evolution.hpp"

#include <cmath>

namespace mscsim {

namespace {

void require_p(double p, const char* where) {
  if (!(std::abs(p) <= 1.0))
    throw std::invalid_argument(std::string(where) + ": need |p| <= 1");
}

// S(out_row, out_col | in_row, in_col) with index 0 = excited, 1 = ground,
// matching the matrix layout in the {|1>, |0>} basis.
double transfer(double p, int r, int c, int rr, int cc) {
  if (r == 0 && c == 0 && rr == 0 && cc == 0) return p * p;
  if (r == 0 && c == 1 && rr == 0 && cc == 1) return p;
  if (r == 1 && c == 0 && rr == 1 && cc == 0) return p;
  if (r == 1 && c == 1 && rr == 1 && cc == 1) return 1.0;
  if (r == 1 && c == 1 && rr == 0 && cc == 0) return 1.0 - p * p;
  return 0.0;
}

}  // namespace

void require_valid(const BellLikeState& state) {
  const double n = std::norm(state.alpha) + std::norm(state.beta);
  if (std::abs(n - 1.0) > 1e-12)
    throw std::invalid_argument("BellLikeState: |alpha|^2 + |beta|^2 must be 1");
}

TransferCoefficients transfer_coefficients(double p) {
  require_p(p, "transfer_coefficients");
  TransferCoefficients c;
  c.excited_to_excited = p * p;
  c.coherence_upper = p;
  c.coherence_lower = p;
  c.ground_to_ground = 1.0;
  c.excited_to_ground = 1.0 - p * p;
  return c;
}

Mat2 evolve_single(const Mat2& rho0, double p) {
  require_p(p, "evolve_single");
  require_valid(rho0, "evolve_single");
  Mat2 r;
  r(0, 0) = rho0(0, 0).real() * p * p;
  r(0, 1) = rho0(0, 1) * p;
  r(1, 0) = rho0(1, 0) * p;
  r(1, 1) = 1.0 - r(0, 0);
  return r;
}

Mat4 evolve_pair(const Mat4& rho0, double p_a, double p_b) {
  require_p(p_a, "evolve_pair");
  require_p(p_b, "evolve_pair");
  require_valid(rho0, "evolve_pair");

  // rho(t)_{(i j),(i' j')} = sum A(i,i'|l,l') B(j,j'|m,m') rho(0)_{(l m),(l' m')}
  Mat4 out;
  for (int i = 0; i < 2; ++i)
    for (int ip = 0; ip < 2; ++ip)
      for (int j = 0; j < 2; ++j)
        for (int jp = 0; jp < 2; ++jp) {
          cplx sum{0.0, 0.0};
          for (int l = 0; l < 2; ++l)
            for (int lp = 0; lp < 2; ++lp) {
              const double a = transfer(p_a, i, ip, l, lp);
              if (a == 0.0) continue;
              for (int m = 0; m < 2; ++m)
                for (int mp = 0; mp < 2; ++mp) {
                  const double b = transfer(p_b, j, jp, m, mp);
                  if (b == 0.0) continue;
                  sum += a * b *
                         rho0(static_cast<std::size_t>(2 * l + m),
                              static_cast<std::size_t>(2 * lp + mp));
                }
            }
          out(static_cast<std::size_t>(2 * i + j), static_cast<std::size_t>(2 * ip + jp)) = sum;
        }
  return out;
}

Mat4 bell_like_projector(const BellLikeState& state) {
  require_valid(state);
  // Basis {|11>, |10>, |01>, |00>}.
  std::array<cplx, 4> v{};
  if (state.family == BellFamily::Psi) {
    v[1] = state.alpha;  // |10>
    v[2] = state.beta;   // |01>
  } else {
    v[0] = state.alpha;  // |11>
    v[3] = state.beta;   // |00>
  }
  Mat4 r;
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) r(i, j) = v[i] * std::conj(v[j]);
  return r;
}

Mat4 bell_like_evolved(const BellLikeState& state, double p_a, double p_b) {
  require_valid(state);
  require_p(p_a, "bell_like_evolved");
  require_p(p_b, "bell_like_evolved");

  if (state.family == BellFamily::Phi) return evolve_pair(bell_like_projector(state), p_a, p_b);

  const double pop_a = std::norm(state.alpha) * p_a * p_a;
  const double pop_b = std::norm(state.beta) * p_b * p_b;
  Mat4 r;
  r(1, 1) = pop_a;
  r(2, 2) = pop_b;
  r(3, 3) = 1.0 - pop_a - pop_b;
  r(1, 2) = state.alpha * std::conj(state.beta) * p_a * p_b;
  r(2, 1) = std::conj(r(1, 2));
  return r;
}

}  // namespace mscsim

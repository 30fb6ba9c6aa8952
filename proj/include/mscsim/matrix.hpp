// Small fixed-size complex linear algebra for one- and two-qubit density
// matrices. Basis conventions: single qubit {|1>, |0>} (excited first),
// two qubits {|11>, |10>, |01>, |00>}.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <stdexcept>
#include <string>

namespace mscsim {

using cplx = std::complex<double>;

inline constexpr double kHermTol = 1e-12;
inline constexpr double kTraceTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;

/// Thrown when an operation requires a valid density matrix and gets
/// something else.
class invalid_state_error : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

template <std::size_t N>
class SquareMatrix {
 public:
  SquareMatrix() { entries_.fill(cplx{0.0, 0.0}); }

  static SquareMatrix identity() {
    SquareMatrix m;
    for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
    return m;
  }

  static SquareMatrix zero() { return SquareMatrix{}; }

  cplx& operator()(std::size_t row, std::size_t col) {
    return entries_[row * N + col];
  }
  const cplx& operator()(std::size_t row, std::size_t col) const {
    return entries_[row * N + col];
  }

  static constexpr std::size_t dim() { return N; }

  SquareMatrix operator+(const SquareMatrix& o) const {
    SquareMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.entries_[i] = entries_[i] + o.entries_[i];
    return r;
  }
  SquareMatrix operator-(const SquareMatrix& o) const {
    SquareMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.entries_[i] = entries_[i] - o.entries_[i];
    return r;
  }
  SquareMatrix operator*(const SquareMatrix& o) const {
    SquareMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t k = 0; k < N; ++k) {
        const cplx aik = (*this)(i, k);
        if (aik == cplx{0.0, 0.0}) continue;
        for (std::size_t j = 0; j < N; ++j) r(i, j) += aik * o(k, j);
      }
    return r;
  }
  friend SquareMatrix operator*(cplx s, const SquareMatrix& m) {
    SquareMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.entries_[i] = s * m.entries_[i];
    return r;
  }
  friend SquareMatrix operator*(double s, const SquareMatrix& m) {
    return cplx{s, 0.0} * m;
  }

  SquareMatrix adjoint() const {
    SquareMatrix r;
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j) r(i, j) = std::conj((*this)(j, i));
    return r;
  }

  SquareMatrix conjugate() const {
    SquareMatrix r;
    for (std::size_t i = 0; i < N * N; ++i) r.entries_[i] = std::conj(entries_[i]);
    return r;
  }

  cplx trace() const {
    cplx t{0.0, 0.0};
    for (std::size_t i = 0; i < N; ++i) t += (*this)(i, i);
    return t;
  }

  /// Largest entrywise absolute difference to another matrix.
  double max_abs_diff(const SquareMatrix& o) const {
    double m = 0.0;
    for (std::size_t i = 0; i < N * N; ++i)
      m = std::max(m, std::abs(entries_[i] - o.entries_[i]));
    return m;
  }

  double max_abs() const {
    double m = 0.0;
    for (std::size_t i = 0; i < N * N; ++i) m = std::max(m, std::abs(entries_[i]));
    return m;
  }

  bool all_finite() const {
    for (const cplx& e : entries_)
      if (!std::isfinite(e.real()) || !std::isfinite(e.imag())) return false;
    return true;
  }

 private:
  std::array<cplx, N * N> entries_;
};

using Mat2 = SquareMatrix<2>;
using Mat4 = SquareMatrix<4>;
using Vec2 = std::array<cplx, 2>;

/// Reference basis for coherence measures: two orthonormal qubit vectors.
struct BasisChoice {
  Vec2 first{cplx{1.0, 0.0}, cplx{0.0, 0.0}};
  Vec2 second{cplx{0.0, 0.0}, cplx{1.0, 0.0}};
};

BasisChoice computational_basis();
bool is_orthonormal(const BasisChoice& basis, double tol = 1e-12);

/// Pauli matrices in the {|1>, |0>} ordering, keeping the familiar textbook
/// entry layout; in particular sigma_z is diag(1, -1) with the +1 on the
/// excited state.
Mat2 sigma_x();
Mat2 sigma_y();
Mat2 sigma_z();

/// Diagnostic validation result. Never throws; callers that need a hard
/// failure use require_valid().
struct ValidationReport {
  bool hermitian_ok = false;
  bool trace_ok = false;
  bool psd_ok = false;
  double hermiticity_deviation = 0.0;  // max |m_ij - conj(m_ji)|
  double trace_deviation = 0.0;        // |tr(m) - 1|
  double min_eigenvalue = 0.0;
  bool ok() const { return hermitian_ok && trace_ok && psd_ok; }
  std::string describe() const;
};

ValidationReport validate(const Mat2& m);
ValidationReport validate(const Mat4& m);

/// Throws invalid_state_error with the violation report if m is not a
/// density matrix within tolerance.
void require_valid(const Mat2& m, const char* where);
void require_valid(const Mat4& m, const char* where);

template <std::size_t N>
struct EigenSystem {
  std::array<double, N> values;                 // descending
  std::array<std::array<cplx, N>, N> vectors;   // vectors[k] pairs with values[k]
};

/// Hermitian eigendecomposition. 2x2 uses the closed form, 4x4 cyclic Jacobi
/// rotations. Eigenvalues descend; each eigenvector's first non-negligible
/// component is phase-rotated to be real and positive so results are
/// deterministic under degeneracy.
EigenSystem<2> eigensystem_hermitian(const Mat2& m);
EigenSystem<4> eigensystem_hermitian(const Mat4& m);

/// Von Neumann entropy in bits (log base 2), with 0 log 0 := 0.
double von_neumann_entropy(const Mat2& m);
double von_neumann_entropy(const Mat4& m);

/// Trace distance tr|a - b| / 2 between qubit states.
double trace_distance(const Mat2& a, const Mat2& b);

Mat2 partial_trace_A(const Mat4& m);
Mat2 partial_trace_B(const Mat4& m);

Mat4 tensor_product(const Mat2& a, const Mat2& b);

double purity(const Mat2& m);
double purity(const Mat4& m);

/// V sqrt(diag(max(eig,0))) V^dag for a Hermitian PSD matrix.
Mat4 matrix_sqrt_psd(const Mat4& m);

}  // namespace mscsim

#include "mscsim/matrix.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

namespace mscsim {

namespace {

// Multiply eigenvector by a unit phase so its first component with magnitude
// above threshold is real and positive. Keeps degenerate output deterministic.
template <std::size_t N>
void canonicalize_phase(std::array<cplx, N>& v) {
  for (std::size_t i = 0; i < N; ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 1e-12) {
      const cplx phase = std::conj(v[i]) / mag;
      for (std::size_t j = 0; j < N; ++j) v[j] *= phase;
      return;
    }
  }
}

template <std::size_t N>
double hermiticity_deviation(const SquareMatrix<N>& m) {
  double dev = 0.0;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      dev = std::max(dev, std::abs(m(i, j) - std::conj(m(j, i))));
  return dev;
}

template <std::size_t N>
SquareMatrix<N> hermitian_part(const SquareMatrix<N>& m) {
  SquareMatrix<N> h;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      h(i, j) = 0.5 * (m(i, j) + std::conj(m(j, i)));
  return h;
}

// Core solvers assume Hermitian input (callers symmetrize first).

EigenSystem<2> eig2_core(const Mat2& m) {
  const double a = m(0, 0).real();
  const double d = m(1, 1).real();
  const cplx b = m(0, 1);
  const double mid = 0.5 * (a + d);
  const double rad = std::hypot(0.5 * (a - d), std::abs(b));

  EigenSystem<2> es;
  es.values = {mid + rad, mid - rad};

  if (std::abs(b) <= 1e-15 * std::max(1.0, m.max_abs())) {
    // Diagonal: pick basis vectors, larger diagonal entry first.
    if (a >= d) {
      es.vectors[0] = {cplx{1.0, 0.0}, cplx{0.0, 0.0}};
      es.vectors[1] = {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
    } else {
      es.vectors[0] = {cplx{0.0, 0.0}, cplx{1.0, 0.0}};
      es.vectors[1] = {cplx{1.0, 0.0}, cplx{0.0, 0.0}};
    }
    return es;
  }

  // (A - lam) v = 0 is solved by v = (b, lam - a).
  for (std::size_t k = 0; k < 2; ++k) {
    const double lam = es.values[k];
    std::array<cplx, 2> v = {b, cplx{lam - a, 0.0}};
    const double nrm = std::sqrt(std::norm(v[0]) + std::norm(v[1]));
    v[0] /= nrm;
    v[1] /= nrm;
    canonicalize_phase<2>(v);
    es.vectors[k] = v;
  }
  return es;
}

EigenSystem<4> eig4_core(Mat4 a) {
  const double scale = std::max(1.0, a.max_abs());
  Mat4 v = Mat4::identity();

  // Cyclic Jacobi for complex Hermitian matrices: each sweep annihilates all
  // off-diagonal pairs (p, q) with a phase-adjusted plane rotation
  //   R = [[c, -s w], [s conj(w), c]],  w = a_pq / |a_pq|,
  // with c, s from the classic real-Jacobi angle for |a_pq|. Convergence is
  // quadratic; the sweep cap is a diagnostic guard, not a tuning knob.
  constexpr int kMaxSweeps = 60;
  double off = 0.0;
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    off = 0.0;
    for (std::size_t p = 0; p < 4; ++p)
      for (std::size_t q = p + 1; q < 4; ++q) off = std::max(off, std::abs(a(p, q)));
    if (off <= 1e-15 * scale) break;

    for (std::size_t p = 0; p < 4; ++p) {
      for (std::size_t q = p + 1; q < 4; ++q) {
        const double apq = std::abs(a(p, q));
        if (apq <= 1e-18 * scale) continue;
        const cplx w = a(p, q) / apq;
        const double app = a(p, p).real();
        const double aqq = a(q, q).real();
        // tan(2 theta) = 2 |a_pq| / (a_pp - a_qq); take the smaller-angle root.
        const double tau = (app - aqq) / (2.0 * apq);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;

        // A <- R^dag A R restricted to rows/columns p and q.
        for (std::size_t k = 0; k < 4; ++k) {
          const cplx akp = a(k, p);
          const cplx akq = a(k, q);
          a(k, p) = c * akp + s * std::conj(w) * akq;
          a(k, q) = -s * w * akp + c * akq;
        }
        for (std::size_t k = 0; k < 4; ++k) {
          const cplx apk = a(p, k);
          const cplx aqk = a(q, k);
          a(p, k) = c * apk + s * w * aqk;
          a(q, k) = -s * std::conj(w) * apk + c * aqk;
        }
        a(p, q) = cplx{0.0, 0.0};
        a(q, p) = cplx{0.0, 0.0};
        a(p, p) = cplx{a(p, p).real(), 0.0};
        a(q, q) = cplx{a(q, q).real(), 0.0};

        for (std::size_t k = 0; k < 4; ++k) {
          const cplx vkp = v(k, p);
          const cplx vkq = v(k, q);
          v(k, p) = c * vkp + s * std::conj(w) * vkq;
          v(k, q) = -s * w * vkp + c * vkq;
        }
      }
    }
  }

  off = 0.0;
  for (std::size_t p = 0; p < 4; ++p)
    for (std::size_t q = p + 1; q < 4; ++q) off = std::max(off, std::abs(a(p, q)));
  if (off > 1e-10 * scale)
    throw std::runtime_error("eigensystem_hermitian: Jacobi sweeps did not converge");

  std::array<std::size_t, 4> order = {0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&a](std::size_t i, std::size_t j) {
    return a(i, i).real() > a(j, j).real();
  });

  EigenSystem<4> es;
  for (std::size_t k = 0; k < 4; ++k) {
    es.values[k] = a(order[k], order[k]).real();
    for (std::size_t r = 0; r < 4; ++r) es.vectors[k][r] = v(r, order[k]);
    canonicalize_phase<4>(es.vectors[k]);
  }
  return es;
}

EigenSystem<2> eig_core(const Mat2& m) { return eig2_core(m); }
EigenSystem<4> eig_core(const Mat4& m) { return eig4_core(m); }

template <std::size_t N>
ValidationReport validate_impl(const SquareMatrix<N>& m) {
  ValidationReport r;
  if (!m.all_finite()) {
    r.hermiticity_deviation = std::numeric_limits<double>::infinity();
    r.trace_deviation = std::numeric_limits<double>::infinity();
    r.min_eigenvalue = -std::numeric_limits<double>::infinity();
    return r;
  }
  r.hermiticity_deviation = hermiticity_deviation(m);
  r.hermitian_ok = r.hermiticity_deviation <= kHermTol;
  r.trace_deviation = std::abs(m.trace() - cplx{1.0, 0.0});
  r.trace_ok = r.trace_deviation <= kTraceTol;
  try {
    const auto es = eig_core(hermitian_part(m));
    r.min_eigenvalue = es.values.back();
    r.psd_ok = r.min_eigenvalue >= -kPsdTol;
  } catch (const std::runtime_error&) {
    // Diagnostic contract: report, never abort.
    r.min_eigenvalue = -std::numeric_limits<double>::infinity();
    r.psd_ok = false;
  }
  return r;
}

template <std::size_t N>
double entropy_impl(const SquareMatrix<N>& m) {
  require_valid(m, "von_neumann_entropy");
  const auto es = eig_core(hermitian_part(m));
  double s = 0.0;
  for (double lam : es.values) {
    if (lam > 0.0) s -= lam * std::log2(lam);
  }
  return s;
}

template <std::size_t N>
void check_hermitian_or_throw(const SquareMatrix<N>& m) {
  if (hermiticity_deviation(m) > 1e-9 * std::max(1.0, m.max_abs()))
    throw std::invalid_argument("eigensystem_hermitian: matrix is not Hermitian");
}

}  // namespace

std::string ValidationReport::describe() const {
  std::ostringstream os;
  if (ok()) return "ok";
  if (!hermitian_ok) os << "hermiticity violated by " << hermiticity_deviation << "; ";
  if (!trace_ok) os << "trace deviates by " << trace_deviation << "; ";
  if (!psd_ok) os << "PSD violated, min eigenvalue " << min_eigenvalue << "; ";
  return os.str();
}

BasisChoice computational_basis() { return BasisChoice{}; }

bool is_orthonormal(const BasisChoice& basis, double tol) {
  auto dot = [](const Vec2& a, const Vec2& b) {
    return std::conj(a[0]) * b[0] + std::conj(a[1]) * b[1];
  };
  return std::abs(dot(basis.first, basis.first) - cplx{1.0, 0.0}) <= tol &&
         std::abs(dot(basis.second, basis.second) - cplx{1.0, 0.0}) <= tol &&
         std::abs(dot(basis.first, basis.second)) <= tol;
}

Mat2 sigma_x() {
  Mat2 m;
  m(0, 1) = 1.0;
  m(1, 0) = 1.0;
  return m;
}

Mat2 sigma_y() {
  Mat2 m;
  m(0, 1) = cplx{0.0, -1.0};
  m(1, 0) = cplx{0.0, 1.0};
  return m;
}

Mat2 sigma_z() {
  Mat2 m;
  m(0, 0) = 1.0;
  m(1, 1) = -1.0;
  return m;
}

ValidationReport validate(const Mat2& m) { return validate_impl(m); }
ValidationReport validate(const Mat4& m) { return validate_impl(m); }

void require_valid(const Mat2& m, const char* where) {
  const auto r = validate(m);
  if (!r.ok()) throw invalid_state_error(std::string(where) + ": " + r.describe());
}

void require_valid(const Mat4& m, const char* where) {
  const auto r = validate(m);
  if (!r.ok()) throw invalid_state_error(std::string(where) + ": " + r.describe());
}

EigenSystem<2> eigensystem_hermitian(const Mat2& m) {
  check_hermitian_or_throw(m);
  return eig2_core(hermitian_part(m));
}

EigenSystem<4> eigensystem_hermitian(const Mat4& m) {
  check_hermitian_or_throw(m);
  return eig4_core(hermitian_part(m));
}

double von_neumann_entropy(const Mat2& m) { return entropy_impl(m); }
double von_neumann_entropy(const Mat4& m) { return entropy_impl(m); }

double trace_distance(const Mat2& a, const Mat2& b) {
  require_valid(a, "trace_distance");
  require_valid(b, "trace_distance");
  const auto es = eigensystem_hermitian(a - b);
  return 0.5 * (std::abs(es.values[0]) + std::abs(es.values[1]));
}

Mat2 partial_trace_A(const Mat4& m) {
  require_valid(m, "partial_trace_A");
  // A is the first tensor factor: (tr_A m)_{j j'} = sum_a m_{(a j),(a j')}.
  Mat2 r;
  for (std::size_t j = 0; j < 2; ++j)
    for (std::size_t jp = 0; jp < 2; ++jp)
      r(j, jp) = m(j, jp) + m(2 + j, 2 + jp);
  return r;
}

Mat2 partial_trace_B(const Mat4& m) {
  require_valid(m, "partial_trace_B");
  Mat2 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t ip = 0; ip < 2; ++ip)
      r(i, ip) = m(2 * i, 2 * ip) + m(2 * i + 1, 2 * ip + 1);
  return r;
}

Mat4 tensor_product(const Mat2& a, const Mat2& b) {
  Mat4 r;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l)
          r(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return r;
}

double purity(const Mat2& m) { return (m * m).trace().real(); }
double purity(const Mat4& m) { return (m * m).trace().real(); }

Mat4 matrix_sqrt_psd(const Mat4& m) {
  const auto es = eigensystem_hermitian(m);
  Mat4 r;
  for (std::size_t k = 0; k < 4; ++k) {
    const double s = std::sqrt(std::max(es.values[k], 0.0));
    if (s == 0.0) continue;
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j)
        r(i, j) += s * es.vectors[k][i] * std::conj(es.vectors[k][j]);
  }
  return r;
}

}  // namespace mscsim

#include "bsakit/matrix.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "bsakit/error.hpp"

namespace bsakit {

namespace {

void check_dim(std::size_t dim) {
  if (dim != 2 && dim != 4) {
    throw Error(ErrorCode::InvalidArgument, "dimension must be 2 or 4, got " + std::to_string(dim));
  }
}

void check_finite(Complex z) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw Error(ErrorCode::InvalidArgument, "non-finite entry");
  }
}

void check_same_dim(std::size_t a, std::size_t b) {
  if (a != b) throw Error(ErrorCode::InvalidArgument, "dimension mismatch");
}

// Row-major k x k scratch matrix for Gram systems (k <= 4).
struct Small {
  std::size_t n;
  std::array<Complex, 16> a{};
  Complex& operator()(std::size_t r, std::size_t c) { return a[r * 4 + c]; }
  Complex operator()(std::size_t r, std::size_t c) const { return a[r * 4 + c]; }
};

Small gram(std::span<const ComplexVector> vs) {
  Small g{vs.size()};
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = 0; j < vs.size(); ++j) g(i, j) = inner(vs[i], vs[j]);
  return g;
}

Complex small_determinant(Small m) {
  Complex det = 1.0;
  for (std::size_t col = 0; col < m.n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m.n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == Complex{}) return 0.0;
    if (piv != col) {
      for (std::size_t c = 0; c < m.n; ++c) std::swap(m(piv, c), m(col, c));
      det = -det;
    }
    det *= m(col, col);
    for (std::size_t r = col + 1; r < m.n; ++r) {
      const Complex f = m(r, col) / m(col, col);
      for (std::size_t c = col; c < m.n; ++c) m(r, c) -= f * m(col, c);
    }
  }
  return det;
}

// Gauss-Jordan with partial pivoting; caller has already screened for rank.
Small small_inverse(Small m) {
  Small inv{m.n};
  for (std::size_t i = 0; i < m.n; ++i) inv(i, i) = 1.0;
  for (std::size_t col = 0; col < m.n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < m.n; ++r)
      if (std::abs(m(r, col)) > std::abs(m(piv, col))) piv = r;
    if (m(piv, col) == Complex{}) throw Error(ErrorCode::DependentSet, "singular Gram matrix");
    for (std::size_t c = 0; c < m.n; ++c) {
      std::swap(m(piv, c), m(col, c));
      std::swap(inv(piv, c), inv(col, c));
    }
    const Complex d = m(col, col);
    for (std::size_t c = 0; c < m.n; ++c) {
      m(col, c) /= d;
      inv(col, c) /= d;
    }
    for (std::size_t r = 0; r < m.n; ++r) {
      if (r == col) continue;
      const Complex f = m(r, col);
      if (f == Complex{}) continue;
      for (std::size_t c = 0; c < m.n; ++c) {
        m(r, c) -= f * m(col, c);
        inv(r, c) -= f * inv(col, c);
      }
    }
  }
  return inv;
}

struct JacobiResult {
  std::array<double, 4> values{};
  std::array<Complex, 16> vectors{};  // column j is eigenvector j
  std::size_t n = 0;
};

constexpr int kMaxSweeps = 100;

JacobiResult jacobi(const ComplexMatrix& m, const Tolerances& tol, bool want_vectors) {
  const std::size_t n = m.dim();
  if (!is_hermitian(m, tol.herm)) {
    throw Error(ErrorCode::NotHermitian, "matrix deviates from its adjoint by more than " + std::to_string(tol.herm));
  }
  std::array<Complex, 16> a{};
  std::array<Complex, 16> v{};
  auto A = [&](std::size_t r, std::size_t c) -> Complex& { return a[r * 4 + c]; };
  auto V = [&](std::size_t r, std::size_t c) -> Complex& { return v[r * 4 + c]; };
  double fro = 0.0;
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t c = 0; c < n; ++c) {
      A(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
      fro += std::norm(A(r, c));
    }
    A(r, r) = A(r, r).real();
    V(r, r) = 1.0;
  }
  fro = std::sqrt(fro);

  int sweep = 0;
  for (;; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += std::norm(A(p, q));
    if (std::sqrt(off) <= 1e-17 * fro || off == 0.0) break;
    if (sweep >= kMaxSweeps) {
      throw Error(ErrorCode::NoConvergence, "Jacobi sweeps exceeded " + std::to_string(kMaxSweeps));
    }
    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const double r = std::abs(A(p, q));
        if (r == 0.0) continue;
        const Complex phase = A(p, q) / r;  // e^{i phi}
        const double theta = (A(q, q).real() - A(p, p).real()) / (2.0 * r);
        const double t = (theta >= 0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(1.0 + theta * theta));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = t * c;
        const Complex s_pq = s * phase;             // G(p,q)
        const Complex s_qp = -s * std::conj(phase);  // G(q,p)
        // A <- A G
        for (std::size_t k = 0; k < n; ++k) {
          const Complex akp = A(k, p), akq = A(k, q);
          A(k, p) = c * akp + s_qp * akq;
          A(k, q) = s_pq * akp + c * akq;
        }
        // A <- G^dagger A
        for (std::size_t k = 0; k < n; ++k) {
          const Complex apk = A(p, k), aqk = A(q, k);
          A(p, k) = c * apk + std::conj(s_qp) * aqk;
          A(q, k) = std::conj(s_pq) * apk + c * aqk;
        }
        A(p, q) = 0.0;
        A(q, p) = 0.0;
        A(p, p) = A(p, p).real();
        A(q, q) = A(q, q).real();
        if (want_vectors) {
          for (std::size_t k = 0; k < n; ++k) {
            const Complex vkp = V(k, p), vkq = V(k, q);
            V(k, p) = c * vkp + s_qp * vkq;
            V(k, q) = s_pq * vkp + c * vkq;
          }
        }
      }
    }
  }

  JacobiResult out;
  out.n = n;
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](std::size_t i, std::size_t j) { return A(i, i).real() > A(j, j).real(); });
  for (std::size_t k = 0; k < n; ++k) {
    out.values[k] = A(order[k], order[k]).real();
    if (want_vectors)
      for (std::size_t r = 0; r < n; ++r) out.vectors[r * 4 + k] = V(r, order[k]);
  }
  return out;
}

}  // namespace

// ---------------------------------------------------------------- vectors

ComplexVector::ComplexVector(std::size_t dim) : dim_(dim) { check_dim(dim); }

ComplexVector::ComplexVector(std::initializer_list<Complex> entries)
    : ComplexVector(std::span<const Complex>(entries.begin(), entries.size())) {}

ComplexVector::ComplexVector(std::span<const Complex> entries) : dim_(entries.size()) {
  check_dim(dim_);
  for (std::size_t i = 0; i < dim_; ++i) {
    check_finite(entries[i]);
    data_[i] = entries[i];
  }
}

ComplexVector ComplexVector::basis(std::size_t dim, std::size_t index) {
  ComplexVector v(dim);
  if (index >= dim) throw Error(ErrorCode::InvalidArgument, "basis index out of range");
  v[index] = 1.0;
  return v;
}

double ComplexVector::norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) s += std::norm(data_[i]);
  return std::sqrt(s);
}

ComplexVector ComplexVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorCode::InvalidArgument, "cannot normalize the zero vector");
  ComplexVector out = *this;
  out *= 1.0 / n;
  return out;
}

ComplexVector ComplexVector::conj() const {
  ComplexVector out = *this;
  for (std::size_t i = 0; i < dim_; ++i) out.data_[i] = std::conj(data_[i]);
  return out;
}

ComplexVector& ComplexVector::operator+=(const ComplexVector& o) {
  check_same_dim(dim_, o.dim_);
  for (std::size_t i = 0; i < dim_; ++i) data_[i] += o.data_[i];
  return *this;
}

ComplexVector& ComplexVector::operator-=(const ComplexVector& o) {
  check_same_dim(dim_, o.dim_);
  for (std::size_t i = 0; i < dim_; ++i) data_[i] -= o.data_[i];
  return *this;
}

ComplexVector& ComplexVector::operator*=(Complex s) {
  for (std::size_t i = 0; i < dim_; ++i) data_[i] *= s;
  return *this;
}

ComplexVector operator+(ComplexVector a, const ComplexVector& b) { return a += b; }
ComplexVector operator-(ComplexVector a, const ComplexVector& b) { return a -= b; }
ComplexVector operator*(Complex s, ComplexVector v) { return v *= s; }

Complex inner(const ComplexVector& a, const ComplexVector& b) {
  check_same_dim(a.dim(), b.dim());
  Complex s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) s += std::conj(a[i]) * b[i];
  return s;
}

double max_abs_diff(const ComplexVector& a, const ComplexVector& b) {
  check_same_dim(a.dim(), b.dim());
  double m = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// ---------------------------------------------------------------- matrices

ComplexMatrix::ComplexMatrix(std::size_t dim) : dim_(dim) { check_dim(dim); }

ComplexMatrix::ComplexMatrix(std::size_t dim, std::span<const Complex> row_major) : dim_(dim) {
  check_dim(dim);
  if (row_major.size() != dim * dim) {
    throw Error(ErrorCode::InvalidArgument, "expected " + std::to_string(dim * dim) + " entries");
  }
  for (std::size_t r = 0; r < dim; ++r)
    for (std::size_t c = 0; c < dim; ++c) {
      check_finite(row_major[r * dim + c]);
      (*this)(r, c) = row_major[r * dim + c];
    }
}

ComplexMatrix::ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major)
    : ComplexMatrix(dim, std::span<const Complex>(row_major.begin(), row_major.size())) {}

ComplexMatrix ComplexMatrix::identity(std::size_t dim) {
  ComplexMatrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> diag) {
  ComplexMatrix m(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i) {
    check_finite(diag[i]);
    m(i, i) = diag[i];
  }
  return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<Complex> diag) {
  return diagonal(std::span<const Complex>(diag.begin(), diag.size()));
}

ComplexMatrix ComplexMatrix::outer(const ComplexVector& a, const ComplexVector& b) {
  check_same_dim(a.dim(), b.dim());
  ComplexMatrix m(a.dim());
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) m(r, c) = a[r] * std::conj(b[c]);
  return m;
}

ComplexMatrix ComplexMatrix::adjoint() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(c, r));
  return m;
}

ComplexMatrix ComplexMatrix::transpose() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = (*this)(c, r);
  return m;
}

ComplexMatrix ComplexMatrix::conj() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = std::conj((*this)(r, c));
  return m;
}

Complex ComplexMatrix::trace() const {
  Complex t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

double ComplexMatrix::max_abs() const {
  double m = 0.0;
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m = std::max(m, std::abs((*this)(r, c)));
  return m;
}

ComplexMatrix ComplexMatrix::hermitian_part() const {
  ComplexMatrix m(dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) m(r, c) = 0.5 * ((*this)(r, c) + std::conj((*this)(c, r)));
  return m;
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& o) {
  check_same_dim(dim_, o.dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) += o(r, c);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& o) {
  check_same_dim(dim_, o.dim_);
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) -= o(r, c);
  return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex s) {
  for (std::size_t r = 0; r < dim_; ++r)
    for (std::size_t c = 0; c < dim_; ++c) (*this)(r, c) *= s;
  return *this;
}

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b) { return a += b; }
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b) { return a -= b; }
ComplexMatrix operator*(Complex s, ComplexMatrix m) { return m *= s; }

ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a.dim(), b.dim());
  const std::size_t n = a.dim();
  ComplexMatrix m(n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t k = 0; k < n; ++k) {
      const Complex ark = a(r, k);
      if (ark == Complex{}) continue;
      for (std::size_t c = 0; c < n; ++c) m(r, c) += ark * b(k, c);
    }
  return m;
}

ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v) {
  check_same_dim(m.dim(), v.dim());
  ComplexVector out(v.dim());
  for (std::size_t r = 0; r < v.dim(); ++r)
    for (std::size_t c = 0; c < v.dim(); ++c) out[r] += m(r, c) * v[c];
  return out;
}

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  check_same_dim(a.dim(), b.dim());
  double m = 0.0;
  for (std::size_t r = 0; r < a.dim(); ++r)
    for (std::size_t c = 0; c < a.dim(); ++c) m = std::max(m, std::abs(a(r, c) - b(r, c)));
  return m;
}

Complex expectation(const ComplexVector& a, const ComplexMatrix& m, const ComplexVector& b) {
  return inner(a, m * b);
}

namespace pauli {
ComplexMatrix identity() { return ComplexMatrix::identity(2); }
ComplexMatrix x() { return ComplexMatrix(2, {0.0, 1.0, 1.0, 0.0}); }
ComplexMatrix y() { return ComplexMatrix(2, {0.0, Complex(0, -1), Complex(0, 1), 0.0}); }
ComplexMatrix z() { return ComplexMatrix(2, {1.0, 0.0, 0.0, -1.0}); }
}  // namespace pauli

bool is_hermitian(const ComplexMatrix& m, double tol) {
  for (std::size_t r = 0; r < m.dim(); ++r)
    for (std::size_t c = r; c < m.dim(); ++c)
      if (std::abs(m(r, c) - std::conj(m(c, r))) > tol) return false;
  return true;
}

bool is_positive_definite(const ComplexMatrix& m) {
  const std::size_t n = m.dim();
  std::array<Complex, 16> l{};
  for (std::size_t j = 0; j < n; ++j) {
    double d = m(j, j).real();
    for (std::size_t k = 0; k < j; ++k) d -= std::norm(l[j * 4 + k]);
    if (!(d > 0.0)) return false;
    const double root = std::sqrt(d);
    l[j * 4 + j] = root;
    for (std::size_t i = j + 1; i < n; ++i) {
      Complex s = 0.5 * (m(i, j) + std::conj(m(j, i)));
      for (std::size_t k = 0; k < j; ++k) s -= l[i * 4 + k] * std::conj(l[j * 4 + k]);
      l[i * 4 + j] = s / root;
    }
  }
  return true;
}

// ---------------------------------------------------------------- spectral

EigenSystem hermitian_eigen(const ComplexMatrix& m, const Tolerances& tol) {
  const JacobiResult j = jacobi(m, tol, true);
  EigenSystem out;
  out.values.assign(j.values.begin(), j.values.begin() + j.n);
  for (std::size_t k = 0; k < j.n; ++k) {
    ComplexVector v(j.n);
    for (std::size_t r = 0; r < j.n; ++r) v[r] = j.vectors[r * 4 + k];
    out.vectors.push_back(v);
  }
  return out;
}

std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const Tolerances& tol) {
  const JacobiResult j = jacobi(m, tol, false);
  return {j.values.begin(), j.values.begin() + j.n};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, const Tolerances& tol) {
  const EigenSystem es = hermitian_eigen(m, tol);
  ComplexMatrix out(m.dim());
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    double ev = es.values[k];
    if (ev < -tol.psd) {
      throw Error(ErrorCode::NotPsd, "eigenvalue " + std::to_string(ev) + " below -" + std::to_string(tol.psd));
    }
    ev = std::max(ev, 0.0);
    if (ev == 0.0) continue;
    out += std::sqrt(ev) * ComplexMatrix::projector(es.vectors[k]);
  }
  return out;
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.dim() != 2 || b.dim() != 2) throw Error(ErrorCode::InvalidArgument, "kron expects two 2x2 factors");
  ComplexMatrix m(4);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) m(2 * i + k, 2 * j + l) = a(i, j) * b(k, l);
  return m;
}

ComplexVector kron(const ComplexVector& a, const ComplexVector& b) {
  if (a.dim() != 2 || b.dim() != 2) throw Error(ErrorCode::InvalidArgument, "kron expects two 2-vectors");
  return ComplexVector{a[0] * b[0], a[0] * b[1], a[1] * b[0], a[1] * b[1]};
}

ComplexMatrix partial_transpose(const ComplexMatrix& m) {
  if (m.dim() != 4) throw Error(ErrorCode::InvalidArgument, "partial transpose expects a 4x4 operator");
  ComplexMatrix out(4);
  // <ik|m|jl> -> <il|m|jk>
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j)
      for (std::size_t k = 0; k < 2; ++k)
        for (std::size_t l = 0; l < 2; ++l) out(2 * i + k, 2 * j + l) = m(2 * i + l, 2 * j + k);
  return out;
}

Complex determinant2(const ComplexMatrix& m) {
  if (m.dim() != 2) throw Error(ErrorCode::InvalidArgument, "determinant2 expects a 2x2 matrix");
  return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
}

ComplexMatrix inverse2(const ComplexMatrix& m, double tol) {
  const Complex det = determinant2(m);
  if (std::abs(det) <= tol || det == Complex{}) {
    throw Error(ErrorCode::NotInvertible, "2x2 determinant magnitude " + std::to_string(std::abs(det)));
  }
  return ComplexMatrix(2, {m(1, 1) / det, -m(0, 1) / det, -m(1, 0) / det, m(0, 0) / det});
}

// ---------------------------------------------------------------- dual bases

double gram_determinant(std::span<const ComplexVector> vs) {
  if (vs.empty() || vs.size() > 4) throw Error(ErrorCode::InvalidArgument, "need between 1 and 4 vectors");
  return small_determinant(gram(vs)).real();
}

std::vector<ComplexVector> dual_basis(std::span<const ComplexVector> vs, const Tolerances& tol) {
  if (vs.empty() || vs.size() > 4) throw Error(ErrorCode::InvalidArgument, "need between 1 and 4 vectors");
  std::vector<ComplexVector> unit;
  for (const auto& v : vs) {
    if (v.norm() == 0.0) throw Error(ErrorCode::DependentSet, "zero vector in set");
    unit.push_back(v.normalized());
  }
  const double det = gram_determinant(unit);
  if (std::abs(det) < tol.rank) {
    throw Error(ErrorCode::DependentSet, "normalized Gram determinant " + std::to_string(det));
  }
  const Small ginv = small_inverse(gram(vs));
  std::vector<ComplexVector> duals;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    ComplexVector d(vs[i].dim());
    for (std::size_t k = 0; k < vs.size(); ++k) d += ginv(k, i) * vs[k];
    duals.push_back(d);
  }
  return duals;
}

ComplexMatrix restricted_inverse(std::span<const WeightedVector> terms, const Tolerances& tol) {
  if (terms.empty()) throw Error(ErrorCode::InvalidArgument, "no terms");
  std::vector<ComplexVector> vs;
  for (const auto& t : terms) {
    if (!(t.weight > 0.0)) throw Error(ErrorCode::InvalidArgument, "weights must be positive");
    vs.push_back(t.vector);
  }
  const auto duals = dual_basis(vs, tol);
  ComplexMatrix out(vs.front().dim());
  for (std::size_t i = 0; i < terms.size(); ++i) out += (1.0 / terms[i].weight) * ComplexMatrix::projector(duals[i]);
  return out;
}

ComplexMatrix range_inverse(const ComplexMatrix& m, double cutoff, const Tolerances& tol) {
  const EigenSystem es = hermitian_eigen(m, tol);
  ComplexMatrix out(m.dim());
  for (std::size_t k = 0; k < es.values.size(); ++k) {
    if (std::abs(es.values[k]) <= cutoff) continue;
    out += (1.0 / es.values[k]) * ComplexMatrix::projector(es.vectors[k]);
  }
  return out;
}

}  // namespace bsakit

#pragma once

// Dense complex linear algebra at the two sizes a two-qubit toolkit needs:
// single-qubit (2) and two-qubit (4) operators and vectors. Basis ordering for
// dimension 4 is {|00>, |01>, |10>, |11>} = {up-up, up-down, down-up, down-down}.

#include <array>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "bsakit/tolerances.hpp"

namespace bsakit {

using Complex = std::complex<double>;

class ComplexVector {
 public:
  static constexpr std::size_t kMaxDim = 4;

  ComplexVector() = default;
  explicit ComplexVector(std::size_t dim);
  ComplexVector(std::initializer_list<Complex> entries);
  ComplexVector(std::span<const Complex> entries);

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator[](std::size_t i) { return data_[i]; }
  const Complex& operator[](std::size_t i) const { return data_[i]; }
  std::span<const Complex> entries() const { return {data_.data(), dim_}; }

  double norm() const;
  ComplexVector normalized() const;
  ComplexVector conj() const;

  ComplexVector& operator+=(const ComplexVector& o);
  ComplexVector& operator-=(const ComplexVector& o);
  ComplexVector& operator*=(Complex s);

  static ComplexVector basis(std::size_t dim, std::size_t index);

 private:
  std::size_t dim_ = 0;
  std::array<Complex, kMaxDim> data_{};
};

ComplexVector operator+(ComplexVector a, const ComplexVector& b);
ComplexVector operator-(ComplexVector a, const ComplexVector& b);
ComplexVector operator*(Complex s, ComplexVector v);

/// <a|b>, antilinear in the first argument.
Complex inner(const ComplexVector& a, const ComplexVector& b);
double max_abs_diff(const ComplexVector& a, const ComplexVector& b);

class ComplexMatrix {
 public:
  static constexpr std::size_t kMaxDim = 4;

  ComplexMatrix() = default;
  /// Zero matrix. Throws InvalidArgument unless dim is 2 or 4.
  explicit ComplexMatrix(std::size_t dim);
  /// Row-major entries; throws on wrong count or non-finite entries.
  ComplexMatrix(std::size_t dim, std::span<const Complex> row_major);
  ComplexMatrix(std::size_t dim, std::initializer_list<Complex> row_major);

  static ComplexMatrix identity(std::size_t dim);
  static ComplexMatrix diagonal(std::span<const Complex> diag);
  static ComplexMatrix diagonal(std::initializer_list<Complex> diag);
  static ComplexMatrix outer(const ComplexVector& a, const ComplexVector& b);
  static ComplexMatrix projector(const ComplexVector& v) { return outer(v, v); }

  std::size_t dim() const noexcept { return dim_; }
  Complex& operator()(std::size_t r, std::size_t c) { return data_[r * kMaxDim + c]; }
  const Complex& operator()(std::size_t r, std::size_t c) const { return data_[r * kMaxDim + c]; }

  ComplexMatrix adjoint() const;
  ComplexMatrix transpose() const;
  ComplexMatrix conj() const;
  Complex trace() const;
  /// Largest entry magnitude.
  double max_abs() const;
  /// (m + m^dagger)/2.
  ComplexMatrix hermitian_part() const;

  ComplexMatrix& operator+=(const ComplexMatrix& o);
  ComplexMatrix& operator-=(const ComplexMatrix& o);
  ComplexMatrix& operator*=(Complex s);

 private:
  std::size_t dim_ = 0;
  std::array<Complex, kMaxDim * kMaxDim> data_{};
};

ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix& b);
ComplexMatrix operator*(Complex s, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector operator*(const ComplexMatrix& m, const ComplexVector& v);

double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b);
/// <a|m|b>
Complex expectation(const ComplexVector& a, const ComplexMatrix& m, const ComplexVector& b);

namespace pauli {
ComplexMatrix identity();
ComplexMatrix x();
ComplexMatrix y();
ComplexMatrix z();
}  // namespace pauli

bool is_hermitian(const ComplexMatrix& m, double tol);

/// Cholesky test on the Hermitian part; false at the first nonpositive pivot.
bool is_positive_definite(const ComplexMatrix& m);

struct EigenSystem {
  std::vector<double> values;          // descending
  std::vector<ComplexVector> vectors;  // orthonormal, vectors[i] pairs with values[i]
};

/// Cyclic complex Jacobi eigensolver. Throws NotHermitian or NoConvergence.
EigenSystem hermitian_eigen(const ComplexMatrix& m, const Tolerances& tol = {});

/// Eigenvalues only, descending. Same preconditions as hermitian_eigen.
std::vector<double> hermitian_eigenvalues(const ComplexMatrix& m, const Tolerances& tol = {});

/// Principal square root of a Hermitian PSD matrix. Eigenvalues in
/// (-tol.psd, 0) are clamped to zero; anything lower throws NotPsd.
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m, const Tolerances& tol = {});

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexVector kron(const ComplexVector& a, const ComplexVector& b);

/// Transpose on the second tensor factor of a 4x4 operator.
ComplexMatrix partial_transpose(const ComplexMatrix& m);

/// Closed-form inverse of a 2x2 matrix; throws NotInvertible when singular.
ComplexMatrix inverse2(const ComplexMatrix& m, double tol = 0.0);
Complex determinant2(const ComplexMatrix& m);

/// Determinant of the Gram matrix <v_i|v_j> (k <= 4 vectors).
double gram_determinant(std::span<const ComplexVector> vs);

/// Dual vectors with <dual_i|v_j> = delta_ij, lying in span(vs). Throws
/// DependentSet when the Gram determinant of the normalized set falls below
/// tol.rank.
std::vector<ComplexVector> dual_basis(std::span<const ComplexVector> vs, const Tolerances& tol = {});

struct WeightedVector {
  double weight;
  ComplexVector vector;
};

/// Inverse of M = sum_i w_i |v_i><v_i| on span{v_i}, expanded as
/// sum_i w_i^{-1} |dual_i><dual_i|.
ComplexMatrix restricted_inverse(std::span<const WeightedVector> terms, const Tolerances& tol = {});

/// Moore-Penrose inverse of a Hermitian matrix via its eigendecomposition;
/// eigenvalues with magnitude at or below `cutoff` are treated as zero.
ComplexMatrix range_inverse(const ComplexMatrix& m, double cutoff, const Tolerances& tol = {});

}  // namespace bsakit

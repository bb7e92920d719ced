#pragma once

#include <array>
#include <cstdint>
#include <random>

#include "bsakit/matrix.hpp"
#include "bsakit/tolerances.hpp"

namespace bsakit {

/// Probabilities (p1, p2, p3, p4) over the Bell basis.
class BellDiagonal {
 public:
  /// Throws InvalidProbabilities unless every entry is in [0, 1] and the sum
  /// is 1 within 1e-12.
  explicit BellDiagonal(std::array<double, 4> p);

  const std::array<double, 4>& p() const noexcept { return p_; }
  double operator[](std::size_t i) const { return p_[i]; }
  /// Index of the largest weight; first index wins ties.
  std::size_t largest() const noexcept;
  double max() const noexcept { return p_[largest()]; }
  int rank(double zero_tol = 0.0) const noexcept;

 private:
  std::array<double, 4> p_;
};

/// Unit-norm vector in C^4.
class PureState {
 public:
  /// Throws InvalidState if |norm - 1| > 1e-10.
  explicit PureState(ComplexVector v);
  static PureState normalize(const ComplexVector& v);

  const ComplexVector& vector() const noexcept { return v_; }
  ComplexMatrix projector() const { return ComplexMatrix::projector(v_); }

 private:
  ComplexVector v_;
};

/// Validated two-qubit state: Hermitian, unit trace, positive semidefinite.
class DensityMatrix {
 public:
  /// Throws InvalidState when any invariant fails.
  explicit DensityMatrix(const ComplexMatrix& m, const Tolerances& tol = {});
  /// Divides by the trace first; throws InvalidState on a vanishing trace.
  static DensityMatrix normalize(const ComplexMatrix& m, const Tolerances& tol = {});

  const ComplexMatrix& matrix() const noexcept { return m_; }

 private:
  ComplexMatrix m_;
};

/// psi_1..psi_4 = (|00>+|11>)/sqrt2, (|00>-|11>)/sqrt2, (|01>+|10>)/sqrt2,
/// (|01>-|10>)/sqrt2.
const std::array<PureState, 4>& bell_basis();

DensityMatrix bd_to_density(const BellDiagonal& bd);

struct BellProjection {
  BellDiagonal bd;
  bool exact;  // off-diagonal Bell-basis entries all below 1e-10
};

BellProjection density_to_bd(const DensityMatrix& rho);

/// sigma_y (x) sigma_y
const ComplexMatrix& sigma_yy();
/// (sigma_y (x) sigma_y) m^* (sigma_y (x) sigma_y)
ComplexMatrix spin_flip(const ComplexMatrix& m);
ComplexMatrix spin_flip(const DensityMatrix& rho);
/// (sigma_y (x) sigma_y) v^*
ComplexVector spin_flip(const ComplexVector& v);

/// Seeded generator. Uniform draws are built from raw mt19937_64 output so a
/// seed gives the same stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  /// Uniform on [0, 1).
  double uniform();
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  /// Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
};

enum class Region { Any, Entangled };

/// Dirichlet(1,1,1,1) sample; Region::Entangled rejects until p1 > 1/2.
BellDiagonal random_bd(Rng& rng, Region region = Region::Any);
BellDiagonal random_bd(std::uint64_t seed, Region region = Region::Any);

}  // namespace bsakit

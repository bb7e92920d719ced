#include "bsakit/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "bsakit/error.hpp"

namespace bsakit {

BellDiagonal::BellDiagonal(std::array<double, 4> p) : p_(p) {
  double sum = 0.0;
  for (double x : p_) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0) {
      throw Error(ErrorCode::InvalidProbabilities, "entry " + std::to_string(x) + " outside [0, 1]");
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw Error(ErrorCode::InvalidProbabilities, "probabilities sum to " + std::to_string(sum));
  }
}

std::size_t BellDiagonal::largest() const noexcept {
  return static_cast<std::size_t>(std::max_element(p_.begin(), p_.end()) - p_.begin());
}

int BellDiagonal::rank(double zero_tol) const noexcept {
  return static_cast<int>(std::count_if(p_.begin(), p_.end(), [&](double x) { return x > zero_tol; }));
}

PureState::PureState(ComplexVector v) : v_(v) {
  if (v_.dim() != 4) throw Error(ErrorCode::InvalidState, "pure states live in C^4");
  if (std::abs(v_.norm() - 1.0) > 1e-10) {
    throw Error(ErrorCode::InvalidState, "state norm " + std::to_string(v_.norm()));
  }
}

PureState PureState::normalize(const ComplexVector& v) { return PureState(v.normalized()); }

DensityMatrix::DensityMatrix(const ComplexMatrix& m, const Tolerances& tol) : m_(m) {
  if (m.dim() != 4) throw Error(ErrorCode::InvalidState, "density matrix must be 4x4");
  if (!is_hermitian(m, tol.herm)) throw Error(ErrorCode::InvalidState, "not Hermitian");
  m_ = m.hermitian_part();
  const double tr = m_.trace().real();
  if (std::abs(tr - 1.0) > 1e-10) throw Error(ErrorCode::InvalidState, "trace " + std::to_string(tr));
  const double min_ev = hermitian_eigenvalues(m_, tol).back();
  if (min_ev < -tol.psd) {
    throw Error(ErrorCode::InvalidState, "negative eigenvalue " + std::to_string(min_ev));
  }
}

DensityMatrix DensityMatrix::normalize(const ComplexMatrix& m, const Tolerances& tol) {
  const double tr = m.trace().real();
  if (!(std::abs(tr) > 0.0)) throw Error(ErrorCode::InvalidState, "vanishing trace");
  return DensityMatrix((1.0 / tr) * m, tol);
}

const std::array<PureState, 4>& bell_basis() {
  static const std::array<PureState, 4> basis = [] {
    const double h = std::numbers::sqrt2 / 2.0;
    return std::array<PureState, 4>{
        PureState(ComplexVector{h, 0.0, 0.0, h}),
        PureState(ComplexVector{h, 0.0, 0.0, -h}),
        PureState(ComplexVector{0.0, h, h, 0.0}),
        PureState(ComplexVector{0.0, h, -h, 0.0}),
    };
  }();
  return basis;
}

DensityMatrix bd_to_density(const BellDiagonal& bd) {
  ComplexMatrix m(4);
  for (std::size_t i = 0; i < 4; ++i) m += bd[i] * bell_basis()[i].projector();
  return DensityMatrix(m);
}

BellProjection density_to_bd(const DensityMatrix& rho) {
  const auto& basis = bell_basis();
  std::array<double, 4> p{};
  bool exact = true;
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      const Complex e = expectation(basis[i].vector(), rho.matrix(), basis[j].vector());
      if (i == j) {
        p[i] = std::clamp(e.real(), 0.0, 1.0);
      } else if (std::abs(e) >= 1e-10) {
        exact = false;
      }
    }
  }
  double sum = 0.0;
  for (double x : p) sum += x;
  for (double& x : p) x /= sum;
  return {BellDiagonal(p), exact};
}

const ComplexMatrix& sigma_yy() {
  static const ComplexMatrix m = kron(pauli::y(), pauli::y());
  return m;
}

ComplexMatrix spin_flip(const ComplexMatrix& m) { return sigma_yy() * m.conj() * sigma_yy(); }

ComplexMatrix spin_flip(const DensityMatrix& rho) { return spin_flip(rho.matrix()); }

ComplexVector spin_flip(const ComplexVector& v) { return sigma_yy() * v.conj(); }

double Rng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

BellDiagonal random_bd(Rng& rng, Region region) {
  for (;;) {
    std::array<double, 4> e{};
    double sum = 0.0;
    for (double& x : e) {
      x = -std::log1p(-rng.uniform());
      sum += x;
    }
    for (double& x : e) x /= sum;
    if (region == Region::Entangled && !(e[0] > 0.5)) continue;
    return BellDiagonal(e);
  }
}

BellDiagonal random_bd(std::uint64_t seed, Region region) {
  Rng rng(seed);
  return random_bd(rng, region);
}

}  // namespace bsakit

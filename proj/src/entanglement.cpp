#include "bsakit/entanglement.hpp"

#include <algorithm>
#include <cmath>

namespace bsakit {

ConcurrenceReport concurrence(const DensityMatrix& rho, const Tolerances& tol) {
  const ComplexMatrix root = matrix_sqrt_psd(rho.matrix(), tol);
  const ComplexMatrix inner_product = (root * spin_flip(rho) * root).hermitian_part();
  const ComplexMatrix r = matrix_sqrt_psd(inner_product, tol);
  const auto ev = hermitian_eigenvalues(r, tol);
  ConcurrenceReport out{};
  for (std::size_t i = 0; i < 4; ++i) out.lambdas[i] = std::max(ev[i], 0.0);
  out.concurrence = std::clamp(out.lambdas[0] - out.lambdas[1] - out.lambdas[2] - out.lambdas[3], 0.0, 1.0);
  return out;
}

double concurrence_bd(const BellDiagonal& bd) { return std::max(0.0, 2.0 * bd.max() - 1.0); }

double pure_concurrence(const ComplexVector& v) { return std::abs(inner(v, spin_flip(v))); }

double pure_concurrence(const PureState& psi) { return pure_concurrence(psi.vector()); }

namespace {

double binary_entropy(double x, EntropyUnit unit) {
  auto term = [](double y) { return y <= 0.0 ? 0.0 : -y * std::log(y); };
  const double h = term(x) + term(1.0 - x);
  return unit == EntropyUnit::Bits ? h / std::log(2.0) : h;
}

}  // namespace

double eof_from_concurrence(double c, EntropyUnit unit) {
  c = std::clamp(c, 0.0, 1.0);
  return binary_entropy(0.5 + 0.5 * std::sqrt(1.0 - c * c), unit);
}

double entanglement_of_formation(const DensityMatrix& rho, const Tolerances& tol, EntropyUnit unit) {
  return eof_from_concurrence(concurrence(rho, tol).concurrence, unit);
}

SeparabilityVerdict ppt_verdict(const ComplexMatrix& m, const Tolerances& tol) {
  const double min_ev = hermitian_eigenvalues(partial_transpose(m), tol).back();
  return {min_ev >= -tol.psd, min_ev};
}

SeparabilityVerdict is_separable(const DensityMatrix& rho, const Tolerances& tol) {
  return ppt_verdict(rho.matrix(), tol);
}

}  // namespace bsakit

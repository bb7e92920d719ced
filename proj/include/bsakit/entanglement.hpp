#pragma once

#include <array>

#include "bsakit/qstate.hpp"

namespace bsakit {

struct ConcurrenceReport {
  std::array<double, 4> lambdas;  // eigenvalues of R, descending
  double concurrence;             // max(0, l1 - l2 - l3 - l4)
};

/// Concurrence via R = sqrt(sqrt(rho) rho~ sqrt(rho)).
ConcurrenceReport concurrence(const DensityMatrix& rho, const Tolerances& tol = {});

/// max(0, 2 max(p) - 1).
double concurrence_bd(const BellDiagonal& bd);

/// |<psi|psi~>|.
double pure_concurrence(const PureState& psi);
double pure_concurrence(const ComplexVector& v);

enum class EntropyUnit { Nats, Bits };

/// H(1/2 + sqrt(1 - C^2)/2) with binary entropy H in the chosen unit.
double eof_from_concurrence(double c, EntropyUnit unit = EntropyUnit::Nats);
double entanglement_of_formation(const DensityMatrix& rho, const Tolerances& tol = {},
                                 EntropyUnit unit = EntropyUnit::Nats);

struct SeparabilityVerdict {
  bool separable;
  double min_pt_eigenvalue;
};

/// Peres-Horodecki test, exact for two qubits.
SeparabilityVerdict is_separable(const DensityMatrix& rho, const Tolerances& tol = {});
SeparabilityVerdict ppt_verdict(const ComplexMatrix& m, const Tolerances& tol = {});

}  // namespace bsakit

#pragma once

// Brute-force search for the largest lambda with
//   sigma = (rho - (1 - lambda)|psi><psi|) / lambda
// positive and PPT, independent of the Bell-diagonal construction.

#include <array>
#include <cstdint>

#include "bsakit/qstate.hpp"

namespace bsakit {

struct OracleResult {
  double best_lambda = 0.0;
  PureState best_psi = bell_basis()[0];
  long evaluations = 0;
  /// True when the best restart met the simplex tolerance before its budget ran out.
  bool converged = false;
};

struct OracleOptions {
  long budget = 20000;  // objective evaluations over all restarts
  int restarts = 32;
  std::uint64_t seed = 0;
};

/// True iff sigma(lambda, psi) and its partial transpose have no eigenvalue
/// below -tol.psd. Throws InvalidArgument unless 0 < lambda <= 1.
bool feasibility(const DensityMatrix& rho, double lambda, const PureState& psi, const Tolerances& tol = {});

/// Smallest weight t = 1 - lambda of psi that leaves a separable remainder,
/// or 1 + (violation) when no t in [0, 1] works.
double pure_weight_bound(const ComplexMatrix& rho, const ComplexVector& psi, const Tolerances& tol = {});

/// Unit vector from three hyperspherical angles and three relative phases.
ComplexVector psi_from_angles(const std::array<double, 6>& x);

/// Multi-start Nelder-Mead over psi. Deterministic for a given seed.
/// Throws NotEntangled for a PPT input, InvalidArgument if budget < 1000 and
/// Infeasible if no restart reaches a feasible point.
OracleResult bsa_search(const DensityMatrix& rho, const OracleOptions& options = {}, const Tolerances& tol = {});

}  // namespace bsakit

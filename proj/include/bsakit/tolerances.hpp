#pragma once

namespace bsakit {

/// Numerical tolerances shared by every module. Values apply to normalized
/// inputs (unit-trace states, unit vectors).
struct Tolerances {
  double herm = 1e-9;   // max |m - m^dagger| entry accepted as Hermitian
  double psd = 1e-9;    // eigenvalues above -psd count as nonnegative
  double eig = 1e-10;   // eigen/inverse residual contract
  double rank = 1e-10;  // Gram determinant below this means dependent
  double cert = 1e-8;   // optimality certificate residual threshold

  Tolerances scaled(double factor) const {
    return {herm * factor, psd * factor, eig * factor, rank * factor, cert * factor};
  }
};

}  // namespace bsakit

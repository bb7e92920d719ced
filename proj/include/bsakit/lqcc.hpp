#pragma once

// Local filtering maps A (x) B with A = U_A f_A, B = U_B f_B, acting as
// rho -> (A (x) B) rho (A (x) B)^dagger / Tr(...).

#include <array>

#include "bsakit/lsd.hpp"

namespace bsakit {

struct Filtration {
  double mu = 1.0;
  double a = 0.0;
  std::array<double, 3> m{0.0, 0.0, 1.0};

  /// Throws InvalidArgument unless mu > 0, |a| <= 1 and |m| = 1 within 1e-12.
  void validate() const;
};

/// mu (I + a m.sigma)
ComplexMatrix filtration_matrix(const Filtration& f);

class LqccMap {
 public:
  LqccMap();
  /// Throws InvalidArgument unless U_A, U_B are 2x2 unitaries within 1e-10
  /// and both filtrations are valid.
  LqccMap(const ComplexMatrix& u_a, const ComplexMatrix& u_b, const Filtration& f_a, const Filtration& f_b);

  const ComplexMatrix& u_a() const noexcept { return u_a_; }
  const ComplexMatrix& u_b() const noexcept { return u_b_; }
  const Filtration& f_a() const noexcept { return f_a_; }
  const Filtration& f_b() const noexcept { return f_b_; }

  ComplexMatrix a() const { return u_a_ * filtration_matrix(f_a_); }
  ComplexMatrix b() const { return u_b_ * filtration_matrix(f_b_); }
  ComplexMatrix kraus() const { return kron(a(), b()); }
  /// |det A| |det B| = mu^2 nu^2 (1 - a^2)(1 - b^2)
  double determinant_factor() const;
  bool invertible(const Tolerances& tol = {}) const;

  /// Map with operators A^-1, B^-1, again of the form U f. Throws
  /// NotInvertible unless invertible(tol).
  LqccMap inverse(const Tolerances& tol = {}) const;

 private:
  ComplexMatrix u_a_, u_b_;
  Filtration f_a_, f_b_;
};

struct LqccResult {
  DensityMatrix state;
  double success_prob;  // Tr((A (x) B) rho (A (x) B)^dagger)
};

/// Throws Annihilated when the output trace is at most tol.rank.
LqccResult apply_lqcc(const LqccMap& map, const DensityMatrix& rho, const Tolerances& tol = {});

struct ConcurrenceLaw {
  double predicted;
  double actual;
};

ConcurrenceLaw concurrence_transform_check(const LqccMap& map, const DensityMatrix& rho, const Tolerances& tol = {});

/// Pushes every piece of the decomposition through the map. The result
/// reconstructs apply_lqcc(map, rho). Throws NotInvertible if |a| or |b| is at
/// least 1 - tol.rank.
LsDecomposition transport_decomposition(const LqccMap& map, const LsDecomposition& d, const Tolerances& tol = {});

/// Certificate of the transported decomposition. Each check also carries
/// residual_transport: the gap between its inverse elements computed directly
/// and those obtained by pulling back through the inverse map. Rank-deficient
/// sources assert a pass only when A = B within 1e-10.
OptimalityCertificate verify_transported_optimality(const LqccMap& map, const LsDecomposition& source,
                                                    const Tolerances& tol = {});

ComplexMatrix random_unitary2(Rng& rng);
Filtration random_filtration(Rng& rng, double max_a = 0.95);
LqccMap random_lqcc_map(Rng& rng, double max_a = 0.95);

}  // namespace bsakit

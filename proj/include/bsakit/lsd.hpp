#pragma once

// Optimal Lewenstein-Sanpera decomposition of Bell-diagonal states,
//   rho = lambda rho_sep + (1 - lambda) |psi><psi|,
// with the separable part written as a product ensemble built from Wootters'
// x-vectors, and numerical maximality certificates for that ensemble.

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "bsakit/qstate.hpp"

namespace bsakit {

struct EnsembleMember {
  double weight;  // weight inside rho_sep
  PureState state;
};

struct LsDecomposition {
  double lambda = 1.0;
  /// The separable part in the source's Bell labels. Empty once the
  /// decomposition has been transported off the Bell-diagonal family.
  std::optional<BellDiagonal> separable_bd;
  std::vector<EnsembleMember> ensemble;
  /// Entangled part; empty only for a separable input decomposed on request.
  std::optional<PureState> psi;
  /// Rank of the Bell-diagonal state the decomposition descends from.
  int source_rank = 4;
  /// Bell label carrying the entangled part of the source.
  std::size_t pure_label = 0;

  ComplexMatrix separable_part() const;
  ComplexMatrix reconstruct() const;
};

struct XVectors {
  std::array<ComplexVector, 4> xs;  // subnormalized, Bell-label order
  std::array<double, 4> lambdas;    // <x_i|x~_i>
  ComplexMatrix tau;                // tau_ij = <v_i|v~_j>
};

/// v_i = sqrt(p_i) psi_i, x_i = sum_j conj(U_ij) v_j with U = diag(i, 1, 1, i).
XVectors build_x_vectors(const BellDiagonal& bd);

/// Local unitary on the second qubit exchanging Bell labels 0 and k
/// (label j goes to j xor k).
ComplexMatrix bell_label_swap(std::size_t k);

/// Four normalized product states with weight 1/4 each whose mixture is the
/// boundary state. Requires p1 - p2 - p3 - p4 = 0 within 1e-9 (NotOnBoundary).
std::vector<EnsembleMember> build_product_ensemble(const BellDiagonal& boundary_bd);

/// Product ensemble for any Bell-diagonal state with max p <= 1/2, phases
/// chosen so that sum_j exp(2 i theta_j) p_j = 0. Throws InvalidArgument for
/// entangled input.
std::vector<EnsembleMember> separable_product_ensemble(const BellDiagonal& bd);

struct LsdOptions {
  /// Return lambda = 1 with no entangled part instead of throwing NotEntangled.
  bool allow_separable = false;
};

/// lambda = 2(1 - p1), p1' = 1/2, p_i' = p_i / lambda, after moving the
/// largest weight to label 1 by a local unitary (undone on output).
LsDecomposition ls_decompose_bd(const BellDiagonal& bd, const LsdOptions& options = {});

/// Gram determinants ("Wronskians") of {psi, z_a} and {psi, z_a, z_b}, with
/// z normalized to 1/2 as in Wootters' construction, next to their closed forms
/// 1/8 and p'(1 - 2p')/8.
struct WronskianTable {
  std::array<double, 4> single{};
  std::array<std::array<double, 4>, 4> pair{};  // upper triangle used
  std::array<double, 4> single_expected{};
  std::array<std::array<double, 4>, 4> pair_expected{};
  std::array<double, 4> canonical_p_prime{};

  double max_deviation() const;
};

WronskianTable wronskian_checks(const LsDecomposition& d);
WronskianTable wronskian_checks(const BellDiagonal& bd);

enum class RankBranch { FullRank, OneZero, TwoZero };
const char* to_string(RankBranch b) noexcept;

struct SingleCheck {
  std::size_t alpha = 0;
  double residual = 0.0;            // w_a <z_a|rho_a^-1|z_a> - 1
  double residual_inverse = 0.0;    // |rho_a rho_a^-1 v - v| on the span
  double residual_transport = 0.0;  // inverse obtained by undoing the LQCC map
  bool passed = false;
};

struct PairCheck {
  std::size_t alpha = 0;
  std::size_t beta = 0;
  /// psi lies in span{z_a, z_b}; maximality then goes through the two-vector
  /// inverse and the pair-weight formula instead of the dual basis.
  bool dependent = false;
  double residual_alpha = 0.0;
  double residual_beta = 0.0;
  /// sqrt(w_a w_b) |<z_a|rho_ab^-1|z_b>|; must vanish for independent pairs,
  /// reported only for dependent ones.
  double cross_term = 0.0;
  double residual_inverse = 0.0;
  double residual_transport = 0.0;
  bool passed = false;

  double max_residual() const;
};

struct OptimalityCertificate {
  std::vector<SingleCheck> singles;
  std::vector<PairCheck> pairs;
  int rank = 4;
  RankBranch branch = RankBranch::FullRank;
  double tolerance = 0.0;
  double max_residual = 0.0;
  /// False when the residuals are reported for information only.
  bool pass_asserted = true;
  bool passed = false;

  /// Throws CertificateFailed naming the worst residual unless passed.
  void require() const;
};

/// Low-level input: rho = sum_a w_a |z_a><z_a| + c |psi><psi| with weights
/// relative to rho itself.
struct MaximalityProblem {
  std::vector<WeightedVector> separable_terms;  // distinct, normalized
  std::vector<std::size_t> labels;               // ensemble index of each term
  WeightedVector pure;
  int rank = 4;
  /// Cross-check dependent pairs against the closed-form Gamma expressions,
  /// valid while psi = i sqrt2 (z_a + z_b)/2 as for Bell-diagonal sources.
  bool gamma_closed_form = false;
};

OptimalityCertificate evaluate_maximality(const MaximalityProblem& problem, const Tolerances& tol = {});

/// Weights relative to rho; coincident ensemble states are merged.
MaximalityProblem maximality_problem(const LsDecomposition& d);

/// Recomputes per-check verdicts, max_residual and passed from residuals.
void finalize_certificate(OptimalityCertificate& cert);

OptimalityCertificate verify_optimality(const LsDecomposition& d, const Tolerances& tol = {});

/// Pair weights from restricted-inverse elements:
///   L1 = (<2|r|2> - |<1|r|2>|) / D, L2 = (<1|r|1> - |<1|r|2>|) / D,
///   D = <1|r|1><2|r|2> - |<1|r|2>|^2.
/// Throws DegeneratePair if |D| < tol.rank.
std::pair<double, double> pair_maximal_weights(double r11, double r22, Complex r12, const Tolerances& tol = {});

RankBranch branch_for_rank(int rank);

}  // namespace bsakit

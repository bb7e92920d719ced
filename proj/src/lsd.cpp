#include "bsakit/lsd.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>

#include "bsakit/error.hpp"

namespace bsakit {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kBoundaryTol = 1e-9;
constexpr double kCoincident = 1e-9;

// Rows of the sign pattern used by Wootters' ensemble.
constexpr int kSigns[4][4] = {{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}};

std::vector<EnsembleMember> wootters_ensemble(const XVectors& x, const std::array<double, 4>& theta) {
  std::vector<EnsembleMember> out;
  for (const auto& row : kSigns) {
    ComplexVector z(4);
    for (std::size_t j = 0; j < 4; ++j) z += (0.5 * row[j] * std::exp(kI * theta[j])) * x.xs[j];
    out.push_back({0.25, PureState::normalize(z)});
  }
  return out;
}

double relative_gap(Complex got, Complex want) { return std::abs(got - want) / std::max(1.0, std::abs(want)); }

double span_residual(const ComplexMatrix& m, const ComplexMatrix& inv, std::span<const ComplexVector> span) {
  double worst = 0.0;
  for (const auto& v : span) worst = std::max(worst, (m * (inv * v) - v).norm());
  return worst;
}

ComplexMatrix assemble(std::span<const WeightedVector> terms) {
  ComplexMatrix m(terms.front().vector.dim());
  for (const auto& t : terms) m += t.weight * ComplexMatrix::projector(t.vector);
  return m;
}

}  // namespace

ComplexMatrix LsDecomposition::separable_part() const {
  ComplexMatrix m(4);
  for (const auto& e : ensemble) m += e.weight * e.state.projector();
  return m;
}

ComplexMatrix LsDecomposition::reconstruct() const {
  ComplexMatrix m = lambda * separable_part();
  if (psi) m += (1.0 - lambda) * psi->projector();
  return m;
}

XVectors build_x_vectors(const BellDiagonal& bd) {
  const auto& basis = bell_basis();
  std::array<ComplexVector, 4> v;
  for (std::size_t i = 0; i < 4; ++i) v[i] = std::sqrt(bd[i]) * basis[i].vector();

  ComplexMatrix tau(4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) tau(i, j) = inner(v[i], spin_flip(v[j]));

  const ComplexMatrix u = ComplexMatrix::diagonal({kI, 1.0, 1.0, kI});
  XVectors out{{}, {}, tau};
  for (std::size_t i = 0; i < 4; ++i) {
    ComplexVector x(4);
    for (std::size_t j = 0; j < 4; ++j) x += std::conj(u(i, j)) * v[j];
    out.xs[i] = x;
  }
  for (std::size_t i = 0; i < 4; ++i) out.lambdas[i] = inner(out.xs[i], spin_flip(out.xs[i])).real();
  return out;
}

ComplexMatrix bell_label_swap(std::size_t k) {
  switch (k) {
    case 0: return ComplexMatrix::identity(4);
    case 1: return kron(pauli::identity(), pauli::z());
    case 2: return kron(pauli::identity(), pauli::x());
    case 3: return kron(pauli::identity(), pauli::y());
    default: throw Error(ErrorCode::InvalidArgument, "Bell label out of range");
  }
}

std::vector<EnsembleMember> build_product_ensemble(const BellDiagonal& boundary_bd) {
  const auto& p = boundary_bd.p();
  const double gap = p[0] - p[1] - p[2] - p[3];
  if (std::abs(gap) > kBoundaryTol) {
    std::ostringstream msg;
    msg << "p1 - p2 - p3 - p4 = " << gap << ", expected 0";
    throw Error(ErrorCode::NotOnBoundary, msg.str());
  }
  // theta_1 = 0 and theta_2 = theta_3 = theta_4 = -pi/2 reproduce the explicit
  // product states; any common shift of the last three by pi works equally.
  const double h = std::numbers::pi / 2.0;
  return wootters_ensemble(build_x_vectors(boundary_bd), {0.0, -h, -h, -h});
}

std::vector<EnsembleMember> separable_product_ensemble(const BellDiagonal& bd) {
  if (bd.max() > 0.5) throw Error(ErrorCode::InvalidArgument, "state is entangled; no product ensemble");
  // Close the polygon sum_j p_j e^{i phi_j} = 0 as a triangle with sides
  // a >= b and c + d, the last two collinear.
  std::array<std::size_t, 4> order{0, 1, 2, 3};
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return bd[i] > bd[j]; });
  const double a = bd[order[0]], b = bd[order[1]], c = bd[order[2]] + bd[order[3]];
  std::array<double, 4> phi{};
  double cos_ab = b > 0.0 ? (a * a + b * b - c * c) / (2.0 * a * b) : 1.0;
  cos_ab = std::clamp(cos_ab, -1.0, 1.0);
  const double beta = std::numbers::pi - std::acos(cos_ab);
  const Complex rest = -(a + b * std::exp(kI * beta));
  const double gamma = std::abs(rest) > 0.0 ? std::arg(rest) : 0.0;
  phi[order[0]] = 0.0;
  phi[order[1]] = beta;
  phi[order[2]] = gamma;
  phi[order[3]] = gamma;
  std::array<double, 4> theta{};
  for (std::size_t j = 0; j < 4; ++j) theta[j] = 0.5 * phi[j];
  return wootters_ensemble(build_x_vectors(bd), theta);
}

LsDecomposition ls_decompose_bd(const BellDiagonal& bd, const LsdOptions& options) {
  const std::size_t k = bd.largest();
  if (bd[k] <= 0.5) {
    if (!options.allow_separable) {
      std::ostringstream msg;
      msg << "max p = " << bd[k] << " <= 1/2, state is separable";
      throw Error(ErrorCode::NotEntangled, msg.str());
    }
    LsDecomposition d;
    d.lambda = 1.0;
    d.separable_bd = bd;
    d.ensemble = separable_product_ensemble(bd);
    d.source_rank = bd.rank();
    d.pure_label = k;
    return d;
  }

  std::array<double, 4> pc{};
  for (std::size_t j = 0; j < 4; ++j) pc[j] = bd[j ^ k];
  const double lambda = 2.0 * (1.0 - pc[0]);
  if (lambda <= 1e-12) throw Error(ErrorCode::PureInput, "input is a pure Bell state");
  const double rest = pc[1] + pc[2] + pc[3];
  const BellDiagonal boundary({0.5, pc[1] / (2.0 * rest), pc[2] / (2.0 * rest), pc[3] / (2.0 * rest)});

  const ComplexMatrix swap = bell_label_swap(k);
  LsDecomposition d;
  d.lambda = lambda;
  std::array<double, 4> pp{};
  for (std::size_t j = 0; j < 4; ++j) pp[j ^ k] = boundary[j];
  d.separable_bd = BellDiagonal(pp);
  for (const auto& member : build_product_ensemble(boundary)) {
    d.ensemble.push_back({member.weight, PureState::normalize(swap * member.state.vector())});
  }
  d.psi = PureState::normalize(swap * bell_basis()[0].vector());
  d.source_rank = bd.rank();
  d.pure_label = k;
  return d;
}

double WronskianTable::max_deviation() const {
  double worst = 0.0;
  for (std::size_t a = 0; a < 4; ++a) {
    worst = std::max(worst, std::abs(single[a] - single_expected[a]));
    for (std::size_t b = a + 1; b < 4; ++b) worst = std::max(worst, std::abs(pair[a][b] - pair_expected[a][b]));
  }
  return worst;
}

WronskianTable wronskian_checks(const LsDecomposition& d) {
  if (!d.psi || !d.separable_bd || d.ensemble.size() != 4) {
    throw Error(ErrorCode::InvalidArgument, "Wronskian table needs a Bell-diagonal decomposition with entangled part");
  }
  WronskianTable t;
  for (std::size_t j = 0; j < 4; ++j) t.canonical_p_prime[j] = (*d.separable_bd)[j ^ d.pure_label];

  const ComplexVector& psi = d.psi->vector();
  std::array<ComplexVector, 4> z;
  for (std::size_t a = 0; a < 4; ++a) z[a] = 0.5 * d.ensemble[a].state.vector();

  // pairs (1,2),(3,4) go with p2'; (1,3),(2,4) with p3'; (1,4),(2,3) with p4'.
  auto partner_label = [](std::size_t a, std::size_t b) { return a ^ b; };
  for (std::size_t a = 0; a < 4; ++a) {
    const std::array<ComplexVector, 2> s{psi, z[a]};
    t.single[a] = gram_determinant(s);
    t.single_expected[a] = 0.125;
    for (std::size_t b = a + 1; b < 4; ++b) {
      const std::array<ComplexVector, 3> s3{psi, z[a], z[b]};
      t.pair[a][b] = gram_determinant(s3);
      const double pp = t.canonical_p_prime[partner_label(a, b)];
      t.pair_expected[a][b] = pp * (1.0 - 2.0 * pp) / 8.0;
    }
  }
  return t;
}

WronskianTable wronskian_checks(const BellDiagonal& bd) { return wronskian_checks(ls_decompose_bd(bd)); }

const char* to_string(RankBranch b) noexcept {
  switch (b) {
    case RankBranch::FullRank: return "full_rank";
    case RankBranch::OneZero: return "one_zero";
    case RankBranch::TwoZero: return "two_zero";
  }
  return "unknown";
}

RankBranch branch_for_rank(int rank) {
  switch (rank) {
    case 4: return RankBranch::FullRank;
    case 3: return RankBranch::OneZero;
    case 2: return RankBranch::TwoZero;
    default: throw Error(ErrorCode::InvalidArgument, "no certificate branch for rank " + std::to_string(rank));
  }
}

std::pair<double, double> pair_maximal_weights(double r11, double r22, Complex r12, const Tolerances& tol) {
  const double off = std::abs(r12);
  const double det = r11 * r22 - off * off;
  if (std::abs(det) < tol.rank) {
    throw Error(ErrorCode::DegeneratePair, "D = " + std::to_string(det));
  }
  return {(r22 - off) / det, (r11 - off) / det};
}

double PairCheck::max_residual() const {
  double worst = std::max({std::abs(residual_alpha), std::abs(residual_beta), residual_inverse, residual_transport});
  if (!dependent) worst = std::max(worst, cross_term);
  return worst;
}

void finalize_certificate(OptimalityCertificate& cert) {
  double worst = 0.0;
  bool all = true;
  for (auto& s : cert.singles) {
    const double r = std::max({std::abs(s.residual), s.residual_inverse, s.residual_transport});
    s.passed = r < cert.tolerance;
    all = all && s.passed;
    worst = std::max(worst, r);
  }
  for (auto& p : cert.pairs) {
    const double r = p.max_residual();
    p.passed = r < cert.tolerance;
    all = all && p.passed;
    worst = std::max(worst, r);
  }
  cert.max_residual = worst;
  cert.passed = cert.pass_asserted && all;
}

void OptimalityCertificate::require() const {
  if (passed) return;
  std::ostringstream msg;
  if (!pass_asserted) {
    msg << "certificate not asserted for this branch; max residual " << max_residual;
  } else {
    msg << "max residual " << max_residual << " exceeds " << tolerance;
    for (const auto& s : singles)
      if (!s.passed) {
        msg << "; single " << s.alpha << " residual " << s.residual;
        break;
      }
    for (const auto& p : pairs)
      if (!p.passed) {
        msg << "; pair (" << p.alpha << "," << p.beta << ") residual " << p.max_residual();
        break;
      }
  }
  throw Error(ErrorCode::CertificateFailed, msg.str());
}

MaximalityProblem maximality_problem(const LsDecomposition& d) {
  if (!d.psi) throw Error(ErrorCode::InvalidArgument, "decomposition has no entangled part");
  MaximalityProblem prob;
  for (std::size_t a = 0; a < d.ensemble.size(); ++a) {
    const ComplexVector& z = d.ensemble[a].state.vector();
    const double w = d.lambda * d.ensemble[a].weight;
    bool merged = false;
    for (auto& t : prob.separable_terms) {
      if (std::abs(inner(t.vector, z)) > 1.0 - kCoincident) {
        t.weight += w;
        merged = true;
        break;
      }
    }
    if (!merged) {
      prob.separable_terms.push_back({w, z});
      prob.labels.push_back(a);
    }
  }
  prob.pure = {1.0 - d.lambda, d.psi->vector()};
  prob.rank = d.source_rank;
  prob.gamma_closed_form = d.separable_bd.has_value();
  return prob;
}

OptimalityCertificate evaluate_maximality(const MaximalityProblem& problem, const Tolerances& tol) {
  OptimalityCertificate cert;
  cert.rank = problem.rank;
  cert.branch = branch_for_rank(problem.rank);
  cert.tolerance = tol.cert;
  const auto& terms = problem.separable_terms;
  const WeightedVector& pure = problem.pure;
  constexpr double kFail = std::numeric_limits<double>::infinity();

  for (std::size_t a = 0; a < terms.size(); ++a) {
    SingleCheck s;
    s.alpha = problem.labels.at(a);
    const std::array<WeightedVector, 2> local{terms[a], pure};
    try {
      const ComplexMatrix inv = restricted_inverse(local, tol);
      const Complex e = expectation(terms[a].vector, inv, terms[a].vector);
      s.residual = std::abs(terms[a].weight * e - 1.0);
      const std::array<ComplexVector, 2> span{terms[a].vector, pure.vector};
      s.residual_inverse = span_residual(assemble(local), inv, span);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::DependentSet) throw;
      s.residual = kFail;
    }
    cert.singles.push_back(s);
  }

  for (std::size_t a = 0; a < terms.size(); ++a) {
    for (std::size_t b = a + 1; b < terms.size(); ++b) {
      PairCheck p;
      p.alpha = problem.labels.at(a);
      p.beta = problem.labels.at(b);
      const double wa = terms[a].weight, wb = terms[b].weight, c = pure.weight;
      const ComplexVector& za = terms[a].vector;
      const ComplexVector& zb = terms[b].vector;
      const std::array<WeightedVector, 3> local{terms[a], terms[b], pure};
      const ComplexMatrix rho_ab = assemble(local);
      const std::array<ComplexVector, 3> trio{pure.vector.normalized(), za, zb};
      p.dependent = gram_determinant(trio) < tol.rank;

      if (!p.dependent) {
        const ComplexMatrix inv = restricted_inverse(local, tol);
        p.residual_alpha = std::abs(wa * expectation(za, inv, za) - 1.0);
        p.residual_beta = std::abs(wb * expectation(zb, inv, zb) - 1.0);
        p.cross_term = std::sqrt(wa * wb) * std::abs(expectation(za, inv, zb));
        const std::array<ComplexVector, 3> span{za, zb, pure.vector};
        p.residual_inverse = span_residual(rho_ab, inv, span);
      } else {
        // psi = k_a z_a + k_b z_b, so rho_ab = sum_ij M_ij |z_i><z_j| with
        // M = diag(w_a, w_b) + c k k^dagger, and <z_i|rho_ab^-1|z_j> = (M^-1)_ij.
        const std::array<ComplexVector, 2> pairv{za, zb};
        const auto duals = dual_basis(pairv, tol);
        const Complex ka = inner(duals[0], pure.vector), kb = inner(duals[1], pure.vector);
        const double outside = (pure.vector - (ka * za + kb * zb)).norm();
        if (outside > tol.cert) {
          p.residual_alpha = p.residual_beta = kFail;
          cert.pairs.push_back(p);
          continue;
        }
        const ComplexMatrix m(2, {wa + c * std::norm(ka), c * ka * std::conj(kb), c * kb * std::conj(ka),
                                  wb + c * std::norm(kb)});
        const ComplexMatrix r = inverse2(m);
        const auto [la, lb] = pair_maximal_weights(r(0, 0).real(), r(1, 1).real(), r(0, 1), tol);
        p.residual_alpha = la / wa - 1.0;
        p.residual_beta = lb / wb - 1.0;
        p.cross_term = std::sqrt(wa * wb) * std::abs(r(0, 1));

        // Independent route: pseudo-inverse of the assembled 4x4 operator.
        const ComplexMatrix pinv = range_inverse(rho_ab, 1e-9 * rho_ab.max_abs(), tol);
        double gap = std::max({relative_gap(expectation(za, pinv, za), r(0, 0)),
                               relative_gap(expectation(zb, pinv, zb), r(1, 1)),
                               relative_gap(expectation(za, pinv, zb), r(0, 1))});
        if (problem.gamma_closed_form) {
          // Closed forms are written for z normalized to 1/2 with weights 4w.
          const double la4 = 4.0 * wa, lb4 = 4.0 * wb;
          const double g = la4 * lb4 + 2.0 * c * (la4 + lb4);
          gap = std::max({gap, relative_gap(4.0 * (lb4 + 2.0 * c) / g, r(0, 0)),
                          relative_gap(4.0 * (la4 + 2.0 * c) / g, r(1, 1)),
                          relative_gap(-8.0 * c / g, r(0, 1))});
        }
        p.residual_inverse = gap;
      }
      cert.pairs.push_back(p);
    }
  }
  finalize_certificate(cert);
  return cert;
}

OptimalityCertificate verify_optimality(const LsDecomposition& d, const Tolerances& tol) {
  return evaluate_maximality(maximality_problem(d), tol);
}

}  // namespace bsakit

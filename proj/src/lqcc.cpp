#include "bsakit/lqcc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bsakit/entanglement.hpp"
#include "bsakit/error.hpp"

namespace bsakit {

namespace {

void require_unitary(const ComplexMatrix& u, const char* name) {
  if (u.dim() != 2) throw Error(ErrorCode::InvalidArgument, std::string(name) + " must be 2x2");
  const double dev = max_abs_diff(u.adjoint() * u, ComplexMatrix::identity(2));
  if (dev > 1e-10) {
    std::ostringstream msg;
    msg << name << " is not unitary (|U^dagger U - I| = " << dev << ")";
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

ComplexMatrix sigma_dot(const std::array<double, 3>& m) {
  return m[0] * pauli::x() + m[1] * pauli::y() + m[2] * pauli::z();
}

std::array<double, 3> rotate_axis(const ComplexMatrix& u, const std::array<double, 3>& m) {
  const ComplexMatrix r = u * sigma_dot(m) * u.adjoint();
  const std::array<ComplexMatrix, 3> s{pauli::x(), pauli::y(), pauli::z()};
  std::array<double, 3> out{};
  for (std::size_t k = 0; k < 3; ++k) out[k] = 0.5 * (s[k] * r).trace().real();
  return out;
}

Filtration inverse_filtration(const Filtration& f) { return {1.0 / (f.mu * (1.0 - f.a * f.a)), -f.a, f.m}; }

// Inverse operator used by the certificate checks: dual-basis inverse for an
// independent span, pseudo-inverse on the range otherwise.
ComplexMatrix check_inverse(const MaximalityProblem& p, std::span<const std::size_t> idx, bool dependent,
                            const Tolerances& tol) {
  std::vector<WeightedVector> local;
  for (std::size_t i : idx) local.push_back(p.separable_terms[i]);
  local.push_back(p.pure);
  if (!dependent) return restricted_inverse(local, tol);
  ComplexMatrix m(4);
  for (const auto& t : local) m += t.weight * ComplexMatrix::projector(t.vector);
  return range_inverse(m, 1e-9 * m.max_abs(), tol);
}

double transport_gap(const MaximalityProblem& dst, const ComplexMatrix& direct, const ComplexMatrix& pulled,
                     std::span<const std::size_t> idx) {
  std::vector<ComplexVector> vs;
  for (std::size_t i : idx) vs.push_back(dst.separable_terms[i].vector);
  vs.push_back(dst.pure.vector);
  double worst = 0.0;
  for (const auto& u : vs)
    for (const auto& v : vs) {
      const Complex x = expectation(u, direct, v), y = expectation(u, pulled, v);
      worst = std::max(worst, std::abs(x - y) / std::max(1.0, std::abs(y)));
    }
  return worst;
}

}  // namespace

void Filtration::validate() const {
  if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(ErrorCode::InvalidArgument, "filtration mu must be positive");
  if (!(std::abs(a) <= 1.0)) throw Error(ErrorCode::InvalidArgument, "filtration |a| must be <= 1");
  const double n = std::hypot(m[0], m[1], m[2]);
  if (!(std::abs(n - 1.0) <= 1e-12)) {
    std::ostringstream msg;
    msg << "filtration axis has norm " << n;
    throw Error(ErrorCode::InvalidArgument, msg.str());
  }
}

ComplexMatrix filtration_matrix(const Filtration& f) {
  f.validate();
  return f.mu * (ComplexMatrix::identity(2) + f.a * sigma_dot(f.m));
}

LqccMap::LqccMap() : u_a_(ComplexMatrix::identity(2)), u_b_(ComplexMatrix::identity(2)) {}

LqccMap::LqccMap(const ComplexMatrix& u_a, const ComplexMatrix& u_b, const Filtration& f_a, const Filtration& f_b)
    : u_a_(u_a), u_b_(u_b), f_a_(f_a), f_b_(f_b) {
  require_unitary(u_a_, "U_A");
  require_unitary(u_b_, "U_B");
  f_a_.validate();
  f_b_.validate();
}

double LqccMap::determinant_factor() const {
  return f_a_.mu * f_a_.mu * (1.0 - f_a_.a * f_a_.a) * f_b_.mu * f_b_.mu * (1.0 - f_b_.a * f_b_.a);
}

bool LqccMap::invertible(const Tolerances& tol) const {
  return std::abs(f_a_.a) < 1.0 - tol.rank && std::abs(f_b_.a) < 1.0 - tol.rank;
}

LqccMap LqccMap::inverse(const Tolerances& tol) const {
  if (!invertible(tol)) throw Error(ErrorCode::NotInvertible, "filtration with |a| >= 1 has no inverse");
  // (U f)^-1 = f^-1 U^dagger = U^dagger (U f^-1 U^dagger), and conjugating a
  // filtration by U rotates its axis.
  Filtration ia = inverse_filtration(f_a_), ib = inverse_filtration(f_b_);
  ia.m = rotate_axis(u_a_, f_a_.m);
  ib.m = rotate_axis(u_b_, f_b_.m);
  const double na = std::hypot(ia.m[0], ia.m[1], ia.m[2]), nb = std::hypot(ib.m[0], ib.m[1], ib.m[2]);
  for (double& x : ia.m) x /= na;
  for (double& x : ib.m) x /= nb;
  return LqccMap(u_a_.adjoint(), u_b_.adjoint(), ia, ib);
}

LqccResult apply_lqcc(const LqccMap& map, const DensityMatrix& rho, const Tolerances& tol) {
  const ComplexMatrix k = map.kraus();
  const ComplexMatrix out = k * rho.matrix() * k.adjoint();
  const double tr = out.trace().real();
  if (!(tr > tol.rank)) {
    std::ostringstream msg;
    msg << "output trace " << tr;
    throw Error(ErrorCode::Annihilated, msg.str());
  }
  return {DensityMatrix((1.0 / tr) * out, tol), tr};
}

ConcurrenceLaw concurrence_transform_check(const LqccMap& map, const DensityMatrix& rho, const Tolerances& tol) {
  const LqccResult r = apply_lqcc(map, rho, tol);
  const double predicted = map.determinant_factor() * concurrence(rho, tol).concurrence / r.success_prob;
  return {predicted, concurrence(r.state, tol).concurrence};
}

LsDecomposition transport_decomposition(const LqccMap& map, const LsDecomposition& d, const Tolerances& tol) {
  if (!map.invertible(tol)) throw Error(ErrorCode::NotInvertible, "transport needs |a|, |b| < 1");
  const ComplexMatrix k = map.kraus();
  const ComplexMatrix sep = d.separable_part();
  const double t_sep = (k * sep * k.adjoint()).trace().real();
  const double t_psi = d.psi ? std::pow((k * d.psi->vector()).norm(), 2) : 0.0;
  const double total = d.lambda * t_sep + (1.0 - d.lambda) * t_psi;

  LsDecomposition out;
  out.lambda = d.lambda * t_sep / total;
  for (const auto& e : d.ensemble) {
    const ComplexVector kz = k * e.state.vector();
    out.ensemble.push_back({e.weight * std::pow(kz.norm(), 2) / t_sep, PureState::normalize(kz)});
  }
  if (d.psi) out.psi = PureState::normalize(k * d.psi->vector());
  out.source_rank = d.source_rank;
  out.pure_label = d.pure_label;
  return out;
}

OptimalityCertificate verify_transported_optimality(const LqccMap& map, const LsDecomposition& source,
                                                    const Tolerances& tol) {
  const LsDecomposition moved = transport_decomposition(map, source, tol);
  const MaximalityProblem src = maximality_problem(source);
  const MaximalityProblem dst = maximality_problem(moved);
  OptimalityCertificate cert = evaluate_maximality(dst, tol);
  if (src.separable_terms.size() != dst.separable_terms.size()) {
    throw Error(ErrorCode::InvalidArgument, "transport changed the number of distinct ensemble states");
  }

  // Pull back: rho'^-1 = T K^-dagger rho^-1 K^-1 on the transported span.
  const ComplexMatrix kinv = map.inverse(tol).kraus();
  const ComplexMatrix k = map.kraus();
  const double total = (k * source.reconstruct() * k.adjoint()).trace().real();
  auto pulled = [&](const ComplexMatrix& r) { return total * (kinv.adjoint() * r * kinv); };

  for (auto& s : cert.singles) {
    const std::size_t i = static_cast<std::size_t>(
        std::find(dst.labels.begin(), dst.labels.end(), s.alpha) - dst.labels.begin());
    const std::array<std::size_t, 1> idx{i};
    s.residual_transport =
        transport_gap(dst, check_inverse(dst, idx, false, tol), pulled(check_inverse(src, idx, false, tol)), idx);
  }
  for (auto& p : cert.pairs) {
    auto pos = [&](std::size_t label) {
      return static_cast<std::size_t>(std::find(dst.labels.begin(), dst.labels.end(), label) - dst.labels.begin());
    };
    const std::array<std::size_t, 2> idx{pos(p.alpha), pos(p.beta)};
    p.residual_transport = transport_gap(dst, check_inverse(dst, idx, p.dependent, tol),
                                         pulled(check_inverse(src, idx, p.dependent, tol)), idx);
  }
  if (source.source_rank < 4) cert.pass_asserted = max_abs_diff(map.a(), map.b()) <= 1e-10;
  finalize_certificate(cert);
  return cert;
}

ComplexMatrix random_unitary2(Rng& rng) {
  std::array<double, 4> q{};
  double n = 0.0;
  while (n < 1e-6) {
    for (double& x : q) x = rng.normal();
    n = std::hypot(q[0], q[1], q[2]);
    n = std::sqrt(n * n + q[3] * q[3]);
  }
  for (double& x : q) x /= n;
  const Complex phase = std::exp(Complex(0.0, rng.uniform(0.0, 2.0 * std::numbers::pi)));
  const Complex a(q[0], q[1]), b(q[2], q[3]);
  return phase * ComplexMatrix(2, {a, -std::conj(b), b, std::conj(a)});
}

Filtration random_filtration(Rng& rng, double max_a) {
  Filtration f;
  f.mu = rng.uniform(0.5, 2.0);
  f.a = rng.uniform(-max_a, max_a);
  double n = 0.0;
  while (n < 1e-6) {
    for (double& x : f.m) x = rng.normal();
    n = std::hypot(f.m[0], f.m[1], f.m[2]);
  }
  for (double& x : f.m) x /= n;
  return f;
}

LqccMap random_lqcc_map(Rng& rng, double max_a) {
  const ComplexMatrix ua = random_unitary2(rng);
  const ComplexMatrix ub = random_unitary2(rng);
  const Filtration fa = random_filtration(rng, max_a);
  const Filtration fb = random_filtration(rng, max_a);
  return LqccMap(ua, ub, fa, fb);
}

}  // namespace bsakit

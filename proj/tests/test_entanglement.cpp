#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "bsakit/entanglement.hpp"
#include "bsakit/error.hpp"

using namespace bsakit;

namespace {

// G G^dagger / Tr for a fixed complex G; reference values computed with an
// independent eigen-decomposition of rho rho~.
DensityMatrix fixed_state_g() {
  const Complex i(0.0, 1.0);
  const ComplexMatrix g(4, {1.0, 0.2 * i, 0.1, 0.3,  //
                            0.5, i, 0.0, 0.2,        //
                            0.1, 0.3, 0.8, -0.4 * i,  //
                            0.2, 0.0, 0.1 * i, 0.9});
  return DensityMatrix::normalize(g * g.adjoint());
}

// 0.8 |w><w| + 0.2 I/4 with w = (0.3, 0.6i, 0.1, -0.7) normalized.
DensityMatrix fixed_state_w() {
  const ComplexVector w = ComplexVector{0.3, Complex(0.0, 0.6), 0.1, -0.7}.normalized();
  return DensityMatrix(0.8 * ComplexMatrix::projector(w) + 0.05 * ComplexMatrix::identity(4));
}

DensityMatrix random_state(Rng& rng) {
  ComplexMatrix g(4);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t c = 0; c < 4; ++c) g(r, c) = Complex(rng.normal(), rng.normal());
  return DensityMatrix::normalize(g * g.adjoint());
}

DensityMatrix random_pure(Rng& rng) {
  ComplexVector v(4);
  for (std::size_t k = 0; k < 4; ++k) v[k] = Complex(rng.normal(), rng.normal());
  return DensityMatrix(ComplexMatrix::projector(v.normalized()));
}

ComplexMatrix random_unitary(Rng& rng) {
  // QR of a Gaussian 2x2 via Gram-Schmidt.
  ComplexVector c0{Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal())};
  ComplexVector c1{Complex(rng.normal(), rng.normal()), Complex(rng.normal(), rng.normal())};
  c0 = c0.normalized();
  c1 = (c1 - inner(c0, c1) * c0).normalized();
  return ComplexMatrix(2, {c0[0], c1[0], c0[1], c1[1]});
}

}  // namespace

TEST_CASE("concurrence: Bell states, maximally mixed, product") {
  for (const auto& b : bell_basis()) {
    CHECK(concurrence(DensityMatrix(b.projector())).concurrence == doctest::Approx(1.0).epsilon(1e-12));
  }
  const ConcurrenceReport mixed = concurrence(DensityMatrix(0.25 * ComplexMatrix::identity(4)));
  CHECK(mixed.concurrence == 0.0);
  for (double l : mixed.lambdas) CHECK(l == doctest::Approx(0.25));
  CHECK(concurrence(DensityMatrix(ComplexMatrix::projector(ComplexVector::basis(4, 1)))).concurrence == 0.0);
}

TEST_CASE("concurrence: Bell-diagonal closed form") {
  const ConcurrenceReport r = concurrence(bd_to_density(BellDiagonal({0.7, 0.1, 0.1, 0.1})));
  CHECK(r.concurrence == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(r.lambdas[0] == doctest::Approx(0.7));
  CHECK(concurrence_bd(BellDiagonal({0.7, 0.1, 0.1, 0.1})) == doctest::Approx(0.4));
  CHECK(concurrence_bd(BellDiagonal({0.5, 0.5, 0.0, 0.0})) == 0.0);

  Rng rng(31);
  for (int i = 0; i < 500; ++i) {
    const BellDiagonal bd = random_bd(rng);
    CHECK(std::abs(concurrence(bd_to_density(bd)).concurrence - concurrence_bd(bd)) < 1e-8);
  }
}

TEST_CASE("concurrence: frozen reference states") {
  const ConcurrenceReport g = concurrence(fixed_state_g());
  const std::array<double, 4> expected{0.43060057796835427, 0.21781339725220855, 0.18593802337578166,
                                       0.05900763280148464};
  for (std::size_t k = 0; k < 4; ++k) CHECK(std::abs(g.lambdas[k] - expected[k]) < 1e-10);
  CHECK(g.concurrence == 0.0);

  const ConcurrenceReport w = concurrence(fixed_state_w());
  CHECK(std::abs(w.concurrence - 0.26783713124785796) < 1e-10);
}

TEST_CASE("concurrence: pure states match |<psi|psi~>|") {
  Rng rng(17);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = random_pure(rng);
    const EigenSystem es = hermitian_eigen(rho.matrix());
    // sqrt of a rank-one matrix turns eigenvalue noise of 1e-16 into 1e-8.
    CHECK(std::abs(concurrence(rho).concurrence - pure_concurrence(es.vectors[0])) < 1e-7);
  }
  const double h = 1.0 / std::sqrt(2.0);
  CHECK(pure_concurrence(ComplexVector{h, 0.0, 0.0, h}) == doctest::Approx(1.0));
  CHECK(pure_concurrence(ComplexVector::basis(4, 0)) == 0.0);
}

TEST_CASE("concurrence: invariant under local unitaries") {
  Rng rng(23);
  for (int i = 0; i < 200; ++i) {
    const DensityMatrix rho = random_state(rng);
    const ComplexMatrix u = kron(random_unitary(rng), random_unitary(rng));
    const DensityMatrix moved = DensityMatrix::normalize(u * rho.matrix() * u.adjoint());
    CHECK(std::abs(concurrence(rho).concurrence - concurrence(moved).concurrence) < 1e-8);
  }
}

TEST_CASE("entanglement of formation") {
  CHECK(eof_from_concurrence(0.0) == 0.0);
  CHECK(eof_from_concurrence(1.0) == doctest::Approx(std::log(2.0)).epsilon(1e-14));
  CHECK(eof_from_concurrence(1.0, EntropyUnit::Bits) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(eof_from_concurrence(0.4) - 0.17344269198907525) < 1e-14);
  CHECK(eof_from_concurrence(0.4, EntropyUnit::Bits) == doctest::Approx(0.17344269198907525 / std::log(2.0)));
  double prev = 0.0;
  for (int k = 1; k <= 1000; ++k) {
    const double e = eof_from_concurrence(k / 1000.0);
    CHECK(e > prev);
    prev = e;
  }
  CHECK(entanglement_of_formation(bd_to_density(BellDiagonal({0.7, 0.1, 0.1, 0.1}))) ==
        doctest::Approx(0.17344269198907525));
  CHECK(eof_from_concurrence(1.5) == eof_from_concurrence(1.0));
}

TEST_CASE("PPT: examples") {
  const SeparabilityVerdict singlet = is_separable(DensityMatrix(bell_basis()[3].projector()));
  CHECK_FALSE(singlet.separable);
  CHECK(singlet.min_pt_eigenvalue == doctest::Approx(-0.5));
  CHECK(is_separable(DensityMatrix(0.25 * ComplexMatrix::identity(4))).separable);
  CHECK(is_separable(bd_to_density(BellDiagonal({0.5, 0.5, 0.0, 0.0}))).separable);
  CHECK_FALSE(is_separable(bd_to_density(BellDiagonal({0.51, 0.49, 0.0, 0.0}))).separable);

  const SeparabilityVerdict g = is_separable(fixed_state_g());
  CHECK(g.separable);
  CHECK(std::abs(g.min_pt_eigenvalue - 0.015087115128754963) < 1e-10);
  const SeparabilityVerdict w = is_separable(fixed_state_w());
  CHECK_FALSE(w.separable);
  CHECK(std::abs(w.min_pt_eigenvalue - -0.13391856562392895) < 1e-10);
}

TEST_CASE("PPT agrees with concurrence on random states") {
  Rng rng(99);
  int disagreements = 0;
  for (int i = 0; i < 1000; ++i) {
    const DensityMatrix rho = random_state(rng);
    const double c = concurrence(rho).concurrence;
    const SeparabilityVerdict v = is_separable(rho);
    if (std::abs(v.min_pt_eigenvalue) < 1e-8) continue;
    if (v.separable != (c < 1e-8)) ++disagreements;
  }
  CHECK(disagreements == 0);
}

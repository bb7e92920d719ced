#include "bsakit/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "bsakit/entanglement.hpp"
#include "bsakit/error.hpp"

namespace bsakit {

namespace {

constexpr int kBisections = 40;
constexpr int kGoldenSteps = 48;
constexpr std::size_t kParams = 6;
using Point = std::array<double, kParams>;

bool psd_within(const ComplexMatrix& m, double eps) { return is_positive_definite(m + eps * ComplexMatrix::identity(4)); }

double bound_with_shift(const ComplexMatrix& rho, const ComplexVector& psi, double eps, const Tolerances& tol) {
  const ComplexMatrix p = ComplexMatrix::projector(psi);
  const ComplexMatrix rho_pt = partial_transpose(rho);
  const ComplexMatrix p_pt = partial_transpose(p);
  auto positive = [&](double t) { return psd_within(rho - t * p, eps); };
  auto ppt = [&](double t) { return psd_within(rho_pt - t * p_pt, eps); };

  if (ppt(0.0)) return 0.0;

  // rho - t P stays positive on an interval [0, t_hi].
  double t_hi = 0.0;
  if (positive(1.0)) {
    t_hi = 1.0;
  } else {
    double lo = 0.0, hi = 1.0;
    for (int i = 0; i < kBisections; ++i) {
      const double mid = 0.5 * (lo + hi);
      (positive(mid) ? lo : hi) = mid;
    }
    t_hi = lo;
  }

  // The PPT-feasible set is an interval too (minimum eigenvalue is concave in t).
  double t_feasible = t_hi;
  if (!ppt(t_hi)) {
    auto q = [&](double t) {
      return std::min(hermitian_eigenvalues(rho - t * p, tol).back(),
                      hermitian_eigenvalues(rho_pt - t * p_pt, tol).back());
    };
    const double g = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = 0.0, b = 1.0;
    double x1 = b - g * (b - a), x2 = a + g * (b - a);
    double f1 = q(x1), f2 = q(x2);
    for (int i = 0; i < kGoldenSteps; ++i) {
      if (f1 < f2) {
        a = x1;
        x1 = x2;
        f1 = f2;
        x2 = a + g * (b - a);
        f2 = q(x2);
      } else {
        b = x2;
        x2 = x1;
        f2 = f1;
        x1 = b - g * (b - a);
        f1 = q(x1);
      }
    }
    const double t_best = f1 > f2 ? x1 : x2;
    if (!(positive(t_best) && ppt(t_best))) {
      // Infeasible psi: the best achievable violation alone is flat over a
      // large region, so add the PPT violation at the edge t_hi for slope.
      const double edge = hermitian_eigenvalues(rho_pt - t_hi * p_pt, tol).back();
      return 1.0 + std::max(0.0, -std::max(f1, f2)) + std::max(0.0, -edge) + eps;
    }
    t_feasible = t_best;
  }

  double lo = 0.0, hi = t_feasible;
  for (int i = 0; i < kBisections; ++i) {
    const double mid = 0.5 * (lo + hi);
    (ppt(mid) ? hi : lo) = mid;
  }
  return hi;
}

struct Restart {
  Point x;
  double t;
  long evaluations;
  bool converged;
};

template <class F>
Restart nelder_mead(F&& f, Point start, double step, long budget) {
  std::array<Point, kParams + 1> s;
  std::array<double, kParams + 1> v;
  long evals = 0;
  auto eval = [&](const Point& p) {
    ++evals;
    return f(p);
  };
  for (std::size_t i = 0; i <= kParams; ++i) {
    s[i] = start;
    if (i > 0) s[i][i - 1] += step;
    v[i] = eval(s[i]);
  }
  bool converged = false;
  std::array<std::size_t, kParams + 1> order;
  while (evals < budget) {
    for (std::size_t i = 0; i <= kParams; ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[kParams - 1];
    double size = 0.0;
    for (std::size_t i = 0; i <= kParams; ++i)
      for (std::size_t k = 0; k < kParams; ++k) size = std::max(size, std::abs(s[i][k] - s[best][k]));
    if (v[worst] - v[best] < 1e-13 && size < 1e-8) {
      converged = true;
      break;
    }
    Point centroid{};
    for (std::size_t i = 0; i <= kParams; ++i) {
      if (i == worst) continue;
      for (std::size_t k = 0; k < kParams; ++k) centroid[k] += s[i][k] / kParams;
    }
    auto along = [&](double coef) {
      Point p;
      for (std::size_t k = 0; k < kParams; ++k) p[k] = centroid[k] + coef * (s[worst][k] - centroid[k]);
      return p;
    };
    const Point xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < v[best]) {
      const Point xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        s[worst] = xe;
        v[worst] = fe;
      } else {
        s[worst] = xr;
        v[worst] = fr;
      }
    } else if (fr < v[second]) {
      s[worst] = xr;
      v[worst] = fr;
    } else {
      const bool outside = fr < v[worst];
      const Point xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : v[worst])) {
        s[worst] = xc;
        v[worst] = fc;
      } else {
        for (std::size_t i = 0; i <= kParams; ++i) {
          if (i == best) continue;
          for (std::size_t k = 0; k < kParams; ++k) s[i][k] = s[best][k] + 0.5 * (s[i][k] - s[best][k]);
          v[i] = eval(s[i]);
        }
      }
    }
  }
  const std::size_t best =
      static_cast<std::size_t>(std::min_element(v.begin(), v.end()) - v.begin());
  return {s[best], v[best], evals, converged};
}

}  // namespace

ComplexVector psi_from_angles(const Point& x) {
  const double s1 = std::sin(x[0]), s2 = std::sin(x[1]);
  const std::array<double, 4> mag{std::cos(x[0]), s1 * std::cos(x[1]), s1 * s2 * std::cos(x[2]),
                                   s1 * s2 * std::sin(x[2])};
  ComplexVector v(4);
  v[0] = mag[0];
  for (std::size_t k = 1; k < 4; ++k) v[k] = std::polar(mag[k], x[2 + k]);
  return v.normalized();
}

bool feasibility(const DensityMatrix& rho, double lambda, const PureState& psi, const Tolerances& tol) {
  if (!(lambda > 0.0 && lambda <= 1.0)) throw Error(ErrorCode::InvalidArgument, "lambda must lie in (0, 1]");
  const ComplexMatrix sigma = (1.0 / lambda) * (rho.matrix() - (1.0 - lambda) * psi.projector());
  return hermitian_eigenvalues(sigma, tol).back() >= -tol.psd &&
         hermitian_eigenvalues(partial_transpose(sigma), tol).back() >= -tol.psd;
}

double pure_weight_bound(const ComplexMatrix& rho, const ComplexVector& psi, const Tolerances& tol) {
  return bound_with_shift(rho, psi, 1e-3 * tol.psd, tol);
}

OracleResult bsa_search(const DensityMatrix& rho, const OracleOptions& options, const Tolerances& tol) {
  if (options.budget < 1000) throw Error(ErrorCode::InvalidArgument, "oracle budget must be at least 1000");
  if (options.restarts < 1) throw Error(ErrorCode::InvalidArgument, "oracle needs at least one restart");
  const SeparabilityVerdict verdict = is_separable(rho, tol);
  if (verdict.separable) {
    std::ostringstream msg;
    msg << "input is PPT (min eigenvalue " << verdict.min_pt_eigenvalue << ")";
    throw Error(ErrorCode::NotEntangled, msg.str());
  }

  const long per_restart = options.budget / options.restarts;
  auto objective = [&](const Point& x) { return pure_weight_bound(rho.matrix(), psi_from_angles(x), tol); };
  OracleResult result;
  Restart best{{}, 2.0, 0, false};
  for (int r = 0; r < options.restarts; ++r) {
    Rng rng(options.seed + 0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(r + 1));
    Point start;
    for (auto& v : start) v = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const Restart run = nelder_mead(objective, start, 0.5, per_restart);
    result.evaluations += run.evaluations;
    if (run.t < best.t) best = run;
  }
  if (!(best.t <= 1.0)) throw Error(ErrorCode::Infeasible, "no restart reached a separable remainder");

  ComplexVector psi = psi_from_angles(best.x);
  double t = best.t;
  // Soundness re-check at a tenfold tighter tolerance; tighten the inner
  // bisection shift until it holds.
  const Tolerances strict = tol.scaled(0.1);
  for (double eps = 1e-3 * tol.psd; t < 1.0 && !feasibility(rho, 1.0 - t, PureState(psi), strict); eps *= 0.1) {
    if (eps < 1e-30) throw Error(ErrorCode::Infeasible, "best point fails the post-hoc feasibility check");
    t = bound_with_shift(rho.matrix(), psi, eps, tol);
  }
  result.best_lambda = 1.0 - std::min(t, 1.0);
  result.best_psi = PureState(psi);
  result.converged = best.converged;
  return result;
}

}  // namespace bsakit

#include "bsakit.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "bsakit/entanglement.hpp"
#include "bsakit/error.hpp"
#include "bsakit/io.hpp"

struct bsakit_state {
  bsakit::DensityMatrix rho;
  std::optional<bsakit::BellDiagonal> bd;
  std::string label;
};

struct bsakit_map {
  bsakit::LqccMap map;
};

struct bsakit_decomposition {
  bsakit::LsDecomposition d;
};

namespace {

thread_local std::string g_last_error;

bsakit_status fail(bsakit_status status, const std::string& message) {
  g_last_error = message;
  return status;
}

bsakit_status status_of(bsakit::ErrorCode code) {
  using bsakit::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidProbabilities:
    case ErrorCode::InvalidState:
    case ErrorCode::NotHermitian:
    case ErrorCode::NotPsd:
    case ErrorCode::PureInput:
      return BSAKIT_ERR_VALIDATION;
    case ErrorCode::NotEntangled: return BSAKIT_ERR_NOT_ENTANGLED;
    case ErrorCode::CertificateFailed: return BSAKIT_ERR_CERTIFICATE;
    case ErrorCode::Annihilated:
    case ErrorCode::NotInvertible:
      return BSAKIT_ERR_BAD_MAP;
    case ErrorCode::NoConvergence:
    case ErrorCode::Infeasible:
    case ErrorCode::DependentSet:
    case ErrorCode::DegeneratePair:
      return BSAKIT_ERR_NUMERIC;
    case ErrorCode::InvalidArgument:
    case ErrorCode::NotOnBoundary:
      return BSAKIT_ERR_ARGUMENT;
  }
  return BSAKIT_ERR_ARGUMENT;
}

template <class F>
bsakit_status guarded(F&& f) {
  try {
    g_last_error.clear();
    return f();
  } catch (const bsakit::ParseError& e) {
    return fail(BSAKIT_ERR_PARSE, e.what());
  } catch (const bsakit::Error& e) {
    return fail(status_of(e.code()), e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(BSAKIT_ERR_PARSE, e.what());
  } catch (const std::bad_alloc&) {
    return fail(BSAKIT_ERR_NUMERIC, "out of memory");
  } catch (const std::exception& e) {
    return fail(BSAKIT_ERR_ARGUMENT, e.what());
  }
}

bsakit::Tolerances tolerances(const bsakit_tolerances* t) {
  if (!t) return {};
  return {t->herm, t->psd, t->eig, t->rank, t->cert};
}

char* copy_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

#define BSAKIT_REQUIRE(cond) \
  if (!(cond)) return fail(BSAKIT_ERR_ARGUMENT, "null argument: " #cond)

}  // namespace

extern "C" {

const char* bsakit_last_error(void) { return g_last_error.c_str(); }

void bsakit_string_free(char* s) { std::free(s); }

bsakit_status bsakit_tolerances_scaled(double scale, bsakit_tolerances* out) {
  BSAKIT_REQUIRE(out);
  if (!(scale > 0.0) || !std::isfinite(scale)) return fail(BSAKIT_ERR_ARGUMENT, "tolerance scale must be positive");
  const bsakit::Tolerances t = bsakit::Tolerances{}.scaled(scale);
  *out = {t.herm, t.psd, t.eig, t.rank, t.cert};
  return BSAKIT_OK;
}

bsakit_status bsakit_tolerances_from_env(bsakit_tolerances* out) {
  BSAKIT_REQUIRE(out);
  const char* env = std::getenv("BSAKIT_TOLERANCE_SCALE");
  if (!env || !*env) return bsakit_tolerances_scaled(1.0, out);
  char* end = nullptr;
  const double scale = std::strtod(env, &end);
  if (end == env || *end != '\0') {
    return fail(BSAKIT_ERR_ARGUMENT, std::string("BSAKIT_TOLERANCE_SCALE is not a number: ") + env);
  }
  return bsakit_tolerances_scaled(scale, out);
}

bsakit_status bsakit_state_from_json(const char* json, const bsakit_tolerances* tol, bsakit_state** out) {
  BSAKIT_REQUIRE(json && out);
  return guarded([&] {
    bsakit::StateInput in = bsakit::parse_state(bsakit::parse_json_text(json), tolerances(tol));
    *out = new bsakit_state{in.rho, in.bd, in.label};
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_state_from_bell_diagonal(const double p[4], bsakit_state** out) {
  BSAKIT_REQUIRE(p && out);
  return guarded([&] {
    const bsakit::BellDiagonal bd({p[0], p[1], p[2], p[3]});
    *out = new bsakit_state{bsakit::bd_to_density(bd), bd, {}};
    return BSAKIT_OK;
  });
}

void bsakit_state_free(bsakit_state* s) { delete s; }

bsakit_status bsakit_state_to_json(const bsakit_state* s, char** json) {
  BSAKIT_REQUIRE(s && json);
  return guarded([&] {
    bsakit::Json j = bsakit::state_to_json(s->rho);
    if (s->bd) j["p"] = s->bd->p();
    if (!s->label.empty()) j["label"] = s->label;
    *json = copy_string(bsakit::dump(j));
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_state_bell_weights(const bsakit_state* s, double p[4], int* exact) {
  BSAKIT_REQUIRE(s && p && exact);
  return guarded([&] {
    const bsakit::BellProjection proj = s->bd ? bsakit::BellProjection{*s->bd, true} : bsakit::density_to_bd(s->rho);
    for (std::size_t i = 0; i < 4; ++i) p[i] = proj.bd[i];
    *exact = proj.exact ? 1 : 0;
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_state_label(const bsakit_state* s, char** label) {
  BSAKIT_REQUIRE(s && label);
  return guarded([&] {
    *label = copy_string(s->label);
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_concurrence(const bsakit_state* s, const bsakit_tolerances* tol, double lambdas[4],
                                 double* concurrence, double* eof_bits) {
  BSAKIT_REQUIRE(s && concurrence);
  return guarded([&] {
    const bsakit::ConcurrenceReport r = bsakit::concurrence(s->rho, tolerances(tol));
    if (lambdas)
      for (std::size_t i = 0; i < 4; ++i) lambdas[i] = r.lambdas[i];
    *concurrence = r.concurrence;
    if (eof_bits) *eof_bits = bsakit::eof_from_concurrence(r.concurrence, bsakit::EntropyUnit::Bits);
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_separable(const bsakit_state* s, const bsakit_tolerances* tol, int* separable,
                               double* min_pt_eigenvalue) {
  BSAKIT_REQUIRE(s && separable);
  return guarded([&] {
    const bsakit::SeparabilityVerdict v = bsakit::is_separable(s->rho, tolerances(tol));
    *separable = v.separable ? 1 : 0;
    if (min_pt_eigenvalue) *min_pt_eigenvalue = v.min_pt_eigenvalue;
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_lsd_decompose(const bsakit_state* s, bsakit_decomposition** out) {
  BSAKIT_REQUIRE(s && out);
  return guarded([&] {
    std::optional<bsakit::BellDiagonal> bd = s->bd;
    if (!bd) {
      const bsakit::BellProjection proj = bsakit::density_to_bd(s->rho);
      if (!proj.exact) return fail(BSAKIT_ERR_VALIDATION, "state is not Bell-diagonal");
      bd = proj.bd;
    }
    *out = new bsakit_decomposition{bsakit::ls_decompose_bd(*bd)};
    return BSAKIT_OK;
  });
}

void bsakit_decomposition_free(bsakit_decomposition* d) { delete d; }

bsakit_status bsakit_decomposition_lambda(const bsakit_decomposition* d, double* lambda) {
  BSAKIT_REQUIRE(d && lambda);
  *lambda = d->d.lambda;
  return BSAKIT_OK;
}

bsakit_status bsakit_decomposition_to_json(const bsakit_decomposition* d, char** json) {
  BSAKIT_REQUIRE(d && json);
  return guarded([&] {
    *json = copy_string(bsakit::dump(bsakit::to_json(d->d)));
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_decomposition_verify(const bsakit_decomposition* d, const bsakit_tolerances* tol, int* passed,
                                          char** certificate_json) {
  BSAKIT_REQUIRE(d && passed);
  return guarded([&] {
    const bsakit::OptimalityCertificate c = bsakit::verify_optimality(d->d, tolerances(tol));
    *passed = c.passed ? 1 : 0;
    if (certificate_json) *certificate_json = copy_string(bsakit::dump(bsakit::to_json(c)));
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_map_from_json(const char* json, bsakit_map** out) {
  BSAKIT_REQUIRE(json && out);
  bsakit_status st = guarded([&] {
    *out = new bsakit_map{bsakit::parse_map(bsakit::parse_json_text(json))};
    return BSAKIT_OK;
  });
  return st == BSAKIT_ERR_ARGUMENT || st == BSAKIT_ERR_VALIDATION ? BSAKIT_ERR_BAD_MAP : st;
}

void bsakit_map_free(bsakit_map* m) { delete m; }

bsakit_status bsakit_lqcc_apply(const bsakit_map* m, const bsakit_state* s, const bsakit_tolerances* tol,
                                bsakit_state** out, double* success_prob) {
  BSAKIT_REQUIRE(m && s && out);
  return guarded([&] {
    bsakit::LqccResult r = bsakit::apply_lqcc(m->map, s->rho, tolerances(tol));
    if (success_prob) *success_prob = r.success_prob;
    *out = new bsakit_state{r.state, std::nullopt, s->label};
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_lqcc_check_law(const bsakit_map* m, const bsakit_state* s, const bsakit_tolerances* tol,
                                    double* predicted, double* actual) {
  BSAKIT_REQUIRE(m && s && predicted && actual);
  return guarded([&] {
    const bsakit::ConcurrenceLaw law = bsakit::concurrence_transform_check(m->map, s->rho, tolerances(tol));
    *predicted = law.predicted;
    *actual = law.actual;
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_lqcc_transport(const bsakit_map* m, const bsakit_decomposition* d, const bsakit_tolerances* tol,
                                    bsakit_decomposition** out) {
  BSAKIT_REQUIRE(m && d && out);
  return guarded([&] {
    *out = new bsakit_decomposition{bsakit::transport_decomposition(m->map, d->d, tolerances(tol))};
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_lqcc_verify_transported(const bsakit_map* m, const bsakit_decomposition* d,
                                             const bsakit_tolerances* tol, int* passed, int* pass_asserted,
                                             char** certificate_json) {
  BSAKIT_REQUIRE(m && d && passed);
  return guarded([&] {
    const bsakit::OptimalityCertificate c = bsakit::verify_transported_optimality(m->map, d->d, tolerances(tol));
    *passed = c.passed ? 1 : 0;
    if (pass_asserted) *pass_asserted = c.pass_asserted ? 1 : 0;
    if (certificate_json) *certificate_json = copy_string(bsakit::dump(bsakit::to_json(c)));
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_oracle_search(const bsakit_state* s, long budget, int restarts, uint64_t seed,
                                   const bsakit_tolerances* tol, double* best_lambda, char** result_json) {
  BSAKIT_REQUIRE(s && best_lambda);
  return guarded([&] {
    const bsakit::OracleResult r = bsakit::bsa_search(s->rho, {budget, restarts, seed}, tolerances(tol));
    *best_lambda = r.best_lambda;
    if (result_json) *result_json = copy_string(bsakit::dump(bsakit::to_json(r)));
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_random_bd(uint64_t seed, size_t count, int entangled_only, double* out) {
  BSAKIT_REQUIRE(out || count == 0);
  return guarded([&] {
    bsakit::Rng rng(seed);
    const bsakit::Region region = entangled_only ? bsakit::Region::Entangled : bsakit::Region::Any;
    for (size_t i = 0; i < count; ++i) {
      const bsakit::BellDiagonal bd = bsakit::random_bd(rng, region);
      for (std::size_t k = 0; k < 4; ++k) out[4 * i + k] = bd[k];
    }
    return BSAKIT_OK;
  });
}

bsakit_status bsakit_format_json(const char* json, int indent, char** out) {
  BSAKIT_REQUIRE(json && out);
  return guarded([&] {
    *out = copy_string(bsakit::dump(bsakit::parse_json_text(json), indent < 0 ? 0 : indent));
    return BSAKIT_OK;
  });
}

}  // extern "C"

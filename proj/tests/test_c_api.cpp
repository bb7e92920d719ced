#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <string>

#include "bsakit.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  bsakit_string_free(s);
  return out;
}

}  // namespace

TEST_CASE("tolerances") {
  bsakit_tolerances t{};
  REQUIRE(bsakit_tolerances_scaled(2.0, &t) == BSAKIT_OK);
  CHECK(t.herm == 2e-9);
  CHECK(t.cert == 2e-8);
  CHECK(bsakit_tolerances_scaled(-1.0, &t) == BSAKIT_ERR_ARGUMENT);

  setenv("BSAKIT_TOLERANCE_SCALE", "10", 1);
  REQUIRE(bsakit_tolerances_from_env(&t) == BSAKIT_OK);
  CHECK(t.eig == doctest::Approx(1e-9));
  setenv("BSAKIT_TOLERANCE_SCALE", "abc", 1);
  CHECK(bsakit_tolerances_from_env(&t) != BSAKIT_OK);
  unsetenv("BSAKIT_TOLERANCE_SCALE");
  REQUIRE(bsakit_tolerances_from_env(&t) == BSAKIT_OK);
  CHECK(t.psd == 1e-9);
}

TEST_CASE("state, concurrence and separability") {
  bsakit_state* s = nullptr;
  REQUIRE(bsakit_state_from_json(R"({"p": [0.7, 0.1, 0.1, 0.1]})", nullptr, &s) == BSAKIT_OK);
  double lambdas[4], c = 0.0, eof = 0.0;
  REQUIRE(bsakit_concurrence(s, nullptr, lambdas, &c, &eof) == BSAKIT_OK);
  CHECK(c == doctest::Approx(0.4));
  CHECK(eof == doctest::Approx(0.17344269198907525 / std::log(2.0)));
  int sep = 1;
  double min_ev = 0.0;
  REQUIRE(bsakit_separable(s, nullptr, &sep, &min_ev) == BSAKIT_OK);
  CHECK(sep == 0);
  CHECK(min_ev == doctest::Approx(-0.2));
  double p[4];
  int exact = 0;
  REQUIRE(bsakit_state_bell_weights(s, p, &exact) == BSAKIT_OK);
  CHECK(exact == 1);
  CHECK(p[0] == doctest::Approx(0.7));
  char* json = nullptr;
  REQUIRE(bsakit_state_to_json(s, &json) == BSAKIT_OK);
  CHECK(take(json).find("\"dim\"") != std::string::npos);
  bsakit_state_free(s);
}

TEST_CASE("error statuses") {
  bsakit_state* s = nullptr;
  CHECK(bsakit_state_from_json("{oops", nullptr, &s) == BSAKIT_ERR_PARSE);
  CHECK(std::string(bsakit_last_error()).size() > 0);
  CHECK(bsakit_state_from_json(R"({"p": [0.6, 0.6, 0, -0.2]})", nullptr, &s) == BSAKIT_ERR_VALIDATION);
  CHECK(s == nullptr);
  CHECK(bsakit_concurrence(nullptr, nullptr, nullptr, nullptr, nullptr) == BSAKIT_ERR_ARGUMENT);

  REQUIRE(bsakit_state_from_json(R"({"p": [0.4, 0.3, 0.2, 0.1]})", nullptr, &s) == BSAKIT_OK);
  bsakit_decomposition* d = nullptr;
  CHECK(bsakit_lsd_decompose(s, &d) == BSAKIT_ERR_NOT_ENTANGLED);
  bsakit_state_free(s);

  REQUIRE(bsakit_state_from_json(R"({"re": [[0.5,0,0,0],[0,0,0,0],[0,0,0,0],[0,0,0,0.5]]})", nullptr, &s) ==
          BSAKIT_OK);
  double lambda = 0.0;
  CHECK(bsakit_oracle_search(s, 20000, 4, 0, nullptr, &lambda, nullptr) == BSAKIT_ERR_NOT_ENTANGLED);
  bsakit_state_free(s);

  bsakit_map* m = nullptr;
  CHECK(bsakit_map_from_json(R"({"f_A": {"mu": 1, "a": 3}})", &m) == BSAKIT_ERR_BAD_MAP);
  CHECK(bsakit_map_from_json(R"({"f_A": 7})", &m) == BSAKIT_ERR_PARSE);
}

TEST_CASE("decomposition and certificate") {
  bsakit_state* s = nullptr;
  const double p[4] = {0.7, 0.1, 0.1, 0.1};
  REQUIRE(bsakit_state_from_bell_diagonal(p, &s) == BSAKIT_OK);
  bsakit_decomposition* d = nullptr;
  REQUIRE(bsakit_lsd_decompose(s, &d) == BSAKIT_OK);
  double lambda = 0.0;
  REQUIRE(bsakit_decomposition_lambda(d, &lambda) == BSAKIT_OK);
  CHECK(lambda == doctest::Approx(0.6));
  int passed = 0;
  char* cert = nullptr;
  REQUIRE(bsakit_decomposition_verify(d, nullptr, &passed, &cert) == BSAKIT_OK);
  CHECK(passed == 1);
  CHECK(take(cert).find("full_rank") != std::string::npos);
  char* dj = nullptr;
  REQUIRE(bsakit_decomposition_to_json(d, &dj) == BSAKIT_OK);
  CHECK(take(dj).find("ensemble") != std::string::npos);

  bsakit_map* m = nullptr;
  REQUIRE(bsakit_map_from_json(R"({"f_A": {"mu": 1.5, "a": 0.4, "m": [0.6, 0, 0.8]}})", &m) == BSAKIT_OK);
  bsakit_state* out = nullptr;
  double success = 0.0;
  REQUIRE(bsakit_lqcc_apply(m, s, nullptr, &out, &success) == BSAKIT_OK);
  CHECK(success == doctest::Approx(1.5 * 1.5 * (1.0 + 0.16)));
  double predicted = 0.0, actual = 0.0;
  REQUIRE(bsakit_lqcc_check_law(m, s, nullptr, &predicted, &actual) == BSAKIT_OK);
  CHECK(std::abs(predicted - actual) < 1e-10);
  bsakit_decomposition* moved = nullptr;
  REQUIRE(bsakit_lqcc_transport(m, d, nullptr, &moved) == BSAKIT_OK);
  int asserted = 0;
  char* tj = nullptr;
  REQUIRE(bsakit_lqcc_verify_transported(m, d, nullptr, &passed, &asserted, &tj) == BSAKIT_OK);
  bsakit_string_free(tj);
  CHECK(passed == 1);
  CHECK(asserted == 1);

  bsakit_decomposition_free(moved);
  bsakit_state_free(out);
  bsakit_map_free(m);
  bsakit_decomposition_free(d);
  bsakit_state_free(s);
}

TEST_CASE("singular map") {
  bsakit_state* s = nullptr;
  const double p[4] = {0.7, 0.1, 0.1, 0.1};
  REQUIRE(bsakit_state_from_bell_diagonal(p, &s) == BSAKIT_OK);
  bsakit_decomposition* d = nullptr;
  REQUIRE(bsakit_lsd_decompose(s, &d) == BSAKIT_OK);
  bsakit_map* m = nullptr;
  REQUIRE(bsakit_map_from_json(R"({"f_B": {"mu": 1, "a": 1, "m": [1, 0, 0]}})", &m) == BSAKIT_OK);
  bsakit_decomposition* moved = nullptr;
  CHECK(bsakit_lqcc_transport(m, d, nullptr, &moved) == BSAKIT_ERR_BAD_MAP);
  bsakit_map_free(m);
  bsakit_decomposition_free(d);
  bsakit_state_free(s);
}

TEST_CASE("oracle and formatting") {
  bsakit_state* s = nullptr;
  const double p[4] = {0.7, 0.1, 0.1, 0.1};
  REQUIRE(bsakit_state_from_bell_diagonal(p, &s) == BSAKIT_OK);
  double best = 0.0;
  char* json = nullptr;
  REQUIRE(bsakit_oracle_search(s, 8000, 8, 0, nullptr, &best, &json) == BSAKIT_OK);
  CHECK(std::abs(best - 0.6) < 2e-3);
  CHECK(take(json).find("best_lambda") != std::string::npos);
  CHECK(bsakit_oracle_search(s, 10, 8, 0, nullptr, &best, nullptr) == BSAKIT_ERR_ARGUMENT);
  bsakit_state_free(s);

  char* out = nullptr;
  REQUIRE(bsakit_format_json(R"({"x": 0.1, "y": [1, 2.5]})", -1, &out) == BSAKIT_OK);
  CHECK(take(out) == R"({"x":0.10000000000000001,"y":[1,2.5]})");
}

TEST_CASE("random samples are reproducible") {
  double a[12], b[12];
  REQUIRE(bsakit_random_bd(7, 3, 0, a) == BSAKIT_OK);
  REQUIRE(bsakit_random_bd(7, 3, 0, b) == BSAKIT_OK);
  for (int i = 0; i < 12; ++i) CHECK(a[i] == b[i]);
  for (int k = 0; k < 3; ++k) CHECK(a[4 * k] + a[4 * k + 1] + a[4 * k + 2] + a[4 * k + 3] == doctest::Approx(1.0));
  REQUIRE(bsakit_random_bd(7, 3, 1, a) == BSAKIT_OK);
  for (int k = 0; k < 3; ++k) CHECK(a[4 * k] > 0.5);
  CHECK(bsakit_random_bd(7, 0, 0, nullptr) == BSAKIT_OK);
}

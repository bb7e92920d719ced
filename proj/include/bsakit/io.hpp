#pragma once

// JSON encodings of states, maps, decompositions and reports.

#include <optional>
#include <string>

#include <json.hpp>

#include "bsakit/lqcc.hpp"
#include "bsakit/oracle.hpp"

namespace bsakit {

using Json = nlohmann::ordered_json;

/// Thrown for malformed input (bad syntax, missing keys, wrong types), as
/// opposed to well-formed input that fails validation.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct StateInput {
  DensityMatrix rho;
  std::optional<BellDiagonal> bd;  // set for {"p": [...]} input
  std::string label;
};

/// {"p": [4]} or {"dim": 4, "re": 4x4, "im": 4x4} ("im" optional).
StateInput parse_state(const Json& j, const Tolerances& tol = {});
/// mat2 is {"re": 2x2, "im": 2x2} or a bare real 2x2 array. Missing keys
/// default to the identity map.
LqccMap parse_map(const Json& j);
Json parse_json_text(const std::string& text);

Json to_json(const ComplexMatrix& m);
Json to_json(const ComplexVector& v);
Json to_json(const Tolerances& tol);
Json state_to_json(const DensityMatrix& rho);
Json to_json(const LsDecomposition& d);
Json to_json(const OptimalityCertificate& c);
Json to_json(const OracleResult& r);
Json to_json(const LqccMap& map);

/// Like Json::dump but every floating-point number is written with 17
/// significant digits.
std::string dump(const Json& j, int indent = 2);

}  // namespace bsakit

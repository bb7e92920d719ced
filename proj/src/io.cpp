#include "bsakit/io.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include "bsakit/error.hpp"

namespace bsakit {

namespace {

double number(const Json& j, const char* what) {
  if (!j.is_number()) throw ParseError(std::string(what) + " must be a number");
  return j.get<double>();
}

std::vector<std::vector<double>> real_grid(const Json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n) throw ParseError(std::string(what) + " must have " + std::to_string(n) + " rows");
  std::vector<std::vector<double>> out;
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != n) {
      throw ParseError(std::string(what) + " rows must have " + std::to_string(n) + " entries");
    }
    std::vector<double> r;
    for (const auto& x : row) r.push_back(number(x, what));
    out.push_back(r);
  }
  return out;
}

ComplexMatrix complex_grid(const Json& re, const Json* im, std::size_t n, const char* what) {
  const auto r = real_grid(re, n, what);
  std::vector<std::vector<double>> i(n, std::vector<double>(n, 0.0));
  if (im) i = real_grid(*im, n, what);
  ComplexMatrix m(n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) m(a, b) = Complex(r[a][b], i[a][b]);
  return m;
}

ComplexMatrix parse_mat2(const Json& j, const char* what) {
  if (j.is_array()) return complex_grid(j, nullptr, 2, what);
  if (!j.is_object() || !j.contains("re")) throw ParseError(std::string(what) + " must be a 2x2 array or {re, im}");
  return complex_grid(j.at("re"), j.contains("im") ? &j.at("im") : nullptr, 2, what);
}

Filtration parse_filtration(const Json& j, const char* what) {
  if (!j.is_object()) throw ParseError(std::string(what) + " must be an object");
  Filtration f;
  if (j.contains("mu")) f.mu = number(j.at("mu"), "mu");
  if (j.contains("a")) f.a = number(j.at("a"), "a");
  if (j.contains("m")) {
    const Json& m = j.at("m");
    if (!m.is_array() || m.size() != 3) throw ParseError(std::string(what) + ".m must have 3 entries");
    for (std::size_t k = 0; k < 3; ++k) f.m[k] = number(m[k], "m");
  }
  return f;
}

void write(std::string& out, const Json& j, int indent, int depth) {
  const std::string pad = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * (depth + 1)), ' ') : "";
  const std::string close = indent > 0 ? "\n" + std::string(static_cast<std::size_t>(indent * depth), ' ') : "";
  const char* sep = indent > 0 ? ": " : ":";
  switch (j.type()) {
    case Json::value_t::object: {
      if (j.empty()) {
        out += "{}";
        return;
      }
      out += '{';
      bool first = true;
      for (const auto& [k, v] : j.items()) {
        if (!first) out += ',';
        first = false;
        out += pad;
        out += Json(k).dump();
        out += sep;
        write(out, v, indent, depth + 1);
      }
      out += close + '}';
      return;
    }
    case Json::value_t::array: {
      if (j.empty()) {
        out += "[]";
        return;
      }
      out += '[';
      bool first = true;
      for (const auto& v : j) {
        if (!first) out += ',';
        first = false;
        out += pad;
        write(out, v, indent, depth + 1);
      }
      out += close + ']';
      return;
    }
    case Json::value_t::number_float: {
      const double x = j.get<double>();
      if (!std::isfinite(x)) {
        out += "null";
        return;
      }
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", x);
      out += buf;
      return;
    }
    default:
      out += j.dump();
  }
}

}  // namespace

Json parse_json_text(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ParseError(e.what());
  }
}

StateInput parse_state(const Json& j, const Tolerances& tol) {
  if (!j.is_object()) throw ParseError("state must be a JSON object");
  std::string label;
  if (j.contains("label")) {
    if (!j.at("label").is_string()) throw ParseError("label must be a string");
    label = j.at("label").get<std::string>();
  }
  if (j.contains("p")) {
    const Json& p = j.at("p");
    if (!p.is_array() || p.size() != 4) throw ParseError("p must have 4 entries");
    std::array<double, 4> w{};
    for (std::size_t i = 0; i < 4; ++i) w[i] = number(p[i], "p");
    BellDiagonal bd(w);
    return {bd_to_density(bd), bd, label};
  }
  if (!j.contains("re")) throw ParseError("state needs \"p\" or \"re\"");
  if (j.contains("dim")) {
    if (!j.at("dim").is_number_integer()) throw ParseError("dim must be an integer");
    if (j.at("dim").get<long>() != 4) throw Error(ErrorCode::InvalidState, "only dim 4 is supported");
  }
  const ComplexMatrix m = complex_grid(j.at("re"), j.contains("im") ? &j.at("im") : nullptr, 4, "state");
  return {DensityMatrix(m, tol), std::nullopt, label};
}

LqccMap parse_map(const Json& j) {
  if (!j.is_object()) throw ParseError("map must be a JSON object");
  const ComplexMatrix ua = j.contains("U_A") ? parse_mat2(j.at("U_A"), "U_A") : ComplexMatrix::identity(2);
  const ComplexMatrix ub = j.contains("U_B") ? parse_mat2(j.at("U_B"), "U_B") : ComplexMatrix::identity(2);
  const Filtration fa = j.contains("f_A") ? parse_filtration(j.at("f_A"), "f_A") : Filtration{};
  const Filtration fb = j.contains("f_B") ? parse_filtration(j.at("f_B"), "f_B") : Filtration{};
  return LqccMap(ua, ub, fa, fb);
}

Json to_json(const ComplexMatrix& m) {
  Json re = Json::array(), im = Json::array();
  for (std::size_t r = 0; r < m.dim(); ++r) {
    Json rr = Json::array(), ii = Json::array();
    for (std::size_t c = 0; c < m.dim(); ++c) {
      rr.push_back(m(r, c).real());
      ii.push_back(m(r, c).imag());
    }
    re.push_back(rr);
    im.push_back(ii);
  }
  return {{"re", re}, {"im", im}};
}

Json to_json(const ComplexVector& v) {
  Json re = Json::array(), im = Json::array();
  for (const Complex& z : v.entries()) {
    re.push_back(z.real());
    im.push_back(z.imag());
  }
  return {{"re", re}, {"im", im}};
}

Json to_json(const Tolerances& tol) {
  return {{"herm", tol.herm}, {"psd", tol.psd}, {"eig", tol.eig}, {"rank", tol.rank}, {"cert", tol.cert}};
}

Json state_to_json(const DensityMatrix& rho) {
  Json j = to_json(rho.matrix());
  Json out = {{"dim", 4}};
  out["re"] = j["re"];
  out["im"] = j["im"];
  return out;
}

Json to_json(const LsDecomposition& d) {
  Json j;
  j["lambda"] = d.lambda;
  if (d.separable_bd) {
    j["p_prime"] = d.separable_bd->p();
  } else {
    j["p_prime"] = nullptr;
  }
  Json ens = Json::array();
  for (const auto& e : d.ensemble) ens.push_back({{"weight", e.weight}, {"state", to_json(e.state.vector())}});
  j["ensemble"] = ens;
  j["psi"] = d.psi ? to_json(d.psi->vector()) : Json(nullptr);
  j["source_rank"] = d.source_rank;
  j["pure_label"] = d.pure_label;
  return j;
}

Json to_json(const OptimalityCertificate& c) {
  Json singles = Json::array(), pairs = Json::array();
  for (const auto& s : c.singles) {
    singles.push_back({{"alpha", s.alpha},
                       {"residual", s.residual},
                       {"residual_inverse", s.residual_inverse},
                       {"residual_transport", s.residual_transport},
                       {"passed", s.passed}});
  }
  for (const auto& p : c.pairs) {
    pairs.push_back({{"alpha", p.alpha},
                     {"beta", p.beta},
                     {"dependent", p.dependent},
                     {"residual_alpha", p.residual_alpha},
                     {"residual_beta", p.residual_beta},
                     {"cross_term", p.cross_term},
                     {"residual_inverse", p.residual_inverse},
                     {"residual_transport", p.residual_transport},
                     {"passed", p.passed}});
  }
  return {{"branch", to_string(c.branch)}, {"rank", c.rank},          {"tolerance", c.tolerance},
          {"max_residual", c.max_residual}, {"pass_asserted", c.pass_asserted}, {"passed", c.passed},
          {"singles", singles},            {"pairs", pairs}};
}

Json to_json(const OracleResult& r) {
  return {{"best_lambda", r.best_lambda},
          {"best_psi", to_json(r.best_psi.vector())},
          {"evaluations", r.evaluations},
          {"converged", r.converged}};
}

Json to_json(const LqccMap& map) {
  auto filt = [](const Filtration& f) { return Json{{"mu", f.mu}, {"a", f.a}, {"m", f.m}}; };
  return {{"U_A", to_json(map.u_a())}, {"U_B", to_json(map.u_b())}, {"f_A", filt(map.f_a())}, {"f_B", filt(map.f_b())}};
}

std::string dump(const Json& j, int indent) {
  std::string out;
  write(out, j, indent, 0);
  return out;
}

}  // namespace bsakit

// bsakit command-line front end. Talks to the library only through bsakit.h.

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bsakit.h"

namespace {

using Json = nlohmann::ordered_json;

struct Failure {
  bsakit_status status;
  std::string message;
};

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using StatePtr = std::unique_ptr<bsakit_state, Deleter<bsakit_state, bsakit_state_free>>;
using MapPtr = std::unique_ptr<bsakit_map, Deleter<bsakit_map, bsakit_map_free>>;
using DecompPtr = std::unique_ptr<bsakit_decomposition, Deleter<bsakit_decomposition, bsakit_decomposition_free>>;

void check(bsakit_status st, const std::string& context) {
  if (st != BSAKIT_OK) throw Failure{st, context + ": " + bsakit_last_error()};
}

Json take_json(char* s) {
  Json j = Json::parse(s);
  bsakit_string_free(s);
  return j;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{BSAKIT_ERR_PARSE, path + ": cannot open"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// FNV-1a, 64 bit.
std::string digest(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct Context {
  bsakit_tolerances tol{};
  std::uint64_t seed = 0;
  Json report;
};

StatePtr load_state(Context& ctx, const std::string& path) {
  const std::string text = read_file(path);
  ctx.report["inputs"].push_back({{"file", path}, {"digest", digest(text)}});
  bsakit_state* s = nullptr;
  check(bsakit_state_from_json(text.c_str(), &ctx.tol, &s), path);
  return StatePtr(s);
}

MapPtr load_map(Context& ctx, const std::string& path) {
  const std::string text = read_file(path);
  ctx.report["inputs"].push_back({{"file", path}, {"digest", digest(text)}});
  bsakit_map* m = nullptr;
  check(bsakit_map_from_json(text.c_str(), &m), path);
  return MapPtr(m);
}

Json bell_weights(const bsakit_state* s, bool* exact_out = nullptr) {
  double p[4];
  int exact = 0;
  check(bsakit_state_bell_weights(s, p, &exact), "Bell weights");
  if (exact_out) *exact_out = exact != 0;
  return {{"p", {p[0], p[1], p[2], p[3]}}, {"exact", exact != 0}};
}

Json concurrence_of(const Context& ctx, const bsakit_state* s) {
  double lambdas[4], c = 0.0, eof = 0.0;
  check(bsakit_concurrence(s, &ctx.tol, lambdas, &c, &eof), "concurrence");
  return {{"lambdas", {lambdas[0], lambdas[1], lambdas[2], lambdas[3]}}, {"concurrence", c}, {"eof_bits", eof}};
}

void cmd_concurrence(Context& ctx, const std::vector<std::string>& files) {
  for (const auto& f : files) {
    StatePtr s = load_state(ctx, f);
    Json r = {{"file", f}};
    r.update(concurrence_of(ctx, s.get()));
    ctx.report["results"].push_back(r);
  }
}

void cmd_separable(Context& ctx, const std::vector<std::string>& files) {
  for (const auto& f : files) {
    StatePtr s = load_state(ctx, f);
    int sep = 0;
    double min_ev = 0.0;
    check(bsakit_separable(s.get(), &ctx.tol, &sep, &min_ev), f);
    Json r = {{"file", f}, {"separable", sep != 0}, {"min_pt_eigenvalue", min_ev}};
    bool exact = false;
    Json bw = bell_weights(s.get(), &exact);
    if (exact) r["bell_weights"] = bw["p"];
    ctx.report["results"].push_back(r);
  }
}

struct LsdFlags {
  bool verify = false;
  long oracle_budget = 0;
  int restarts = 32;
};

void cmd_lsd(Context& ctx, const std::vector<std::string>& files, const LsdFlags& flags) {
  bool cert_failed = false;
  std::string cert_message;
  for (const auto& f : files) {
    StatePtr s = load_state(ctx, f);
    Json r = {{"file", f}};
    bool exact = false;
    const Json bw = bell_weights(s.get(), &exact);
    bsakit_decomposition* raw = nullptr;
    const bsakit_status st = bsakit_lsd_decompose(s.get(), &raw);
    if (st == BSAKIT_ERR_NOT_ENTANGLED) {
      double pmax = 0.0;
      for (double x : bw["p"]) pmax = std::max(pmax, x);
      std::ostringstream msg;
      msg << f << ": separable input, max p_i = " << pmax << " <= 1/2";
      ctx.report["witness"] = {{"file", f}, {"p", bw["p"]}, {"max_p", pmax}};
      throw Failure{st, msg.str()};
    }
    check(st, f);
    DecompPtr d(raw);
    char* js = nullptr;
    check(bsakit_decomposition_to_json(d.get(), &js), f);
    r["decomposition"] = take_json(js);
    if (flags.verify) {
      int passed = 0;
      char* cj = nullptr;
      check(bsakit_decomposition_verify(d.get(), &ctx.tol, &passed, &cj), f);
      r["certificate"] = take_json(cj);
      if (!passed && !cert_failed) {
        cert_failed = true;
        cert_message = f + ": certificate failed, max residual " + r["certificate"]["max_residual"].dump();
      }
    }
    if (flags.oracle_budget > 0) {
      double best = 0.0;
      char* oj = nullptr;
      check(bsakit_oracle_search(s.get(), flags.oracle_budget, flags.restarts, ctx.seed, &ctx.tol, &best, &oj), f);
      r["oracle"] = take_json(oj);
      double lambda = 0.0;
      check(bsakit_decomposition_lambda(d.get(), &lambda), f);
      r["oracle"]["gap"] = std::abs(lambda - best);
    }
    ctx.report["results"].push_back(r);
  }
  if (cert_failed) throw Failure{BSAKIT_ERR_CERTIFICATE, cert_message};
}

struct LqccFlags {
  bool transport = false;
  bool check_law = false;
};

void cmd_lqcc(Context& ctx, const std::string& state_file, const std::string& map_file, const LqccFlags& flags) {
  StatePtr s = load_state(ctx, state_file);
  MapPtr m = load_map(ctx, map_file);
  Json r = {{"file", state_file}, {"map", map_file}};

  bsakit_state* raw = nullptr;
  double success = 0.0;
  check(bsakit_lqcc_apply(m.get(), s.get(), &ctx.tol, &raw, &success), "apply");
  StatePtr out(raw);
  char* sj = nullptr;
  check(bsakit_state_to_json(out.get(), &sj), "output state");
  r["state"] = take_json(sj);
  r["success_prob"] = success;

  if (flags.check_law) {
    double predicted = 0.0, actual = 0.0;
    check(bsakit_lqcc_check_law(m.get(), s.get(), &ctx.tol, &predicted, &actual), "concurrence law");
    r["concurrence_law"] = {{"predicted", predicted}, {"actual", actual}, {"gap", std::abs(predicted - actual)}};
  }

  bool cert_failed = false;
  if (flags.transport) {
    bsakit_decomposition* draw = nullptr;
    check(bsakit_lsd_decompose(s.get(), &draw), state_file);
    DecompPtr src(draw);
    bsakit_decomposition* traw = nullptr;
    check(bsakit_lqcc_transport(m.get(), src.get(), &ctx.tol, &traw), "transport");
    DecompPtr moved(traw);
    char* dj = nullptr;
    check(bsakit_decomposition_to_json(moved.get(), &dj), "transport");
    r["decomposition"] = take_json(dj);
    int passed = 0, asserted = 0;
    char* cj = nullptr;
    check(bsakit_lqcc_verify_transported(m.get(), src.get(), &ctx.tol, &passed, &asserted, &cj), "certificate");
    r["certificate"] = take_json(cj);
    cert_failed = asserted && !passed;
  }
  ctx.report["results"].push_back(r);
  if (cert_failed) throw Failure{BSAKIT_ERR_CERTIFICATE, state_file + ": transported certificate failed"};
}

void cmd_random(Context& ctx, long count, const std::string& region, const std::string& out_dir) {
  if (count < 0) throw Failure{BSAKIT_ERR_PARSE, "--count must be nonnegative"};
  const bool entangled = region == "entangled";
  std::vector<double> p(static_cast<std::size_t>(count) * 4);
  check(bsakit_random_bd(ctx.seed, static_cast<std::size_t>(count), entangled ? 1 : 0, p.data()), "random");
  std::error_code ec;
  if (count > 0) std::filesystem::create_directories(out_dir, ec);
  for (long i = 0; i < count; ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "state_%04ld.json", i);
    const std::string path = (std::filesystem::path(out_dir) / name).string();
    const std::size_t k = static_cast<std::size_t>(i) * 4;
    Json doc = {{"v", 1},
                {"p", {p[k], p[k + 1], p[k + 2], p[k + 3]}},
                {"label", "seed" + std::to_string(ctx.seed) + "-" + std::to_string(i)}};
    char* formatted = nullptr;
    check(bsakit_format_json(doc.dump().c_str(), 2, &formatted), "format");
    std::ofstream f(path, std::ios::binary);
    if (f) f << formatted << '\n';
    bsakit_string_free(formatted);
    if (!f) throw Failure{BSAKIT_ERR_PARSE, path + ": cannot write"};
    ctx.report["results"].push_back({{"file", path}, {"p", doc["p"]}});
  }
}

void cmd_oracle(Context& ctx, const std::vector<std::string>& files, long budget, int restarts) {
  for (const auto& f : files) {
    StatePtr s = load_state(ctx, f);
    double best = 0.0;
    char* oj = nullptr;
    check(bsakit_oracle_search(s.get(), budget, restarts, ctx.seed, &ctx.tol, &best, &oj), f);
    Json r = {{"file", f}};
    r["oracle"] = take_json(oj);
    bool exact = false;
    const Json bw = bell_weights(s.get(), &exact);
    if (exact) {
      double pmax = 0.0;
      for (double x : bw["p"]) pmax = std::max(pmax, x);
      r["expected_lambda"] = 2.0 * (1.0 - pmax);
      r["gap"] = std::abs(best - 2.0 * (1.0 - pmax));
    }
    ctx.report["results"].push_back(r);
  }
}

void emit(const Json& report) {
  char* out = nullptr;
  if (bsakit_format_json(report.dump().c_str(), 2, &out) == BSAKIT_OK) {
    std::cout << out << '\n';
    bsakit_string_free(out);
  } else {
    std::cout << report.dump(2) << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"bsakit: concurrence, separability and optimal Lewenstein-Sanpera decompositions of two-qubit states"};
  app.require_subcommand(1);
  std::uint64_t seed = 0;
  app.add_option("--seed", seed, "seed for all randomness")->capture_default_str();

  std::vector<std::string> files;
  auto* conc = app.add_subcommand("concurrence", "Wootters concurrence and entanglement of formation");
  conc->add_option("files", files, "state files")->required();
  auto* sep = app.add_subcommand("separable", "partial-transpose separability verdict");
  sep->add_option("files", files, "state files")->required();

  LsdFlags lsd_flags;
  auto* lsd = app.add_subcommand("lsd", "optimal decomposition of Bell-diagonal states");
  lsd->add_option("files", files, "state files")->required();
  lsd->add_flag("--verify", lsd_flags.verify, "attach the optimality certificate");
  lsd->add_option("--oracle", lsd_flags.oracle_budget, "cross-check with the brute-force search at this budget");
  lsd->add_option("--restarts", lsd_flags.restarts, "oracle restarts")->capture_default_str();
  lsd->add_option("--seed", seed, "seed for all randomness");

  LqccFlags lqcc_flags;
  std::string state_file, map_file;
  auto* lqcc = app.add_subcommand("lqcc", "apply a local filtering map");
  lqcc->add_option("state", state_file, "state file")->required();
  lqcc->add_option("map", map_file, "map file")->required();
  lqcc->add_flag("--transport", lqcc_flags.transport, "transport the decomposition and certify it");
  lqcc->add_flag("--check-law", lqcc_flags.check_law, "compare predicted and actual output concurrence");

  long count = 0;
  std::string region = "any", out_dir = ".";
  auto* rnd = app.add_subcommand("random", "write seeded Bell-diagonal samples");
  rnd->add_option("--count", count, "number of states")->required();
  rnd->add_option("--seed", seed, "seed for all randomness");
  rnd->add_option("--region", region, "any or entangled")->check(CLI::IsMember({"any", "entangled"}));
  rnd->add_option("--out", out_dir, "output directory")->capture_default_str();

  long budget = 20000;
  int restarts = 32;
  auto* orc = app.add_subcommand("oracle", "brute-force best separable approximation");
  orc->add_option("files", files, "state files")->required();
  orc->add_option("--budget", budget, "objective evaluations")->capture_default_str();
  orc->add_option("--restarts", restarts, "simplex restarts")->capture_default_str();
  orc->add_option("--seed", seed, "seed for all randomness");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "bsakit: " << e.what() << '\n';
    return BSAKIT_ERR_PARSE;
  }

  const auto start = std::chrono::steady_clock::now();
  Context ctx;
  ctx.seed = seed;
  ctx.report = {{"v", 1}};
  int code = 0;
  try {
    check(bsakit_tolerances_from_env(&ctx.tol), "tolerances");
    const std::string name = app.get_subcommands().front()->get_name();
    ctx.report["command"] = name;
    ctx.report["tolerances"] = {
        {"herm", ctx.tol.herm}, {"psd", ctx.tol.psd}, {"eig", ctx.tol.eig}, {"rank", ctx.tol.rank}, {"cert", ctx.tol.cert}};
    ctx.report["seed"] = seed;
    ctx.report["inputs"] = Json::array();
    ctx.report["results"] = Json::array();
    if (name == "concurrence") cmd_concurrence(ctx, files);
    if (name == "separable") cmd_separable(ctx, files);
    if (name == "lsd") cmd_lsd(ctx, files, lsd_flags);
    if (name == "lqcc") cmd_lqcc(ctx, state_file, map_file, lqcc_flags);
    if (name == "random") cmd_random(ctx, count, region, out_dir);
    if (name == "oracle") cmd_oracle(ctx, files, budget, restarts);
  } catch (const Failure& f) {
    code = f.status == BSAKIT_ERR_ARGUMENT ? BSAKIT_ERR_VALIDATION : f.status;
    if (code == BSAKIT_ERR_NUMERIC) code = BSAKIT_ERR_VALIDATION;
    std::cerr << "bsakit: " << f.message << '\n';
    ctx.report["error"] = {{"exit_code", code}, {"message", f.message}};
  } catch (const std::exception& e) {
    code = BSAKIT_ERR_PARSE;
    std::cerr << "bsakit: " << e.what() << '\n';
    ctx.report["error"] = {{"exit_code", code}, {"message", e.what()}};
  }
  ctx.report["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  emit(ctx.report);
  return code;
}

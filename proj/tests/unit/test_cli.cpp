#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>

#include "commands.hpp"
#include "config.hpp"
#include "memkernel/error.hpp"

using namespace memkernel;
using namespace memkernel::cli;
using nlohmann::json;

namespace {

std::string config_error(const json& doc, const std::string& command = "stress") {
  try {
    parse_config(doc, command);
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ConfigError);
    return e.what();
  }
  return "";
}

bool contains(const std::string& s, const std::string& part) { return s.find(part) != std::string::npos; }

}  // namespace

TEST_CASE("configs parse into the library types") {
  const json doc = json::parse(R"({
    "surface": {"kind": "perturbed_torus", "a": 1, "c": 3, "epsilon": 0.1, "m": 2, "k": 1, "sampled": true},
    "grid": {"n1": 48, "n2": 40},
    "model": [{"term": "spontaneous", "kappa": 2, "K0": 0.5},
              {"term": "soap", "sigma": {"base": 1, "modes": [{"amplitude": 0.1, "m1": 1}]}}],
    "variation": {"kind": "random_smooth", "seed": 9, "band": 2},
    "tolerance": {"first": 1e-7}
  })");
  const RunConfig cfg = parse_config(doc, "variation");
  CHECK(cfg.surface.kind == SurfaceKind::PerturbedTorus);
  CHECK(cfg.sampled);
  CHECK(cfg.n1 == 48);
  CHECK(cfg.n2 == 40);
  REQUIRE(cfg.model.terms.size() == 4);
  CHECK(cfg.model.terms[0].kind == TermKind::Bending);
  CHECK(cfg.model.terms[1].modulus.base == doctest::Approx(-2.0));
  CHECK(cfg.model.terms[2].modulus.base == doctest::Approx(0.5));
  CHECK(cfg.model.terms[3].heterogeneous());
  CHECK(cfg.variation->band == 2);
  CHECK(cfg.seed == 9);
  CHECK(cfg.bound("first", 1.0) == 1e-7);
  CHECK(cfg.bound("second", 1e-5) == 1e-5);
  CHECK(cfg.echo == doc);
}

TEST_CASE("config errors name the offending key") {
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "cube"}})")), "surface.kind: unknown surface tag 'cube'"));
  CHECK(contains(config_error(json::parse(R"({"grid": {"n1": 32}})")), "surface: missing required key"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}})")), "model: missing required key"));
  CHECK(config_error(json::parse(R"({"surface": {"kind": "torus"}})"), "check-identities").empty());
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus", "a": 4}, "model": []})")), "surface:"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "model": [{"term": "soap", "sigma": "x"}]})")),
                 "model[0].sigma"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "model": [{"term": "magnetic", "alpha": 1,
                  "B0": [1, 2]}]})")), "model[0].B0"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "model": [{"term": "volume", "P": 1}],
                  "variation": {"kind": "random_smooth", "band": 7}})")), "variation.band"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "model": [{"term": "soap", "sigma": 1}]})"),
                              "variation"),
                 "variation: missing required key"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "levels": [64, 32]})"), "check-identities"),
                 "levels[1]"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "extra": 1})"), "check-identities"),
                 "extra: unknown key"));
  CHECK(contains(config_error(json::parse(R"({"surface": {"kind": "torus"}, "tolerance": {"first": -1}})"),
                              "check-identities"),
                 "tolerance.first"));
}

TEST_CASE("observed order column") {
  CHECK(std::stod(observed_order(1e-4, 1e-4 / 16)) == doctest::Approx(4.0));
  CHECK(observed_order(1e-15, 1e-16) == "exact");
  CHECK(observed_order(1e-6, 0.0) == "exact");
  const auto rows = convergence_table({32, 64, 128}, {1e-4, 1e-4 / 16, 1e-20});
  CHECK(rows[0].observed_order.empty());
  CHECK(std::stod(rows[1].observed_order) == doctest::Approx(4.0));
  CHECK(rows[2].observed_order == "exact");
}

TEST_CASE("reports are deterministic and round-trip") {
  const RunConfig cfg = parse_config(json::parse(R"({
    "surface": {"kind": "torus"}, "grid": {"n1": 24},
    "model": [{"term": "canham_helfrich", "kappa": 1, "kappa_bar": 0.5, "beta": 0.2, "sigma": 0.3}],
    "variation": {"kind": "random_smooth", "seed": 3}})"),
                                     "variation");
  const json a = cmd_variation(cfg).to_json(&cfg), b = cmd_variation(cfg).to_json(&cfg);
  CHECK(a == b);
  CHECK(json::parse(a.dump()) == a);
  CHECK(a.at("pass").get<bool>());
  CHECK(a.at("results").at("second").contains("unsupported"));
}

TEST_CASE("command line entry point") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "memkernel_cli_unit";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const auto cfg = (dir / "run.json").string();
  std::ofstream(cfg) << R"({"surface": {"kind": "torus"}, "grid": {"n1": 24},
    "model": [{"term": "bending", "kappa": 1}], "variation": {"kind": "random_smooth", "seed": 1}})";
  auto run_args = [](std::vector<std::string> args) {
    std::vector<char*> argv;
    static std::string prog = "memkernel";
    argv.push_back(prog.data());
    for (auto& s : args) argv.push_back(s.data());
    return run(static_cast<int>(argv.size()), argv.data());
  };
  const auto out1 = (dir / "a").string(), out2 = (dir / "b").string();
  CHECK(run_args({"variation", "--config", cfg, "--out", out1, "--seed", "5"}) == 0);
  CHECK(run_args({"variation", "--config", cfg, "--out", out2, "--seed", "6"}) == 0);
  json r1, r2;
  std::ifstream(out1 + "/report.json") >> r1;
  std::ifstream(out2 + "/report.json") >> r2;
  CHECK(r1.at("metadata").at("seed") == 5);
  CHECK(r1.at("results").at("first").at("fd") != r2.at("results").at("first").at("fd"));
  CHECK(fs::exists(out1 + "/variation_steps.csv"));
  CHECK(run_args({"variation", "--out", out1}) == 2);
  CHECK(run_args({"no-such-command"}) == 2);
  CHECK(run_args({"stress", "--config", (dir / "absent.json").string()}) == 2);
  fs::remove_all(dir);
}

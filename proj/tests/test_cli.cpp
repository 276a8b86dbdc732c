#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "json.hpp"

namespace {

const std::string kFixtures = CHOQUET_FIXTURE_DIR;

struct Result {
  int code = 0;
  std::string out;
  std::string err;
  nlohmann::json report() const { return nlohmann::json::parse(out); }
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = clab::cli::run(args, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string fixture(const std::string& name) { return kFixtures + "/" + name; }

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

} // namespace

TEST_CASE("integrate the square-distortion fixture") {
  const auto r = run({"integrate", "--measure", fixture("measure_square.json"), "--function",
                      fixture("function_linear.json")});
  REQUIRE(r.code == 0);
  const auto j = r.report();
  CHECK(j["schema"] == "choquet-lab/1");
  CHECK(std::abs(j["value"].get<double>() - 1.0 / 3.0) <= 2e-3);
  CHECK(j["value_12g"].get<std::string>().size() <= 14);
}

TEST_CASE("check-measure exit codes") {
  CHECK(run({"check-measure", "--measure", fixture("measure_sqrt.json"), "--trials", "200"}).code == 0);
  CHECK(run({"check-measure", "--measure", fixture("measure_sectioned.json"), "--trials", "200"}).code == 0);
  const auto sq = run({"check-measure", "--measure", fixture("measure_square.json"), "--trials", "200"});
  CHECK(sq.code == 2);
  const auto j = sq.report();
  CHECK(j["set_function"][1]["passed"] == false);
  CHECK(j["set_function"][1].contains("witness"));
}

TEST_CASE("fubini-check fixtures") {
  const auto c = run({"fubini-check", "--config", fixture("family_square.json"), "--function",
                      fixture("function_constant.json")});
  REQUIRE(c.code == 0);
  CHECK(c.report()["deviation"].get<double>() <= 1e-9);
  const auto x = run({"fubini-check", "--config", fixture("family_square.json"), "--function",
                      fixture("function_linear.json")});
  REQUIRE(x.code == 0);
  CHECK(std::abs(x.report()["direct"].get<double>() - 1.0 / 3.0) <= 2e-3);
  const auto h = run({"fubini-check", "--config", fixture("family_heterogeneous.json"), "--function",
                      fixture("function_square.json"), "--K", "20"});
  CHECK(h.code == 0);
  CHECK(run({"fubini-check", "--config", fixture("family_identity.json"), "--function",
             fixture("function_linear.json"), "--tnodes", "100", "--tolerance", "1e-9"})
            .code == 2);
}

TEST_CASE("range-demo fixtures") {
  const auto r = run({"range-demo", "--config", fixture("family_identity.json"), "--target", "0.37"});
  REQUIRE(r.code == 0);
  const auto j = r.report();
  CHECK(j["feasible"] == true);
  CHECK(std::abs(j["achieved"][0].get<double>() - 0.37) <= 1e-6);
  const auto v = run({"range-demo", "--config", fixture("family_sectioned.json"), "--function",
                      fixture("sectional_y_one_minus_y.json"), "--target", "0.2,0.3"});
  REQUIRE(v.code == 0);
  CHECK(v.report()["feasible"] == true);
  const auto out = run({"range-demo", "--config", fixture("family_identity.json"), "--function",
                        fixture("sectional_y_one_minus_y.json"), "--target", "1,1"});
  REQUIRE(out.code == 0);
  CHECK(out.report()["feasible"] == false);
  CHECK(out.report()["gap"].get<double>() > 0.0);
  CHECK(run({"range-demo", "--config", fixture("family_heterogeneous.json")}).code == 1);
  CHECK(run({"range-demo", "--config", fixture("family_identity.json"), "--target", "x"}).code == 1);
}

TEST_CASE("economy-check modes") {
  const auto w = run({"economy-check", "--config", fixture("economy_cobb_douglas.json"), "--mode", "walras"});
  REQUIRE(w.code == 0);
  CHECK(w.report()["walras"]["w1"] == true);
  CHECK(w.report()["walras"]["w2"] == true);
  const auto lc = run({"economy-check", "--config", fixture("economy_cobb_douglas.json"), "--mode",
                       "large-core", "--samples", "500"});
  REQUIRE(lc.code == 0);
  CHECK(std::abs(lc.report()["price"][0].get<double>() - 0.5) <= 1e-3);
  const auto gains = run({"economy-check", "--config", fixture("economy_cobb_douglas_endowment.json"),
                          "--mode", "core"});
  CHECK(gains.code == 2);
  CHECK(!gains.report()["core_search"]["witness"].is_null());
  const auto w_e = run({"economy-check", "--config", fixture("economy_cobb_douglas_endowment.json"),
                        "--mode", "walras", "--samples", "300"});
  CHECK(w_e.code == 2);
  CHECK(run({"economy-check", "--config", fixture("economy_dominance_both.json"), "--mode", "endowment",
             "--samples", "300"})
            .code == 0);
  CHECK(run({"economy-check", "--config", fixture("economy_dominance_split.json"), "--mode", "endowment",
             "--samples", "300"})
            .code == 2);
}

TEST_CASE("demo scenario reports the equilibrium price") {
  const auto r = run({"demo", "--scenario", "cobb-douglas", "--samples", "500"});
  REQUIRE(r.code == 0);
  const auto j = r.report();
  CHECK(std::abs(j["price"][0].get<double>() - 0.5) <= 1e-3);
  CHECK(std::abs(j["price"][1].get<double>() - 0.5) <= 1e-3);
  CHECK(j["core_search"]["witness"].is_null());
}

TEST_CASE("configuration errors exit 1 with one diagnostic line") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"integrate", "--measure", fixture("invalid_unknown_key.json"), "--function", fixture("function_linear.json")},
           {"integrate", "--measure", fixture("invalid_syntax.json"), "--function", fixture("function_linear.json")},
           {"integrate", "--measure", fixture("invalid_alpha.json"), "--function", fixture("function_linear.json")},
           {"integrate", "--measure", fixture("missing.json"), "--function", fixture("function_linear.json")},
           {"integrate", "--measure", fixture("measure_square.json")},
           {"demo", "--scenario", "nonsense"},
           {"demo", "--seed", "0"},
           {"economy-check", "--config", fixture("economy_cobb_douglas.json"), "--mode", "other"},
           {"frobnicate"},
           {}}) {
    const auto r = run(args);
    CHECK(r.code == 1);
    CHECK(r.out.empty());
    CHECK(r.err.rfind("error: ", 0) == 0);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("identical inputs give byte-identical reports") {
  const auto dir = std::filesystem::temp_directory_path() / "choquet_cli_determinism";
  std::filesystem::create_directories(dir);
  const std::vector<std::vector<std::string>> commands{
      {"economy-check", "--config", fixture("economy_dominance_split.json"), "--mode", "endowment", "--samples", "300"},
      {"demo", "--scenario", "gains-from-trade", "--K", "40"},
      {"check-measure", "--measure", fixture("measure_piecewise.json"), "--trials", "100", "--seed", "7"}};
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string first, second;
    for (int pass = 0; pass < 2; ++pass) {
      auto args = commands[i];
      const auto path = dir / ("report_" + std::to_string(i) + "_" + std::to_string(pass) + ".json");
      args.push_back("--out");
      args.push_back(path.string());
      const auto r = run(args);
      CHECK(r.out.empty());
      (pass == 0 ? first : second) = slurp(path);
    }
    CHECK_FALSE(first.empty());
    CHECK(first == second);
  }
}

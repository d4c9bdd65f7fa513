#include <doctest.h>
#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "techfc/dataset.hpp"
#include "techfc/reference_template.hpp"
#include "techfc/surrogate.hpp"
#include "techfc/vendor_json.hpp"

using namespace techfc;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static const fs::path dir = [] {
    auto d = fs::temp_directory_path() / ("techfc_cli_" + std::to_string(::getpid()));
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

int run(const std::string& args) {
  const std::string cmd = std::string(TECHFC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

fs::path corpus_csv() {
  const auto path = scratch() / "corpus.csv";
  if (fs::exists(path)) return path;
  SurrogateConfig c;
  c.theta = 0.5;
  c.corpus_template = reference_improving_template();
  Rng rng(2024);
  auto corpus = surrogate_corpus(c, rng);
  // Two flat technologies to exercise the exclusion path.
  for (int j = 0; j < 2; ++j) {
    auto flat = simulate_rwd(0.0, 0.05, 20, rng);
    flat.name = "Flat" + std::to_string(j);
    corpus.push_back(flat);
  }
  std::ofstream out(path);
  write_csv(out, corpus);
  return path;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("cli trend and compare") {
  const auto out = scratch() / "trend";
  CHECK(run("trend --f 0.0022 --gf 1.425 --s 0.2 --gs 1.026 -o " + q(out)) == 0);
  const auto j = nlohmann::json::parse(slurp(out / "trend.json"));
  CHECK(j["years"].get<double>() == doctest::Approx(13.7).epsilon(0.01));
  CHECK(fs::exists(out / "run.json"));
  CHECK(run("trend --f 0.1 --gf 1.0 --s 0.2 --gs 1.02 -o " + q(out)) == 2);

  const auto cmp = scratch() / "compare";
  CHECK(run("compare -o " + q(cmp)) == 0);
  for (int i = 0; i < 3; ++i) {
    const auto text = slurp(cmp / ("compare_k" + std::to_string(i) + ".csv"));
    CHECK(text.rfind("tau,p_cross\n", 0) == 0);
  }
  const auto c = nlohmann::json::parse(slurp(cmp / "compare.json"));
  for (const auto& s : c["scenarios"]) CHECK(s["even_odds_tau"].get<double>() == doctest::Approx(10.986).epsilon(1e-3));
}

TEST_CASE("cli usage and data errors") {
  CHECK(run("") == 2);
  CHECK(run("describe -i " + q(scratch() / "missing.csv")) == 2);
  const auto empty = scratch() / "empty.csv";
  std::ofstream(empty) << "";
  CHECK(run("describe -i " + q(empty) + " -o " + q(scratch() / "e")) == 2);
  CHECK(run("validate -i " + q(corpus_csv()) + " --reps 0 -o " + q(scratch() / "v0")) == 2);
  CHECK(run("hindcast -i " + q(corpus_csv()) + " --window 3 -o " + q(scratch() / "h3")) == 2);
}

TEST_CASE("cli describe and hindcast") {
  const auto d = scratch() / "describe";
  REQUIRE(run("describe -i " + q(corpus_csv()) + " -o " + q(d)) == 0);
  const auto rep = nlohmann::json::parse(slurp(d / "describe.json"));
  CHECK(rep["technologies"] == 55);
  CHECK(rep["excluded"].size() >= 2);
  const auto strict = scratch() / "describe_strict";
  REQUIRE(run("describe -i " + q(corpus_csv()) + " --alpha 0.05 -o " + q(strict)) == 0);
  const auto rs = nlohmann::json::parse(slurp(strict / "describe.json"));
  CHECK(rs["improving"].get<int>() <= rep["improving"].get<int>());

  const auto h = scratch() / "hindcast";
  REQUIRE(run("hindcast -i " + q(corpus_csv()) + " --window 5 --tau-max 20 -o " + q(h)) == 0);
  const auto eg = slurp(h / "error_growth.csv");
  CHECK(eg.rfind("tau,n_forecasts,n_technologies,xi_empirical,xi_pred_theta0,xi_pred_theta\n", 0) == 0);
  CHECK(slurp(h / "hindcast_records.csv").rfind("technology,t0_year,tau,raw_error,norm_error,mu_hat,K_hat\n", 0) ==
        0);
  const auto eq = scratch() / "hindcast_eq";
  REQUIRE(run("hindcast -i " + q(corpus_csv()) + " --weighting equal-tech -o " + q(eq)) == 0);
  CHECK(slurp(eq / "error_growth.csv") != eg);
  const auto run_json = nlohmann::json::parse(slurp(h / "run.json"));
  CHECK(run_json["command"] == "hindcast");
  CHECK(run_json["m"] == 5);
}

TEST_CASE("cli forecast") {
  const auto f = scratch() / "forecast";
  REQUIRE(run("forecast --mu -0.10 --K 0.15 --m 33 --last-cost 0.8 --horizon 17 --theta 0.63 -o " + q(f)) == 0);
  const auto j = nlohmann::json::parse(slurp(f / "forecast.json"));
  CHECK(j["forecasts"].size() == 17);
  CHECK(j["forecasts"][16]["prob_above_origin_cost"].get<double>() == doctest::Approx(0.05).epsilon(0.2));
  CHECK(slurp(f / "forecast.csv").rfind("tau,q05,q16,q50,q84,q95\n", 0) == 0);
  CHECK(run("forecast --mu -0.10 --K 0.15 -o " + q(f)) == 2);

  const auto g = scratch() / "forecast_tech";
  const auto name = reference_improving_template().front().name;
  CHECK(run("forecast -i " + q(corpus_csv()) + " --tech '" + name + "' --horizon 5 -o " + q(g)) == 0);
  CHECK(run("forecast -i " + q(corpus_csv()) + " --tech NoSuchTech -o " + q(g)) == 2);
}

TEST_CASE("cli validate is reproducible") {
  const std::string args = "validate -i " + q(corpus_csv()) +
                           " --reps 40 --deviation-reps 40 --grid 0:0.8:0.2 --seed 5 --vary-m 4,8 -o ";
  const auto a = scratch() / "va";
  const auto b = scratch() / "vb";
  REQUIRE(run(args + q(a)) == 0);
  REQUIRE(run(args + q(b)) == 0);
  for (const char* file : {"validate.json", "xi_band_theta0.csv", "xi_band_theta.csv", "theta_matched.csv"}) {
    CHECK(slurp(a / file) == slurp(b / file));
  }
  const auto j = nlohmann::json::parse(slurp(a / "validate.json"));
  CHECK(j.contains("theta_matched"));
  CHECK(j.contains("theta_weighted"));
  CHECK(j["deviation_test"].contains("sum_abs_delta"));
  CHECK(j["robustness"]["vary_m"].size() == 2);
  const auto w = scratch() / "vw";
  REQUIRE(run("validate -i " + q(corpus_csv()) + " --reps 20 --deviation-reps 20 --theta-from weighted -o " + q(w)) ==
          0);
  const auto jw = nlohmann::json::parse(slurp(w / "validate.json"));
  CHECK(jw["theta_used"].get<double>() == doctest::Approx(jw["theta_weighted"]["theta_w"].get<double>()));
}

#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "classc/fixtures.hpp"
#include "classc/graph_json.hpp"

namespace fs = std::filesystem;
using namespace classc;

namespace {

const std::string kCli = CLASSC_CLI_PATH;
const fs::path kTmp = CLASSC_TEST_TMPDIR;

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args, const std::string& tag) {
  fs::create_directories(kTmp);
  const fs::path out_path = kTmp / (tag + ".stdout");
  const std::string cmd = kCli + " " + args + " > " + out_path.string() + " 2>" +
                          (kTmp / (tag + ".stderr")).string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream in(out_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  r.out = ss.str();
  return r;
}

std::string write_tmp(const std::string& name, const std::string& content) {
  fs::create_directories(kTmp);
  const fs::path p = kTmp / name;
  std::ofstream out(p);
  out << content;
  return p.string();
}

}  // namespace

TEST_CASE("validate: valid and malformed documents", "[cli]") {
  const std::string good = write_tmp("good_graph.json", serialize(two_node_fixture(0.4, 0.9)));
  const std::string cfg = write_tmp("validate_good.json", "{\"graph_path\": \"" + good + "\"}");
  const RunResult ok = run_cli("validate --config " + cfg, "validate_good");
  REQUIRE(ok.exit_code == 0);
  REQUIRE(ok.out.find("\"valid\": true") != std::string::npos);

  const std::string bad = write_tmp("bad_graph.json", "{\"nodes\": [{\"id\": 0, \"S\": [[1,0]]}");
  const std::string cfg_bad = write_tmp("validate_bad.json", "{\"graph_path\": \"" + bad + "\"}");
  REQUIRE(run_cli("validate --config " + cfg_bad, "validate_bad").exit_code == 1);

  const std::string dup = write_tmp(
      "dup_graph.json",
      R"({"nodes":[{"id":0,"S":[[1]]}],"edges":[{"id":0,"from":[0,1],"to":[0,1]},{"id":0,"from":[0,1],"to":[0,1]}]})");
  const std::string cfg_dup = write_tmp("validate_dup.json", "{\"graph_path\": \"" + dup + "\"}");
  REQUIRE(run_cli("validate --config " + cfg_dup, "validate_dup").exit_code == 1);
}

TEST_CASE("stochastic commands demand a seed", "[cli]") {
  const std::string cfg = write_tmp("mean_green_noseed.json",
                                    R"({"builder": {"type": "single_loop"}, "edges": [0, 0]})");
  const RunResult r = run_cli("mean-green --config " + cfg + " --samples 100", "noseed");
  REQUIRE(r.exit_code == 1);
}

TEST_CASE("mean-green on the single loop agrees with the trail sum", "[cli]") {
  const std::string cfg = write_tmp("mean_green_loop.json",
                                    R"({"builder": {"type": "single_loop"}, "edges": [0, 0]})");
  const RunResult r = run_cli("mean-green --config " + cfg +
                                  " --seed 11 --samples 20000 --z 0.5,0",
                              "mean_green_loop");
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  REQUIRE(rep.at("verdict").get<std::string>() == "consistent");
  REQUIRE(rep.at("classical_trace")[0].get<double>() == Catch::Approx(1.75));
  REQUIRE(rep.at("schema_version").get<int>() == 1);
}

TEST_CASE("mean-green flags off-diagonal blocks consistent with zero", "[cli]") {
  const std::string cfg = write_tmp(
      "mean_green_offdiag.json",
      R"({"builder": {"type": "two_node", "theta_a": 0.5, "theta_b": 1.0}, "edges": [0, 1]})");
  const RunResult r = run_cli("mean-green --config " + cfg + " --seed 12 --samples 20000",
                              "mean_green_offdiag");
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  REQUIRE(rep.at("verdict").get<std::string>() == "consistent with zero");
}

TEST_CASE("byte-identical reruns and worker independence", "[cli]") {
  const std::string cfg = write_tmp(
      "det_cfg.json",
      R"({"builder": {"type": "two_node", "theta_a": 0.4, "theta_b": 0.8}, "edges": [0, 0]})");
  const std::string args = "mean-green --config " + cfg + " --seed 99 --samples 4096 --z 0.7,0";
  const RunResult a = run_cli(args + " --workers 1", "det_a");
  const RunResult b = run_cli(args + " --workers 1", "det_b");
  const RunResult c = run_cli(args + " --workers 4", "det_c");
  REQUIRE(a.exit_code == 0);
  REQUIRE(a.out == b.out);
  REQUIRE(a.out == c.out);

  // walks: same seed, same bytes
  const std::string wcfg = write_tmp(
      "walk_cfg.json", R"({"builder": {"type": "l_lattice", "L": 8, "p": 0.5}, "walks": 200})");
  const RunResult w1 = run_cli("walk --config " + wcfg + " --seed 5", "walk_a");
  const RunResult w2 = run_cli("walk --config " + wcfg + " --seed 5", "walk_b");
  REQUIRE(w1.exit_code == 0);
  REQUIRE(w1.out == w2.out);
  const RunResult w3 = run_cli("walk --config " + wcfg + " --seed 6", "walk_c");
  REQUIRE(w1.out != w3.out);
}

TEST_CASE("trails dump writes the CSV artifact", "[cli]") {
  const std::string cfg = write_tmp(
      "trails_cfg.json",
      R"({"builder": {"type": "two_node", "theta_a": 0.7, "theta_b": 1.1}, "edges": [0]})");
  const fs::path out_dir = kTmp / "trails_out";
  fs::remove_all(out_dir);
  const RunResult r =
      run_cli("trails --config " + cfg + " --out " + out_dir.string(), "trails");
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  REQUIRE(rep.at("count").get<int>() == 4);
  REQUIRE(rep.at("weight_sum").get<double>() == Catch::Approx(1.0).margin(1e-12));
  std::ifstream csv(out_dir / "trails.csv");
  std::string header;
  std::getline(csv, header);
  REQUIRE(header == "trail_id,length,weight,edge_sequence");
}

TEST_CASE("trail ceiling maps to the resource exit code", "[cli]") {
  const std::string cfg = write_tmp(
      "ceiling_cfg.json",
      R"({"builder": {"type": "two_node", "theta_a": 0.7, "theta_b": 1.1}, "edges": [0], "trail_ceiling": 2})");
  REQUIRE(run_cli("trails --config " + cfg, "ceiling").exit_code == 4);
}

TEST_CASE("conductance cross-check via config cut list", "[cli]") {
  // two-node fixture cut on a2 and b2, theta_a = pi/2: classical value 2 cos^2(theta_b)
  const std::string cfg = write_tmp(
      "cond_cfg.json",
      R"({"builder": {"type": "two_node", "theta_a": 1.5707963267948966, "theta_b": 0.7},
          "cut": [1, 3], "edges": [4, 3]})");
  const RunResult r =
      run_cli("conductance --config " + cfg + " --seed 21 --samples 20000", "conductance");
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  REQUIRE(rep.at("verdict").get<std::string>() == "consistent");
  REQUIRE(rep.at("g_classical").get<double>() ==
          Catch::Approx(2.0 * std::cos(0.7) * std::cos(0.7)).margin(1e-9));
}

TEST_CASE("dos report carries the sum rule", "[cli]") {
  const std::string cfg =
      write_tmp("dos_cfg.json", R"({"builder": {"type": "two_node", "theta_a": 0.3, "theta_b": 0.9}})");
  const fs::path out_dir = kTmp / "dos_out";
  const RunResult r =
      run_cli("dos --config " + cfg + " --seed 31 --out " + out_dir.string(), "dos");
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  REQUIRE(rep.at("expected_states").get<int>() == 8);
  REQUIRE(rep.at("sum_rule_relative_error").get<double>() <= 0.01);
  REQUIRE(fs::exists(out_dir / "dos.csv"));
}

TEST_CASE("analyzer report fields", "[cli]") {
  const std::string cfg = write_tmp("analyze_cfg.json",
                                    R"({"matrix": [[0.6, 0.8], [-0.8, 0.6]]})");
  const RunResult r = run_cli("analyze-s --config " + cfg, "analyze");
  REQUIRE(r.exit_code == 0);
  const auto rep = nlohmann::json::parse(r.out);
  REQUIRE(rep.at("det").get<double>() == Catch::Approx(1.0));
  REQUIRE(rep.at("uniform").get<std::string>() == "nonnegative");
  REQUIRE(rep.at("zero_count").get<int>() == 0);
  REQUIRE(rep.at("reducible").get<bool>() == true);
  REQUIRE(rep.contains("tree"));
}

TEST_CASE("quick verification slice through the CLI", "[cli]") {
  const std::string cfg = write_tmp("verify_cfg.json", R"({"only": "02"})");
  const RunResult r = run_cli("verify --config " + cfg + " --seed 20260810", "verify02");
  REQUIRE(r.exit_code == 0);
  REQUIRE(r.out.find("PASS  02") != std::string::npos);
}

TEST_CASE("lattice hull run writes loop statistics", "[cli]") {
  const std::string cfg = write_tmp("hull_cfg.json",
                                    R"({"mode": "hull", "L": 8, "p": 0.5, "walks": 100})");
  const fs::path out_dir = kTmp / "hull_out";
  const RunResult r =
      run_cli("lattice --config " + cfg + " --seed 41 --out " + out_dir.string(), "hull");
  REQUIRE(r.exit_code == 0);
  REQUIRE(fs::exists(out_dir / "loop_stats.csv"));
}

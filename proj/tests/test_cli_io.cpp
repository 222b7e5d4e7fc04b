#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <sstream>
#include <string>

#include "coopt/case.hpp"
#include "test_util.hpp"

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

RunResult run_cli(const std::string& args) {
  const std::string tmp =
      (std::filesystem::temp_directory_path() / "coopt_cli_out.txt").string();
  const std::string cmd = std::string(COOPT_CLI_PATH) + " " + args + " > " + tmp + " 2>&1";
  int rc = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WEXITSTATUS(rc);
  r.out = coopt::read_text_file(tmp);
  std::filesystem::remove(tmp);
  return r;
}

const std::string kCase = std::string(COOPT_SOURCE_DIR) + "/cases/two_bus.json";

}  // namespace

TEST_CASE("clear prints the dispatch-and-price table") {
  RunResult r = run_cli("clear " + kCase);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("objective") != std::string::npos);
  CHECK(r.out.find("G1") != std::string::npos);
  CHECK(r.out.find("8.00") != std::string::npos);
}

TEST_CASE("repeated runs are byte-identical") {
  RunResult a = run_cli("clear " + kCase);
  RunResult b = run_cli("clear " + kCase);
  CHECK(a.out == b.out);
  RunResult s1 = run_cli("settle " + kCase);
  RunResult s2 = run_cli("settle " + kCase);
  CHECK(s1.out == s2.out);
}

TEST_CASE("angle model agrees with the shift-factor model via the cli") {
  RunResult a = run_cli("clear " + kCase + " --model angle");
  RunResult b = run_cli("clear " + kCase + " --model coopt");
  CHECK(a.exit_code == 0);
  CHECK(a.out.substr(0, a.out.find('\n')) == b.out.substr(0, b.out.find('\n')));
}

TEST_CASE("usage errors exit with code 1") {
  CHECK(run_cli("clear " + kCase + " --model traditional").exit_code == 1);
  CHECK(run_cli("settle " + kCase + " --scheme ex-post").exit_code == 1);
  CHECK(run_cli("montecarlo " + kCase + " --samples 0").exit_code == 1);
  CHECK(run_cli("clear /no/such/file.json").exit_code == 1);
}

TEST_CASE("infeasible traditional requirements exit with code 2") {
  RunResult r = run_cli("clear " + kCase + " --model traditional --req-up 100 --req-down 0");
  CHECK(r.exit_code == 2);
}

TEST_CASE("violated assumption exits with code 2") {
  coopt::MarketCase c = coopt::builtin_two_bus();
  c.generators[0].g_min = 0.5;
  const std::string path =
      (std::filesystem::temp_directory_path() / "coopt_gmin.json").string();
  coopt::write_text_file(path, coopt::case_to_json_text(c));
  RunResult r = run_cli("verify " + path + " --theorems 3");
  CHECK(r.exit_code == 2);
  std::filesystem::remove(path);
}

TEST_CASE("verify reports per-theorem lines and exits clean") {
  RunResult r = run_cli("verify " + kCase);
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("theorem 1") != std::string::npos);
  CHECK(r.out.find("theorem 4") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("clear writes a loadable solution and an lp dump") {
  namespace fs = std::filesystem;
  const std::string sol = (fs::temp_directory_path() / "coopt_sol_cli.json").string();
  const std::string lpf = (fs::temp_directory_path() / "coopt_model.lp").string();
  RunResult r = run_cli("clear " + kCase + " --out " + sol + " --dump-lp " + lpf);
  CHECK(r.exit_code == 0);
  std::string lp_text = coopt::read_text_file(lpf);
  CHECK(lp_text.rfind("Minimize", 0) == 0);
  CHECK(lp_text.find("balance:base") != std::string::npos);
  std::string sol_text = coopt::read_text_file(sol);
  CHECK(sol_text.find("\"objective\": 367.212") != std::string::npos);
  fs::remove(sol);
  fs::remove(lpf);
}

TEST_CASE("machine outputs are written atomically via --out") {
  const std::string out =
      (std::filesystem::temp_directory_path() / "coopt_settle.csv").string();
  RunResult r = run_cli("settle " + kCase + " --out " + out);
  CHECK(r.exit_code == 0);
  std::string csv = coopt::read_text_file(out);
  CHECK(csv.rfind("row,Base,S1", 0) == 0);
  CHECK_FALSE(std::filesystem::exists(out + ".tmp"));
  std::filesystem::remove(out);
}

TEST_CASE("ex-post settlement shows only the realized scenario column") {
  RunResult r = run_cli("settle " + kCase + " --scheme ex-post --realized S2");
  CHECK(r.exit_code == 0);
  // Gamma^pi row: base + S1 zero, S2 nonzero, S3..S5 zero.
  std::istringstream is(r.out);
  std::string line;
  while (std::getline(is, line))
    if (line.rfind("Gamma^pi", 0) == 0) break;
  REQUIRE(line.rfind("Gamma^pi", 0) == 0);
  CHECK(line.find(",0.0,0.0,") != std::string::npos);  // base, S1
  // Realized re-adjustment rows appear, populated in the S2 column alone.
  CHECK(r.out.find("Phi^U(realized)") != std::string::npos);
  CHECK(r.out.find("Phi^d(realized)") != std::string::npos);
}

TEST_CASE("tiny verify tolerances report a rounding failure, not a defect") {
  RunResult r = run_cli("verify " + kCase + " --tol 1e-16");
  CHECK(r.exit_code == 3);
}

TEST_CASE("compare writes its csv") {
  namespace fs = std::filesystem;
  const std::string out = (fs::temp_directory_path() / "coopt_compare.csv").string();
  RunResult r = run_cli("compare " + kCase + " --grid 0:0.2:0.1 --out " + out);
  CHECK(r.exit_code == 0);
  std::string csv = coopt::read_text_file(out);
  CHECK(csv.rfind("# mode=exact\nfraction,requirement,", 0) == 0);
  fs::remove(out);
}

#include <catch_amalgamated.hpp>

#include <cstdio>
#include <string>

#include <nlohmann/json.hpp>

#include "util.hpp"

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(DCFG_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
  int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string g1_path() { return std::string(GRAMMAR_DIR) + "/g1.dcfg"; }
std::string g2_path() { return std::string(GRAMMAR_DIR) + "/g2.dcfg"; }

nlohmann::json as_json(const std::string& s) { return nlohmann::json::parse(s); }

}  // namespace

TEST_CASE("cli validate") {
  auto ok = run("validate " + g2_path() + " --json");
  CHECK(ok.exit_code == 0);
  CHECK(as_json(ok.out)["valid"] == true);

  CHECK(run("validate /nonexistent.dcfg").exit_code == 2);
}

TEST_CASE("cli generate") {
  auto r = run("generate " + g1_path() + " --max-len 4 --json");
  CHECK(r.exit_code == 0);
  auto words = as_json(r.out)["words"];
  CHECK(words == nlohmann::json({"aa", "aaaa", "abab", "baba", "bb", "bbbb"}));

  auto c = run("generate " + g2_path() + " --max-len 3 --json");
  CHECK(as_json(c.out)["words"] == nlohmann::json({"aaa", "bbb"}));
}

TEST_CASE("cli parse exit codes") {
  auto yes = run("parse " + g2_path() + " abaabaaba --json");
  CHECK(yes.exit_code == 0);
  CHECK(as_json(yes.out)["member"] == true);
  CHECK(as_json(yes.out)["trees"].size() >= 1);

  CHECK(run("parse " + g1_path() + " aba").exit_code == 1);
  CHECK(run("parse " + g1_path() + " axb").exit_code == 2);  // out-of-alphabet symbol
  CHECK(run("parse " + g1_path()).exit_code == 2);           // missing argument
}

TEST_CASE("cli parse --all respects the tree cap") {
  auto r = run("parse " + g1_path() + " aaaaaa --all 2 --json");
  CHECK(r.exit_code == 0);
  CHECK(as_json(r.out)["trees"].size() <= 2);
}

TEST_CASE("cli pump") {
  auto r = run("pump " + g1_path() + " aaaaaaaaaaaaaaaa --json");
  REQUIRE(r.exit_code == 0);
  auto j = as_json(r.out);
  CHECK(j["l"] <= 2);
  CHECK(j["verified_powers"].size() == 3);
  for (auto& [power, ok] : j["verified_powers"].items()) CHECK(ok == true);

  CHECK(run("pump " + g1_path() + " aba").exit_code == 1);  // not a member

  auto og = run("pump " + g1_path() + " aaaaaaaaaaaaaaaa --select 0 --power 0 2 --json");
  REQUIRE(og.exit_code == 0);
  CHECK_FALSE(as_json(og.out)["selected_hit"].is_null());
}

TEST_CASE("cli geometry") {
  auto r = run("geometry " + g1_path() + " abab --json");
  REQUIRE(r.exit_code == 0);
  auto j = as_json(r.out);
  CHECK(j["constituents"].size() >= 1);
  for (const auto& e : j["constituent_table"]) CHECK(e["case"] >= 1);
  for (const auto& e : j["pump_table"]) CHECK(e["case"] >= 1);

  CHECK(run("geometry " + g2_path() + " abaabaaba").exit_code == 2);  // only k = 1
}

TEST_CASE("cli cnf round-trips through a file") {
  std::string tmp = "/tmp/dcfg_cli_cnf_test.dcfg";
  auto r = run("cnf " + g1_path() + " " + tmp + " --json");
  REQUIRE(r.exit_code == 0);
  CHECK(as_json(r.out)["rules"].size() >= 1);

  auto p = run("parse " + tmp + " abab");
  CHECK(p.exit_code == 0);
  CHECK(run("parse " + tmp + " aba").exit_code == 1);
  std::remove(tmp.c_str());
}

TEST_CASE("cli output is deterministic") {
  std::string args = "geometry " + g1_path() + " aabaab --json";
  auto a = run(args), b = run(args);
  CHECK(a.exit_code == 0);
  CHECK(a.out == b.out);
}

TEST_CASE("cli rejects usage errors") {
  CHECK(run("").exit_code == 2);
  CHECK(run("frobnicate x").exit_code == 2);
}

// Integration tests driving the installed command-line binary through a
// shell, checking output text and the documented exit-code contract.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include <sys/wait.h>
#include <unistd.h>

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CmdResult {
  int status = -1;
  std::string out;
};

CmdResult run_cli(const std::string& args) {
  std::string cmd = std::string(MIL_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  CmdResult r;
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  int rc = pclose(pipe);
  r.status = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  return r;
}

fs::path scratch_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("mil_cli_test_" + std::to_string(getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string write_fixture(const std::string& name, const std::string& text) {
  fs::path p = scratch_dir() / name;
  std::ofstream(p) << text;
  return p.string();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

}  // namespace

TEST_CASE("likelihood subcommand and exit codes") {
  std::string tensor =
      write_fixture("t.json", R"({"kind":"prob","shape":[3,1,1],"data":[0.5,0.3,0.2]})");
  std::string l1 = write_fixture("l1.json", R"({"labels":[1]})");
  std::string l12 = write_fixture("l12.json", R"({"labels":[1,2]})");

  CmdResult ok = run_cli("likelihood " + tensor + " " + l1);
  CHECK(ok.status == 0);
  CHECK(ok.out.find("logprob: -0.69314718055994") != std::string::npos);
  CHECK(ok.out.find("method: exact") != std::string::npos);
  CHECK(ok.out.find("terms_evaluated: 2") != std::string::npos);

  CmdResult zero = run_cli("likelihood " + tensor + " " + l12);
  CHECK(zero.status == 2);
  CHECK(zero.out.find("logprob: -inf") != std::string::npos);

  CmdResult zero_json = run_cli("likelihood " + tensor + " " + l12 + " --out json");
  CHECK(zero_json.status == 2);
  json zdoc = json::parse(zero_json.out);
  CHECK(zdoc["logprob"] == "-inf");

  // exact and brute agree on a random-ish fixture
  std::string wide = write_fixture(
      "wide.json",
      R"({"kind":"prob","shape":[3,2,1],"data":[0.5,0.1,0.25,0.6,0.25,0.3]})");
  json e = json::parse(run_cli("likelihood " + wide + " " + l12 + " --out json").out);
  json b = json::parse(
      run_cli("likelihood " + wide + " " + l12 + " --method brute --out json").out);
  CHECK(std::fabs(e["logprob"].get<double>() - b["logprob"].get<double>()) <= 1e-9);

  json bound = json::parse(
      run_cli("likelihood " + wide + " " + l12 + " --method bound --k 1 --out json").out);
  CHECK(bound["truncation_order"] == 1);
  CHECK(bound["logprob"].get<double>() >= e["logprob"].get<double>() - 1e-9);

  CmdResult no_k = run_cli("likelihood " + wide + " " + l12 + " --method bound");
  CHECK(no_k.status == 1);
}

TEST_CASE("guard violations exit with the dedicated code") {
  std::string grid = write_fixture(
      "grid.json",
      R"({"kind":"logit","shape":[4,2,2],"data":[0.1,0.2,0.3,0.4,0.5,0.6,0.7,0.8,
          0.9,1.0,1.1,1.2,1.3,1.4,1.5,1.6]})");
  std::string l123 = write_fixture("l123.json", R"({"labels":[1,2,3]})");
  CmdResult guarded = run_cli("likelihood " + grid + " " + l123 + " --max-order 2");
  CHECK(guarded.status == 3);

  // brute-force enumeration guard: 11^9 assignments
  std::string big = write_fixture("big.json", [] {
    json doc{{"kind", "logit"}, {"shape", {11, 3, 3}}};
    doc["data"] = std::vector<double>(11 * 9, 0.0);
    return doc.dump();
  }());
  CmdResult brute = run_cli("likelihood " + big + " " + l123 + " --method brute");
  CHECK(brute.status == 3);
}

TEST_CASE("malformed input exits 1") {
  std::string junk = write_fixture("junk.json", "{not json");
  std::string l1 = write_fixture("l1b.json", R"({"labels":[1]})");
  CHECK(run_cli("likelihood " + junk + " " + l1).status == 1);
  CHECK(run_cli("likelihood /no/such/file.json " + l1).status == 1);
  CHECK(run_cli("verify --suite nonsense").status == 1);
  CHECK(run_cli("definitely-not-a-subcommand").status == 1);
}

TEST_CASE("verify subcommand reports suite results") {
  CmdResult human = run_cli("verify --suite partition --trials 5 --seed 3");
  CHECK(human.status == 0);
  CHECK(human.out.find("suite: partition") != std::string::npos);
  CHECK(human.out.find("result: pass") != std::string::npos);

  CmdResult as_json = run_cli("verify --suite bounds --trials 5 --seed 3 --out json");
  CHECK(as_json.status == 0);
  json doc = json::parse(as_json.out);  // exactly one document
  CHECK(doc["passed"] == true);
  CHECK(doc["failures"] == 0);
}

TEST_CASE("train, eval, and determinism of artifacts") {
  std::string ck1 = (scratch_dir() / "ck1.json").string();
  std::string ck2 = (scratch_dir() / "ck2.json").string();
  std::string m1 = (scratch_dir() / "m1.jsonl").string();
  std::string m2 = (scratch_dir() / "m2.jsonl").string();

  std::string flags = "train --epochs 2 --train-size 96 --seed 7";
  CmdResult t1 = run_cli(flags + " --checkpoint " + ck1 + " --metrics " + m1);
  CHECK(t1.status == 0);
  CmdResult t2 = run_cli(flags + " --checkpoint " + ck2 + " --metrics " + m2 + " --out json");
  CHECK(t2.status == 0);
  json summary = json::parse(t2.out);
  CHECK(summary["epochs"] == 2);

  CHECK(read_file(m1) == read_file(m2));  // byte-identical metrics logs
  CHECK(read_file(ck1) == read_file(ck2));
  CHECK(read_file(m1).find("wall_ms") == std::string::npos);

  CmdResult ev = run_cli("eval --checkpoint " + ck1 + " --singletons 20 --bags 5");
  CHECK(ev.status == 0);
  json metrics = json::parse(ev.out);
  CHECK(metrics["singleton_count"] == 20);
  CHECK(metrics.contains("error_alpha"));
  CHECK(metrics.contains("bag_mean_nll"));

  CmdResult diverged = run_cli(
      "train --loss mil --epochs 4 --train-size 96 --batch-size 96 --lr-first 0.01 "
      "--lr-second 8 --checkpoint " +
      (scratch_dir() / "junk_ck.json").string() + " --metrics " +
      (scratch_dir() / "junk_m.jsonl").string());
  CHECK(diverged.status == 4);
}

TEST_CASE("transcribe subcommand") {
  std::string map = write_fixture(
      "map.json", R"({"shape":[1,15],"cells":[1,1,1,1,1,6,6,5,5,6,2,2,2,2,2]})");
  CmdResult fig = run_cli("transcribe " + map + " --classes 5");
  CHECK(fig.status == 0);
  CHECK(fig.out == "152\n");

  CmdResult fig_json = run_cli("transcribe " + map + " --classes 5 --out json");
  json doc = json::parse(fig_json.out);
  CHECK(doc["string"] == "152");
  CHECK(doc["labels"] == json({1, 5, 2}));

  std::string allphi = write_fixture("allphi.json", R"({"shape":[1,3],"cells":[6,6,6]})");
  CmdResult empty = run_cli("transcribe " + allphi + " --classes 5");
  CHECK(empty.status == 0);
  CHECK(empty.out == "\n");

  CHECK(run_cli("transcribe " + map).status == 1);  // --classes required for maps

  std::string tensor =
      write_fixture("tt.json", R"({"kind":"prob","shape":[3,1,1],"data":[0.5,0.3,0.2]})");
  CmdResult from_tensor = run_cli("transcribe " + tensor);
  CHECK(from_tensor.status == 0);
  CHECK(from_tensor.out == "1\n");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "wpn/config.hpp"

namespace fs = std::filesystem;

namespace {

const fs::path kTmp = "cli_test_tmp";

struct CommandResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void spit(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

CommandResult run_cli(const std::string& args) {
  fs::create_directories(kTmp);
  fs::path out_file = kTmp / "stdout.txt";
  fs::path err_file = kTmp / "stderr.txt";
  std::string command = std::string(WPN_CLI_PATH) + " " + args + " > " +
                        out_file.string() + " 2> " + err_file.string();
  int raw = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(raw);
  result.out = slurp(out_file);
  result.err = slurp(err_file);
  return result;
}

struct TmpDirGuard {
  TmpDirGuard() {
    fs::remove_all(kTmp);
    fs::create_directories(kTmp);
  }
};

TmpDirGuard guard;

fs::path write_p3_config(const std::string& name, const std::string& extra = "") {
  fs::path edge_list = kTmp / "p3.edges";
  spit(edge_list, "n 3\n0 1\n1 2\n");
  fs::path config = kTmp / name;
  spit(config,
       "[problem]\nsource = edge_list\nedge_list_path = " + edge_list.string() +
           "\n[run]\nseeds = 4\nemit_trace = true\n[criterion]\nmax_steps = 600\n" +
           extra);
  return config;
}

}  // namespace

TEST_CASE("solve on the path instance writes every artifact") {
  fs::path config = write_p3_config("solve.cfg");
  fs::path out = kTmp / "solve_out";
  CommandResult r =
      run_cli("solve --config " + config.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "costs.tsv"));
  CHECK(fs::exists(out / "report.txt"));
  CHECK(fs::exists(out / "energy.tsv"));
  CHECK(fs::exists(out / "run-4" / "report.txt"));
  CHECK(fs::exists(out / "run-4" / "energy.tsv"));
  CHECK(fs::exists(out / "run-4" / "trace.tsv"));
  CHECK(slurp(out / "report.txt").find("validity.ipds") != std::string::npos);
  CHECK(slurp(out / "run-4" / "report.txt").find("validity.ipds") !=
        std::string::npos);
}

TEST_CASE("repeated solves are byte-identical") {
  fs::path config = write_p3_config("repeat.cfg");
  fs::path out_a = kTmp / "repeat_a";
  fs::path out_b = kTmp / "repeat_b";
  CHECK(run_cli("solve --config " + config.string() + " --out " + out_a.string())
            .exit_code == 0);
  CHECK(run_cli("solve --config " + config.string() + " --out " + out_b.string())
            .exit_code == 0);
  for (const char* artifact :
       {"costs.tsv", "report.txt", "energy.tsv", "run-4/report.txt",
        "run-4/energy.tsv", "run-4/trace.tsv"})
    CHECK(slurp(out_a / artifact) == slurp(out_b / artifact));
}

TEST_CASE("unknown config keys are rejected by name with exit 2") {
  fs::path config = kTmp / "bad.cfg";
  spit(config, "[problem]\nsource = generator\nturbo = on\n");
  CommandResult r = run_cli("solve --config " + config.string() + " --out " +
                            (kTmp / "bad_out").string());
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("turbo") != std::string::npos);
}

TEST_CASE("missing config files are a configuration error") {
  CommandResult r = run_cli("solve --config does_not_exist.cfg");
  CHECK(r.exit_code == 2);
}

TEST_CASE("costs reproduces the worked scalability row") {
  CommandResult r = run_cli("costs --n 100000 --episodes 1 --bytes-per-real 4 "
                            "--group-size 10 --msg-time 1e-6 --channels 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("1000000000000000") != std::string::npos);   // m N^3
  CHECK(r.out.find("100000000000") != std::string::npos);       // sequential
  CHECK(r.out.find("100000\n") != std::string::npos);           // 1e5 seconds
  CommandResult ten = run_cli("costs --n 100000 --channels 10");
  CHECK(ten.out.find("10000\n") != std::string::npos);          // 1e4 seconds

  CommandResult memory = run_cli("costs --n 1024001 --bytes-per-real 4");
  CHECK(memory.out.find("8192000") != std::string::npos);

  CommandResult degenerate = run_cli("costs --n 1");
  CHECK(degenerate.exit_code == 0);
  CHECK(degenerate.out.find("memory_per_mote_bytes\t0") != std::string::npos);
  CHECK(degenerate.out.find("message_complexity\t1") != std::string::npos);
}

TEST_CASE("non-numeric cost inputs exit 2") {
  CommandResult r = run_cli("costs --n banana");
  CHECK(r.exit_code == 2);
}

TEST_CASE("verify passes on a small corpus") {
  CommandResult r = run_cli("verify --max-n 4");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS energy_ipds_equivalence") != std::string::npos);
  CHECK(r.out.find("PASS flip_bound") != std::string::npos);
  CHECK(r.out.find("PASS distributed_centralized") != std::string::npos);
}

TEST_CASE("the corrupted negative control fails with a reproducer") {
  CommandResult r = run_cli("verify --max-n 3 --corrupt");
  CHECK(r.exit_code == 1);
  CHECK(r.out.find("FAIL energy_ipds_equivalence") != std::string::npos);
  CHECK(r.out.find("reproducer:") != std::string::npos);
}

TEST_CASE("corpus caps are enforced") {
  CommandResult r = run_cli("verify --max-n 7");
  CHECK(r.exit_code == 2);
}

TEST_CASE("an empty corpus passes with a warning") {
  CommandResult r = run_cli("verify --max-n 0 --families ''");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("warning") != std::string::npos);
  CHECK(r.out.find("0 checks") != std::string::npos);
}

TEST_CASE("config help covers the whole schema") {
  CommandResult r = run_cli("solve --help-config");
  CHECK(r.exit_code == 0);
  for (const wpn::ConfigEntry& entry : wpn::config_schema()) {
    CHECK(r.out.find("[" + std::string(entry.section) + "]") != std::string::npos);
    CHECK(r.out.find(std::string(entry.key) + " = " + entry.def) !=
          std::string::npos);
  }
}

TEST_CASE("seed flag overrides the config seed list") {
  fs::path config = write_p3_config("seeded.cfg");
  fs::path out = kTmp / "seeded_out";
  CommandResult r = run_cli("solve --config " + config.string() + " --seed 11 --out " +
                            out.string());
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(out / "run-11" / "report.txt"));
  CHECK_FALSE(fs::exists(out / "run-4"));
}

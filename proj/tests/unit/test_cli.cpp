#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "qnet/cli.hpp"

namespace {

struct Result {
  int status;
  std::string out, err;
};

Result qnet_run(std::vector<std::string> args) {
  args.insert(args.begin(), "qnet");
  std::ostringstream out, err;
  const int status = qnet::cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<nlohmann::json> records(const std::string& jsonl) {
  std::vector<nlohmann::json> out;
  std::istringstream in(jsonl);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(nlohmann::json::parse(line));
  return out;
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("qnet_cli_test_" + name);
}

}  // namespace

TEST_CASE("same seed, same bytes") {
  const auto a = qnet_run({"chsh", "--seed", "5", "--rounds", "2000"});
  const auto b = qnet_run({"chsh", "--seed", "5", "--rounds", "2000"});
  const auto c = qnet_run({"chsh", "--seed", "6", "--rounds", "2000"});
  CHECK(a.status == qnet::cli::kExitOk);
  CHECK(a.out == b.out);
  CHECK(a.out != c.out);
  CHECK(a.err.find("seed: 5") != std::string::npos);
  const auto recs = records(a.out);
  REQUIRE(!recs.empty());
  CHECK(recs[0]["record"] == "run");
  CHECK(recs[0]["schema"] == "qnet-output/1");
  CHECK(recs[0]["seed"] == 5);
}

TEST_CASE("seed precedence: flag over environment over file") {
  const auto cfg = temp_file("seed.yaml");
  std::ofstream(cfg) << "seed: 11\n";
  CHECK(records(qnet_run({"e91", "-c", cfg.string(), "--rounds", "100"}).out)[0]["seed"] == 11);
  ::setenv("QNET_SEED", "77", 1);
  CHECK(records(qnet_run({"e91", "-c", cfg.string(), "--rounds", "100"}).out)[0]["seed"] == 77);
  CHECK(records(qnet_run({"e91", "-c", cfg.string(), "--seed", "3", "--rounds", "100"}).out)[0]["seed"] == 3);
  ::unsetenv("QNET_SEED");
  std::filesystem::remove(cfg);
}

TEST_CASE("effective configuration round-trips") {
  const auto first = qnet_run({"bb84", "--seed", "9", "--n", "64", "--eve", "intercept_resend", "--dry-run"});
  REQUIRE(first.status == 0);
  CHECK(first.out.find("eve: intercept_resend") != std::string::npos);
  const auto cfg = temp_file("effective.yaml");
  std::ofstream(cfg) << first.out;
  const auto second = qnet_run({"bb84", "-c", cfg.string(), "--dry-run"});
  CHECK(second.out == first.out);
  CHECK(qnet_run({"bb84", "-c", cfg.string()}).out ==
        qnet_run({"bb84", "--seed", "9", "--n", "64", "--eve", "intercept_resend"}).out);
  std::filesystem::remove(cfg);
}

TEST_CASE("configuration errors exit with 2") {
  auto r = qnet_run({"chsh", "--set", "chsh.bogus=1"});
  CHECK(r.status == qnet::cli::kExitConfigError);
  CHECK(r.err.find("chsh.bogus") != std::string::npos);
  CHECK(qnet_run({"chsh", "--set", "chsh.rounds=many"}).status == 2);
  CHECK(qnet_run({"optics", "poisson", "--mean", "-1"}).status == 2);
  CHECK(qnet_run({"nosuchcommand"}).status == 2);
  CHECK(qnet_run({"chsh", "--set", "novalue"}).status == 2);

  const auto cfg = temp_file("bad.yaml");
  std::ofstream(cfg) << "chsh:\n  rounds: 10\n  extra: [1, 2\n";
  r = qnet_run({"chsh", "-c", cfg.string()});
  CHECK(r.status == 2);
  CHECK(r.err.find(cfg.string() + ":4:") != std::string::npos);
  std::filesystem::remove(cfg);
}

TEST_CASE("simulation failures exit with 1 and keep partial output") {
  const auto r = qnet_run({"link", "--length-km", "10", "--set", "link.raw_fidelity=0.5", "--threshold-fidelity", "0.9",
                           "--generations", "0", "--attempts", "2"});
  CHECK(r.status == qnet::cli::kExitSimulationFailure);
  const auto recs = records(r.out);
  REQUIRE(recs.size() >= 3);
  CHECK(recs[1]["record"] == "link");
  CHECK(recs.back()["record"] == "error");
  CHECK(recs.back()["code"] == "UnreachableThreshold");
}

TEST_CASE("csv and table output") {
  const auto csv = qnet_run({"optics", "poisson", "--mean", "0.1", "--format", "csv"});
  CHECK(csv.status == 0);
  CHECK(csv.out.find("record,schema,command,seed\n") == 0);
  CHECK(csv.out.find("\n\nrecord,mean,k,probability\n") != std::string::npos);
  const auto table = qnet_run({"optics", "snell", "--ni", "1.5", "--nr", "1", "--set", "optics.theta_deg=60",
                               "--format", "table"});
  CHECK(table.out.find("true") != std::string::npos);
}

TEST_CASE("output file") {
  const auto path = temp_file("out.jsonl");
  const auto r = qnet_run({"optics", "dispersion", "--nf", "1.5", "--nc", "1.489", "-o", path.string()});
  CHECK(r.status == 0);
  CHECK(r.out.empty());
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  const auto recs = records(ss.str());
  REQUIRE(recs.size() == 2);
  CHECK(std::abs(recs[1]["dt_ns_per_km"].get<double>() - 36.95) < 0.1);
  std::filesystem::remove(path);
}

TEST_CASE("BB84 fixed rounds through the command line") {
  const std::vector<std::string> base{"bb84",       "--n",        "5",          "--set", "bb84.alice_bits=01101",
                                      "--set",      "bb84.alice_bases=11001", "--set",  "bb84.bob_bases=11100",
                                      "--test-fraction", "0"};
  auto args = base;
  const auto enc = records(qnet_run(args).out);
  CHECK(enc[1]["kept_positions"] == "1 2 4");
  CHECK(enc[1]["sifted_key_alice"] == "010");
  args.insert(args.end(), {"--key-bits", "eigenvalue"});
  CHECK(records(qnet_run(args).out)[1]["sifted_key_alice"] == "101");
}

TEST_CASE("reproduce table passes") {
  const auto r = qnet_run({"reproduce", "--seed", "1", "--rounds", "20000", "--format", "jsonl"});
  CHECK(r.status == 0);
  bool saw_detection = false;
  for (const auto& rec : records(r.out)) {
    if (rec["record"] != "reproduce") continue;
    CHECK_MESSAGE(rec["status"] == "PASS", rec.dump());
    saw_detection = saw_detection || rec["item"].get<std::string>().find("P(25) detection") != std::string::npos;
  }
  CHECK(saw_detection);
}

TEST_CASE("shipped example scenarios are valid") {
  int seen = 0;
  for (const auto& entry : std::filesystem::directory_iterator(QNET_EXAMPLES_DIR)) {
    if (entry.path().extension() != ".yaml") continue;
    std::ifstream in(entry.path());
    std::string command;
    for (std::string line; std::getline(in, line);) {
      const auto colon = line.find(':');
      if (line.empty() || line[0] == ' ' || line[0] == '#' || colon == std::string::npos) continue;
      const auto key = line.substr(0, colon);
      if (key != "seed" && key != "output") command = key;
    }
    INFO(entry.path().string());
    REQUIRE(!command.empty());
    CHECK(qnet_run({command, "-c", entry.path().string(), "--dry-run"}).status == 0);
    ++seen;
  }
  CHECK(seen >= 10);
}

// Copyright 2026 The ctxrec Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <doctest.h>
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>

#include "ctxrec/features.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using ctxrec::testing::read_file;
using ctxrec::testing::TempDir;

namespace {

struct Run {
  int code = -1;
  std::string output;
};

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) out += c == '\'' ? std::string("'\\''") : std::string(1, c);
  return out + "'";
}

Run run(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + " " + quote(CTXREC_CLI_PATH) + " " + args + " 2>&1";
  Run r;
  FILE* p = popen(cmd.c_str(), "r");
  REQUIRE(p != nullptr);
  char buf[4096];
  std::size_t n;
  while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.output.append(buf, n);
  const int status = pclose(p);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

// Feature tables, platforms and a 3-fold partition for six users.
struct Workspace {
  TempDir dir{"cli"};
  std::string features, partition;

  Workspace() {
    const auto d = ctxrec::testing::synthetic_dataset({.users = 6, .per_user = 30, .seed = 21});
    ctxrec::testing::write_feature_dir(dir / "features", d);
    ctxrec::testing::write_platforms(dir / "platforms.txt", d);
    features = (dir / "features").string();
    partition = (dir / "partition.txt").string();
    const auto r = run("partition --platforms " + quote((dir / "platforms.txt").string()) +
                       " --folds 3 --seed 4 --out " + quote(partition));
    REQUIRE_MESSAGE(r.code == 0, r.output);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

std::size_t count(const std::string& s, char c) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), c)); }

}  // namespace

TEST_CASE("help and usage errors") {
  CHECK(run("--help").code == 0);
  CHECK(run("evaluate --help").code == 0);
  CHECK(run("--version").code == 0);
  CHECK(run("frobnicate").code == 3);
  CHECK(run("evaluate --no-such-flag").code == 3);
}

TEST_CASE("extract writes 175 feature columns per user") {
  TempDir dir("cli-extract");
  for (int i = 0; i < 3; ++i)
    ctxrec::testing::write_raw_session(dir / "raw", "alice", 1440000000 + 60 * i, 40 + i, i != 1);
  ctxrec::testing::write_raw_session(dir / "raw", "bob", 1440000000, 50, false);
  const auto raw = quote((dir / "raw").string()), out = quote((dir / "out").string());

  auto r = run("extract --input " + raw + " --out " + out);
  CHECK(r.code == 3);
  CHECK(r.output.find("--utc-offset") != std::string::npos);
  CHECK(run("extract --input " + raw + " --out " + out + " --utc-offset 15").code == 3);

  r = run("extract --input " + raw + " --out " + out + " --utc-offset -7");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto csv = read_file(dir / "out" / "alice.features_labels.csv");
  const auto header = csv.substr(0, csv.find('\n'));
  std::size_t feature_columns = 0;
  std::istringstream cells(header);
  for (std::string c; std::getline(cells, c, ',');)
    for (auto s : ctxrec::kAllSensors)
      for (const auto& n : ctxrec::feature_column_names(s)) feature_columns += c == n;
  CHECK(feature_columns == 175);
  CHECK(header.find("label:SITTING") != std::string::npos);
  CHECK(count(csv, '\n') == 4);
  CHECK(fs::exists(dir / "out" / "bob.features_labels.csv"));
  const auto manifest = nlohmann::json::parse(read_file(dir / "out" / "extract_manifest.json"));
  CHECK(manifest["command"] == "extract");
  CHECK(manifest["config"]["utc-offset"] == "-7");

  TempDir empty("cli-empty");
  r = run("extract --input " + quote(empty.path().string()) + " --out " + out + " --utc-offset 0");
  CHECK(r.code == 2);
  CHECK(r.output.find("no sessions found") != std::string::npos);
}

TEST_CASE("evaluate writes tables and a manifest; reruns are byte-identical") {
  Workspace w;
  const std::string common = "evaluate --features-dir " + quote(w.features) + " --partition " + quote(w.partition) +
                             " --labels SITTING,AT_HOME --systems acc,loc,ef,lfa,lfl --seed 9";
  auto r = run(common + " --jobs 2 --out " + quote(w.path("eval1")) + " --markdown");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(r.output.find("| SITTING") != std::string::npos);
  for (auto name : {"results.csv", "results.md", "costs.csv", "lfl_weights.csv", "manifest.json"})
    CHECK(fs::exists(fs::path(w.path("eval1")) / name));
  const auto results = read_file(fs::path(w.path("eval1")) / "results.csv");
  CHECK(results.rfind("label,n_e,n_s,p99,acc,loc,ef,lfa,lfl\n", 0) == 0);
  CHECK(count(results, '\n') == 5);

  r = run(common + " --jobs 1 --out " + quote(w.path("eval2")));
  REQUIRE(r.code == 0);
  for (auto name : {"results.csv", "costs.csv", "lfl_weights.csv"})
    CHECK(read_file(fs::path(w.path("eval2")) / name) == read_file(fs::path(w.path("eval1")) / name));

  r = run("rerun " + quote(w.path("eval1") + "/manifest.json") + " --out " + quote(w.path("eval3")));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  for (auto name : {"results.csv", "costs.csv", "lfl_weights.csv"})
    CHECK(read_file(fs::path(w.path("eval3")) / name) == read_file(fs::path(w.path("eval1")) / name));
  const auto manifest = nlohmann::json::parse(read_file(fs::path(w.path("eval1")) / "manifest.json"));
  CHECK(manifest["config"]["seed"] == "9");
  CHECK(manifest["config"]["labels"] == "SITTING,AT_HOME");
  CHECK(manifest["run"].contains("dataset_hash"));
}

TEST_CASE("labels from a file and options from the environment") {
  Workspace w;
  {
    std::ofstream f(w.path("labels.txt"));
    f << "# evaluated labels\nSitting\n\nRUNNING\n";
  }
  const auto r = run("evaluate --features-dir " + quote(w.features) + " --mode loo --labels " +
                         quote(w.path("labels.txt")) + " --out " + quote(w.path("env")),
                     "CTXREC_SYSTEMS=acc,wacc CTXREC_SEED=13");
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto manifest = nlohmann::json::parse(read_file(fs::path(w.path("env")) / "manifest.json"));
  CHECK(manifest["config"]["systems"] == "acc,wacc");
  CHECK(manifest["config"]["seed"] == "13");
  const auto results = read_file(fs::path(w.path("env")) / "results.csv");
  CHECK(results.rfind("label,n_e,n_s,p99,acc,wacc\nSITTING,", 0) == 0);
  CHECK(results.find("\nRUNNING,") != std::string::npos);
}

TEST_CASE("configuration errors name the offending value") {
  Workspace w;
  const std::string base = "--features-dir " + quote(w.features) + " --partition " + quote(w.partition);
  auto r = run("evaluate " + base + " --labels SITTING,FLYING --out " + quote(w.path("x")));
  CHECK(r.code == 3);
  CHECK(r.output.find("FLYING") != std::string::npos);
  r = run("evaluate " + base + " --labels SITTING,SITTING --out " + quote(w.path("x")));
  CHECK(r.code == 3);
  r = run("evaluate " + base + " --labels SITTING --systems acc,sonar --out " + quote(w.path("x")));
  CHECK(r.code == 3);
  CHECK(r.output.find("sonar") != std::string::npos);
  r = run("evaluate --features-dir " + quote(w.features) + " --labels SITTING --out " + quote(w.path("x")));
  CHECK(r.code == 3);
  CHECK(r.output.find("--partition") != std::string::npos);
  r = run("evaluate " + base + " --labels SITTING --seed minus-one --out " + quote(w.path("x")));
  CHECK(r.code == 3);

  r = run("personalize " + base + " --user ghost --labels SITTING --out " + quote(w.path("p")));
  CHECK(r.code == 3);
  CHECK(r.output.find("ghost") != std::string::npos);

  // Unreadable input is an input error.
  r = run("evaluate --features-dir " + quote(w.path("nowhere")) + " --partition " + quote(w.partition) +
          " --labels SITTING --out " + quote(w.path("x")));
  CHECK(r.code == 2);
}

TEST_CASE("a user with a single example cannot be personalized") {
  Workspace w;
  {
    // Copy one row of user00 as a new user.
    const auto csv = read_file(fs::path(w.features) / "user00.features_labels.csv");
    const auto first = csv.find('\n'), second = csv.find('\n', first + 1);
    std::ofstream(fs::path(w.features) / "solo.features_labels.csv") << csv.substr(0, second + 1);
  }
  const auto r = run("personalize --features-dir " + quote(w.features) + " --user solo --labels SITTING --out " +
                     quote(w.path("p")));
  CHECK(r.code == 3);
  CHECK(r.output.find("solo") != std::string::npos);
}

TEST_CASE("personalize and confusion outputs are reproducible") {
  Workspace w;
  const std::string base = "--features-dir " + quote(w.features) + " --partition " + quote(w.partition);
  auto r = run("personalize " + base + " --user user02 --labels SITTING,AT_HOME --threshold 5 --out " +
               quote(w.path("p1")));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  r = run("rerun " + quote(w.path("p1") + "/manifest.json") + " --out " + quote(w.path("p2")));
  REQUIRE(r.code == 0);
  const auto table = read_file(fs::path(w.path("p1")) / "personalization.csv");
  CHECK(table == read_file(fs::path(w.path("p2")) / "personalization.csv"));
  CHECK(table.find("average_n_user>=5") != std::string::npos);

  r = run("confusion " + base + " --classes SITTING,RUNNING --sensors acc,wacc --out " + quote(w.path("c1")));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  const auto confusion = read_file(fs::path(w.path("c1")) / "confusion.csv");
  CHECK(confusion.rfind("truth,n,SITTING,RUNNING\n", 0) == 0);
}

TEST_CASE("train writes a model file") {
  Workspace w;
  const auto r = run("train --features-dir " + quote(w.features) + " --label SITTING --system lfa --out " +
                     quote(w.path("m.txt")));
  REQUIRE_MESSAGE(r.code == 0, r.output);
  CHECK(read_file(w.path("m.txt")).rfind("ctxrec-model 1\nkind lfa\n", 0) == 0);
  CHECK(run("train --features-dir " + quote(w.features) + " --label SITTING --cost 0 --out " +
            quote(w.path("m2.txt")))
            .code == 3);
}

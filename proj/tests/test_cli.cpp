/*
 * Copyright (c) 2026 The ffd-screen Authors. All Rights Reserved
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

namespace fs = std::filesystem;

namespace {

const fs::path kDir = fs::temp_directory_path() / "ffd_cli_test";

int run(const std::string &args) {
  const std::string cmd = std::string(FFD_CLI_PATH) + " " + args + " >" + (kDir / "stdout.txt").string() + " 2>" +
                          (kDir / "stderr.txt").string();
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string err() { return slurp(kDir / "stderr.txt"); }

std::string d(const std::string &rel) { return (kDir / rel).string(); }

struct Setup {
  Setup() {
    fs::remove_all(kDir);
    fs::create_directories(kDir);
  }
};

} // namespace

TEST_CASE("usage errors exit 2") {
  Setup s;
  CHECK(run("") == 2);
  CHECK(run("frobnicate") == 2);
  CHECK(run("select --manifest x.json --out y.csv --strategy fastest") == 2);
  CHECK(run("select --manifest x.json --out y.csv --k 0") == 2);
  CHECK(run("fuse --scores a --manifest b --out c --threshold 0.3 --at-eer d") == 2);
  CHECK(run("fuse --scores a --manifest b --out c --threshold 1.5") == 2);
  CHECK(run("score --manifest a --out b") == 2);
  CHECK(run("score --manifest a --out b --spec s") == 2);
  CHECK(run("synth --kind weights --out w.ffdw") == 2);
  CHECK(run("eval --fused a --out b --format pdf") == 2);
  CHECK(run("--help") == 0);
}

TEST_CASE("failures exit 1 and name the file") {
  Setup s;
  CHECK(run("validate " + d("missing.json")) == 1);
  CHECK(err().find("missing.json") != std::string::npos);
  CHECK(run("weights-info " + d("nothing.ffdw")) == 1);
  CHECK(err().find("nothing.ffdw") != std::string::npos);
}

TEST_CASE("split violation exits 1 naming the subject") {
  Setup s;
  std::ofstream(d("m.json")) << R"({"version":1,"entries":[
    {"sequence_id":"a","subject_id":"S01","condition":"control","device":"d","split":"train","frame_paths":["x.png"]},
    {"sequence_id":"b","subject_id":"S01","condition":"drug","device":"d","split":"validation","frame_paths":["y.png"]}]})";
  CHECK(run("validate " + d("m.json")) == 1);
  CHECK(err().find("S01") != std::string::npos);
}

TEST_CASE("scores pipeline through the cli") {
  Setup s;
  REQUIRE(run("synth --kind scores --out " + d("syn") + " --count 400 --seed 5") == 0);
  CHECK(run("validate " + d("syn/manifest.json")) == 0);
  REQUIRE(run("score --manifest " + d("syn/manifest.json") + " --playback " + d("syn/scores.csv") + " --out " +
              d("scores.csv")) == 0);
  REQUIRE(run("fuse --policy avg --k 1 --scores " + d("scores.csv") + " --manifest " + d("syn/manifest.json") +
              " --out " + d("fused.csv")) == 0);
  // Each fused row carries the input probabilities unchanged.
  std::istringstream in(slurp(d("scores.csv"))), fused(slurp(d("fused.csv")));
  std::string a, b;
  std::getline(in, a);
  std::getline(fused, b);
  while (std::getline(in, a) && std::getline(fused, b)) {
    const auto seq_a = a.substr(0, a.find(','));
    const auto probs_a = a.substr(a.find(',', a.find(',') + 1) + 1);
    std::string probs_b = b;
    for (int i = 0; i < 3; ++i)
      probs_b = probs_b.substr(probs_b.find(',') + 1);
    CHECK(b.rfind(seq_a + ",", 0) == 0);
    CHECK(probs_b.rfind(probs_a + ",", 0) == 0);
  }
  REQUIRE(run("eval --fused " + d("fused.csv") + " --out " + d("run") + " --format json,md") == 0);
  CHECK(fs::exists(d("run/report.json")));
  CHECK_FALSE(fs::exists(d("run/det.svg")));
  REQUIRE(run("fuse --scores " + d("scores.csv") + " --manifest " + d("syn/manifest.json") + " --out " +
              d("f2.csv") + " --at-eer " + d("fused.csv")) == 0);
  CHECK(run("report " + d("run")) == 0);
  CHECK(fs::exists(d("run/index.md")));
}

TEST_CASE("perfectly separated scores give zero eer") {
  Setup s;
  REQUIRE(run("synth --kind scores --out " + d("sep") + " --count 200 --sd 0 --control-mean 0.2 --unfit-mean 0.8") ==
          0);
  REQUIRE(run("fuse --scores " + d("sep/scores.csv") + " --manifest " + d("sep/manifest.json") + " --out " +
              d("f.csv")) == 0);
  REQUIRE(run("eval --fused " + d("f.csv") + " --out " + d("r")) == 0);
  CHECK(slurp(d("r/report.json")).find("\"eer\": 0.0") != std::string::npos);
}

TEST_CASE("frames and weights through the cli") {
  Setup s;
  REQUIRE(run("synth --kind frames --out " + d("fr") + " --sequences 3 --frames 2 --size 32 --image-format pgm") == 0);
  REQUIRE(run("preprocess --manifest " + d("fr/manifest.json") + " --out " + d("pp") + " --size 24 --grid 2") == 0);
  REQUIRE(run("select --manifest " + d("pp/manifest.json") + " --out " + d("sel.csv") + " --strategy seq --k 1") ==
          0);
  CHECK(slurp(d("sel.csv")).find("seq0000,0,0") != std::string::npos);
  std::ofstream(d("spec.json")) << R"({"alpha":1.0,"input_size":16,"input_channels":3,"layers":[
    {"type":"conv","out_ch":8,"kernel":3,"stride":2},
    {"type":"head","pooling":"global_average","dense_out":4}]})";
  REQUIRE(run("synth --kind weights --spec " + d("spec.json") + " --out " + d("w.ffdw") + " --seed 1") == 0);
  REQUIRE(run("weights-info " + d("w.ffdw") + " --spec " + d("spec.json") + " --out " + d("info.json")) == 0);
  CHECK(slurp(d("info.json")).find("\"ok\": true") != std::string::npos);
  REQUIRE(run("score --manifest " + d("pp/manifest.json") + " --spec " + d("spec.json") + " --weights " +
              d("w.ffdw") + " --selection " + d("sel.csv") + " --out " + d("cnn.csv") + " --threads 2") == 0);
  CHECK(run("score --manifest " + d("pp/manifest.json") + " --spec " + d("spec.json") + " --weights " +
            d("spec.json") + " --out " + d("bad.csv")) == 1);
  fs::remove_all(kDir);
}

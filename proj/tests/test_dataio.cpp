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

#include <filesystem>
#include <random>
#include <string>

#include "ffd/dataio.hpp"
#include "ffd/error.hpp"

using namespace ffd;
using namespace ffd::dataio;

namespace {

std::string entry_json(const std::string &seq, const std::string &subj, const std::string &split,
                       const std::string &cond = "control") {
  return R"({"sequence_id":")" + seq + R"(","subject_id":")" + subj + R"(","condition":")" + cond +
         R"(","device":"cam","split":")" + split + R"(","frame_paths":["a.png","b.png"]})";
}

std::string manifest_json(const std::vector<std::string> &entries) {
  std::string s = R"({"version":1,"entries":[)";
  for (std::size_t i = 0; i < entries.size(); ++i)
    s += (i ? "," : "") + entries[i];
  return s + "]}";
}

} // namespace

TEST_CASE("class weights from the training counts") {
  ClassCounts c;
  c[Condition::Control] = 21449;
  c[Condition::Alcohol] = 24325;
  c[Condition::Drug] = 8653;
  c[Condition::Sleepiness] = 8568;
  CHECK(c.total() == 62995);
  const auto w = compute_class_weights(c);
  // n / (4 n_i) evaluated independently.
  for (Condition k : kAllConditions)
    CHECK(w[k] == doctest::Approx(62995.0 / (4.0 * static_cast<double>(c[k]))).epsilon(1e-15));
  CHECK(w[Condition::Control] == doctest::Approx(0.7342).epsilon(5e-5));
  CHECK(w[Condition::Alcohol] == doctest::Approx(0.6474).epsilon(5e-5));
  CHECK(w[Condition::Drug] == doctest::Approx(1.820).epsilon(5e-4));
  CHECK(w[Condition::Sleepiness] == doctest::Approx(1.838).epsilon(5e-4));
}

TEST_CASE("class weights reject an empty class") {
  ClassCounts c;
  c[Condition::Control] = 10;
  CHECK_THROWS_AS(compute_class_weights(c), Error);
}

TEST_CASE("manifest round trip") {
  const auto m = parse_manifest(manifest_json({entry_json("s1", "A", "train"), entry_json("s2", "B", "test", "drug")}));
  REQUIRE(m.entries.size() == 2);
  CHECK(m.entries[1].condition == Condition::Drug);
  CHECK(m.entries[1].split == Split::Test);
  const auto again = parse_manifest(manifest_to_json(m));
  REQUIRE(again.entries.size() == 2);
  CHECK(again.entries[0].sequence_id == "s1");
  CHECK(again.entries[0].frame_paths == m.entries[0].frame_paths);
  CHECK(manifest_to_json(again) == manifest_to_json(m));
}

TEST_CASE("manifest errors name the entry") {
  try {
    parse_manifest(manifest_json({entry_json("s1", "A", "train"), entry_json("s9", "B", "nowhere")}));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Parse);
    CHECK(std::string(e.what()).find("s9") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_manifest("{"), Error);
  CHECK_THROWS_AS(parse_manifest(R"({"version":2,"entries":[]})"), Error);
  try {
    parse_manifest(manifest_json({entry_json("s1", "A", "train"), entry_json("s1", "B", "test")}));
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Validation);
    CHECK(std::string(e.what()).find("s1") != std::string::npos);
  }
}

TEST_CASE("split violations name the subject") {
  const auto m = parse_manifest(manifest_json({entry_json("s1", "A", "train"), entry_json("s2", "B", "train"),
                                               entry_json("s3", "A", "test"), entry_json("s4", "B", "train")}));
  const auto v = validate_splits(m);
  REQUIRE(v.size() == 1);
  CHECK(v[0].subject_id == "A");
  CHECK(v[0].splits == std::set<Split>{Split::Train, Split::Test});
}

TEST_CASE("split check matches a brute-force pairwise oracle") {
  std::mt19937_64 gen(11);
  for (int trial = 0; trial < 50; ++trial) {
    DatasetManifest m;
    const int n = 1 + static_cast<int>(gen() % 30);
    for (int i = 0; i < n; ++i) {
      SequenceEntry e;
      e.sequence_id = "s" + std::to_string(i);
      e.subject_id = "p" + std::to_string(gen() % 8);
      e.split = static_cast<Split>(gen() % 3);
      e.frame_paths = {"x.png"};
      m.entries.push_back(e);
    }
    std::set<std::string> bad;
    for (const auto &a : m.entries)
      for (const auto &b : m.entries)
        if (a.subject_id == b.subject_id && a.split != b.split)
          bad.insert(a.subject_id);
    std::set<std::string> got;
    for (const auto &v : validate_splits(m))
      got.insert(v.subject_id);
    CHECK(got == bad);
  }
}

TEST_CASE("capture order follows timestamps then position") {
  SequenceEntry e;
  e.frame_paths = {"a", "b", "c", "d"};
  CHECK(capture_order(e) == std::vector<std::size_t>{0, 1, 2, 3});
  e.frame_timestamps_ms = std::vector<std::int64_t>{30, 10, 30, 0};
  CHECK(capture_order(e) == std::vector<std::size_t>{3, 1, 0, 2});
}

TEST_CASE("count frames per split") {
  const auto m = parse_manifest(manifest_json({entry_json("s1", "A", "train", "alcohol"),
                                               entry_json("s2", "B", "train"), entry_json("s3", "C", "test")}));
  const auto c = count_frames(m, Split::Train);
  CHECK(c[Condition::Alcohol] == 2);
  CHECK(c[Condition::Control] == 2);
  CHECK(c.total() == 4);
}

TEST_CASE("score csv round trip is exact") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<FrameScore> rows;
  for (int i = 0; i < 200; ++i) {
    double a = u(gen), b = u(gen), c = u(gen), d = u(gen);
    const double s = a + b + c + d;
    rows.push_back({"seq" + std::to_string(i % 7), i, ClassScores::from_csv_order(a / s, b / s, c / s, d / s)});
  }
  const auto back = parse_score_csv(format_score_csv(rows));
  REQUIRE(back.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(back[i].sequence_id == rows[i].sequence_id);
    CHECK(back[i].frame_index == rows[i].frame_index);
    CHECK(back[i].scores == rows[i].scores);
  }
}

TEST_CASE("score csv column order") {
  const auto rows = parse_score_csv("sequence_id,frame_index,p_control,p_alcohol,p_drug,p_sleep\nq,3,0.1,0.2,0.3,0.4\n");
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].scores.control() == 0.1);
  CHECK(rows[0].scores.alcohol() == 0.2);
  CHECK(rows[0].scores.drug() == 0.3);
  CHECK(rows[0].scores.sleep() == 0.4);
}

TEST_CASE("score csv rejects bad rows with location") {
  const std::string h = "sequence_id,frame_index,p_control,p_alcohol,p_drug,p_sleep\n";
  try {
    parse_score_csv(h + "q,0,0.5,0.5,0.5,0.5\n", "x.csv");
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Validation);
    const std::string msg = e.what();
    CHECK(msg.find("x.csv") != std::string::npos);
    CHECK(msg.find("'q'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_score_csv("a,b\n"), Error);
  CHECK_THROWS_AS(parse_score_csv(h + "q,0,0.5,0.5\n"), Error);
  CHECK_THROWS_AS(parse_score_csv(h + "q,zz,0.25,0.25,0.25,0.25\n"), Error);
  CHECK(parse_score_csv(h + "q,0,0.25,0.25,0.25,0.25\r\n").size() == 1);
}

TEST_CASE("format_real is shortest round trip") {
  CHECK(format_real(0.0) == "0");
  CHECK(format_real(0.5) == "0.5");
  CHECK(format_real(0.1) == "0.1");
  const double v = 1.0 / 3.0;
  CHECK(std::stod(format_real(v)) == v);
}

TEST_CASE("load_manifest reports the path") {
  const auto dir = std::filesystem::temp_directory_path() / "ffd_dataio_test";
  std::filesystem::create_directories(dir);
  write_text_file(dir / "m.json", manifest_json({entry_json("s1", "A", "train")}));
  const auto m = load_manifest(dir / "m.json");
  CHECK(m.resolve("a.png") == dir / "a.png");
  try {
    load_manifest(dir / "missing.json");
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::Io);
    CHECK(std::string(e.what()).find("missing.json") != std::string::npos);
  }
  std::filesystem::remove_all(dir);
}

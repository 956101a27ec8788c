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

#include <cstring>
#include <filesystem>
#include <string>
#include <vector>

#include "ffd/ffd.h"

namespace fs = std::filesystem;

TEST_CASE("status strings and last error") {
  CHECK(std::string(ffd_status_string(FFD_OK)) == "ok");
  CHECK(std::string(ffd_status_string(FFD_ERR_MISSING_SCORE)) == "missing score");
  ffd_frame *f = nullptr;
  CHECK(ffd_frame_read("/nonexistent/x.png", &f) == FFD_ERR_IO);
  CHECK(f == nullptr);
  CHECK(std::string(ffd_last_error()).find("x.png") != std::string::npos);
  CHECK(ffd_frame_create(0, 3, nullptr, &f) == FFD_ERR_INVALID_ARGUMENT);
  CHECK(ffd_frame_create(2, 2, nullptr, nullptr) == FFD_ERR_INVALID_ARGUMENT);
  CHECK(ffd_frame_create(2, 2, nullptr, &f) == FFD_OK);
  CHECK(std::string(ffd_last_error()).empty());
  ffd_frame_free(f);
}

TEST_CASE("frame operations") {
  const std::vector<uint8_t> px{0, 255, 0, 255};
  ffd_frame *f = nullptr;
  REQUIRE(ffd_frame_create(2, 2, px.data(), &f) == FFD_OK);
  CHECK(ffd_frame_width(f) == 2);
  ffd_frame *r = nullptr;
  REQUIRE(ffd_frame_resize(f, 2, 1, &r) == FFD_OK);
  CHECK(ffd_frame_pixels(r)[0] == 0);
  CHECK(ffd_frame_pixels(r)[1] == 255);
  double raw = -1, norm = -1;
  ffd_frame *flat = nullptr;
  REQUIRE(ffd_frame_create(20, 20, nullptr, &flat) == FFD_OK);
  CHECK(ffd_frame_sharpness(flat, 1.4, &raw, &norm) == FFD_OK);
  CHECK(raw == 0.0);
  ffd_frame *c = nullptr;
  CHECK(ffd_frame_clahe(flat, 2, 2, 2.0, &c) == FFD_OK);
  CHECK(ffd_frame_clahe(f, 8, 8, 2.0, &c) != FFD_OK);
  ffd_frame_free(c);
  ffd_frame_free(flat);
  ffd_frame_free(r);
  ffd_frame_free(f);
  ffd_frame_free(nullptr);
}

TEST_CASE("fusion through the c api") {
  const double rows[8] = {0.1, 0.7, 0.1, 0.1, 0.7, 0.1, 0.1, 0.1}; // code order
  double fused[4];
  REQUIRE(ffd_fuse_scores(rows, 2, FFD_FUSE_MAX, fused) == FFD_OK);
  CHECK(fused[FFD_ALCOHOL] == doctest::Approx(0.4375));
  CHECK(fused[FFD_CONTROL] == doctest::Approx(0.4375));
  double u = 0;
  CHECK(ffd_unfit_score(fused, FFD_GROUP_MASS_SUM, &u) == FFD_OK);
  CHECK(u == doctest::Approx(0.5625));
  CHECK(ffd_fuse_scores(rows, 0, FFD_FUSE_AVERAGE, fused) == FFD_ERR_EMPTY_INPUT);
  const double bad[4] = {0.5, 0.5, 0.5, 0.5};
  CHECK(ffd_fuse_scores(bad, 1, FFD_FUSE_AVERAGE, fused) != FFD_OK);
}

TEST_CASE("stages through the c api") {
  const fs::path dir = fs::temp_directory_path() / "ffd_capi_test";
  fs::remove_all(dir);
  ffd_synth_scores_options so;
  ffd_synth_scores_options_init(&so);
  so.count = 300;
  so.seed = 2;
  REQUIRE(ffd_synth_scores(dir.c_str(), &so) == FFD_OK);
  const std::string manifest = (dir / "manifest.json").string();
  int ok = 0;
  char *json = nullptr;
  REQUIRE(ffd_validate(manifest.c_str(), &ok, &json) == FFD_OK);
  CHECK(ok == 1);
  CHECK(std::string(json).find("\"entries\": 300") != std::string::npos);
  ffd_string_free(json);

  ffd_score_options sc;
  ffd_score_options_init(&sc);
  const std::string scores = (dir / "scores.csv").string();
  sc.playback = scores.c_str();
  REQUIRE(ffd_score(manifest.c_str(), (dir / "replay.csv").c_str(), &sc) == FFD_OK);

  ffd_fuse_options fo;
  ffd_fuse_options_init(&fo);
  REQUIRE(ffd_fuse((dir / "replay.csv").c_str(), manifest.c_str(), (dir / "fused.csv").c_str(), &fo) == FFD_OK);
  ffd_eval_summary s{};
  REQUIRE(ffd_evaluate((dir / "fused.csv").c_str(), dir.c_str(), nullptr, &s) == FFD_OK);
  CHECK(s.items == 300);
  CHECK(s.eer > 0.0);
  CHECK(s.eer < 0.5);
  size_t n = 0;
  CHECK(ffd_bundle_report(dir.c_str(), &n) == FFD_OK);
  CHECK(n >= 6);

  CHECK(ffd_fuse((dir / "nope.csv").c_str(), manifest.c_str(), (dir / "x.csv").c_str(), &fo) == FFD_ERR_IO);
  CHECK(std::string(ffd_last_error()).find("nope.csv") != std::string::npos);
  ffd_score_options none;
  ffd_score_options_init(&none);
  CHECK(ffd_score(manifest.c_str(), (dir / "y.csv").c_str(), &none) == FFD_ERR_INVALID_ARGUMENT);
  fs::remove_all(dir);
}

TEST_CASE("split violations come back as validation errors") {
  const fs::path dir = fs::temp_directory_path() / "ffd_capi_split";
  fs::create_directories(dir);
  const std::string m = (dir / "m.json").string();
  FILE *f = std::fopen(m.c_str(), "w");
  REQUIRE(f);
  std::fputs(R"({"version":1,"entries":[
    {"sequence_id":"a","subject_id":"S01","condition":"control","device":"d","split":"train","frame_paths":["x.png"]},
    {"sequence_id":"b","subject_id":"S01","condition":"drug","device":"d","split":"test","frame_paths":["y.png"]}]})",
             f);
  std::fclose(f);
  int ok = 1;
  char *json = nullptr;
  CHECK(ffd_validate(m.c_str(), &ok, &json) == FFD_ERR_VALIDATION);
  CHECK(ok == 0);
  REQUIRE(json);
  CHECK(std::string(json).find("S01") != std::string::npos);
  CHECK(std::string(ffd_last_error()).find("S01") != std::string::npos);
  ffd_string_free(json);
  fs::remove_all(dir);
}

TEST_CASE("network through the c api") {
  const fs::path dir = fs::temp_directory_path() / "ffd_capi_net";
  fs::create_directories(dir);
  const std::string spec = (dir / "spec.json").string();
  FILE *f = std::fopen(spec.c_str(), "w");
  REQUIRE(f);
  std::fputs(R"({"alpha":1.0,"input_size":16,"input_channels":3,"layers":[
    {"type":"conv","out_ch":8,"kernel":3,"stride":2},
    {"type":"inverted_residual","t":1,"out_ch":8,"stride":1,"repeat":1},
    {"type":"head","pooling":"global_average","dense_out":4}]})",
             f);
  std::fclose(f);
  const std::string w = (dir / "w.ffdw").string();
  REQUIRE(ffd_synth_weights(spec.c_str(), w.c_str(), 3) == FFD_OK);
  ffd_network *net = nullptr;
  REQUIRE(ffd_network_load(spec.c_str(), w.c_str(), &net) == FFD_OK);
  CHECK(ffd_network_input_size(net) == 16);
  ffd_frame *fr = nullptr;
  REQUIRE(ffd_frame_create(40, 30, nullptr, &fr) == FFD_OK);
  double p[4];
  REQUIRE(ffd_network_score_frame(net, fr, p) == FFD_OK);
  CHECK(p[0] + p[1] + p[2] + p[3] == doctest::Approx(1.0).epsilon(1e-9));
  char *info = nullptr;
  REQUIRE(ffd_weights_info(w.c_str(), nullptr, &info) == FFD_OK);
  CHECK(std::string(info).find("layer0/conv/kernel") != std::string::npos);
  ffd_string_free(info);
  CHECK(ffd_network_load(spec.c_str(), spec.c_str(), &net) == FFD_ERR_PARSE);
  ffd_frame_free(fr);
  ffd_network_free(net);
  char *def = nullptr;
  REQUIRE(ffd_default_network_spec(&def) == FFD_OK);
  CHECK(std::string(def).find("\"alpha\": 1.4") != std::string::npos);
  ffd_string_free(def);
  fs::remove_all(dir);
}

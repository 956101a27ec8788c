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

#include <algorithm>
#include <random>

#include "ffd/decision.hpp"
#include "ffd/error.hpp"

using namespace ffd;
using namespace ffd::decision;

namespace {

ClassScores csv(double c, double a, double d, double s) { return ClassScores::from_csv_order(c, a, d, s); }

ClassScores random_scores(std::mt19937_64 &g) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  ClassScores s;
  double sum = 0;
  for (auto &p : s.p)
    sum += p = u(g);
  for (auto &p : s.p)
    p /= sum;
  return s;
}

} // namespace

TEST_CASE("max fusion renormalizes the elementwise max") {
  // Control and alcohol frames in csv order (control, alcohol, drug, sleep).
  const std::vector<ClassScores> f{csv(0.7, 0.1, 0.1, 0.1), csv(0.1, 0.7, 0.1, 0.1)};
  const auto m = fuse(f, FusionPolicy::Max);
  CHECK(m.control() == doctest::Approx(0.4375).epsilon(1e-15));
  CHECK(m.alcohol() == doctest::Approx(0.4375).epsilon(1e-15));
  CHECK(m.drug() == doctest::Approx(0.0625).epsilon(1e-15));
  CHECK(m.sleep() == doctest::Approx(0.0625).epsilon(1e-15));
}

TEST_CASE("fusion identities") {
  std::mt19937_64 g(8);
  for (int i = 0; i < 200; ++i) {
    const auto s = random_scores(g);
    const std::vector<ClassScores> one{s};
    CHECK(fuse(one, FusionPolicy::Max) == s);
    CHECK(fuse(one, FusionPolicy::Average) == s);
    const std::vector<ClassScores> same(1 + i % 7, s);
    CHECK(fuse(same, FusionPolicy::Average) == s);
  }
  CHECK_THROWS_AS(fuse(std::vector<ClassScores>{}, FusionPolicy::Average), Error);
}

TEST_CASE("average fusion is permutation invariant") {
  std::mt19937_64 g(9);
  for (int i = 0; i < 100; ++i) {
    std::vector<ClassScores> f;
    for (int k = 0; k < 5; ++k)
      f.push_back(random_scores(g));
    const auto a = fuse(f, FusionPolicy::Average);
    std::shuffle(f.begin(), f.end(), g);
    CHECK(fuse(f, FusionPolicy::Average) == a);
    CHECK(a.valid());
  }
}

TEST_CASE("unfit score") {
  CHECK(unfit_score(csv(1, 0, 0, 0)) == 0.0);
  CHECK(unfit_score(csv(0, 1, 0, 0)) == 1.0);
  CHECK(unfit_score(csv(0.25, 0.25, 0.25, 0.25)) == 0.75);
  CHECK(unfit_score(csv(0.4, 0.3, 0.2, 0.1), UnfitGrouping::MaxClass) == doctest::Approx(0.3));
}

TEST_CASE("decide") {
  const std::vector<ClassScores> control(3, csv(1, 0, 0, 0));
  auto d = decide(control, FusionPolicy::Average, 0.5);
  CHECK(d.verdict == Verdict::Fit);
  CHECK(d.predicted_class == Condition::Control);
  const std::vector<ClassScores> drug(3, csv(0, 0, 1, 0));
  d = decide(drug, FusionPolicy::Max, 0.5);
  CHECK(d.verdict == Verdict::Unfit);
  CHECK(d.predicted_class == Condition::Drug);

  const std::vector<ClassScores> mixed{csv(0.6, 0.2, 0.1, 0.1), csv(0.3, 0.5, 0.1, 0.1), csv(0.5, 0.1, 0.3, 0.1)};
  for (auto policy : {FusionPolicy::Max, FusionPolicy::Average}) {
    const auto fused = fuse(mixed, policy);
    const double u = unfit_score(fused);
    for (double t : {0.3, u, 0.7}) {
      d = decide(mixed, policy, t);
      CHECK(d.fused == fused);
      CHECK(d.unfit_score == u);
      CHECK((d.verdict == Verdict::Unfit) == (u >= t));
    }
  }
  CHECK_THROWS_AS(decide(control, FusionPolicy::Max, 1.5), Error);
}

TEST_CASE("argmax ties go to the lowest class code") {
  CHECK(csv(0.25, 0.25, 0.25, 0.25).argmax() == Condition::Alcohol);
  CHECK(csv(0.4, 0.1, 0.4, 0.1).argmax() == Condition::Control);
}

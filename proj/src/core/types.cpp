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

#include "ffd/types.hpp"

#include <cmath>

namespace ffd {

std::string_view to_string(Condition c) noexcept {
  switch (c) {
  case Condition::Alcohol:
    return "alcohol";
  case Condition::Control:
    return "control";
  case Condition::Drug:
    return "drug";
  case Condition::Sleepiness:
    return "sleepiness";
  }
  return "unknown";
}

std::optional<Condition> parse_condition(std::string_view name) noexcept {
  if (name == "alcohol")
    return Condition::Alcohol;
  if (name == "control")
    return Condition::Control;
  if (name == "drug")
    return Condition::Drug;
  if (name == "sleepiness" || name == "sleep")
    return Condition::Sleepiness;
  return std::nullopt;
}

std::optional<Condition> condition_from_code(int code) noexcept {
  if (code < 0 || code >= static_cast<int>(kNumClasses))
    return std::nullopt;
  return static_cast<Condition>(code);
}

Condition ClassScores::argmax() const noexcept {
  std::size_t best = 0;
  for (std::size_t i = 1; i < kNumClasses; ++i)
    if (p[i] > p[best])
      best = i;
  return static_cast<Condition>(best);
}

bool ClassScores::valid() const noexcept {
  for (double v : p)
    if (!std::isfinite(v) || v < 0.0 || v > 1.0)
      return false;
  return std::abs(sum() - 1.0) <= kProbabilityTolerance;
}

} // namespace ffd

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

#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ffd {

/// Screening condition. Integer codes follow the class indexing used by the
/// trained models: 0=Alcohol, 1=Control, 2=Drug, 3=Sleepiness.
enum class Condition : int { Alcohol = 0, Control = 1, Drug = 2, Sleepiness = 3 };

inline constexpr std::size_t kNumClasses = 4;
inline constexpr std::array<Condition, kNumClasses> kAllConditions = {
    Condition::Alcohol, Condition::Control, Condition::Drug, Condition::Sleepiness};

constexpr int code(Condition c) noexcept { return static_cast<int>(c); }
constexpr std::size_t index(Condition c) noexcept { return static_cast<std::size_t>(c); }
constexpr bool is_unfit(Condition c) noexcept { return c != Condition::Control; }

std::string_view to_string(Condition c) noexcept;
std::optional<Condition> parse_condition(std::string_view name) noexcept;
std::optional<Condition> condition_from_code(int code) noexcept;

inline constexpr double kProbabilityTolerance = 1e-6;

/// 4-way probability vector indexed by class code.
struct ClassScores {
  std::array<double, kNumClasses> p{};

  static ClassScores from_csv_order(double control, double alcohol, double drug, double sleep) {
    ClassScores s;
    s.p[index(Condition::Control)] = control;
    s.p[index(Condition::Alcohol)] = alcohol;
    s.p[index(Condition::Drug)] = drug;
    s.p[index(Condition::Sleepiness)] = sleep;
    return s;
  }

  double operator[](Condition c) const noexcept { return p[index(c)]; }
  double &operator[](Condition c) noexcept { return p[index(c)]; }

  double control() const noexcept { return (*this)[Condition::Control]; }
  double alcohol() const noexcept { return (*this)[Condition::Alcohol]; }
  double drug() const noexcept { return (*this)[Condition::Drug]; }
  double sleep() const noexcept { return (*this)[Condition::Sleepiness]; }

  double sum() const noexcept { return p[0] + p[1] + p[2] + p[3]; }

  /// Highest-probability class; ties go to the lowest class code.
  Condition argmax() const noexcept;

  /// True when every entry is finite, inside [0, 1] and the sum is 1 within
  /// kProbabilityTolerance.
  bool valid() const noexcept;

  bool operator==(const ClassScores &) const = default;
};

} // namespace ffd

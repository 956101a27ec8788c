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

#include <string>

#include "ffd/eval.hpp"

namespace ffd::eval {

/// Machine-readable report: rates in [0, 1].
std::string report_json(const EvalReport &report);
/// Human-readable report: percentages.
std::string report_markdown(const EvalReport &report);
/// threshold,fpr,fnr rows for the grouped curve.
std::string det_csv(const DetCurve &curve);
/// DET plot with log-scaled axes and markers at FPR = 10% and 5%. Curves
/// are drawn in the given order; labels go in the legend.
std::string det_svg(const std::vector<std::pair<std::string, DetCurve>> &curves);

} // namespace ffd::eval

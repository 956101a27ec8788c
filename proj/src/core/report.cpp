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

#include "ffd/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <json.hpp>

#include "ffd/dataio.hpp"

namespace ffd::eval {

using nlohmann::json;

namespace {

json optional_number(const std::optional<double> &v) { return v ? json(*v) : json(nullptr); }

std::string percent(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f%%", 100.0 * rate);
  return buf;
}

std::string percent(const std::optional<double> &rate) { return rate ? percent(*rate) : "n/a"; }

std::string fixed(double v, int digits) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

} // namespace

std::string report_json(const EvalReport &r) {
  json doc;
  doc["items"] = r.items;
  doc["negatives"] = r.grouped_curve.negatives;
  doc["positives"] = r.grouped_curve.positives;
  doc["eer"] = r.eer;
  doc["eer_degenerate"] = r.eer_degenerate;
  doc["fnr10"] = r.fnr10;
  doc["fnr10_at_fpr"] = 0.10;
  doc["fnr20"] = r.fnr20;
  doc["fnr20_at_fpr"] = 0.05;
  doc["threshold"] = r.threshold;

  json order = json::array();
  for (Condition c : kAllConditions)
    order.push_back(std::string(to_string(c)));
  doc["class_order"] = order;
  doc["confusion4"] = r.confusion4;
  doc["confusion2_order"] = {"fit", "unfit"};
  doc["confusion2"] = r.confusion2;

  json acc;
  for (Condition c : kAllConditions)
    acc[std::string(to_string(c))] = optional_number(r.per_class_accuracy[index(c)]);
  doc["per_class_accuracy"] = acc;
  doc["grouped_accuracy"] = {{"fit", optional_number(r.grouped_accuracy[0])},
                             {"unfit", optional_number(r.grouped_accuracy[1])}};
  json per_eer;
  for (const auto &s : r.per_class_eer)
    per_eer[std::string(to_string(s.positive))] = optional_number(s.eer);
  doc["per_class_eer"] = per_eer;
  return doc.dump(2) + "\n";
}

std::string report_markdown(const EvalReport &r) {
  std::string md;
  md += "# Fit/Unfit evaluation\n\n";
  md += "Items: " + std::to_string(r.items) + " (" + std::to_string(r.grouped_curve.negatives) + " Fit, " +
        std::to_string(r.grouped_curve.positives) + " Unfit)\n\n";
  md += "| Metric | Value |\n|---|---|\n";
  md += "| EER | " + percent(r.eer) + (r.eer_degenerate ? " (no crossing)" : "") + " |\n";
  md += "| FNR10 (FPR = 10%) | " + percent(r.fnr10) + " |\n";
  md += "| FNR20 (FPR = 5%) | " + percent(r.fnr20) + " |\n";
  md += "| Operating threshold | " + fixed(r.threshold, 6) + " |\n";
  for (const auto &s : r.per_class_eer)
    md += "| EER " + std::string(to_string(s.positive)) + " vs control | " + percent(s.eer) + " |\n";

  md += "\n## Four-class confusion (rows: truth, columns: prediction)\n\n";
  md += "| | alcohol | control | drug | sleepiness | accuracy |\n|---|---|---|---|---|---|\n";
  for (Condition c : kAllConditions) {
    md += "| " + std::string(to_string(c)) + " |";
    for (auto v : r.confusion4[index(c)])
      md += " " + std::to_string(v) + " |";
    md += " " + percent(r.per_class_accuracy[index(c)]) + " |\n";
  }

  md += "\n## Fit/Unfit confusion at the operating threshold\n\n";
  md += "| | fit | unfit | accuracy |\n|---|---|---|---|\n";
  const char *labels[2] = {"fit", "unfit"};
  for (std::size_t g = 0; g < 2; ++g)
    md += std::string("| ") + labels[g] + " | " + std::to_string(r.confusion2[g][0]) + " | " +
          std::to_string(r.confusion2[g][1]) + " | " + percent(r.grouped_accuracy[g]) + " |\n";
  return md;
}

std::string det_csv(const DetCurve &curve) {
  std::string out = "threshold,fpr,fnr\n";
  for (const auto &p : curve.points)
    out += (std::isinf(p.threshold) ? std::string("inf") : dataio::format_real(p.threshold)) + "," +
           dataio::format_real(p.fpr) + "," + dataio::format_real(p.fnr) + "\n";
  return out;
}

std::string det_svg(const std::vector<std::pair<std::string, DetCurve>> &curves) {
  constexpr double kLeft = 70, kTop = 30, kSide = 420;
  constexpr double kMinRate = 1e-3;
  const double span = -std::log10(kMinRate);

  auto sx = [&](double rate) {
    const double r = std::max(rate, kMinRate);
    return kLeft + kSide * (std::log10(r) + span) / span;
  };
  auto sy = [&](double rate) {
    const double r = std::max(rate, kMinRate);
    return kTop + kSide - kSide * (std::log10(r) + span) / span;
  };

  std::string s;
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"680\" height=\"520\" viewBox=\"0 0 680 520\" "
       "font-family=\"sans-serif\" font-size=\"11\">\n";
  s += "<rect x=\"0\" y=\"0\" width=\"680\" height=\"520\" fill=\"white\"/>\n";

  const double ticks[] = {0.001, 0.002, 0.005, 0.01, 0.02, 0.05, 0.1, 0.2, 0.5, 1.0};
  for (double t : ticks) {
    const std::string label = t < 0.01 ? fixed(100 * t, 1) : fixed(100 * t, 0);
    s += "<line x1=\"" + fixed(sx(t), 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" + fixed(sx(t), 2) + "\" y2=\"" +
         fixed(kTop + kSide, 2) + "\" stroke=\"#dddddd\"/>\n";
    s += "<line x1=\"" + fixed(kLeft, 2) + "\" y1=\"" + fixed(sy(t), 2) + "\" x2=\"" + fixed(kLeft + kSide, 2) +
         "\" y2=\"" + fixed(sy(t), 2) + "\" stroke=\"#dddddd\"/>\n";
    s += "<text x=\"" + fixed(sx(t), 2) + "\" y=\"" + fixed(kTop + kSide + 16, 2) + "\" text-anchor=\"middle\">" +
         label + "</text>\n";
    s += "<text x=\"" + fixed(kLeft - 6, 2) + "\" y=\"" + fixed(sy(t) + 4, 2) + "\" text-anchor=\"end\">" + label +
         "</text>\n";
  }
  s += "<rect x=\"" + fixed(kLeft, 2) + "\" y=\"" + fixed(kTop, 2) + "\" width=\"" + fixed(kSide, 2) +
       "\" height=\"" + fixed(kSide, 2) + "\" fill=\"none\" stroke=\"black\"/>\n";

  // Operating points at FPR = 10% and 5%.
  for (double op : {0.10, 0.05})
    s += "<line x1=\"" + fixed(sx(op), 2) + "\" y1=\"" + fixed(kTop, 2) + "\" x2=\"" + fixed(sx(op), 2) +
         "\" y2=\"" + fixed(kTop + kSide, 2) + "\" stroke=\"black\" stroke-dasharray=\"2,3\"/>\n";

  s += "<text x=\"" + fixed(kLeft + kSide / 2, 2) + "\" y=\"" + fixed(kTop + kSide + 36, 2) +
       "\" text-anchor=\"middle\">False positive rate (%)</text>\n";
  s += "<text x=\"18\" y=\"" + fixed(kTop + kSide / 2, 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
       fixed(kTop + kSide / 2, 2) + ")\">False negative rate (%)</text>\n";

  const char *colors[] = {"#000000", "#d62728", "#1f77b4", "#2ca02c", "#9467bd", "#8c564b"};
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char *color = colors[c % 6];
    std::string pts;
    for (const auto &p : curves[c].second.points)
      pts += fixed(sx(p.fpr), 2) + "," + fixed(sy(p.fnr), 2) + " ";
    if (!pts.empty())
      pts.pop_back();
    s += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" stroke-width=\"1.5\" points=\"" + pts +
         "\"/>\n";
    const double ly = kTop + 14 + 16 * static_cast<double>(c);
    const std::string eer_label = curves[c].second.points.empty() ? "" : " (EER " + percent(eer(curves[c].second).value) + ")";
    s += "<line x1=\"505\" y1=\"" + fixed(ly - 4, 2) + "\" x2=\"525\" y2=\"" + fixed(ly - 4, 2) + "\" stroke=\"" +
         color + "\" stroke-width=\"2\"/>\n";
    s += "<text x=\"530\" y=\"" + fixed(ly, 2) + "\">" + curves[c].first + eer_label + "</text>\n";
  }
  s += "</svg>\n";
  return s;
}

} // namespace ffd::eval

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

#include "ffd/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "ffd/error.hpp"
#include "csv_util.hpp"

namespace ffd::dataio {

using nlohmann::json;

std::string_view to_string(Split s) noexcept {
  switch (s) {
  case Split::Train:
    return "train";
  case Split::Validation:
    return "validation";
  case Split::Test:
    return "test";
  }
  return "unknown";
}

std::optional<Split> parse_split(std::string_view name) noexcept {
  if (name == "train")
    return Split::Train;
  if (name == "validation" || name == "val")
    return Split::Validation;
  if (name == "test")
    return Split::Test;
  return std::nullopt;
}

const SequenceEntry *DatasetManifest::find(std::string_view sequence_id) const {
  for (const auto &e : entries)
    if (e.sequence_id == sequence_id)
      return &e;
  return nullptr;
}

std::filesystem::path DatasetManifest::resolve(const std::string &frame_path) const {
  std::filesystem::path p(frame_path);
  if (p.is_absolute() || base_dir.empty())
    return p;
  return base_dir / p;
}

std::string read_text_file(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::Io, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path &path, std::string_view text) {
  if (path.has_parent_path())
    std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out)
    fail(ErrorCode::Io, "cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out)
    fail(ErrorCode::Io, "short write to '" + path.string() + "'");
}

std::string format_real(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string entry_label(std::size_t i, const json &e) {
  std::string label = "entry " + std::to_string(i);
  if (e.is_object() && e.contains("sequence_id") && e["sequence_id"].is_string())
    label += " (sequence_id '" + e["sequence_id"].get<std::string>() + "')";
  return label;
}

[[noreturn]] void bad_entry(std::size_t i, const json &e, const std::string &why) {
  fail(ErrorCode::Parse, "malformed manifest: " + entry_label(i, e) + ": " + why);
}

std::string required_string(std::size_t i, const json &e, const char *key) {
  if (!e.contains(key))
    bad_entry(i, e, std::string("missing field '") + key + "'");
  if (!e[key].is_string())
    bad_entry(i, e, std::string("field '") + key + "' must be a string");
  return e[key].get<std::string>();
}

Condition parse_condition_field(std::size_t i, const json &e) {
  if (!e.contains("condition"))
    bad_entry(i, e, "missing field 'condition'");
  const json &c = e["condition"];
  std::optional<Condition> cond;
  if (c.is_string())
    cond = parse_condition(c.get<std::string>());
  else if (c.is_number_integer())
    cond = condition_from_code(c.get<int>());
  if (!cond)
    bad_entry(i, e, "unknown condition " + c.dump());
  return *cond;
}

SequenceEntry parse_entry(std::size_t i, const json &e) {
  if (!e.is_object())
    bad_entry(i, e, "entry must be an object");
  SequenceEntry out;
  out.sequence_id = required_string(i, e, "sequence_id");
  if (out.sequence_id.empty() || out.sequence_id.find_first_of(",\n\r\"") != std::string::npos)
    bad_entry(i, e, "sequence_id must be non-empty and free of commas, quotes and newlines");
  out.subject_id = required_string(i, e, "subject_id");
  out.condition = parse_condition_field(i, e);
  out.device = e.contains("device") && e["device"].is_string() ? e["device"].get<std::string>() : "";
  const std::string split = required_string(i, e, "split");
  auto s = parse_split(split);
  if (!s)
    bad_entry(i, e, "unknown split '" + split + "'");
  out.split = *s;

  if (!e.contains("frame_paths") || !e["frame_paths"].is_array())
    bad_entry(i, e, "missing array 'frame_paths'");
  for (const auto &p : e["frame_paths"]) {
    if (!p.is_string())
      bad_entry(i, e, "frame_paths must hold strings");
    out.frame_paths.push_back(p.get<std::string>());
  }
  if (out.frame_paths.empty())
    bad_entry(i, e, "frame_paths is empty");

  if (e.contains("frame_timestamps_ms") && !e["frame_timestamps_ms"].is_null()) {
    const json &ts = e["frame_timestamps_ms"];
    if (!ts.is_array())
      bad_entry(i, e, "frame_timestamps_ms must be an array");
    std::vector<std::int64_t> stamps;
    for (const auto &t : ts) {
      if (!t.is_number_integer())
        bad_entry(i, e, "frame_timestamps_ms must hold integers");
      stamps.push_back(t.get<std::int64_t>());
    }
    if (stamps.size() != out.frame_paths.size())
      bad_entry(i, e, "frame_timestamps_ms has " + std::to_string(stamps.size()) + " values for " +
                          std::to_string(out.frame_paths.size()) + " frames");
    for (std::size_t k = 1; k < stamps.size(); ++k)
      if (stamps[k] <= stamps[k - 1])
        bad_entry(i, e, "frame_timestamps_ms not strictly increasing at position " + std::to_string(k));
    out.frame_timestamps_ms = std::move(stamps);
  }
  return out;
}

} // namespace

DatasetManifest parse_manifest(std::string_view json_text, std::filesystem::path base_dir) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error &e) {
    fail(ErrorCode::Parse, std::string("malformed manifest: ") + e.what());
  }
  if (!doc.is_object())
    fail(ErrorCode::Parse, "malformed manifest: top level must be an object");
  if (!doc.contains("version") || !doc["version"].is_number_integer() ||
      doc["version"].get<int>() != kManifestVersion)
    fail(ErrorCode::Parse, "malformed manifest: expected \"version\": 1");
  if (!doc.contains("entries") || !doc["entries"].is_array())
    fail(ErrorCode::Parse, "malformed manifest: missing \"entries\" array");

  DatasetManifest m;
  m.base_dir = std::move(base_dir);
  std::map<std::string, std::size_t> seen;
  const json &entries = doc["entries"];
  for (std::size_t i = 0; i < entries.size(); ++i) {
    SequenceEntry e = parse_entry(i, entries[i]);
    auto [it, inserted] = seen.emplace(e.sequence_id, i);
    if (!inserted)
      fail(ErrorCode::Validation, "duplicate sequence_id '" + e.sequence_id + "' in entries " +
                                      std::to_string(it->second) + " and " + std::to_string(i));
    m.entries.push_back(std::move(e));
  }
  return m;
}

DatasetManifest load_manifest(const std::filesystem::path &path) {
  const std::string text = read_text_file(path);
  try {
    return parse_manifest(text, path.parent_path());
  } catch (const Error &e) {
    throw Error(e.code(), path.string() + ": " + e.what());
  }
}

std::string manifest_to_json(const DatasetManifest &manifest) {
  json entries = json::array();
  for (const auto &e : manifest.entries) {
    json j;
    j["sequence_id"] = e.sequence_id;
    j["subject_id"] = e.subject_id;
    j["condition"] = std::string(to_string(e.condition));
    j["device"] = e.device;
    j["split"] = std::string(to_string(e.split));
    j["frame_paths"] = e.frame_paths;
    if (e.frame_timestamps_ms)
      j["frame_timestamps_ms"] = *e.frame_timestamps_ms;
    entries.push_back(std::move(j));
  }
  json doc;
  doc["version"] = kManifestVersion;
  doc["entries"] = std::move(entries);
  return doc.dump(2) + "\n";
}

void save_manifest(const DatasetManifest &manifest, const std::filesystem::path &path) {
  write_text_file(path, manifest_to_json(manifest));
}

std::vector<std::size_t> capture_order(const SequenceEntry &entry) {
  std::vector<std::size_t> order(entry.frame_paths.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (entry.frame_timestamps_ms) {
    const auto &ts = *entry.frame_timestamps_ms;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ts[a] < ts[b]; });
  }
  return order;
}

std::vector<SplitViolation> validate_splits(const DatasetManifest &manifest) {
  std::map<std::string, std::set<Split>> subject_splits;
  for (const auto &e : manifest.entries)
    subject_splits[e.subject_id].insert(e.split);
  std::vector<SplitViolation> out;
  for (auto &[subject, splits] : subject_splits)
    if (splits.size() > 1)
      out.push_back({subject, splits});
  return out;
}

std::uint64_t ClassCounts::total() const noexcept {
  return std::accumulate(samples.begin(), samples.end(), std::uint64_t{0});
}

ClassWeights compute_class_weights(const ClassCounts &counts) {
  for (Condition c : kAllConditions)
    if (counts[c] == 0)
      fail(ErrorCode::Degenerate,
           "cannot weight classes: no samples for class '" + std::string(to_string(c)) + "'");
  const double n = static_cast<double>(counts.total());
  ClassWeights w;
  for (std::size_t i = 0; i < kNumClasses; ++i)
    w.weight[i] = n / (static_cast<double>(kNumClasses) * static_cast<double>(counts.samples[i]));
  return w;
}

ClassCounts count_frames(const DatasetManifest &manifest, Split split) {
  ClassCounts counts;
  for (const auto &e : manifest.entries)
    if (e.split == split)
      counts[e.condition] += e.frame_paths.size();
  return counts;
}

// ---------------------------------------------------------------------------

std::vector<FrameScore> parse_score_csv(std::string_view text, std::string_view source) {
  std::vector<FrameScore> rows;
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line) || line != kScoreCsvHeader)
    fail(ErrorCode::Parse, std::string(source) + ": expected header '" + std::string(kScoreCsvHeader) + "'");
  while (reader.next(line)) {
    if (line.empty())
      continue;
    const std::string where = std::string(source) + " line " + std::to_string(reader.line_number());
    auto fields = csv::split(line);
    if (fields.size() != 6)
      fail(ErrorCode::Parse, where + ": expected 6 fields, got " + std::to_string(fields.size()));
    FrameScore row;
    row.sequence_id = std::string(fields[0]);
    row.frame_index = csv::parse_int(fields[1], where);
    row.scores = ClassScores::from_csv_order(csv::parse_double(fields[2], where), csv::parse_double(fields[3], where),
                                             csv::parse_double(fields[4], where), csv::parse_double(fields[5], where));
    if (!row.scores.valid())
      fail(ErrorCode::Validation, where + " (sequence '" + row.sequence_id + "', frame " +
                                      std::to_string(row.frame_index) + "): not a probability vector (sum " +
                                      format_real(row.scores.sum()) + ")");
    rows.push_back(std::move(row));
  }
  return rows;
}

std::vector<FrameScore> read_score_csv(const std::filesystem::path &path) {
  return parse_score_csv(read_text_file(path), path.string());
}

std::string format_score_csv(const std::vector<FrameScore> &rows) {
  std::string out(kScoreCsvHeader);
  out += '\n';
  for (const auto &r : rows) {
    out += r.sequence_id;
    out += ',';
    out += std::to_string(r.frame_index);
    for (double v : {r.scores.control(), r.scores.alcohol(), r.scores.drug(), r.scores.sleep()}) {
      out += ',';
      out += format_real(v);
    }
    out += '\n';
  }
  return out;
}

void write_score_csv(const std::vector<FrameScore> &rows, const std::filesystem::path &path) {
  write_text_file(path, format_score_csv(rows));
}

} // namespace ffd::dataio

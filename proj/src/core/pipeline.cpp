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

#include "ffd/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cstdio>
#include <exception>
#include <map>
#include <mutex>
#include <thread>

#include <json.hpp>

#include "csv_util.hpp"
#include "ffd/error.hpp"
#include "ffd/harness.hpp"
#include "ffd/network.hpp"
#include "ffd/report.hpp"
#include "ffd/rng.hpp"
#include "ffd/score_source.hpp"

namespace ffd::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

void parallel_for(std::size_t n, int threads, const std::function<void(std::size_t)> &fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i)
      fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::size_t failed_at = n;
  std::exception_ptr failure;

  auto worker = [&] {
    while (!stop.load()) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n)
        return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(mu);
        if (i < failed_at) {
          failed_at = i;
          failure = std::current_exception();
        }
        stop = true;
      }
    }
  };
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w)
    pool.emplace_back(worker);
  for (auto &t : pool)
    t.join();
  if (failure)
    std::rethrow_exception(failure);
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::uint64_t sequence_seed(std::uint64_t seed, std::string_view sequence_id) noexcept {
  // splitmix64 finaliser over the mixed value.
  std::uint64_t z = seed ^ fnv1a64(sequence_id);
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string frame_label(const dataio::SequenceEntry &e, std::size_t i) {
  return "sequence '" + e.sequence_id + "' frame " + std::to_string(i);
}

imaging::GrayFrame read_entry_frame(const dataio::DatasetManifest &m, const dataio::SequenceEntry &e, std::size_t i) {
  try {
    return imaging::read_frame(m.resolve(e.frame_paths[i]));
  } catch (const Error &err) {
    throw Error(err.code(), frame_label(e, i) + ": " + err.what());
  }
}

} // namespace

// ---------------------------------------------------------------------------

ValidateResult validate(const fs::path &manifest_path) {
  const auto m = dataio::load_manifest(manifest_path);
  ValidateResult r;
  r.entries = m.entries.size();
  for (const auto &e : m.entries)
    r.frames += e.frame_paths.size();
  r.violations = dataio::validate_splits(m);
  return r;
}

// ---------------------------------------------------------------------------

imaging::GrayFrame preprocess_frame(const imaging::GrayFrame &frame, const PreprocessOptions &options) {
  imaging::GrayFrame out = frame;
  if (options.apply_clahe) {
    const imaging::ClaheParams p =
        options.cell_px ? imaging::clahe_params_for_cell_size(frame, *options.cell_px, options.clahe.clip_limit)
                        : options.clahe;
    out = imaging::clahe(out, p);
  }
  if (options.size > 0)
    out = imaging::resize_bilinear(out, options.size, options.size);
  return out;
}

std::size_t preprocess(const fs::path &manifest_path, const fs::path &out_dir, const PreprocessOptions &options) {
  const auto m = dataio::load_manifest(manifest_path);
  dataio::DatasetManifest out = m;
  out.base_dir = out_dir;

  for (auto &e : out.entries)
    for (std::size_t i = 0; i < e.frame_paths.size(); ++i) {
      char name[32];
      std::snprintf(name, sizeof name, "%05zu", i);
      const std::string ext = fs::path(e.frame_paths[i]).extension().string();
      e.frame_paths[i] = (fs::path("frames") / e.sequence_id / (std::string(name) + ext)).generic_string();
    }

  std::atomic<std::size_t> written{0};
  parallel_for(m.entries.size(), options.threads, [&](std::size_t k) {
    const auto &src = m.entries[k];
    const auto &dst = out.entries[k];
    for (std::size_t i = 0; i < src.frame_paths.size(); ++i) {
      const auto frame = read_entry_frame(m, src, i);
      try {
        imaging::write_frame(preprocess_frame(frame, options), out_dir / dst.frame_paths[i]);
      } catch (const Error &err) {
        throw Error(err.code(), frame_label(src, i) + ": " + err.what());
      }
      ++written;
    }
  });
  dataio::save_manifest(out, out_dir / "manifest.json");
  return written;
}

// ---------------------------------------------------------------------------

std::vector<Selection> select(const dataio::DatasetManifest &m, const SelectOptions &options) {
  if (options.k < 1)
    fail(ErrorCode::InvalidArgument, "--k must be >= 1");
  std::vector<std::vector<Selection>> per_entry(m.entries.size());
  parallel_for(m.entries.size(), options.threads, [&](std::size_t k) {
    const auto &e = m.entries[k];
    const auto order = dataio::capture_order(e);
    std::vector<double> values(order.size(), 0.0);
    quality::SelectionStrategy strategy;
    switch (options.strategy) {
    case StrategyKind::Best:
      strategy = quality::BestSharpness{options.k};
      for (std::size_t i = 0; i < order.size(); ++i)
        values[i] = quality::sharpness(read_entry_frame(m, e, order[i]), options.log_sigma).raw_power;
      break;
    case StrategyKind::Random:
      strategy = quality::RandomFrames{options.k, sequence_seed(options.seed, e.sequence_id)};
      break;
    case StrategyKind::Sequential:
      strategy = quality::SequentialFirst{options.k};
      break;
    }
    const auto picked = quality::select_indices(values, strategy);
    for (std::size_t r = 0; r < picked.size(); ++r)
      per_entry[k].push_back({e.sequence_id, static_cast<int>(r), static_cast<std::int64_t>(order[picked[r]])});
  });

  std::vector<Selection> rows;
  for (auto &v : per_entry)
    rows.insert(rows.end(), v.begin(), v.end());
  std::sort(rows.begin(), rows.end(), [](const Selection &a, const Selection &b) {
    return a.sequence_id != b.sequence_id ? a.sequence_id < b.sequence_id : a.rank < b.rank;
  });
  return rows;
}

void select(const fs::path &manifest, const fs::path &out_csv, const SelectOptions &options) {
  dataio::write_text_file(out_csv, format_selection_csv(select(dataio::load_manifest(manifest), options)));
}

std::string format_selection_csv(const std::vector<Selection> &rows) {
  std::string out(kSelectionCsvHeader);
  out += '\n';
  for (const auto &r : rows)
    out += r.sequence_id + "," + std::to_string(r.rank) + "," + std::to_string(r.frame_index) + "\n";
  return out;
}

std::vector<Selection> read_selection_csv(const fs::path &path) {
  const std::string text = dataio::read_text_file(path);
  csv::LineReader reader(text);
  std::string_view line;
  if (!reader.next(line) || line != kSelectionCsvHeader)
    fail(ErrorCode::Parse, path.string() + ": expected header '" + std::string(kSelectionCsvHeader) + "'");
  std::vector<Selection> rows;
  while (reader.next(line)) {
    if (line.empty())
      continue;
    const std::string where = path.string() + " line " + std::to_string(reader.line_number());
    const auto f = csv::split(line);
    if (f.size() != 3)
      fail(ErrorCode::Parse, where + ": expected 3 fields");
    rows.push_back({std::string(f[0]), static_cast<int>(csv::parse_int(f[1], where)), csv::parse_int(f[2], where)});
  }
  return rows;
}

// ---------------------------------------------------------------------------

std::vector<dataio::FrameScore> score(const dataio::DatasetManifest &m, const ScoreOptions &options) {
  const bool playback = options.playback.has_value();
  const bool cnn = options.network_spec.has_value() || options.weights.has_value();
  if (playback == cnn)
    fail(ErrorCode::InvalidArgument, "score needs either --playback or both --spec and --weights");
  if (cnn && !(options.network_spec && options.weights))
    fail(ErrorCode::InvalidArgument, "CNN scoring needs both --spec and --weights");

  std::unique_ptr<inference::ScoreSource> source;
  if (playback) {
    source = std::make_unique<inference::PlaybackScoreSource>(inference::PlaybackScoreSource::from_file(*options.playback));
  } else {
    auto spec = inference::load_network_spec(*options.network_spec);
    const auto bundle = inference::WeightBundle::load(*options.weights);
    source = std::make_unique<inference::CnnScoreSource>(
        std::make_shared<const inference::Network>(std::move(spec), bundle));
  }

  std::vector<inference::FrameRef> jobs;
  if (options.selection) {
    for (const auto &s : read_selection_csv(*options.selection)) {
      const auto *e = m.find(s.sequence_id);
      if (!e)
        fail(ErrorCode::Validation, "selection names sequence '" + s.sequence_id + "' absent from the manifest");
      if (s.frame_index < 0 || static_cast<std::size_t>(s.frame_index) >= e->frame_paths.size())
        fail(ErrorCode::Validation, "selection frame " + std::to_string(s.frame_index) + " is out of range for sequence '" +
                                        s.sequence_id + "'");
      jobs.push_back({s.sequence_id, s.frame_index, m.resolve(e->frame_paths[static_cast<std::size_t>(s.frame_index)])});
    }
  } else {
    for (const auto &e : m.entries)
      for (std::size_t i = 0; i < e.frame_paths.size(); ++i)
        jobs.push_back({e.sequence_id, static_cast<std::int64_t>(i), m.resolve(e.frame_paths[i])});
  }
  std::sort(jobs.begin(), jobs.end(), [](const auto &a, const auto &b) {
    return a.sequence_id != b.sequence_id ? a.sequence_id < b.sequence_id : a.frame_index < b.frame_index;
  });
  jobs.erase(std::unique(jobs.begin(), jobs.end(),
                         [](const auto &a, const auto &b) {
                           return a.sequence_id == b.sequence_id && a.frame_index == b.frame_index;
                         }),
             jobs.end());

  std::vector<dataio::FrameScore> rows(jobs.size());
  parallel_for(jobs.size(), options.threads, [&](std::size_t i) {
    rows[i] = {jobs[i].sequence_id, jobs[i].frame_index, source->score(jobs[i])};
  });
  return rows;
}

void score(const fs::path &manifest, const fs::path &out_csv, const ScoreOptions &options) {
  dataio::write_score_csv(score(dataio::load_manifest(manifest), options), out_csv);
}

// ---------------------------------------------------------------------------

std::string format_fused_csv(const std::vector<FusedRow> &rows, double threshold, decision::UnfitGrouping grouping) {
  std::string out(kFusedCsvHeader);
  out += '\n';
  for (const auto &r : rows) {
    const double u = decision::unfit_score(r.scores, grouping);
    out += r.sequence_id + "," + std::string(to_string(r.truth)) + "," + std::to_string(r.frames);
    for (double v : {r.scores.control(), r.scores.alcohol(), r.scores.drug(), r.scores.sleep()})
      out += "," + dataio::format_real(v);
    out += "," + dataio::format_real(u) + "," + std::string(to_string(r.scores.argmax())) + "," +
           (u >= threshold ? "unfit" : "fit") + "\n";
  }
  return out;
}

std::vector<FusedRow> parse_fused_csv(std::string_view text, std::string_view source) {
  csv::LineReader reader(text);
  std::string_view line;
  const std::string_view short_header = kFusedCsvHeader.substr(0, kFusedCsvHeader.find(",unfit_score"));
  if (!reader.next(line) || (line != kFusedCsvHeader && line != short_header))
    fail(ErrorCode::Parse, std::string(source) + ": expected header '" + std::string(kFusedCsvHeader) + "'");
  const std::size_t columns = line == kFusedCsvHeader ? 10 : 7;
  std::vector<FusedRow> rows;
  while (reader.next(line)) {
    if (line.empty())
      continue;
    const std::string where = std::string(source) + " line " + std::to_string(reader.line_number());
    const auto f = csv::split(line);
    if (f.size() != columns)
      fail(ErrorCode::Parse, where + ": expected " + std::to_string(columns) + " fields");
    FusedRow r;
    r.sequence_id = std::string(f[0]);
    const auto cond = parse_condition(f[1]);
    if (!cond)
      fail(ErrorCode::Parse, where + ": unknown condition '" + std::string(f[1]) + "'");
    r.truth = *cond;
    r.frames = static_cast<std::size_t>(csv::parse_int(f[2], where));
    r.scores = ClassScores::from_csv_order(csv::parse_double(f[3], where), csv::parse_double(f[4], where),
                                           csv::parse_double(f[5], where), csv::parse_double(f[6], where));
    if (!r.scores.valid())
      fail(ErrorCode::Validation, where + " (sequence '" + r.sequence_id + "'): not a probability vector");
    rows.push_back(std::move(r));
  }
  return rows;
}

std::vector<FusedRow> read_fused_csv(const fs::path &path) {
  return parse_fused_csv(dataio::read_text_file(path), path.string());
}

std::vector<eval::ScoredItem> to_items(const std::vector<FusedRow> &rows) {
  std::vector<eval::ScoredItem> items;
  items.reserve(rows.size());
  for (const auto &r : rows)
    items.push_back({r.truth, r.scores});
  return items;
}

std::vector<FusedRow> fuse(const std::vector<dataio::FrameScore> &scores, const dataio::DatasetManifest &manifest,
                           const FuseOptions &options, const std::vector<Selection> *selection) {
  if (options.k < 0)
    fail(ErrorCode::InvalidArgument, "--k must be >= 0");

  std::map<std::string, std::map<std::int64_t, ClassScores>> by_seq;
  for (const auto &s : scores) {
    if (!manifest.find(s.sequence_id))
      fail(ErrorCode::Validation, "score file names sequence '" + s.sequence_id + "' absent from the manifest");
    by_seq[s.sequence_id][s.frame_index] = s.scores;
  }

  std::map<std::string, std::vector<std::int64_t>> chosen;
  if (selection) {
    std::vector<Selection> sel = *selection;
    std::stable_sort(sel.begin(), sel.end(), [](const Selection &a, const Selection &b) { return a.rank < b.rank; });
    for (const auto &s : sel)
      chosen[s.sequence_id].push_back(s.frame_index);
  }

  std::vector<FusedRow> out;
  for (const auto &[seq, frames] : by_seq) {
    std::vector<std::int64_t> picks;
    if (selection) {
      auto it = chosen.find(seq);
      if (it == chosen.end())
        fail(ErrorCode::MissingScore, "selection has no frames for sequence '" + seq + "'");
      picks = it->second;
    } else {
      for (const auto &kv : frames)
        picks.push_back(kv.first);
    }
    if (options.k > 0 && picks.size() > static_cast<std::size_t>(options.k))
      picks.resize(static_cast<std::size_t>(options.k));

    std::vector<ClassScores> vals;
    for (auto f : picks) {
      auto it = frames.find(f);
      if (it == frames.end())
        fail(ErrorCode::MissingScore, "no score for sequence '" + seq + "' frame " + std::to_string(f));
      vals.push_back(it->second);
    }
    FusedRow row;
    row.sequence_id = seq;
    row.truth = manifest.find(seq)->condition;
    row.frames = vals.size();
    row.scores = decision::fuse(vals, options.policy);
    out.push_back(std::move(row));
  }
  return out;
}

double resolve_threshold(const FuseOptions &options) {
  if (options.threshold_at_eer) {
    const auto items = to_items(read_fused_csv(*options.threshold_at_eer));
    return eval::eer_threshold(eval::det_curve(items, eval::GroupedMode{options.grouping}));
  }
  if (!(options.threshold >= 0.0 && options.threshold <= 1.0))
    fail(ErrorCode::InvalidArgument, "--threshold must be in [0, 1]");
  return options.threshold;
}

void fuse(const fs::path &scores_csv, const fs::path &manifest, const fs::path &out_csv, const FuseOptions &options) {
  const auto m = dataio::load_manifest(manifest);
  const auto scores = dataio::read_score_csv(scores_csv);
  std::vector<Selection> sel;
  if (options.selection)
    sel = read_selection_csv(*options.selection);
  const auto rows = fuse(scores, m, options, options.selection ? &sel : nullptr);
  const double threshold = resolve_threshold(options);
  dataio::write_text_file(out_csv, format_fused_csv(rows, threshold, options.grouping));
}

// ---------------------------------------------------------------------------

eval::EvalReport evaluate(const fs::path &fused_csv, const fs::path &out_dir, const EvalOptions &options) {
  const auto items = to_items(read_fused_csv(fused_csv));
  const auto report = eval::evaluate(items, options.grouping, options.threshold);
  if (options.json)
    dataio::write_text_file(out_dir / "report.json", eval::report_json(report));
  if (options.markdown)
    dataio::write_text_file(out_dir / "report.md", eval::report_markdown(report));
  if (options.csv)
    dataio::write_text_file(out_dir / "det.csv", eval::det_csv(report.grouped_curve));
  if (options.svg) {
    std::vector<std::pair<std::string, eval::DetCurve>> curves;
    curves.emplace_back("unfit vs control", report.grouped_curve);
    for (Condition c : {Condition::Alcohol, Condition::Drug, Condition::Sleepiness}) {
      const auto s = eval::split_scores(items, eval::SingleClassMode{c});
      if (!s.positives.empty() && !s.negatives.empty())
        curves.emplace_back(std::string(to_string(c)) + " vs control", eval::det_curve(s));
    }
    dataio::write_text_file(out_dir / "det.svg", eval::det_svg(curves));
  }
  return report;
}

// ---------------------------------------------------------------------------

std::size_t bundle_report(const fs::path &run_dir) {
  if (!fs::is_directory(run_dir))
    fail(ErrorCode::Io, "run directory '" + run_dir.string() + "' does not exist");
  std::vector<fs::path> files;
  for (const auto &entry : fs::recursive_directory_iterator(run_dir)) {
    if (!entry.is_regular_file())
      continue;
    const auto rel = fs::relative(entry.path(), run_dir);
    if (rel == "bundle.json" || rel == "index.md")
      continue;
    files.push_back(rel);
  }
  std::sort(files.begin(), files.end(),
            [](const fs::path &a, const fs::path &b) { return a.generic_string() < b.generic_string(); });

  json list = json::array();
  std::string table = "| Artifact | Bytes | FNV-1a 64 |\n|---|---|---|\n";
  for (const auto &rel : files) {
    const std::string bytes = dataio::read_text_file(run_dir / rel);
    const std::string sum = hex64(fnv1a64(bytes));
    list.push_back({{"path", rel.generic_string()}, {"bytes", bytes.size()}, {"fnv1a64", sum}});
    table += "| " + rel.generic_string() + " | " + std::to_string(bytes.size()) + " | " + sum + " |\n";
  }
  dataio::write_text_file(run_dir / "bundle.json", json{{"artifacts", list}}.dump(2) + "\n");

  std::string index = "# Run artifacts\n\n" + table;
  if (fs::exists(run_dir / "report.md"))
    index += "\n" + dataio::read_text_file(run_dir / "report.md");
  if (fs::exists(run_dir / "det.svg"))
    index += "\n![DET curve](det.svg)\n";
  dataio::write_text_file(run_dir / "index.md", index);
  return files.size();
}

// ---------------------------------------------------------------------------

namespace {

std::string numbered(const char *prefix, std::size_t n, int width) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%0*zu", prefix, width, n);
  return buf;
}

} // namespace

void synth_scores(const fs::path &out_dir, const SynthScoresOptions &options) {
  if (options.frames_per_sequence < 1)
    fail(ErrorCode::InvalidArgument, "--frames must be >= 1");
  const auto first = harness::synth_scores(harness::gaussian_pair(options.control_mean, options.unfit_mean,
                                                                  options.stddev, options.count, options.seed));
  dataio::DatasetManifest m;
  std::vector<dataio::FrameScore> rows;
  for (std::size_t s = 0; s < first.size(); ++s) {
    dataio::SequenceEntry e;
    e.sequence_id = numbered("seq", s, 6);
    e.subject_id = numbered("subj", s, 6);
    e.condition = first[s].truth;
    e.device = "synthetic";
    e.split = dataio::Split::Test;
    rows.push_back({e.sequence_id, 0, first[s].scores});
    if (options.frames_per_sequence > 1) {
      auto p = harness::gaussian_pair(options.control_mean, options.unfit_mean, options.stddev,
                                      static_cast<std::size_t>(options.frames_per_sequence - 1),
                                      sequence_seed(options.seed, e.sequence_id));
      p.proportion.fill(0.0);
      p.proportion[index(e.condition)] = 1.0;
      const auto more = harness::synth_scores(p);
      for (std::size_t f = 0; f < more.size(); ++f)
        rows.push_back({e.sequence_id, static_cast<std::int64_t>(f + 1), more[f].scores});
    }
    for (int f = 0; f < options.frames_per_sequence; ++f)
      e.frame_paths.push_back("frames/" + e.sequence_id + "/" + numbered("", static_cast<std::size_t>(f), 5) + ".png");
    m.entries.push_back(std::move(e));
  }
  dataio::save_manifest(m, out_dir / "manifest.json");
  dataio::write_score_csv(rows, out_dir / "scores.csv");
}

void synth_frames(const fs::path &out_dir, const SynthFramesOptions &options) {
  if (options.frames_per_sequence < 1 || options.size < 16)
    fail(ErrorCode::InvalidArgument, "synthetic frames need >= 1 frame per sequence and size >= 16");
  // Pupil-ratio band per class code (alcohol, control, drug, sleepiness).
  const double lo[4] = {0.330, 0.265, 0.450, 0.395};
  const double hi[4] = {0.395, 0.330, 0.515, 0.450};
  const std::string ext = options.format == imaging::ImageFormat::Png ? ".png" : ".pgm";

  Rng rng(options.seed);
  dataio::DatasetManifest m;
  for (std::size_t s = 0; s < options.sequences; ++s) {
    dataio::SequenceEntry e;
    e.sequence_id = numbered("seq", s, 4);
    const std::size_t subject = s / 2;
    e.subject_id = numbered("subj", subject, 4);
    const std::size_t cls = s % 4;
    e.condition = static_cast<Condition>(cls);
    e.device = "synthetic";
    e.split = subject % 5 < 3 ? dataio::Split::Train : subject % 5 == 3 ? dataio::Split::Validation : dataio::Split::Test;
    const double ratio = lo[cls] + (hi[cls] - lo[cls]) * rng.uniform();
    std::vector<std::int64_t> stamps;
    for (int f = 0; f < options.frames_per_sequence; ++f) {
      harness::SyntheticEyeParams p;
      p.width = p.height = options.size;
      p.iris_radius = 0.3 * options.size;
      p.pupil_ratio = ratio;
      p.blur_sigma = 2.0 * rng.uniform();
      p.noise_std = 3.0;
      p.seed = rng.next();
      const std::string rel = "frames/" + e.sequence_id + "/" + numbered("", static_cast<std::size_t>(f), 5) + ext;
      imaging::write_frame(harness::synth_frame(p), out_dir / rel);
      e.frame_paths.push_back(rel);
      stamps.push_back(100 * f);
    }
    e.frame_timestamps_ms = std::move(stamps);
    m.entries.push_back(std::move(e));
  }
  dataio::save_manifest(m, out_dir / "manifest.json");
}

void synth_weights(const fs::path &spec, const fs::path &out_bundle, std::uint64_t seed) {
  inference::random_bundle(inference::load_network_spec(spec), seed).save(out_bundle);
}

// ---------------------------------------------------------------------------

std::string weights_info(const fs::path &bundle_path, const std::optional<fs::path> &spec) {
  const auto bundle = inference::WeightBundle::load(bundle_path);
  json tensors = json::array();
  for (const auto &name : bundle.names()) {
    const auto &t = bundle.at(name);
    double lo = 0, hi = 0, sum = 0;
    std::string raw;
    raw.reserve(t.values.size() * 4);
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      const double v = t.values[i];
      lo = i == 0 ? v : std::min(lo, v);
      hi = i == 0 ? v : std::max(hi, v);
      sum += v;
      const auto bits = std::bit_cast<std::uint32_t>(t.values[i]);
      for (int b = 0; b < 4; ++b)
        raw.push_back(static_cast<char>((bits >> (8 * b)) & 0xFF));
    }
    tensors.push_back({{"name", name},
                       {"dims", t.dims},
                       {"elements", t.values.size()},
                       {"min", lo},
                       {"max", hi},
                       {"mean", t.values.empty() ? 0.0 : sum / static_cast<double>(t.values.size())},
                       {"fnv1a64", hex64(fnv1a64(raw))}});
  }
  json doc;
  doc["path"] = bundle_path.generic_string();
  doc["version"] = inference::WeightBundle::kVersion;
  doc["epsilon"] = bundle.epsilon;
  doc["tensor_count"] = bundle.size();
  doc["tensors"] = std::move(tensors);
  if (spec) {
    json check;
    try {
      inference::validate_bundle(inference::load_network_spec(*spec), bundle);
      check["ok"] = true;
    } catch (const Error &e) {
      check["ok"] = false;
      check["error"] = e.what();
    }
    doc["spec_check"] = check;
  }
  return doc.dump(2) + "\n";
}

} // namespace ffd::pipeline

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

#include <cstdint>
#include <cstdio>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ffd/ffd.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int report(ffd_status st) {
  if (st == FFD_OK)
    return kExitOk;
  std::fprintf(stderr, "ffd: %s: %s\n", ffd_status_string(st), ffd_last_error());
  return st == FFD_ERR_INVALID_ARGUMENT ? kExitUsage : kExitFailure;
}

const char *c_or_null(const std::string &s) { return s.empty() ? nullptr : s.c_str(); }

bool write_string(const std::string &path, const char *text) {
  if (path.empty() || path == "-") {
    std::fputs(text, stdout);
    return true;
  }
  std::FILE *f = std::fopen(path.c_str(), "wb");
  if (!f) {
    std::fprintf(stderr, "ffd: cannot write '%s'\n", path.c_str());
    return false;
  }
  std::fputs(text, f);
  return std::fclose(f) == 0;
}

const std::map<std::string, ffd_grouping> kGroupings{{"mass-sum", FFD_GROUP_MASS_SUM},
                                                     {"max-class", FFD_GROUP_MAX_CLASS}};

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Fitness-for-duty NIR periocular screening pipeline"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(ffd_version()));

  int threads = 1;
  auto add_threads = [&](CLI::App *sub) {
    sub->add_option("--threads", threads, "Worker threads")->check(CLI::Range(1, 256));
  };

  // validate
  std::string manifest;
  std::string out;
  auto *validate = app.add_subcommand("validate", "Check a manifest and its subject-disjoint splits");
  validate->add_option("manifest", manifest, "Manifest JSON")->required();
  validate->add_option("--out", out, "Write the JSON report here instead of stdout");

  // preprocess
  ffd_preprocess_options pre;
  ffd_preprocess_options_init(&pre);
  bool no_clahe = false;
  auto *preprocess = app.add_subcommand("preprocess", "Apply CLAHE and resize every frame");
  preprocess->add_option("--manifest", manifest, "Manifest JSON")->required();
  preprocess->add_option("--out", out, "Output directory")->required();
  preprocess->add_flag("--no-clahe", no_clahe, "Skip CLAHE");
  preprocess->add_option("--grid", pre.grid_rows, "CLAHE tile grid (rows = cols)")->check(CLI::Range(1, 1024));
  preprocess->add_option("--cell-px", pre.cell_px, "CLAHE tile size in pixels (overrides --grid)")
      ->check(CLI::Range(1, 1 << 16));
  preprocess->add_option("--clip", pre.clip_limit, "CLAHE clip limit")->check(CLI::PositiveNumber);
  preprocess->add_option("--size", pre.size, "Output width and height; 0 keeps the input size")
      ->check(CLI::Range(0, 1 << 14));
  add_threads(preprocess);

  // select
  ffd_select_options sel;
  ffd_select_options_init(&sel);
  const std::map<std::string, ffd_strategy> strategies{
      {"best", FFD_SELECT_BEST}, {"random", FFD_SELECT_RANDOM}, {"seq", FFD_SELECT_SEQUENTIAL}};
  auto *select = app.add_subcommand("select", "Pick frames per sequence");
  select->add_option("--manifest", manifest, "Manifest JSON")->required();
  select->add_option("--out", out, "Selection CSV")->required();
  select->add_option("--strategy", sel.strategy, "best, random or seq")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case));
  select->add_option("--k", sel.k, "Frames per sequence")->check(CLI::Range(1, 1 << 20));
  select->add_option("--seed", sel.seed, "Seed for the random strategy");
  select->add_option("--log-sigma", sel.log_sigma, "LoG sigma for sharpness")->check(CLI::PositiveNumber);
  add_threads(select);

  // score
  std::string playback, spec, weights, selection;
  auto *score = app.add_subcommand("score", "Score frames with the CNN or replay a score file");
  score->add_option("--manifest", manifest, "Manifest JSON")->required();
  score->add_option("--out", out, "Score CSV")->required();
  auto *pb = score->add_option("--playback", playback, "Score CSV to replay");
  auto *sp = score->add_option("--spec", spec, "Network description JSON");
  auto *wt = score->add_option("--weights", weights, "Weight bundle");
  pb->excludes(sp)->excludes(wt);
  sp->needs(wt);
  wt->needs(sp);
  score->add_option("--selection", selection, "Selection CSV; only these frames are scored");
  add_threads(score);

  // fuse
  std::string scores_csv, at_eer;
  ffd_fuse_options fo;
  ffd_fuse_options_init(&fo);
  const std::map<std::string, ffd_fusion_policy> policies{{"max", FFD_FUSE_MAX}, {"avg", FFD_FUSE_AVERAGE}};
  auto *fuse = app.add_subcommand("fuse", "Fuse frame scores into one decision per sequence");
  fuse->add_option("--scores", scores_csv, "Score CSV")->required();
  fuse->add_option("--manifest", manifest, "Manifest JSON")->required();
  fuse->add_option("--out", out, "Fused CSV")->required();
  fuse->add_option("--policy", fo.policy, "max or avg")->transform(CLI::CheckedTransformer(policies, CLI::ignore_case));
  fuse->add_option("--k", fo.k, "Frames per sequence; 0 uses all")->check(CLI::Range(0, 1 << 20));
  fuse->add_option("--selection", selection, "Selection CSV giving frame order");
  auto *th = fuse->add_option("--threshold", fo.threshold, "Unfit threshold")->check(CLI::Range(0.0, 1.0));
  fuse->add_option("--at-eer", at_eer, "Fused validation CSV; use its EER threshold")->excludes(th);
  fuse->add_option("--grouping", fo.grouping, "mass-sum or max-class")
      ->transform(CLI::CheckedTransformer(kGroupings, CLI::ignore_case));
  add_threads(fuse);

  // eval
  std::string fused_csv;
  std::vector<std::string> formats;
  ffd_eval_options eo;
  ffd_eval_options_init(&eo);
  double eval_threshold = -1.0;
  auto *eval = app.add_subcommand("eval", "Compute DET, EER, FNR and confusion reports");
  eval->add_option("--fused", fused_csv, "Fused CSV")->required();
  eval->add_option("--out", out, "Output directory")->required();
  eval->add_option("--format", formats, "json, md, csv or svg; repeatable; default all")
      ->check(CLI::IsMember({"json", "md", "csv", "svg"}))
      ->delimiter(',');
  eval->add_option("--threshold", eval_threshold, "Confusion threshold; default is the EER threshold")
      ->check(CLI::Range(0.0, 1.0));
  eval->add_option("--grouping", eo.grouping, "mass-sum or max-class")
      ->transform(CLI::CheckedTransformer(kGroupings, CLI::ignore_case));
  add_threads(eval);

  // report
  std::string run_dir;
  auto *rep = app.add_subcommand("report", "Bundle a run directory with checksums and an index");
  rep->add_option("run_dir", run_dir, "Run directory")->required();

  // synth
  std::string kind;
  std::string image_format = "png";
  ffd_synth_scores_options so;
  ffd_synth_scores_options_init(&so);
  ffd_synth_frames_options sf;
  ffd_synth_frames_options_init(&sf);
  std::uint64_t seed = 0;
  int frames = 0;
  auto *synth = app.add_subcommand("synth", "Generate synthetic frames, scores, weights or a network description");
  synth->add_option("--kind", kind, "frames, scores, weights or spec")
      ->required()
      ->check(CLI::IsMember({"frames", "scores", "weights", "spec"}));
  synth->add_option("--out", out, "Output directory (frames, scores) or file (weights, spec)")->required();
  synth->add_option("--seed", seed, "Seed");
  synth->add_option("--count", so.count, "Score sequences")->check(CLI::Range(1, 100000000));
  synth->add_option("--control-mean", so.control_mean, "Latent mean for control items")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--unfit-mean", so.unfit_mean, "Latent mean for impaired items")->check(CLI::Range(0.0, 1.0));
  synth->add_option("--sd", so.stddev, "Latent standard deviation")->check(CLI::NonNegativeNumber);
  synth->add_option("--frames", frames, "Frames per sequence")->check(CLI::Range(1, 100000));
  synth->add_option("--sequences", sf.sequences, "Frame sequences")->check(CLI::Range(1, 1000000));
  synth->add_option("--size", sf.size, "Frame width and height")->check(CLI::Range(16, 8192));
  synth->add_option("--image-format", image_format, "png or pgm")->check(CLI::IsMember({"png", "pgm"}));
  synth->add_option("--spec", spec, "Network description for --kind weights");
  add_threads(synth);

  // weights-info
  auto *winfo = app.add_subcommand("weights-info", "List the tensors of a weight bundle");
  winfo->add_option("weights", weights, "Weight bundle")->required();
  winfo->add_option("--spec", spec, "Check the bundle against this network description");
  winfo->add_option("--out", out, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUsage;
  }

  if (validate->parsed()) {
    int ok = 0;
    char *json = nullptr;
    const ffd_status st = ffd_validate(manifest.c_str(), &ok, &json);
    if (json) {
      const bool written = write_string(out, json);
      ffd_string_free(json);
      if (!written)
        return kExitFailure;
    }
    return report(st);
  }

  if (preprocess->parsed()) {
    pre.grid_cols = pre.grid_rows;
    pre.apply_clahe = no_clahe ? 0 : 1;
    pre.threads = threads;
    size_t n = 0;
    const int rc = report(ffd_preprocess(manifest.c_str(), out.c_str(), &pre, &n));
    if (rc == kExitOk)
      std::fprintf(stderr, "ffd: wrote %zu frames\n", n);
    return rc;
  }

  if (select->parsed()) {
    sel.threads = threads;
    return report(ffd_select(manifest.c_str(), out.c_str(), &sel));
  }

  if (score->parsed()) {
    if (playback.empty() && spec.empty()) {
      std::fprintf(stderr, "ffd: score needs --playback or --spec with --weights\n");
      return kExitUsage;
    }
    ffd_score_options o;
    ffd_score_options_init(&o);
    o.playback = c_or_null(playback);
    o.network_spec = c_or_null(spec);
    o.weights = c_or_null(weights);
    o.selection = c_or_null(selection);
    o.threads = threads;
    return report(ffd_score(manifest.c_str(), out.c_str(), &o));
  }

  if (fuse->parsed()) {
    fo.selection = c_or_null(selection);
    fo.threshold_at_eer = c_or_null(at_eer);
    return report(ffd_fuse(scores_csv.c_str(), manifest.c_str(), out.c_str(), &fo));
  }

  if (eval->parsed()) {
    if (!formats.empty()) {
      eo.json = eo.markdown = eo.csv = eo.svg = 0;
      for (const auto &f : formats) {
        eo.json |= f == "json";
        eo.markdown |= f == "md";
        eo.csv |= f == "csv";
        eo.svg |= f == "svg";
      }
    }
    if (eval_threshold >= 0.0) {
      eo.has_threshold = 1;
      eo.threshold = eval_threshold;
    }
    ffd_eval_summary s{};
    const int rc = report(ffd_evaluate(fused_csv.c_str(), out.c_str(), &eo, &s));
    if (rc == kExitOk)
      std::printf("items %zu  eer %.4f%s  fnr10 %.4f  fnr20 %.4f  threshold %.6f\n", s.items, s.eer,
                  s.eer_degenerate ? " (degenerate)" : "", s.fnr10, s.fnr20, s.threshold);
    return rc;
  }

  if (rep->parsed()) {
    size_t n = 0;
    const int rc = report(ffd_bundle_report(run_dir.c_str(), &n));
    if (rc == kExitOk)
      std::fprintf(stderr, "ffd: bundled %zu artifacts\n", n);
    return rc;
  }

  if (synth->parsed()) {
    if (kind == "scores") {
      so.seed = seed;
      if (frames > 0)
        so.frames_per_sequence = frames;
      return report(ffd_synth_scores(out.c_str(), &so));
    }
    if (kind == "frames") {
      sf.seed = seed;
      if (frames > 0)
        sf.frames_per_sequence = frames;
      sf.format = image_format == "pgm" ? FFD_FORMAT_PGM : FFD_FORMAT_PNG;
      return report(ffd_synth_frames(out.c_str(), &sf));
    }
    if (kind == "weights") {
      if (spec.empty()) {
        std::fprintf(stderr, "ffd: synth --kind weights needs --spec\n");
        return kExitUsage;
      }
      return report(ffd_synth_weights(spec.c_str(), out.c_str(), seed));
    }
    char *json = nullptr;
    const ffd_status st = ffd_default_network_spec(&json);
    if (st != FFD_OK)
      return report(st);
    const bool ok = write_string(out, json);
    ffd_string_free(json);
    return ok ? kExitOk : kExitFailure;
  }

  if (winfo->parsed()) {
    char *json = nullptr;
    const ffd_status st = ffd_weights_info(weights.c_str(), c_or_null(spec), &json);
    if (st != FFD_OK)
      return report(st);
    const bool ok = write_string(out, json);
    ffd_string_free(json);
    return ok ? kExitOk : kExitFailure;
  }
  return kExitUsage;
}

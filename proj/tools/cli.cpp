// Copyright 2026 The avsync Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "avsync/audio.hpp"
#include "avsync/checkpoint.hpp"
#include "avsync/cube_file.hpp"
#include "avsync/errors.hpp"
#include "avsync/manifest.hpp"
#include "avsync/parallel.hpp"
#include "avsync/report.hpp"
#include "avsync/seed.hpp"
#include "avsync/speech_features.hpp"
#include "avsync/synth.hpp"
#include "avsync/trainer.hpp"
#include "avsync/visual_ingest.hpp"

namespace avsync::cli {
namespace {

namespace fs = std::filesystem;

// Salts separating the random streams a single --seed feeds.
constexpr std::uint64_t kTrainPairSalt = 101;
constexpr std::uint64_t kValPairSalt = 102;
constexpr std::uint64_t kModelSalt = 103;
constexpr std::uint64_t kEvalPairSalt = 104;

/// Raised for command-line problems that CLI11 itself cannot see.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ModelOpts {
  std::size_t zeta = 64;
  double mu = 1.0;
  double lambda = 1e-4;
  double rho = 0.5;
  std::string regularizer = "squared";
  double width_scale = 1.0;
};

struct PairOpts {
  double min_shift = 0.1;
  double max_shift = 0.5;
  double impostor_ratio = 1.0;
  std::size_t stride = 6;
};

struct TrainOpts {
  std::size_t batch = 32;
  std::size_t epochs = 15;
  double lr = 1e-3;
  std::string optimizer = "momentum";
  double eta0 = 0.1;
  bool no_selection = false;
  bool no_early_stop = false;
  std::uint64_t seed = 0;
};

struct Options {
  std::string config;
  std::string manifest;
  std::string val_manifest;
  std::string out;
  std::string stats;
  std::string ckpt;
  std::string in;
  std::string frames;
  std::size_t start_frame = 0;
  double start_s = 0.0;
  bool mfcc = false;
  bool allow_fps = false;
  std::optional<double> shift;
  std::size_t folds = 5;
  std::size_t subjects = 8;
  std::size_t clips = 4;
  double duration = 3.0;
  std::string mu_grid = "1.0";
  std::string lambda_grid = "1e-4";
  std::string rho_grid = "0.5";
  std::string eta0_grid = "0.1";
  ModelOpts model;
  PairOpts pairs;
  TrainOpts train;
};

void add_model_options(CLI::App* app, ModelOpts& m) {
  app->add_option("--zeta", m.zeta, "Embedding size")->capture_default_str();
  app->add_option("--mu", m.mu, "Contrastive margin")->capture_default_str();
  app->add_option("--lambda", m.lambda, "Weight regularization")->capture_default_str();
  app->add_option("--rho", m.rho, "Dropout probability")->capture_default_str();
  app->add_option("--regularizer", m.regularizer, "squared | norm")->capture_default_str();
  app->add_option("--width-scale", m.width_scale, "Scale every channel count (tests, quick runs)")->capture_default_str();
}

void add_pair_options(CLI::App* app, PairOpts& p) {
  app->add_option("--min-shift", p.min_shift, "Smallest impostor shift (s)")->capture_default_str();
  app->add_option("--max-shift", p.max_shift, "Largest impostor shift (s)")->capture_default_str();
  app->add_option("--impostor-ratio", p.impostor_ratio, "Impostors per genuine window")->capture_default_str();
  app->add_option("--stride", p.stride, "Frames between genuine windows")->capture_default_str();
}

void add_train_options(CLI::App* app, TrainOpts& t) {
  app->add_option("--batch", t.batch, "Mini-batch size")->capture_default_str();
  app->add_option("--epochs", t.epochs, "Maximum epochs")->capture_default_str();
  app->add_option("--lr", t.lr, "Learning rate")->capture_default_str();
  app->add_option("--optimizer", t.optimizer, "momentum | adam")->capture_default_str();
  app->add_option("--eta0", t.eta0, "Online selection coefficient")->capture_default_str();
  app->add_flag("--no-selection", t.no_selection, "Disable online impostor selection");
  app->add_flag("--no-early-stop", t.no_early_stop, "Always run every epoch");
}

std::map<std::string, std::string> read_config(const fs::path& path) {
  std::ifstream is(path);
  if (!is) throw UsageError("cannot read config file " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t n = 0;
  while (std::getline(is, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError(path.string() + ":" + std::to_string(n) + ": expected key=value");
    auto trim = [](std::string s) {
      const auto l = s.find_first_not_of(" \t\r");
      const auto r = s.find_last_not_of(" \t\r");
      return l == std::string::npos ? std::string() : s.substr(l, r - l + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    if (kv.count(key)) throw UsageError(path.string() + ": key '" + key + "' repeated");
    kv[key] = trim(line.substr(eq + 1));
  }
  return kv;
}

/// Value given on the command line for --name, if any ("" for a bare flag).
std::optional<std::string> cli_value(const std::vector<std::string>& args, const std::string& name) {
  const std::string flag = "--" + name;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == flag) {
      if (i + 1 < args.size() && args[i + 1].rfind("--", 0) != 0) return args[i + 1];
      return std::string();
    }
    if (args[i].rfind(flag + "=", 0) == 0) return args[i].substr(flag.size() + 1);
  }
  return std::nullopt;
}

bool truthy(const std::string& v) { return v == "1" || v == "true" || v == "yes" || v == "on"; }

/// Appends key=value pairs from --config as flags. A key also given on the
/// command line with a different value is a usage error.
std::vector<std::string> merge_config(CLI::App* sub, std::vector<std::string> args) {
  const auto path = cli_value(args, "config");
  if (!path || path->empty()) return args;
  for (const auto& [key, value] : read_config(*path)) {
    if (key == "config") throw UsageError("config files cannot include other config files");
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (!opt) throw UsageError("config key '" + key + "' is not an option of '" + sub->get_name() + "'");
    const bool flag = opt->get_expected_max() == 0;
    if (const auto given = cli_value(args, key)) {
      const bool same = flag ? truthy(value) : *given == value;
      if (!same) throw UsageError("'" + key + "' set to '" + value + "' in " + *path + " conflicts with the command line");
      continue;
    }
    if (flag) {
      if (truthy(value)) args.push_back("--" + key);
    } else {
      args.push_back("--" + key);
      args.push_back(value);
    }
  }
  return args;
}

std::vector<double> parse_list(const std::string& text, const std::string& name) {
  std::vector<double> out;
  std::istringstream is(text);
  std::string cell;
  while (std::getline(is, cell, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(cell, &used));
      if (used != cell.size()) throw std::invalid_argument(cell);
    } catch (const std::exception&) {
      throw UsageError("--" + name + ": '" + cell + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError("--" + name + " is empty");
  return out;
}

ModelConfig model_config(const ModelOpts& m) {
  ModelConfig c;
  c.zeta = m.zeta;
  c.mu = static_cast<Real>(m.mu);
  c.lambda = static_cast<Real>(m.lambda);
  c.rho = static_cast<Real>(m.rho);
  if (m.regularizer == "squared") {
    c.regularizer = Regularizer::kSquaredNorm;
  } else if (m.regularizer == "norm") {
    c.regularizer = Regularizer::kNorm;
  } else {
    throw ConfigError("--regularizer must be 'squared' or 'norm'");
  }
  c.validate();
  return c;
}

Architecture architecture(const ModelOpts& m) {
  Architecture a = Architecture::standard(m.zeta);
  return m.width_scale == 1.0 ? a : a.scaled(m.width_scale);
}

PairGenConfig pair_config(const PairOpts& p, std::uint64_t seed) {
  PairGenConfig c;
  c.min_shift_s = p.min_shift;
  c.max_shift_s = p.max_shift;
  c.impostor_ratio = p.impostor_ratio;
  c.window_stride = p.stride;
  c.seed = seed;
  c.validate();
  return c;
}

TrainConfig train_config(const TrainOpts& t) {
  TrainConfig c;
  c.batch_size = t.batch;
  c.max_epochs = t.epochs;
  c.optimizer.kind = parse_optimizer(t.optimizer);
  c.optimizer.learning_rate = static_cast<Real>(t.lr);
  c.selection.eta0 = static_cast<Real>(t.eta0);
  c.selection.enabled = !t.no_selection;
  c.early_stop = !t.no_early_stop;
  c.seed = t.seed;
  c.validate();
  return c;
}

std::vector<ClipSource> load_manifest_clips(const std::string& path, bool allow_fps) {
  ManifestOptions mo;
  mo.allow_fps = allow_fps;
  const auto records = read_manifest(path, mo);
  return load_clips(records);
}

AudioClip load_audio(const fs::path& path, double start_s) {
  AudioClip clip = read_wav(path);
  if (clip.sample_rate != 16000.0) clip = conform_rate(clip, 16000.0);
  const auto skip = static_cast<std::size_t>(std::llround(start_s * clip.sample_rate));
  if (skip >= clip.samples.size()) throw InputError(path.string() + ": start beyond the end of the audio");
  clip.samples.erase(clip.samples.begin(), clip.samples.begin() + static_cast<std::ptrdiff_t>(skip));
  return clip;
}

int cmd_features_audio(const Options& o, std::ostream& out) {
  FeatureConfig fc;
  fc.mfcc = o.mfcc;
  const auto cube = build_speech_cube(load_audio(o.in, o.start_s), fc);
  write_cube(o.out, cube.values);
  out << o.out << " " << shape_string(cube.values.shape()) << "\n";
  return kExitOk;
}

int cmd_features_video(const Options& o, std::ostream& out) {
  const auto frames = load_frame_dir(o.frames);
  const auto cube = build_visual_cube(frames, o.start_frame);
  write_cube(o.out, cube.values);
  out << o.out << " " << shape_string(cube.values.shape()) << "\n";
  return kExitOk;
}

int cmd_features_batch(const Options& o, std::ostream& out, std::ostream& err) {
  ManifestOptions mo;
  mo.allow_fps = o.allow_fps;
  mo.check_paths = false;
  const auto records = read_manifest(o.manifest, mo);
  fs::create_directories(o.out);
  std::size_t failures = 0;
  for (const auto& r : records) {
    const std::string clip = r.frames_dir.lexically_normal().filename().string();
    try {
      const auto a = build_speech_cube(load_audio(r.audio_path, 0.0));
      write_cube(fs::path(o.out) / (clip + ".audio.avcb"), a.values);
    } catch (const std::exception& e) {
      ++failures;
      err << "error: " << r.audio_path.string() << ": " << e.what() << "\n";
    }
    try {
      const auto v = build_visual_cube(load_frame_dir(r.frames_dir), 0);
      write_cube(fs::path(o.out) / (clip + ".video.avcb"), v.values);
    } catch (const std::exception& e) {
      ++failures;
      err << "error: " << r.frames_dir.string() << ": " << e.what() << "\n";
    }
  }
  out << records.size() << " records, " << failures << " failures\n";
  return failures ? kExitData : kExitOk;
}

int cmd_synth(const Options& o, std::ostream& out) {
  SynthConfig sc;
  sc.n_subjects = o.subjects;
  sc.clips_per_subject = o.clips;
  sc.duration_s = o.duration;
  sc.seed = o.train.seed;
  const auto corpus = generate_corpus(sc);
  const auto records = write_corpus(o.out, corpus);
  out << records.size() << " clips written; manifest " << (fs::path(o.out) / "manifest.csv").string() << "\n";
  return kExitOk;
}

int cmd_train(const Options& o, std::ostream& out) {
  const TrainConfig tc = train_config(o.train);
  const ModelConfig mc = model_config(o.model);
  const auto clips = load_manifest_clips(o.manifest, o.allow_fps);
  const auto train_set = generate_pairs(clips, pair_config(o.pairs, derive_seed(tc.seed, kTrainPairSalt)));
  PairSet val_set;
  if (!o.val_manifest.empty()) {
    const auto val_clips = load_manifest_clips(o.val_manifest, o.allow_fps);
    val_set = generate_pairs(val_clips, pair_config(o.pairs, derive_seed(tc.seed, kValPairSalt)));
  }
  out << "pairs: " << train_set.pairs.size() << " train (" << train_set.genuine_count() << " genuine), "
      << val_set.pairs.size() << " validation, " << train_set.skipped << " impostor draws skipped\n";
  CoupledModel model(architecture(o.model), mc, derive_seed(tc.seed, kModelSalt));
  const auto result = train(model, train_set.pairs, val_set.pairs, tc, [&out](const EpochStats& s) {
    out << "epoch " << s.epoch << " loss " << s.loss << " selection_rate " << s.selection_rate;
    if (s.val_eer >= 0) out << " val_eer " << s.val_eer;
    out << "\n" << std::flush;
  });
  save_checkpoint(o.out, model);
  const std::string stats = o.stats.empty() ? o.out + ".stats.csv" : o.stats;
  write_epoch_csv(stats, result.epochs);
  out << "checkpoint " << o.out << (result.stopped_early ? " (early stop)" : "") << "\nstats " << stats << "\n";
  return kExitOk;
}

int cmd_crossval(const Options& o, std::ostream& out) {
  std::vector<GridPoint> grid;
  for (double mu : parse_list(o.mu_grid, "mu-grid")) {
    for (double lambda : parse_list(o.lambda_grid, "lambda-grid")) {
      for (double rho : parse_list(o.rho_grid, "rho-grid")) {
        for (double eta0 : parse_list(o.eta0_grid, "eta0-grid")) {
          grid.push_back({static_cast<Real>(mu), static_cast<Real>(lambda), static_cast<Real>(rho), static_cast<Real>(eta0)});
        }
      }
    }
  }
  CrossValConfig cv;
  cv.train = train_config(o.train);
  cv.k = o.folds;
  cv.fold_seed = o.train.seed;
  cv.model_seed = derive_seed(o.train.seed, kModelSalt);
  for (const auto& g : grid) {
    ModelOpts m = o.model;
    m.mu = g.mu;
    m.lambda = g.lambda;
    m.rho = g.rho;
    model_config(m);
  }
  const auto clips = load_manifest_clips(o.manifest, o.allow_fps);
  const auto pairs = generate_pairs(clips, pair_config(o.pairs, derive_seed(o.train.seed, kTrainPairSalt)));
  const auto result = cross_validate(pairs.pairs, architecture(o.model), grid, cv);
  nlohmann::ordered_json j;
  j["k"] = cv.k;
  j["grid"] = nlohmann::json::array();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    j["grid"].push_back({{"mu", grid[i].mu}, {"lambda", grid[i].lambda}, {"rho", grid[i].rho}, {"eta0", grid[i].eta0},
                         {"fold_eer", result.fold_eer[i]}, {"mean_eer", result.mean_eer[i]}});
  }
  j["best"] = {{"index", result.best_index}, {"mu", result.best.mu}, {"lambda", result.best.lambda},
               {"rho", result.best.rho}, {"eta0", result.best.eta0}, {"mean_eer", result.mean_eer[result.best_index]}};
  std::ofstream(o.out) << j.dump(2) << "\n";
  out << "best grid point " << result.best_index << " mean EER " << result.mean_eer[result.best_index] << "\n";
  return kExitOk;
}

int cmd_eval(const Options& o, std::ostream& out) {
  auto model = load_checkpoint(o.ckpt);
  const auto clips = load_manifest_clips(o.manifest, o.allow_fps);
  PairGenConfig pc = pair_config(o.pairs, derive_seed(o.train.seed, kEvalPairSalt));
  pc.fixed_shift_s = o.shift;
  pc.validate();
  const auto pairs = generate_pairs(clips, pc);
  const RunReport report = evaluate_run(*model, pairs.pairs, o.folds, o.train.seed);
  const fs::path dir(o.out);
  fs::create_directories(dir);
  write_roc_csv(dir / "roc.csv", report.overall.roc);
  write_pr_csv(dir / "pr.csv", report.overall.pr);
  std::vector<std::pair<std::string, double>> extra;
  if (o.shift) extra.emplace_back("shift_s", *o.shift);
  std::ofstream(dir / "metrics.json") << metrics_json(report, extra);
  CurvePlot roc{"ROC", "false acceptance rate", "true positive rate", {}, {}, true};
  for (const auto& p : report.overall.roc) {
    roc.x.push_back(p.far);
    roc.y.push_back(p.tpr);
  }
  write_svg(dir / "roc.svg", roc);
  CurvePlot pr{"Precision-Recall", "recall", "precision", {}, {}, false};
  for (const auto& p : report.overall.pr) {
    pr.x.push_back(p.recall);
    pr.y.push_back(p.precision);
  }
  write_svg(dir / "pr.svg", pr);
  out << "EER " << report.eer_stats.mean << " +- " << report.eer_stats.std << "  AUC " << report.auc_stats.mean
      << " +- " << report.auc_stats.std << "  AP " << report.ap_stats.mean << " +- " << report.ap_stats.std << "\n";
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  Options o;
  CLI::App app{"Coupled 3D-CNN audio-visual matching", "avsync"};
  app.require_subcommand(1);

  auto* features = app.add_subcommand("features", "Build speech or lip cubes (AVCB files)");
  features->require_subcommand(1);
  auto* f_audio = features->add_subcommand("audio", "WAV -> [15, 40, 3] speech cube");
  f_audio->add_option("--in", o.in, "Input WAV")->required();
  f_audio->add_option("--out", o.out, "Output cube")->required();
  f_audio->add_option("--start", o.start_s, "Window start (s)");
  f_audio->add_flag("--mfcc", o.mfcc, "Cepstral coefficients instead of log mel energies");
  auto* f_video = features->add_subcommand("video", "PGM frames -> [9, 60, 100, 1] lip cube");
  f_video->add_option("--frames", o.frames, "Directory of PGM frames")->required();
  f_video->add_option("--start", o.start_frame, "First frame index");
  f_video->add_option("--out", o.out, "Output cube")->required();
  auto* f_batch = features->add_subcommand("batch", "First window of every manifest row");
  f_batch->add_option("--manifest", o.manifest, "Dataset manifest")->required();
  f_batch->add_option("--out-dir", o.out, "Output directory")->required();
  f_batch->add_flag("--allow-fps", o.allow_fps, "Accept frame rates other than 30");

  auto* synth = app.add_subcommand("synth", "Write the synthetic corpus and its manifest");
  synth->add_option("--out", o.out, "Output directory")->required();
  synth->add_option("--subjects", o.subjects, "Number of subjects")->capture_default_str();
  synth->add_option("--clips", o.clips, "Clips per subject")->capture_default_str();
  synth->add_option("--duration", o.duration, "Clip length (s)")->capture_default_str();
  synth->add_option("--seed", o.train.seed, "Seed")->capture_default_str();

  auto* train_cmd = app.add_subcommand("train", "Train the coupled model");
  train_cmd->add_option("--config", o.config, "key=value file; keys are option names");
  train_cmd->add_option("--manifest", o.manifest, "Training manifest")->required();
  train_cmd->add_option("--val-manifest", o.val_manifest, "Validation manifest (early stopping)");
  train_cmd->add_option("--out", o.out, "Checkpoint path")->required();
  train_cmd->add_option("--stats", o.stats, "Epoch statistics CSV (default <out>.stats.csv)");
  train_cmd->add_option("--seed", o.train.seed, "Seed")->capture_default_str();
  train_cmd->add_flag("--allow-fps", o.allow_fps, "Accept frame rates other than 30");
  add_model_options(train_cmd, o.model);
  add_pair_options(train_cmd, o.pairs);
  add_train_options(train_cmd, o.train);

  auto* cv_cmd = app.add_subcommand("crossval", "Subject-disjoint k-fold hyperparameter search");
  cv_cmd->add_option("--config", o.config, "key=value file; keys are option names");
  cv_cmd->add_option("--manifest", o.manifest, "Dataset manifest")->required();
  cv_cmd->add_option("--out", o.out, "Result JSON")->required();
  cv_cmd->add_option("--folds", o.folds, "k")->capture_default_str();
  cv_cmd->add_option("--seed", o.train.seed, "Seed")->capture_default_str();
  cv_cmd->add_option("--mu-grid", o.mu_grid, "Comma-separated margins")->capture_default_str();
  cv_cmd->add_option("--lambda-grid", o.lambda_grid, "Comma-separated regularization weights")->capture_default_str();
  cv_cmd->add_option("--rho-grid", o.rho_grid, "Comma-separated dropout probabilities")->capture_default_str();
  cv_cmd->add_option("--eta0-grid", o.eta0_grid, "Comma-separated selection coefficients")->capture_default_str();
  cv_cmd->add_flag("--allow-fps", o.allow_fps, "Accept frame rates other than 30");
  cv_cmd->add_option("--zeta", o.model.zeta, "Embedding size")->capture_default_str();
  cv_cmd->add_option("--width-scale", o.model.width_scale, "Scale every channel count")->capture_default_str();
  add_pair_options(cv_cmd, o.pairs);
  add_train_options(cv_cmd, o.train);

  auto* eval_cmd = app.add_subcommand("eval", "Score a checkpoint: metrics.json, ROC/PR CSV and SVG");
  eval_cmd->add_option("--config", o.config, "key=value file; keys are option names");
  eval_cmd->add_option("--ckpt", o.ckpt, "Checkpoint")->required();
  eval_cmd->add_option("--manifest", o.manifest, "Test manifest")->required();
  eval_cmd->add_option("--out-dir", o.out, "Output directory")->required();
  eval_cmd->add_option("--shift", o.shift, "Fixed impostor shift (s); random in [min, max] when omitted");
  eval_cmd->add_option("--folds", o.folds, "Disjoint test splits for mean +- std")->capture_default_str();
  eval_cmd->add_option("--seed", o.train.seed, "Seed")->capture_default_str();
  eval_cmd->add_flag("--allow-fps", o.allow_fps, "Accept frame rates other than 30");
  add_pair_options(eval_cmd, o.pairs);

  try {
    std::vector<std::string> args = raw_args;
    if (!args.empty()) {
      if (CLI::App* sub = app.get_subcommand_no_throw(args[0])) {
        std::vector<std::string> rest(args.begin() + 1, args.end());
        rest = merge_config(sub, rest);
        args.resize(1);
        args.insert(args.end(), rest.begin(), rest.end());
      }
    }
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }

  tune_allocator();
  try {
    if (f_audio->parsed()) return cmd_features_audio(o, out);
    if (f_video->parsed()) return cmd_features_video(o, out);
    if (f_batch->parsed()) return cmd_features_batch(o, out, err);
    if (synth->parsed()) return cmd_synth(o, out);
    if (train_cmd->parsed()) return cmd_train(o, out);
    if (cv_cmd->parsed()) return cmd_crossval(o, out);
    if (eval_cmd->parsed()) return cmd_eval(o, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const InputError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const ShapeError& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}

}  // namespace avsync::cli

// tools/textrec_main.cc

// Copyright 2026 The textrec Authors

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

// Command-line surface: gen / train / recognize / sweep / eval.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 model error.
// Config precedence: command-line flags > --config JSON file > defaults.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "textrec/data/datasets.h"
#include "textrec/decode/decoder.h"
#include "textrec/detect/detect.h"
#include "textrec/io/model_store.h"
#include "textrec/net/presets.h"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace textrec;

namespace {

// Exception families mapped to the exit-code contract.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ModelError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// ---------------------------------------------------------------------------
// Small file helpers
// ---------------------------------------------------------------------------

std::string ReadTextFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteTextFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("short write to " + path.string());
}

json LoadJsonFile(const fs::path& path) {
  try {
    return json::parse(ReadTextFile(path));
  } catch (const json::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

std::vector<json> LoadJsonl(const fs::path& path) {
  std::istringstream in(ReadTextFile(path));
  std::vector<json> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      rows.push_back(json::parse(line));
    } catch (const json::exception& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return rows;
}

GrayImage LoadImage(const fs::path& path) {
  try {
    return LoadPgmFile(path.string());
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

Classifier LoadClassifierModel(const fs::path& path) {
  try {
    return Classifier::Load(path.string());
  } catch (const std::exception& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

HybridModel LoadHybrid(const fs::path& path) {
  try {
    return LoadHybridModel(path.string());
  } catch (const std::exception& e) {
    throw ModelError(path.string() + ": " + e.what());
  }
}

std::vector<int> ParseIntList(const std::string& csv, const std::string& flag) {
  std::vector<int> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not an integer");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty grid");
  return out;
}

std::vector<double> ParseDoubleList(const std::string& csv, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw UsageError(flag + ": '" + item + "' is not a number");
    }
  }
  if (out.empty()) throw UsageError(flag + ": empty grid");
  return out;
}

// Writes to `path`, or stdout when path is "-".
void EmitText(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    return;
  }
  WriteTextFile(path, content);
}

// Deterministic parallel map: results land by input index.
template <typename Fn>
void ParallelForIndex(int n, int jobs, const Fn& fn) {
  jobs = std::max(1, jobs);
  if (jobs == 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(jobs, n);
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

// ---------------------------------------------------------------------------
// Dataset directory loaders (see FORMATS.md)
// ---------------------------------------------------------------------------

PatchDataset LoadCharDir(const fs::path& dir, int patch_side) {
  PatchDataset data;
  for (const json& row : LoadJsonl(dir / "truth.jsonl")) {
    const GrayImage img = LoadImage(dir / row.at("image").get<std::string>());
    data.push_back({NormalizePatch(ResampleToPatch(img, patch_side)),
                    row.at("label").get<int>()});
  }
  if (data.empty()) throw DataError(dir.string() + ": no character samples");
  return data;
}

std::vector<WordSample> LoadWordDir(const fs::path& dir) {
  std::vector<WordSample> words;
  for (const json& row : LoadJsonl(dir / "truth.jsonl")) {
    WordSample ws;
    ws.image = LoadImage(dir / row.at("image").get<std::string>());
    ws.text = row.at("text").get<std::string>();
    for (const json& span : row.at("char_spans"))
      ws.char_spans.push_back({span.at(0).get<int>(), span.at(1).get<int>()});
    words.push_back(std::move(ws));
  }
  if (words.empty()) throw DataError(dir.string() + ": no word samples");
  return words;
}

struct SceneEntry {
  std::string name;
  GrayImage image;
  std::vector<TruthWord> truth;
};

std::vector<SceneEntry> LoadSceneDir(const fs::path& dir) {
  std::vector<SceneEntry> scenes;
  for (const json& row : LoadJsonl(dir / "truth.jsonl")) {
    SceneEntry entry;
    entry.name = row.at("image").get<std::string>();
    entry.image = LoadImage(dir / entry.name);
    for (const json& w : row.at("words")) {
      const json& b = w.at("box");
      entry.truth.push_back({Box{b.at(0).get<int>(), b.at(1).get<int>(),
                                 b.at(2).get<int>(), b.at(3).get<int>()},
                             w.at("text").get<std::string>()});
    }
    scenes.push_back(std::move(entry));
  }
  if (scenes.empty()) throw DataError(dir.string() + ": no scenes");
  return scenes;
}

// ---------------------------------------------------------------------------
// gen
// ---------------------------------------------------------------------------

struct GenOpts {
  std::string out;
  int count = 0;
  uint64_t seed = 1;
  int len_min = 3, len_max = 8;
  int width = 360, height = 220;
  int words_min = 2, words_max = 3;
};

void EnsureOutDir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(dir.string() + ": " + ec.message());
}

std::string IndexedName(const char* stem, int i) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s_%05d.pgm", stem, i);
  return buf;
}

void CmdGenChars(const GenOpts& opts) {
  EnsureOutDir(opts.out);
  const Alphabet& alphabet = Alphabet::Full();
  Rng rng(opts.seed);
  std::ostringstream truth;
  for (int i = 0; i < opts.count; ++i) {
    const int label = i % alphabet.size();
    const WordStyle style = SampleStyle(rng, {});
    const WordSample ws = RenderWord(std::string(1, alphabet.Symbol(label)), style, rng());
    const std::string name = IndexedName("char", i);
    SavePgmFile(ws.image, (fs::path(opts.out) / name).string());
    truth << json{{"image", name},
                  {"label", label},
                  {"symbol", std::string(1, alphabet.Symbol(label))}}
                 .dump()
          << "\n";
  }
  WriteTextFile(fs::path(opts.out) / "truth.jsonl", truth.str());
  WriteTextFile(fs::path(opts.out) / "manifest.json",
                json{{"kind", "chars"}, {"count", opts.count}, {"seed", opts.seed}}
                        .dump(2) +
                    "\n");
}

void CmdGenWords(const GenOpts& opts) {
  EnsureOutDir(opts.out);
  if (opts.len_min < 1 || opts.len_max < opts.len_min)
    throw UsageError("gen words: bad --len-min/--len-max");
  Rng rng(opts.seed);
  std::ostringstream truth;
  for (int i = 0; i < opts.count; ++i) {
    const std::string text = RandomWord(rng, opts.len_min, opts.len_max);
    const WordSample ws = RenderWord(text, SampleStyle(rng, {}), rng());
    const std::string name = IndexedName("word", i);
    SavePgmFile(ws.image, (fs::path(opts.out) / name).string());
    json spans = json::array();
    for (const ColumnSpan& s : ws.char_spans) spans.push_back({s.start, s.end});
    truth << json{{"image", name}, {"text", text}, {"char_spans", spans}}.dump()
          << "\n";
  }
  WriteTextFile(fs::path(opts.out) / "truth.jsonl", truth.str());
  WriteTextFile(fs::path(opts.out) / "manifest.json",
                json{{"kind", "words"},
                     {"count", opts.count},
                     {"seed", opts.seed},
                     {"len_min", opts.len_min},
                     {"len_max", opts.len_max}}
                        .dump(2) +
                    "\n");
}

void CmdGenScenes(const GenOpts& opts) {
  EnsureOutDir(opts.out);
  SceneSuiteConfig config;
  config.width = opts.width;
  config.height = opts.height;
  config.words_min = opts.words_min;
  config.words_max = opts.words_max;
  std::vector<SceneSample> scenes;
  try {
    scenes = BuildSceneSuite(opts.count, opts.seed, config);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("gen scenes: ") + e.what());
  }
  std::ostringstream truth;
  for (int i = 0; i < opts.count; ++i) {
    const SceneSample& scene = scenes[i];
    const std::string name = IndexedName("scene", i);
    SavePgmFile(scene.image, (fs::path(opts.out) / name).string());
    json words = json::array();
    for (const TruthWord& w : scene.truth) {
      if (w.box.x < 0 || w.box.y < 0 || w.box.x2() > opts.width ||
          w.box.y2() > opts.height)
        throw DataError(name + ": truth box leaves the canvas");
      words.push_back(json{{"box", {w.box.x, w.box.y, w.box.w, w.box.h}},
                           {"text", w.text}});
    }
    truth << json{{"image", name}, {"words", words}}.dump() << "\n";
  }
  WriteTextFile(fs::path(opts.out) / "truth.jsonl", truth.str());
  WriteTextFile(fs::path(opts.out) / "manifest.json",
                json{{"kind", "scenes"},
                     {"count", opts.count},
                     {"seed", opts.seed},
                     {"width", opts.width},
                     {"height", opts.height},
                     {"words_min", opts.words_min},
                     {"words_max", opts.words_max}}
                        .dump(2) +
                    "\n");
}

// ---------------------------------------------------------------------------
// train
// ---------------------------------------------------------------------------

struct TrainOpts {
  std::string data;
  std::string out;
  std::string preset;
  uint64_t seed = 1;
  int epochs = 10;
  int batch = 64;
  double lr = 0.05;
  double lr_decay = 1.0;
  double momentum = 0.9;
  int rounds = 1;
  int states = 4;
  double stretch = 0.10;
  int margin = 2;
};

TrainConfig ToTrainConfig(const TrainOpts& opts) {
  TrainConfig config;
  config.epochs = opts.epochs;
  config.batch_size = opts.batch;
  config.learning_rate = opts.lr;
  config.lr_decay = opts.lr_decay;
  config.momentum = opts.momentum;
  config.seed = opts.seed;
  return config;
}

void WriteTrainLog(const std::string& model_path, const std::vector<EpochStats>& hist) {
  std::ostringstream csv;
  csv << "# schema: train-log v1\n";
  csv << "epoch,loss,train_acc\n";
  for (const EpochStats& e : hist)
    csv << e.epoch << "," << -e.mean_log_lik << "," << e.accuracy << "\n";
  WriteTextFile(model_path + ".log.csv", csv.str());
}

void TrainPatchModel(const TrainOpts& opts, const NetworkSpec& spec,
                     const PatchDataset& data, std::vector<std::string> labels) {
  for (const LabeledPatch& s : data)
    if (s.label < 0 || s.label >= spec.num_labels)
      throw DataError("label " + std::to_string(s.label) + " outside this role's " +
                      std::to_string(spec.num_labels) + "-way label space");
  TrainOutcome out = TrainClassifier(spec, data, ToTrainConfig(opts));
  out.classifier.label_names() = std::move(labels);
  try {
    out.classifier.Save(opts.out);
  } catch (const std::exception& e) {
    throw ModelError(opts.out + ": " + e.what());
  }
  WriteTrainLog(opts.out, out.history);
}

void CmdTrainChar(const TrainOpts& opts) {
  const Alphabet& alphabet = Alphabet::Full();
  NetworkSpec spec = PresetByName(opts.preset.empty() ? "char-desk" : opts.preset,
                                  alphabet.size());
  std::vector<std::string> labels;
  for (int i = 0; i < alphabet.size(); ++i) labels.emplace_back(1, alphabet.Symbol(i));
  TrainPatchModel(opts, spec, LoadCharDir(opts.data, spec.input_side), labels);
}

void CmdTrainSegCorrect(const TrainOpts& opts) {
  const NetworkSpec spec = CorrectionNetDesk();
  const PatchDataset data =
      DeriveCorrectionPatches(LoadWordDir(opts.data), opts.seed, spec.input_side);
  TrainPatchModel(opts, spec, data, {"correct", "over", "under"});
}

void CmdTrainWordDetect(const TrainOpts& opts) {
  const NetworkSpec spec = DetectNetDesk();
  const PatchDataset data =
      DeriveDetectPatches(LoadWordDir(opts.data), opts.seed, spec.input_side);
  TrainPatchModel(opts, spec, data, {"background", "text"});
}

void TrainHybrid(const TrainOpts& opts, const HmmTopology& topology,
                 const std::vector<WordSample>& units) {
  EmbeddedTrainConfig config;
  config.rounds = opts.rounds;
  config.stretch = opts.stretch;
  config.net = ToTrainConfig(opts);
  try {
    EmbeddedOutcome out =
        EmbeddedViterbiTrain(FrameNetDesk(topology.NumStates()), units, topology, config);
    try {
      SaveHybridModel(opts.out, {std::move(out.frame_net), std::move(out.hmm)});
    } catch (const std::exception& e) {
      throw ModelError(opts.out + ": " + e.what());
    }
    WriteTrainLog(opts.out, out.net_history);
  } catch (const std::invalid_argument& e) {
    throw DataError(std::string("train: ") + e.what());
  }
}

void CmdTrainWordHmm(const TrainOpts& opts) {
  TrainHybrid(opts, HmmTopology::CharInter(opts.states), LoadWordDir(opts.data));
}

void CmdTrainLineHmm(const TrainOpts& opts) {
  std::vector<WordSample> lines;
  for (const SceneEntry& scene : LoadSceneDir(opts.data)) {
    auto scene_lines = LinesFromScene(scene.image, scene.truth, opts.margin);
    for (auto& line : scene_lines) lines.push_back(std::move(line));
  }
  if (lines.empty()) throw DataError(opts.data + ": scenes contain no text rows");
  TrainHybrid(opts, HmmTopology::WordInter(opts.states), lines);
}

// ---------------------------------------------------------------------------
// recognize
// ---------------------------------------------------------------------------

struct RecognizeOpts {
  std::string models;
  std::string lexicon;  // empty: try <models>/lexicon.txt
  std::string mode = "edit";
  int beam = 100;
  int order = 2;
  bool collapse = true;
  bool length_normalize = false;
  int gap_tol = kDefaultGapTol;
  int jobs = 1;
  bool dump_cascade = false;
  bool dump_beam = false;
  std::vector<std::string> inputs;
  // scene-only knobs
  double tau_det = 0.5;
  double tau_v = -1e300;
  int tau_e = 1000000;
  double nms = 0.30;
  std::string out = "-";
};

DecodeMode ParseMode(const std::string& mode) {
  if (mode == "nolm") return DecodeMode::kNoLm;
  if (mode == "lm") return DecodeMode::kLm;
  if (mode == "edit") return DecodeMode::kEditDistance;
  throw UsageError("unknown --mode '" + mode + "' (expected nolm, lm, or edit)");
}

std::optional<Lexicon> MaybeLoadLexicon(const RecognizeOpts& opts, bool required) {
  fs::path path = opts.lexicon.empty() ? fs::path(opts.models) / "lexicon.txt"
                                       : fs::path(opts.lexicon);
  if (!fs::exists(path)) {
    if (required)
      throw UsageError("mode " + opts.mode + " requires a lexicon (" + path.string() +
                       " not found; pass --lexicon)");
    return std::nullopt;
  }
  try {
    return Lexicon::FromFile(path.string(), /*case_sensitive=*/!opts.collapse);
  } catch (const std::exception& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

WordRecognizer BuildWordRecognizer(const RecognizeOpts& opts) {
  const fs::path dir(opts.models);
  HybridModel hybrid = LoadHybrid(dir / "word-hmm.mxtn");
  WordRecognizer rec{std::move(hybrid.frame_net),
                     std::move(hybrid.hmm),
                     LoadClassifierModel(dir / "seg-correct.mxtn"),
                     LoadClassifierModel(dir / "char.mxtn"),
                     std::nullopt,
                     std::nullopt,
                     opts.collapse,
                     opts.gap_tol};
  const DecodeMode mode = ParseMode(opts.mode);
  if (mode != DecodeMode::kNoLm) {
    std::optional<Lexicon> lexicon = MaybeLoadLexicon(opts, /*required=*/true);
    if (opts.order < 1) throw UsageError("--order must be >= 1");
    rec.lm.emplace(*lexicon, opts.order);
    rec.lexicon = std::move(lexicon);
  }
  return rec;
}

RecognizeOptions ToRecognizeOptions(const RecognizeOpts& opts) {
  RecognizeOptions ro;
  ro.mode = ParseMode(opts.mode);
  ro.beam_width = opts.beam;
  ro.length_normalize = opts.length_normalize;
  return ro;
}

void CmdRecognizeWord(const RecognizeOpts& opts) {
  const WordRecognizer rec = BuildWordRecognizer(opts);
  const RecognizeOptions ro = ToRecognizeOptions(opts);

  const int n = static_cast<int>(opts.inputs.size());
  std::vector<std::string> lines(n), errors(n);
  ParallelForIndex(n, opts.jobs, [&](int i) {
    const std::string& path = opts.inputs[i];
    try {
      const GrayImage img = LoadImage(path);
      CascadeGraph cascade;
      BeamTrace trace;
      const RecognizedWord rw =
          RecognizeWord(img, rec, ro, opts.dump_cascade ? &cascade : nullptr,
                        opts.dump_beam ? &trace : nullptr);
      lines[i] = path + "\t" + rw.transcript;
      if (opts.dump_cascade)
        WriteTextFile(path + ".cascade.json", CascadeToJson(cascade).dump(2) + "\n");
      if (opts.dump_beam) {
        json queues = json::array();
        for (const auto& q : trace.queues) {
          json hyps = json::array();
          for (const Hypothesis& h : q)
            hyps.push_back(json{{"word", h.word},
                                {"log_cost", h.log_cost},
                                {"log_cost_v", h.log_cost_v},
                                {"path", h.path}});
          queues.push_back(hyps);
        }
        WriteTextFile(path + ".beam.json",
                      json{{"beam_width", ro.beam_width}, {"queues", queues}}.dump(2) +
                          "\n");
      }
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  bool any_failed = false;
  for (int i = 0; i < n; ++i) {
    if (errors[i].empty()) {
      std::cout << lines[i] << "\n";
    } else {
      any_failed = true;
      std::cerr << "recognize: " << opts.inputs[i] << ": " << errors[i] << "\n";
    }
  }
  if (any_failed) throw DataError("some inputs failed");
}

SceneModels BuildSceneModels(const RecognizeOpts& opts) {
  const fs::path dir(opts.models);
  HybridModel line = LoadHybrid(dir / "line-hmm.mxtn");
  return SceneModels{std::move(line.frame_net), std::move(line.hmm),
                     LoadClassifierModel(dir / "word-detect.mxtn"),
                     BuildWordRecognizer(opts)};
}

SceneParams ToSceneParams(const RecognizeOpts& opts) {
  SceneParams params;
  params.word_opts = ToRecognizeOptions(opts);
  params.thresholds = {opts.tau_det, opts.tau_v, opts.tau_e};
  params.nms_overlap = opts.nms;
  return params;
}

json WordBoxToJson(const std::string& scene, const WordBox& wb) {
  return json{{"scene", scene},
              {"box", {wb.box.x, wb.box.y, wb.box.w, wb.box.h}},
              {"transcript", wb.transcript},
              {"cost_v", wb.cost_v},
              {"p_text", wb.p_text},
              {"edit_dist", wb.edit_dist}};
}

void CmdRecognizeScene(const RecognizeOpts& opts) {
  const SceneModels models = BuildSceneModels(opts);
  const SceneParams params = ToSceneParams(opts);

  const int n = static_cast<int>(opts.inputs.size());
  std::vector<std::string> chunks(n), errors(n);
  ParallelForIndex(n, opts.jobs, [&](int i) {
    const std::string& path = opts.inputs[i];
    try {
      const GrayImage img = LoadImage(path);
      std::ostringstream out;
      for (const WordBox& wb : RecognizeScene(img, models, params))
        out << WordBoxToJson(path, wb).dump() << "\n";
      chunks[i] = out.str();
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  bool any_failed = false;
  std::ostringstream all;
  for (int i = 0; i < n; ++i) {
    if (errors[i].empty()) {
      all << chunks[i];
    } else {
      any_failed = true;
      std::cerr << "recognize: " << opts.inputs[i] << ": " << errors[i] << "\n";
    }
  }
  EmitText(opts.out, all.str());
  if (any_failed) throw DataError("some inputs failed");
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepOpts {
  RecognizeOpts rec;  // models / lexicon / decode knobs / jobs
  std::string data;
  std::string grid;
  std::string orders = "1,2,3,4,5";
  std::string out = "-";
  bool iou = false;
};

struct TaskAccuracy {
  double accuracy = 0.0;
  double mean_latency_ms = 0.0;
};

TaskAccuracy MeasureWordAccuracy(const std::vector<WordSample>& words,
                                 const WordRecognizer& rec, const RecognizeOptions& ro,
                                 int jobs) {
  const int n = static_cast<int>(words.size());
  std::vector<int> hit(n, 0);
  std::vector<double> latency(n, 0.0);
  ParallelForIndex(n, jobs, [&](int i) {
    try {
      const RecognizedWord rw = RecognizeWord(words[i].image, rec, ro);
      hit[i] = CollapseString(rw.transcript) == CollapseString(words[i].text) ? 1 : 0;
      latency[i] = rw.diagnostics.latency_ms;
    } catch (const std::exception&) {
      hit[i] = 0;
    }
  });
  TaskAccuracy acc;
  for (int i = 0; i < n; ++i) {
    acc.accuracy += hit[i];
    acc.mean_latency_ms += latency[i];
  }
  acc.accuracy /= std::max(1, n);
  acc.mean_latency_ms /= std::max(1, n);
  return acc;
}

void CmdSweepBeam(const SweepOpts& opts) {
  const std::vector<int> grid = ParseIntList(opts.grid, "--grid");
  const std::vector<WordSample> words = LoadWordDir(opts.data);
  const WordRecognizer rec = BuildWordRecognizer(opts.rec);

  std::ostringstream csv;
  csv << "# schema: sweep-beam v1\n";
  csv << "beam,accuracy,mean_latency_ms\n";
  for (int beam : grid) {
    if (beam < 1) throw UsageError("--grid: beam widths must be >= 1");
    RecognizeOptions ro = ToRecognizeOptions(opts.rec);
    ro.beam_width = beam;
    const TaskAccuracy acc = MeasureWordAccuracy(words, rec, ro, opts.rec.jobs);
    csv << beam << "," << acc.accuracy << "," << acc.mean_latency_ms << "\n";
  }
  EmitText(opts.out, csv.str());
}

void CmdSweepLmOrder(const SweepOpts& opts) {
  const std::vector<int> orders = ParseIntList(opts.orders, "--orders");
  const std::vector<WordSample> words = LoadWordDir(opts.data);

  std::ostringstream csv;
  csv << "# schema: sweep-lm-order v1\n";
  csv << "order,accuracy,mean_latency_ms\n";
  for (int order : orders) {
    if (order < 1) throw UsageError("--orders: orders must be >= 1");
    RecognizeOpts rec_opts = opts.rec;
    rec_opts.order = order;
    const WordRecognizer rec = BuildWordRecognizer(rec_opts);
    const TaskAccuracy acc = MeasureWordAccuracy(words, rec, ToRecognizeOptions(rec_opts),
                                                 opts.rec.jobs);
    csv << order << "," << acc.accuracy << "," << acc.mean_latency_ms << "\n";
  }
  EmitText(opts.out, csv.str());
}

void CmdSweepPr(const SweepOpts& opts) {
  const std::vector<double> grid = ParseDoubleList(opts.grid, "--grid");
  const std::vector<SceneEntry> scenes = LoadSceneDir(opts.data);
  const SceneModels models = BuildSceneModels(opts.rec);
  const SceneParams params = ToSceneParams(opts.rec);

  // Candidates are threshold-free; each grid point only refilters them.
  const int n = static_cast<int>(scenes.size());
  std::vector<std::vector<WordBox>> candidates(n);
  std::vector<std::string> errors(n);
  ParallelForIndex(n, opts.rec.jobs, [&](int i) {
    try {
      candidates[i] = RecognizeSceneCandidates(scenes[i].image, models, params);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });
  for (int i = 0; i < n; ++i)
    if (!errors[i].empty())
      throw DataError(scenes[i].name + ": " + errors[i]);

  const OverlapRule rule = opts.iou ? OverlapRule::kIou : OverlapRule::kUnionBox;
  std::ostringstream csv;
  csv << "# schema: sweep-pr v1\n";
  csv << "tau_det,precision,recall,f1\n";
  for (double tau : grid) {
    DetectThresholds thresholds = params.thresholds;
    thresholds.tau_det = tau;
    long long hits = 0, preds = 0, truths = 0;
    for (int i = 0; i < n; ++i) {
      const auto kept = Nms(WordDetectFilter(candidates[i], thresholds),
                            params.nms_overlap);
      const EvalReport r = EvaluateEndToEnd(kept, scenes[i].truth, rule,
                                            /*case_sensitive=*/false);
      hits += r.hits;
      preds += r.num_preds;
      truths += r.num_truth;
    }
    const double p = preds > 0 ? static_cast<double>(hits) / preds : 0.0;
    const double r = truths > 0 ? static_cast<double>(hits) / truths : 0.0;
    const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
    csv << tau << "," << p << "," << r << "," << f << "\n";
  }
  EmitText(opts.out, csv.str());
}

// ---------------------------------------------------------------------------
// eval
// ---------------------------------------------------------------------------

struct EvalOpts {
  std::string truth;
  std::string pred;
  bool iou = false;
};

void CmdEvalWords(const EvalOpts& opts) {
  std::map<std::string, std::string> truth;
  for (const json& row : LoadJsonl(fs::path(opts.truth) / "truth.jsonl"))
    truth[row.at("image").get<std::string>()] = row.at("text").get<std::string>();

  std::istringstream in(ReadTextFile(opts.pred));
  std::string line;
  int total = 0, correct = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos)
      throw DataError(opts.pred + ": expected <image>\\t<transcript> lines");
    const std::string name = fs::path(line.substr(0, tab)).filename().string();
    const auto it = truth.find(name);
    if (it == truth.end()) throw DataError(opts.pred + ": no truth for " + name);
    ++total;
    if (CollapseString(line.substr(tab + 1)) == CollapseString(it->second)) ++correct;
  }
  if (total == 0) throw DataError(opts.pred + ": no predictions");
  std::cout << "accuracy " << static_cast<double>(correct) / total << " (" << correct
            << "/" << total << ")\n";
}

void CmdEvalScenes(const EvalOpts& opts) {
  const std::vector<SceneEntry> scenes = LoadSceneDir(opts.truth);
  std::map<std::string, std::vector<WordBox>> preds;
  for (const json& row : LoadJsonl(opts.pred)) {
    WordBox wb;
    const json& b = row.at("box");
    wb.box = Box{b.at(0).get<int>(), b.at(1).get<int>(), b.at(2).get<int>(),
                 b.at(3).get<int>()};
    wb.transcript = row.at("transcript").get<std::string>();
    preds[fs::path(row.at("scene").get<std::string>()).filename().string()].push_back(wb);
  }

  const OverlapRule rule = opts.iou ? OverlapRule::kIou : OverlapRule::kUnionBox;
  long long hits = 0, num_preds = 0, num_truth = 0;
  for (const SceneEntry& scene : scenes) {
    const auto it = preds.find(scene.name);
    static const std::vector<WordBox> kEmpty;
    const EvalReport r = EvaluateEndToEnd(it == preds.end() ? kEmpty : it->second,
                                          scene.truth, rule, /*case_sensitive=*/false);
    hits += r.hits;
    num_preds += r.num_preds;
    num_truth += r.num_truth;
  }
  const double p = num_preds > 0 ? static_cast<double>(hits) / num_preds : 0.0;
  const double r = num_truth > 0 ? static_cast<double>(hits) / num_truth : 0.0;
  const double f = p + r > 0 ? 2 * p * r / (p + r) : 0.0;
  std::cout << "precision " << p << " recall " << r << " f1 " << f << " (hits " << hits
            << ", preds " << num_preds << ", truth " << num_truth << ")\n";
}

// ---------------------------------------------------------------------------
// argv plumbing: config injection + CLI wiring
// ---------------------------------------------------------------------------

// Expands {"key": value} into --key=value tokens inserted after the
// subcommand names, so explicit flags (parsed last) win.
std::vector<std::string> InjectConfig(std::vector<std::string> tokens) {
  std::string config_path;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (tokens[i] == "--config") {
      if (i + 1 >= tokens.size()) throw UsageError("--config needs a file argument");
      config_path = tokens[i + 1];
      tokens.erase(tokens.begin() + i, tokens.begin() + i + 2);
      break;
    }
    if (tokens[i].rfind("--config=", 0) == 0) {
      config_path = tokens[i].substr(9);
      tokens.erase(tokens.begin() + i);
      break;
    }
  }
  if (config_path.empty()) return tokens;

  const json config = LoadJsonFile(config_path);
  if (!config.is_object()) throw DataError(config_path + ": config must be a JSON object");
  std::vector<std::string> expanded;
  for (const auto& [key, value] : config.items()) {
    if (key == "config") continue;
    expanded.push_back("--" + key + "=" +
                       (value.is_string() ? value.get<std::string>() : value.dump()));
  }
  // Two leading tokens name the command and subcommand; config flags follow
  // them and precede any user flags.
  const size_t at = std::min<size_t>(tokens.size(), 2);
  tokens.insert(tokens.begin() + at, expanded.begin(), expanded.end());
  return tokens;
}

void AddConfigFlag(CLI::App* cmd) {
  // Parsing happens in InjectConfig; registered here for --help only.
  cmd->add_option("--config", "JSON config file; explicit flags override its values")
      ->type_name("FILE");
}

int Run(int argc, char** argv) {
  CLI::App app{"synthetic scene-text recognition pipeline"};
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  GenOpts gen_opts;
  TrainOpts train_opts;
  RecognizeOpts rec_opts;
  SweepOpts sweep_opts;
  EvalOpts eval_opts;

  // --- gen ---
  CLI::App* gen = app.add_subcommand("gen", "synthesize a labeled dataset");
  gen->require_subcommand(1);
  const auto add_gen_common = [&](CLI::App* cmd) {
    cmd->add_option("--out", gen_opts.out, "output directory")->required();
    cmd->add_option("--count", gen_opts.count, "number of samples");
    cmd->add_option("--seed", gen_opts.seed, "RNG seed");
    AddConfigFlag(cmd);
  };
  CLI::App* gen_chars = gen->add_subcommand("chars", "isolated characters");
  gen_opts.count = 620;
  add_gen_common(gen_chars);
  gen_chars->callback([&]() { CmdGenChars(gen_opts); });

  CLI::App* gen_words = gen->add_subcommand("words", "cropped words");
  add_gen_common(gen_words);
  gen_words->add_option("--len-min", gen_opts.len_min, "shortest word");
  gen_words->add_option("--len-max", gen_opts.len_max, "longest word");
  gen_words->callback([&]() {
    if (gen_words->count("--count") == 0) gen_opts.count = 50;
    CmdGenWords(gen_opts);
  });

  CLI::App* gen_scenes = gen->add_subcommand("scenes", "full scenes with boxes");
  add_gen_common(gen_scenes);
  gen_scenes->add_option("--width", gen_opts.width, "scene width");
  gen_scenes->add_option("--height", gen_opts.height, "scene height");
  gen_scenes->add_option("--words-min", gen_opts.words_min, "min words per scene");
  gen_scenes->add_option("--words-max", gen_opts.words_max, "max words per scene");
  gen_scenes->callback([&]() {
    if (gen_scenes->count("--count") == 0) gen_opts.count = 10;
    CmdGenScenes(gen_opts);
  });

  // --- train ---
  CLI::App* train = app.add_subcommand("train", "fit a model onto a dataset");
  train->require_subcommand(1);
  const auto add_train_common = [&](CLI::App* cmd) {
    cmd->add_option("--data", train_opts.data, "dataset directory")->required();
    cmd->add_option("--out", train_opts.out, "model file to write")->required();
    cmd->add_option("--seed", train_opts.seed, "RNG seed");
    cmd->add_option("--epochs", train_opts.epochs, "training epochs");
    cmd->add_option("--batch", train_opts.batch, "mini-batch size");
    cmd->add_option("--lr", train_opts.lr, "learning rate");
    cmd->add_option("--lr-decay", train_opts.lr_decay, "per-epoch LR multiplier");
    cmd->add_option("--momentum", train_opts.momentum, "SGD momentum");
    AddConfigFlag(cmd);
  };
  CLI::App* train_char = train->add_subcommand("char", "62-way character classifier");
  add_train_common(train_char);
  train_char->add_option("--preset", train_opts.preset,
                         "architecture preset (char-desk, char-large)");
  train_char->callback([&]() { CmdTrainChar(train_opts); });

  CLI::App* train_correct =
      train->add_subcommand("seg-correct", "3-way segmentation corrector (words data)");
  add_train_common(train_correct);
  train_correct->callback([&]() { CmdTrainSegCorrect(train_opts); });

  CLI::App* train_detect =
      train->add_subcommand("word-detect", "word-vs-junk gate (words data)");
  add_train_common(train_detect);
  train_detect->callback([&]() { CmdTrainWordDetect(train_opts); });

  const auto add_hybrid_common = [&](CLI::App* cmd) {
    add_train_common(cmd);
    cmd->add_option("--rounds", train_opts.rounds, "embedded training rounds");
    cmd->add_option("--states", train_opts.states, "HMM states per region class");
    cmd->add_option("--stretch", train_opts.stretch,
                    "ground-truth separator stretch fraction");
  };
  // Frame nets sit on longer, noisier label sequences than the patch nets
  // and blow up at the shared default rate, so the hybrid trainers cool it
  // unless the caller asked for a specific one.
  const auto hybrid_lr = [&](CLI::App* cmd) {
    if (cmd->count("--lr") == 0) train_opts.lr = 0.01;
  };
  CLI::App* train_whmm =
      train->add_subcommand("word-hmm", "char/inter segmenter (words data)");
  add_hybrid_common(train_whmm);
  train_whmm->callback([&]() {
    hybrid_lr(train_whmm);
    CmdTrainWordHmm(train_opts);
  });

  CLI::App* train_lhmm =
      train->add_subcommand("line-hmm", "word/inter-word segmenter (scenes data)");
  add_hybrid_common(train_lhmm);
  train_lhmm->add_option("--margin", train_opts.margin, "line crop margin in px");
  train_lhmm->callback([&]() {
    hybrid_lr(train_lhmm);
    CmdTrainLineHmm(train_opts);
  });

  // --- recognize ---
  CLI::App* recognize = app.add_subcommand("recognize", "run the pipeline on images");
  recognize->require_subcommand(1);
  const auto add_rec_common = [&](CLI::App* cmd) {
    cmd->add_option("--models", rec_opts.models, "model directory")->required();
    cmd->add_option("--lexicon", rec_opts.lexicon,
                    "word list (default <models>/lexicon.txt)");
    cmd->add_option("--mode", rec_opts.mode, "nolm, lm, or edit");
    cmd->add_option("--beam", rec_opts.beam, "beam width B");
    cmd->add_option("--order", rec_opts.order, "n-gram order");
    cmd->add_flag("--collapse,!--no-collapse", rec_opts.collapse,
                  "case-insensitive recognition");
    cmd->add_flag("--length-normalize", rec_opts.length_normalize,
                  "rank final hypotheses by per-character cost");
    cmd->add_option("--gap-tol", rec_opts.gap_tol, "cascade boundary tolerance");
    cmd->add_option("--jobs", rec_opts.jobs, "parallel workers");
    AddConfigFlag(cmd);
  };
  CLI::App* rec_word = recognize->add_subcommand("word", "cropped word images");
  add_rec_common(rec_word);
  rec_word->add_flag("--dump-cascade", rec_opts.dump_cascade,
                     "write <input>.cascade.json");
  rec_word->add_flag("--dump-beam", rec_opts.dump_beam, "write <input>.beam.json");
  rec_word->add_option("images", rec_opts.inputs, "PGM word images")
      ->required()
      ->expected(-1);
  rec_word->callback([&]() { CmdRecognizeWord(rec_opts); });

  CLI::App* rec_scene = recognize->add_subcommand("scene", "full scene images");
  add_rec_common(rec_scene);
  rec_scene->add_option("--tau-det", rec_opts.tau_det, "detection threshold");
  rec_scene->add_option("--tau-v", rec_opts.tau_v, "visual cost threshold (log)");
  rec_scene->add_option("--tau-e", rec_opts.tau_e, "edit distance threshold");
  rec_scene->add_option("--nms", rec_opts.nms, "NMS overlap fraction");
  rec_scene->add_option("--out", rec_opts.out, "JSON-lines output file (- = stdout)");
  rec_scene->add_option("scenes", rec_opts.inputs, "PGM scene images")
      ->required()
      ->expected(-1);
  rec_scene->callback([&]() { CmdRecognizeScene(rec_opts); });

  // --- sweep ---
  CLI::App* sweep = app.add_subcommand("sweep", "grid experiments, CSV output");
  sweep->require_subcommand(1);
  const auto add_sweep_common = [&](CLI::App* cmd, bool scene_knobs) {
    cmd->add_option("--models", sweep_opts.rec.models, "model directory")->required();
    cmd->add_option("--data", sweep_opts.data, "labeled dataset directory")->required();
    cmd->add_option("--lexicon", sweep_opts.rec.lexicon, "word list");
    cmd->add_option("--mode", sweep_opts.rec.mode, "nolm, lm, or edit");
    cmd->add_option("--beam", sweep_opts.rec.beam, "beam width B");
    cmd->add_option("--order", sweep_opts.rec.order, "n-gram order");
    cmd->add_option("--jobs", sweep_opts.rec.jobs, "parallel workers");
    cmd->add_option("--out", sweep_opts.out, "CSV file (- = stdout)");
    if (scene_knobs) {
      cmd->add_option("--tau-v", sweep_opts.rec.tau_v, "visual cost threshold");
      cmd->add_option("--tau-e", sweep_opts.rec.tau_e, "edit distance threshold");
      cmd->add_option("--nms", sweep_opts.rec.nms, "NMS overlap fraction");
      cmd->add_flag("--iou", sweep_opts.iou, "score overlap by IoU > 0.5");
    }
    AddConfigFlag(cmd);
  };
  CLI::App* sweep_beam = sweep->add_subcommand("beam", "accuracy/latency vs beam width");
  add_sweep_common(sweep_beam, false);
  sweep_beam->add_option("--grid", sweep_opts.grid, "comma-separated beam widths")
      ->required();
  sweep_beam->callback([&]() { CmdSweepBeam(sweep_opts); });

  CLI::App* sweep_order = sweep->add_subcommand("lm-order", "accuracy vs n-gram order");
  add_sweep_common(sweep_order, false);
  sweep_order->add_option("--orders", sweep_opts.orders, "comma-separated orders");
  sweep_order->callback([&]() {
    sweep_opts.rec.mode = sweep_order->count("--mode") ? sweep_opts.rec.mode : "lm";
    CmdSweepLmOrder(sweep_opts);
  });

  CLI::App* sweep_pr = sweep->add_subcommand("pr", "precision/recall vs tau_det");
  add_sweep_common(sweep_pr, true);
  sweep_pr->add_option("--grid", sweep_opts.grid, "comma-separated tau_det values")
      ->required();
  sweep_pr->callback([&]() { CmdSweepPr(sweep_opts); });

  // --- eval ---
  CLI::App* eval = app.add_subcommand("eval", "score predictions against truth");
  eval->require_subcommand(1);
  CLI::App* eval_words = eval->add_subcommand("words", "word transcripts (TSV)");
  eval_words->add_option("--truth", eval_opts.truth, "words dataset directory")
      ->required();
  eval_words->add_option("--pred", eval_opts.pred, "recognize-word TSV output")
      ->required();
  AddConfigFlag(eval_words);
  eval_words->callback([&]() { CmdEvalWords(eval_opts); });

  CLI::App* eval_scenes = eval->add_subcommand("scenes", "scene detections (JSONL)");
  eval_scenes->add_option("--truth", eval_opts.truth, "scenes dataset directory")
      ->required();
  eval_scenes->add_option("--pred", eval_opts.pred, "recognize-scene JSONL output")
      ->required();
  eval_scenes->add_flag("--iou", eval_opts.iou, "score overlap by IoU > 0.5");
  AddConfigFlag(eval_scenes);
  eval_scenes->callback([&]() { CmdEvalScenes(eval_opts); });

  std::vector<std::string> tokens;
  for (int i = 1; i < argc; ++i) tokens.emplace_back(argv[i]);
  tokens = InjectConfig(std::move(tokens));

  try {
    // CLI11 wants reversed tokens for the vector-parse entry point.
    std::reverse(tokens.begin(), tokens.end());
    app.parse(tokens);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return Run(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ModelError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}

// Copyright 2026 The MICL Authors. All Rights Reserved.
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

// micl: generate | run | evaluate | saliency-dump
//
// Exit codes: 0 success, 1 internal error, 2 usage or input error.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "micl/config.h"
#include "micl/curriculum.h"
#include "micl/evaluation.h"
#include "micl/io.h"
#include "micl/kernels.h"
#include "micl/synthdata.h"

namespace fs = std::filesystem;

namespace micl {
namespace {

// Input problems the user can fix; mapped to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config;
  std::optional<std::string> dataset;
  std::optional<std::string> out;
  std::optional<uint64_t> seed;
  std::optional<int> max_rounds;
  std::optional<double> threshold;
  std::optional<std::string> ap_variant;
  std::optional<int> workers;
  std::optional<int> n_images;
  std::string predictions;
  std::string model;
  int image_id = 0;
};

void AddCommonFlags(CLI::App* app, Flags& f) {
  app->add_option("--config", f.config, "key=value config file");
  app->add_option("--out", f.out, "output directory");
  app->add_option("--seed", f.seed, "run seed");
  app->add_option("--workers", f.workers, "worker threads (0 = all cores)");
}

RunConfig ResolveConfig(const Flags& f) {
  RunConfig c;
  if (!f.config.empty()) {
    if (!fs::exists(f.config)) throw InputError("config file not found: " + f.config);
    ApplySettings(c, ParseKeyValues(ReadFile(f.config)));
  }
  if (f.dataset) c.dataset = *f.dataset;
  if (f.out) c.out = *f.out;
  if (f.seed) c.seed = *f.seed;
  if (f.max_rounds) c.max_rounds = *f.max_rounds;
  if (f.threshold) c.threshold = *f.threshold;
  if (f.ap_variant) c.ap_variant = ParseApVariant(*f.ap_variant);
  if (f.workers) c.workers = *f.workers;
  if (f.n_images) c.generation.n_images = *f.n_images;
  c.Validate();
  kernels::SetWorkerCount(c.workers);
  return c;
}

Dataset LoadDataset(const std::string& path) {
  if (path.empty()) throw InputError("no dataset given (--dataset)");
  if (!fs::exists(path)) throw InputError("dataset not found: " + path);
  return ParseDataset(ReadFile(path));
}

fs::path PrepareOut(const RunConfig& c) {
  fs::path out(c.out);
  fs::create_directories(out);
  return out;
}

int CmdGenerate(const Flags& f) {
  const RunConfig c = ResolveConfig(f);
  const Dataset ds = Generate(c.ToGenConfig());
  const fs::path out = PrepareOut(c);
  WriteFile(out / "dataset.json", SerializeDataset(ds));
  const PlantReport plant = PlantedBiasCheck(ds);
  std::cout << "wrote " << (out / "dataset.json").string() << ": " << ds.images.size()
            << " images, plant holds in " << plant.images_planted << "/"
            << plant.images_checked << "\n";
  return 0;
}

std::vector<ScoredBox> FinalPredictions(std::span<const PreparedImage> images,
                                        const MscModel& model) {
  std::vector<ScoredBox> out;
  for (const PreparedImage& img : images) {
    for (int c = 0; c < model.num_categories(); ++c) {
      const Detection d = TopDetection(img.rois, model, c);
      out.push_back({img.scene->id, c, d.box, d.score});
    }
  }
  return out;
}

int CmdRun(const Flags& f) {
  const RunConfig c = ResolveConfig(f);
  const Dataset ds = LoadDataset(c.dataset);
  const std::vector<PreparedImage> images = PrepareDataset(ds);
  const MiclResult result = MiclRun(images, ds.num_categories, c.ToMiclConfig());

  const fs::path out = PrepareOut(c);
  WriteFile(out / "metrics.csv", MetricsCsv(result.rounds));
  WriteFile(out / "model.json", SerializeModel(result.model));
  for (const CurriculumState& s : result.history) {
    WriteFile(out / ("state_round_" + std::to_string(s.round) + ".json"), SerializeState(s));
  }
  WriteFile(out / "predictions.json", SerializePredictions(FinalPredictions(images, result.model)));
  std::cout << "rounds " << result.rounds.size() << ", re-trainings " << result.retrainings
            << ", final CorLoc " << result.final_corloc << "\n";
  return 0;
}

std::string Cell(double v) {
  if (std::isnan(v)) return "nan";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int CmdEvaluate(const Flags& f) {
  const RunConfig c = ResolveConfig(f);
  const Dataset ds = LoadDataset(c.dataset);
  if (f.predictions.empty() || !fs::exists(f.predictions)) {
    throw InputError("predictions not found: " + f.predictions);
  }
  const std::vector<ScoredBox> dets = ParsePredictions(ReadFile(f.predictions));
  const std::vector<GroundTruthObject> gt = ds.GroundTruth();

  // CorLoc: highest-scoring prediction per (image, existing category); pairs
  // without one count as misses. Predictions for absent categories only
  // enter AP, as false positives.
  std::map<std::pair<int, int>, const ScoredBox*> best;
  for (const ScoredBox& d : dets) {
    auto& slot = best[{d.image_id, d.category}];
    if (slot == nullptr || d.score > slot->score) slot = &d;
  }
  std::vector<std::vector<Prediction>> per_category(ds.num_categories);
  std::vector<Prediction> all;
  for (const Scene& s : ds.images) {
    for (int cat : s.labels) {
      const auto it = best.find({s.id, cat});
      Prediction p{s.id, cat, std::nullopt};
      if (it != best.end()) p.box = it->second->box;
      per_category[cat].push_back(p);
      all.push_back(p);
    }
  }

  std::string csv = "category,corloc,ap\n";
  std::vector<double> aps;
  for (int cat = 0; cat < ds.num_categories; ++cat) {
    const double corloc = per_category[cat].empty()
                              ? std::nan("")
                              : Corloc(per_category[cat], gt);
    const double ap = AveragePrecision(dets, gt, cat, c.ap_variant);
    aps.push_back(ap);
    csv += std::to_string(cat) + "," + Cell(corloc) + "," + Cell(ap) + "\n";
  }
  csv += "all," + Cell(Corloc(all, gt)) + "," + Cell(MeanAveragePrecision(aps)) + "\n";

  const ErrorHistogram hist = BuildErrorHistogram(all, gt);
  std::string errors = "type,count\n";
  for (ErrorType t : kAllErrorTypes) {
    errors += std::string(ErrorTypeName(t)) + "," + std::to_string(hist.Count(t)) + "\n";
  }

  const fs::path out = PrepareOut(c);
  WriteFile(out / "evaluation.csv", csv);
  WriteFile(out / "errors.csv", errors);
  std::cout << csv << errors;
  return 0;
}

void WritePgm(const fs::path& path, int w, int h, const std::vector<unsigned char>& gray) {
  WriteFile(path, EncodePgm(w, h, gray));
}

int CmdSaliencyDump(const Flags& f) {
  const RunConfig c = ResolveConfig(f);
  const Dataset ds = LoadDataset(c.dataset);
  if (f.model.empty() || !fs::exists(f.model)) throw InputError("model not found: " + f.model);
  const MscModel model = ParseModel(ReadFile(f.model));
  const Scene* scene = nullptr;
  for (const Scene& s : ds.images) {
    if (s.id == f.image_id) scene = &s;
  }
  if (scene == nullptr) throw InputError("no image with id " + std::to_string(f.image_id));
  if (model.channels() != scene->features.channels()) {
    throw InputError("model channels do not match the dataset");
  }

  Dataset one{ds.num_categories, {*scene}};
  const std::vector<PreparedImage> prepared = PrepareDataset(one, model.pooled_size());
  const PreparedImage& image = prepared.front();
  std::vector<int> categories(model.num_categories());
  for (int k = 0; k < model.num_categories(); ++k) categories[k] = k;
  const SaliencyMap sal = DetectorSaliency(image, model, categories);

  const fs::path out = PrepareOut(c);
  const int w = scene->features.width();
  const int h = scene->features.height();
  const std::string stem = "image" + std::to_string(scene->id);
  for (const auto& [cat, plane] : sal.objects) {
    WritePgm(out / (stem + "_c" + std::to_string(cat) + ".pgm"), w, h, PlaneToGray(plane));
  }
  WritePgm(out / (stem + "_bg.pgm"), w, h, PlaneToGray(sal.background));

  // Seeds and segmentation for the image's own labels.
  const RegionGrowSegmenter segmenter(c.ToMiclConfig().region_grow);
  const SsgOutput ssg =
      RunSegmentationPath(image, model, segmenter, c.ToMiclConfig().localization);
  for (int cat : scene->labels) {
    WritePgm(out / (stem + "_seeds_c" + std::to_string(cat) + ".pgm"), w, h,
             SeedsToGray(ssg.seeds, cat));
  }
  WritePgm(out / (stem + "_seeds_bg.pgm"), w, h, SeedsToGray(ssg.seeds, kBackground));
  WritePgm(out / (stem + "_mask.pgm"), w, h, MaskToGray(ssg.mask));
  std::cout << "wrote saliency for image " << scene->id << " to " << out.string() << "\n";
  return 0;
}

int Main(int argc, char** argv) {
  CLI::App app{"Multiple instance curriculum learning on synthetic feature scenes"};
  app.require_subcommand(1);
  Flags f;

  CLI::App* gen = app.add_subcommand("generate", "write a synthetic dataset");
  AddCommonFlags(gen, f);
  gen->add_option("--n-images", f.n_images, "number of images");

  CLI::App* run = app.add_subcommand("run", "run the curriculum loop");
  AddCommonFlags(run, f);
  run->add_option("--dataset", f.dataset, "dataset JSON");
  run->add_option("--max-rounds", f.max_rounds, "re-localization rounds");
  run->add_option("--threshold-T", f.threshold, "consistency threshold");

  CLI::App* eval = app.add_subcommand("evaluate", "CorLoc, AP and error types");
  AddCommonFlags(eval, f);
  eval->add_option("--dataset", f.dataset, "dataset JSON");
  eval->add_option("--predictions", f.predictions, "predictions JSON")->required();
  eval->add_option("--ap-variant", f.ap_variant, "voc07 or area")
      ->check(CLI::IsMember({"voc07", "area"}));

  CLI::App* dump = app.add_subcommand("saliency-dump", "saliency maps of one image as PGM");
  AddCommonFlags(dump, f);
  dump->add_option("--dataset", f.dataset, "dataset JSON");
  dump->add_option("--model", f.model, "model JSON")->required();
  dump->add_option("--image", f.image_id, "image id");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*gen) return CmdGenerate(f);
    if (*run) return CmdRun(f);
    if (*eval) return CmdEvaluate(f);
    return CmdSaliencyDump(f);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const FormatError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace
}  // namespace micl

int main(int argc, char** argv) { return micl::Main(argc, argv); }

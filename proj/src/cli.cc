// src/cli.cc

// Copyright 2026  The pwld Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pwld/cli.h"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "pwld/corpus.h"
#include "pwld/error.h"
#include "pwld/eval.h"
#include "pwld/nbest.h"
#include "pwld/scoring.h"
#include "pwld/training.h"

namespace pwld {

double QuantizeStars(double score) {
  return std::clamp(std::round(score * 2.0) / 2.0, 0.0, 5.0);
}

std::string FileSha256(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  EVP_MD_CTX *ctx = EVP_MD_CTX_new();
  EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr);
  char buf[1 << 16];
  while (in.read(buf, sizeof buf) || in.gcount() > 0)
    EVP_DigestUpdate(ctx, buf, static_cast<std::size_t>(in.gcount()));
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx, digest, &len);
  EVP_MD_CTX_free(ctx);
  std::string hex;
  char byte[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(byte, sizeof byte, "%02x", digest[i]);
    hex += byte;
  }
  return hex;
}

namespace {

void WriteFile(const std::string &path, const std::string &content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write " + path);
  out << content;
}

struct ValidateArgs {
  std::string inventory;
  bool json = false;
};

int RunValidate(const ValidateArgs &a, std::ostream &out) {
  PhoneInventory inventory = PhoneInventory::Load(a.inventory);
  auto lints = LintInventory(inventory);
  if (a.json) {
    nlohmann::ordered_json doc;
    doc["phones"] = inventory.size();
    doc["features"] = inventory.space()->size();
    doc["lints"] = lints;
    doc["ok"] = lints.empty();
    out << doc.dump(1) << "\n";
  } else {
    out << inventory.size() << " phones, " << inventory.space()->size()
        << " features\n";
    for (const std::string &l : lints) out << "lint: " << l << "\n";
    out << (lints.empty() ? "ok" : "lint failures") << "\n";
  }
  return lints.empty() ? 0 : 1;
}

struct ScoreArgs {
  std::string inventory;
  std::string weights;
  std::string descriptions;
  std::string ref;
  std::vector<std::string> hyps;
  std::string corpus;
  bool json = false;
  bool stars = false;
  bool unsegmented = false;
};

int RunScore(const ScoreArgs &a, std::ostream &out, std::ostream &err) {
  PhoneInventory inventory = PhoneInventory::Load(a.inventory);
  WeightSet weights = LoadWeights(a.weights);
  CheckSameSpace(weights.space, inventory.space());
  DescriptionTable table = a.descriptions.empty()
                               ? DescriptionTable::Default()
                               : DescriptionTable::Load(a.descriptions);
  TokenizeMode mode =
      a.unsegmented ? TokenizeMode::kUnsegmented : TokenizeMode::kSeparated;

  if (!a.corpus.empty()) {
    CorpusLoadOptions options;
    options.mode = mode;
    options.score_range = weights.r;
    LoadedCorpus corpus = LoadCorpus(a.corpus, inventory, options);
    for (const UtteranceRecord &rec : corpus.records) {
      Selection best = SelectBest(weights, rec);
      double score = MapScore(weights, best.script.total_cost,
                              static_cast<int>(rec.reference.size()));
      nlohmann::ordered_json line;
      line["id"] = rec.id;
      line["prediction"] = score;
      line["hypothesis"] = best.index;
      if (a.stars) line["stars"] = QuantizeStars(score);
      out << line.dump() << "\n";
    }
    return 0;
  }

  if (a.ref.empty() || a.hyps.empty())
    throw CLI::ValidationError("score", "needs --ref and --hyp, or --corpus");
  PhoneSequence reference = Tokenize(inventory, a.ref, mode);
  std::size_t chosen = 0;
  PhoneSequence hypothesis;
  if (a.hyps.size() == 1) {
    hypothesis = Tokenize(inventory, a.hyps[0], mode);
  } else {
    UtteranceRecord rec;
    rec.reference = reference;
    for (const std::string &h : a.hyps) rec.hypotheses.push_back(Tokenize(inventory, h, mode));
    chosen = SelectBest(weights, rec).index;
    hypothesis = rec.hypotheses[chosen];
    err << "using hypothesis " << chosen << " of " << a.hyps.size() << "\n";
  }
  ScoreResult result = ScoreUtterance(weights, inventory, reference, hypothesis, table);
  if (a.json) {
    auto doc = nlohmann::ordered_json::parse(RenderJson(result));
    if (a.hyps.size() > 1) doc["hypothesis"] = chosen;
    if (a.stars) doc["stars"] = QuantizeStars(result.score);
    out << doc.dump() << "\n";
  } else {
    out << RenderText(result);
    if (a.stars) {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.1f", QuantizeStars(result.score));
      out << "Stars: " << buf << " / 5\n";
    }
  }
  return 0;
}

struct TrainArgs {
  std::string inventory;
  std::string corpus;
  std::string mode = "ddpwld";
  std::uint64_t seed = 0;
  std::string out;
  std::string report;
  bool control = false;
  bool reselect = false;
  bool lenient = false;
  int max_iters = 5000;
  double dev_fraction = 0.1;
  double cauchy_scale = 1.0;
};

int RunTrain(const TrainArgs &a, std::ostream &out, std::ostream &err) {
  PhoneInventory inventory = PhoneInventory::Load(a.inventory);
  CorpusLoadOptions options;
  options.strict = !a.lenient;
  LoadedCorpus corpus = LoadCorpus(a.corpus, inventory, options);
  for (const LineIssue &issue : corpus.skipped) err << "skipped " << issue.message << "\n";

  TrainConfig config;
  config.mode = ParseTrainMode(a.mode);
  config.seed = a.seed;
  config.shuffled_control = a.control;
  config.reselect = a.reselect;
  config.max_iters = a.max_iters;
  config.dev_fraction = a.dev_fraction;
  config.cauchy_scale = a.cauchy_scale;
  TrainResult result = Train(config, corpus.records, inventory);
  for (const std::string &w : result.warnings) err << "warning: " << w << "\n";

  SaveWeights(result.weights, a.out);
  auto report = nlohmann::ordered_json::parse(TrainReportToJson(config, result));
  report["inputs"] = {{"corpus", FileSha256(a.corpus)},
                      {"inventory", FileSha256(a.inventory)}};
  report["weights_file"] = std::filesystem::path(a.out).filename().string();
  std::string text = report.dump(1) + "\n";
  WriteFile(a.report.empty() ? a.out + ".report.json" : a.report, text);
  out << text;
  return 0;
}

struct EvalArgs {
  std::string corpus;
  std::vector<std::string> preds;
  double z = 2.0;
  int k = 2;
  bool json = false;
  std::string report;
};

std::map<std::string, double> ReadPredictions(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open predictions " + path);
  std::map<std::string, double> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto doc = nlohmann::json::parse(line);
      out[doc.at("id").get<std::string>()] = doc.at("prediction").get<double>();
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kParse,
                  path + " line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

int RunEval(const EvalArgs &a, std::ostream &out) {
  auto entries = ReadAnnotations(a.corpus);
  std::vector<std::string> ids;
  std::vector<double> annotations;
  for (const AnnotationEntry &e : entries)
    if (e.annotation) {
      ids.push_back(e.id);
      annotations.push_back(*e.annotation);
    }
  std::vector<ModelPredictions> models;
  for (const std::string &entry : a.preds) {
    std::string name, path = entry;
    if (auto eq = entry.find('='); eq != std::string::npos) {
      name = entry.substr(0, eq);
      path = entry.substr(eq + 1);
    } else {
      name = std::filesystem::path(entry).stem().string();
    }
    auto by_id = ReadPredictions(path);
    ModelPredictions m{name, {}};
    for (const std::string &id : ids) {
      auto it = by_id.find(id);
      if (it == by_id.end())
        throw Error(ErrorCode::kInvalidArgument,
                    "model '" + name + "' has no prediction for '" + id + "'");
      m.predictions.push_back(it->second);
    }
    models.push_back(std::move(m));
  }
  EvalReport report = Evaluate(models, annotations, a.k, a.z);
  std::string json = EvalReportToJson(report);
  if (!a.report.empty()) WriteFile(a.report, json);
  out << (a.json ? json : EvalReportToText(report));
  return 0;
}

struct GenArgs {
  std::string config;
  std::string inventory;
  std::string out;
};

int RunGenSynth(const GenArgs &a, std::ostream &out) {
  std::ifstream in(a.config, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + a.config);
  std::stringstream buffer;
  buffer << in.rdbuf();
  std::string base = std::filesystem::path(a.config).parent_path().string();
  SynthConfig config = ParseSynthConfig(buffer.str(), base.empty() ? "." : base);
  PhoneInventory inventory = PhoneInventory::Load(a.inventory);
  auto records = GenerateSynthetic(config, inventory);
  WriteCorpus(records, a.out);

  nlohmann::ordered_json sidecar;
  sidecar["config"] = nlohmann::ordered_json::parse(SynthConfigToJson(config));
  sidecar["seed"] = config.seed;
  sidecar["inputs"] = {{"config", FileSha256(a.config)},
                       {"inventory", FileSha256(a.inventory)}};
  sidecar["corpus"] = {{"file", std::filesystem::path(a.out).filename().string()},
                       {"records", records.size()},
                       {"sha256", FileSha256(a.out)}};
  WriteFile(a.out + ".provenance.json", sidecar.dump(1) + "\n");
  out << records.size() << " records written to " << a.out << "\n";
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string> &args, std::ostream &out,
           std::ostream &err) {
  CLI::App app{"Phonologically weighted pronunciation scoring", "pwld"};
  app.require_subcommand(1, 1);

  ValidateArgs va;
  auto *validate = app.add_subcommand("validate-inventory",
                                      "Load an inventory and run its lints");
  validate->add_option("--inventory", va.inventory, "Inventory file")->required();
  validate->add_flag("--json", va.json, "Machine-readable output");

  ScoreArgs sa;
  auto *score = app.add_subcommand("score", "Score attempts against a reference");
  score->add_option("--inventory", sa.inventory, "Inventory file")->required();
  score->add_option("--weights", sa.weights, "Weight file")->required();
  score->add_option("--ref", sa.ref, "Reference phones");
  score->add_option("--hyp", sa.hyps, "Recognized phones (repeat for an N-best list)");
  score->add_option("--corpus", sa.corpus, "Score a JSONL corpus instead");
  score->add_option("--descriptions", sa.descriptions, "Description table file");
  score->add_flag("--json", sa.json, "JSON output");
  score->add_flag("--stars", sa.stars, "Add half-star quantization");
  score->add_flag("--unsegmented", sa.unsegmented,
                  "Phone strings are unsegmented IPA");

  TrainArgs ta;
  auto *train = app.add_subcommand("train", "Fit weights to an annotated corpus");
  train->add_option("--inventory", ta.inventory, "Inventory file")->required();
  train->add_option("--corpus", ta.corpus, "Annotated JSONL corpus")->required();
  train->add_option("--mode", ta.mode, "ddpwld or pwld")
      ->check(CLI::IsMember({"ddpwld", "pwld", "pwld-baseline"}));
  train->add_option("--seed", ta.seed, "Seed for the split and the control run");
  train->add_option("--out", ta.out, "Output weight file")->required();
  train->add_option("--report", ta.report, "Run report (default <out>.report.json)");
  train->add_flag("--control", ta.control, "Also train on shuffled annotations");
  train->add_flag("--reselect", ta.reselect,
                  "Re-pick best hypotheses with the trained weights and refit");
  train->add_flag("--lenient", ta.lenient, "Skip bad corpus lines");
  train->add_option("--max-iters", ta.max_iters, "Optimizer iteration cap");
  train->add_option("--dev-fraction", ta.dev_fraction, "Development split share");
  train->add_option("--cauchy-scale", ta.cauchy_scale, "Cauchy loss scale");

  EvalArgs ea;
  auto *eval = app.add_subcommand("eval", "Correlate predictions with annotations");
  eval->add_option("--corpus", ea.corpus, "Annotated JSONL corpus")->required();
  eval->add_option("--pred", ea.preds, "Prediction JSONL, optionally name=path")
      ->required();
  eval->add_option("--z", ea.z, "Outlier threshold in standard deviations");
  eval->add_option("--k", ea.k, "Models that must agree to mark an outlier");
  eval->add_flag("--json", ea.json, "Print the JSON report");
  eval->add_option("--report", ea.report, "Also write the JSON report here");

  GenArgs ga;
  auto *gen = app.add_subcommand("gen-synth", "Generate a synthetic corpus");
  gen->add_option("--config", ga.config, "Generator config JSON")->required();
  gen->add_option("--inventory", ga.inventory, "Inventory file")->required();
  gen->add_option("--out", ga.out, "Output JSONL corpus")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  if (!reversed.empty()) reversed.pop_back();  // program name
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp &) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp &) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (*validate) return RunValidate(va, out);
    if (*score) return RunScore(sa, out, err);
    if (*train) return RunTrain(ta, out, err);
    if (*eval) return RunEval(ea, out);
    if (*gen) return RunGenSynth(ga, out);
  } catch (const CLI::ParseError &e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error &e) {
    err << "error [" << ErrorCodeName(e.code()) << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

}  // namespace pwld

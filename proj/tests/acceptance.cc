// tests/acceptance.cc

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

// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.h"
#include "pwld/cli.h"
#include "pwld/corpus.h"
#include "pwld/editdist.h"
#include "pwld/eval.h"
#include "pwld/nbest.h"
#include "pwld/scoring.h"
#include "pwld/training.h"

namespace pwld {
namespace {

namespace fs = std::filesystem;
using testing::Starter;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Format(const char *fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

double Seconds(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::vector<OpKind> Kinds(const EditScript &s) {
  std::vector<OpKind> out;
  for (const EditOp &op : s.ops) out.push_back(op.kind);
  return out;
}

Outcome OracleEquivalence() {
  auto start = std::chrono::steady_clock::now();
  std::mt19937_64 rng(101);
  auto alphabet = testing::Alphabet(10, 102);
  auto w = WeightSet::UnitCost(Starter().space());
  int mismatches = 0;
  for (int trial = 0; trial < 500; ++trial) {
    auto a = testing::RandomSequence(alphabet, 6, rng);
    auto b = testing::RandomSequence(alphabet, 6, rng);
    if (Align(w, a, b).total_cost != testing::BruteForceLevenshtein(a, b))
      ++mismatches;
  }
  double secs = Seconds(start);
  return {mismatches == 0 && secs < 10.0,
          Format("500 pairs, %d mismatches, %.2f s", mismatches, secs)};
}

Outcome DotIdentity() {
  std::mt19937_64 rng(201);
  auto alphabet = testing::Alphabet(40, 202);
  const FeatureSpace &space = *Starter().space();
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    auto w = testing::RandomWeights(Starter().space(), rng);
    auto a = testing::RandomSequence(alphabet, 10, rng);
    auto b = testing::RandomSequence(alphabet, 10, rng);
    auto script = Align(w, a, b);
    double d = WeightedDistance(w, ExtractFeatures(script, space));
    worst = std::max(worst, std::abs(d - script.total_cost));
  }
  return {worst <= 1e-9, Format("1000 scripts, max |dot - total| = %.3g", worst)};
}

Outcome FriendExampleRoundTrip() {
  auto w = LoadWeights(testing::DataPath("friend-weights.json"));
  auto result = ScoreUtterance(w, Starter(), Tokenize(Starter(), "f ɹ ɛ n d"),
                               Tokenize(Starter(), "p r ɛ nː t"));
  bool ok = std::abs(result.distance - 2.30) <= 0.01 &&
            std::abs(result.compensation - 6.40) <= 0.01 &&
            std::abs(result.score - 2.80) <= 0.05;
  return {ok, Format("total %.4f, compensation %.4f, score %.4f (l = %.5f)",
                     result.distance, result.compensation, result.score, w.l)};
}

Outcome MappingProperties() {
  auto start = std::chrono::steady_clock::now();
  WeightSet w = WeightSet::UnitCost(Starter().space());
  const int len = 5;
  bool ok = MapScore(w, 0.0, len) == w.r;
  double prev = w.r + 1.0;
  for (int i = 0; i < 100; ++i) {
    double d = 10.0 * i / 99.0;
    double s = MapScore(w, d, len);
    ok = ok && s > 0.0 && s <= w.r && s < prev;
    prev = s;
  }
  double secs = Seconds(start);
  return {ok && secs < 1.0, Format("100-point grid over D in [0, 10], %.4f s", secs)};
}

std::vector<UtteranceRecord> RecoveryCorpus(double noise) {
  SynthConfig cfg;
  cfg.n_utterances = 2200;
  cfg.min_length = 3;
  cfg.max_length = 8;
  cfg.n_best_depth = 3;
  cfg.error_rate = {0.15, 0.05, 0.05};
  cfg.planted_weights = testing::PlantedWeights(Starter().space(), 7);
  cfg.label_noise_std = noise;
  cfg.seed = 11;
  return GenerateSynthetic(cfg, Starter());
}

TrainConfig RecoveryConfig(TrainMode mode) {
  TrainConfig cfg;
  cfg.mode = mode;
  cfg.seed = 1;
  cfg.dev_fraction = 1.0 / 11.0;
  cfg.reselect = true;
  return cfg;
}

struct RecoveryRuns {
  TrainResult clean;
  TrainResult noisy;
  TrainResult noisy_baseline;
  double seconds = 0.0;
};

RecoveryRuns RunRecovery() {
  auto start = std::chrono::steady_clock::now();
  RecoveryRuns runs;
  auto cfg = RecoveryConfig(TrainMode::kDdpwld);
  cfg.shuffled_control = true;
  runs.clean = Train(cfg, RecoveryCorpus(0.0), Starter());
  auto noisy = RecoveryCorpus(0.5);
  runs.noisy = Train(RecoveryConfig(TrainMode::kDdpwld), noisy, Starter());
  runs.noisy_baseline =
      Train(RecoveryConfig(TrainMode::kPwldBaseline), noisy, Starter());
  runs.seconds = Seconds(start);
  return runs;
}

Outcome PlantedRecovery(const RecoveryRuns &runs) {
  bool ok = runs.clean.n_train == 2000 && runs.clean.n_dev == 200 &&
            runs.clean.dev_correlation >= 0.95 &&
            runs.noisy.dev_correlation >= 0.8 &&
            runs.noisy.dev_correlation > runs.noisy_baseline.dev_correlation &&
            runs.seconds < 300.0;
  return {ok, Format("%zu/%zu split; noise 0: %.4f; noise 0.5: ddpwld %.4f vs "
                     "pwld %.4f; %.1f s",
                     runs.clean.n_train, runs.clean.n_dev,
                     runs.clean.dev_correlation, runs.noisy.dev_correlation,
                     runs.noisy_baseline.dev_correlation, runs.seconds)};
}

Outcome ShuffledControl(const RecoveryRuns &runs) {
  if (!runs.clean.control_correlation) return {false, "control run missing"};
  double c = *runs.clean.control_correlation;
  return {std::abs(c) < 0.1, Format("control dev correlation %.4f", c)};
}

Outcome OutlierProtocol(const RecoveryRuns &runs) {
  // Predictions of the two noisy-corpus models on every record, against
  // annotations where 5% of the items are moved far from their true value.
  auto corpus = RecoveryCorpus(0.5);
  std::vector<ModelPredictions> models{{"ddpwld", {}}, {"pwld", {}}};
  const WeightSet *weights[] = {&runs.noisy.weights, &runs.noisy_baseline.weights};
  std::vector<double> annotations;
  for (const auto &rec : corpus) {
    annotations.push_back(*rec.annotation);
    for (int m = 0; m < 2; ++m) {
      Selection best = SelectBest(*weights[m], rec);
      models[m].predictions.push_back(
          MapScore(*weights[m], best.script.total_cost,
                   static_cast<int>(rec.reference.size())));
    }
  }
  std::mt19937_64 rng(301);
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), rng);
  std::vector<bool> planted(corpus.size(), false);
  for (std::size_t k = 0; k < corpus.size() / 20; ++k) {
    std::size_t i = order[k];
    double y = annotations[i];
    annotations[i] = y < 2.5 ? std::min(5.0, y + 3.0) : std::max(0.0, y - 3.0);
    planted[i] = true;
  }
  auto report = Evaluate(models, annotations, 2, 2.0);
  std::size_t n_planted = 0, found = 0, clean = 0, clean_marked = 0;
  for (std::size_t i = 0; i < planted.size(); ++i) {
    n_planted += planted[i];
    found += planted[i] && report.outliers[i];
    clean += !planted[i];
    clean_marked += !planted[i] && report.outliers[i];
  }
  double recall = static_cast<double>(found) / n_planted;
  double false_share = static_cast<double>(clean_marked) / clean;
  bool ok = recall >= 0.8 && false_share <= 0.1;
  std::string corr;
  for (const auto &m : report.models) {
    ok = ok && m.correlation_clean >= m.correlation_all;
    corr += Format("; %s %.4f -> %.4f", m.name.c_str(), m.correlation_all,
                   m.correlation_clean);
  }
  return {ok, Format("recall %.3f, clean items marked %.3f", recall, false_share) +
                  corr};
}

int Cli(std::vector<std::string> args, std::string *out) {
  args.insert(args.begin(), "pwld");
  std::ostringstream o, e;
  int code = RunCli(args, o, e);
  if (out) *out = o.str();
  return code;
}

std::string Slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

Outcome Determinism() {
  fs::path dir = fs::temp_directory_path() / "pwld_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  SynthConfig cfg;
  cfg.n_utterances = 300;
  cfg.error_rate = {0.15, 0.05, 0.05};
  cfg.planted_weights = testing::PlantedWeights(Starter().space(), 13);
  cfg.label_noise_std = 0.3;
  cfg.seed = 14;
  std::string corpus = (dir / "corpus.jsonl").string();
  WriteCorpus(GenerateSynthetic(cfg, Starter()), corpus);
  std::string inventory = testing::DataPath("starter-inventory.tsv");

  int codes = 0;
  for (const char *name : {"w1.json", "w2.json"})
    codes += Cli({"train", "--inventory", inventory, "--corpus", corpus, "--out",
                  (dir / name).string(), "--seed", "9"},
                 nullptr);
  bool same_weights = codes == 0 && Slurp(dir / "w1.json") == Slurp(dir / "w2.json") &&
                      !Slurp(dir / "w1.json").empty();

  std::string s1, s2;
  std::vector<std::string> score{"score", "--inventory", inventory, "--weights",
                                 (dir / "w1.json").string(), "--ref", "f ɹ ɛ n d",
                                 "--hyp", "p r ɛ nː t", "--hyp", "f ɹ ɛ n", "--json"};
  codes += Cli(score, &s1) + Cli(score, &s2);
  bool same_scores = codes == 0 && s1 == s2 && !s1.empty();
  fs::remove_all(dir);
  return {same_weights && same_scores,
          Format("weight files identical: %s; score --json identical: %s",
                 same_weights ? "yes" : "no", same_scores ? "yes" : "no")};
}

Outcome ScaleInvariance() {
  std::mt19937_64 rng(401);
  auto alphabet = testing::Alphabet(20, 402);
  int changed = 0;
  for (int trial = 0; trial < 200; ++trial) {
    auto w = testing::RandomWeights(Starter().space(), rng);
    auto a = testing::RandomSequence(alphabet, 8, rng);
    auto b = testing::RandomSequence(alphabet, 8, rng);
    if (Kinds(Align(w, a, b)) != Kinds(Align(w.ScaledCosts(3.0), a, b))) ++changed;
  }
  return {changed == 0, Format("200 pairs, %d op sequences changed", changed)};
}

}  // namespace
}  // namespace pwld

int main() {
  using namespace pwld;
  int failures = 0;
  auto report = [&](const char *id, const char *name, const std::function<Outcome()> &fn) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s %s: %s\n", id, o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    failures += !o.pass;
  };

  report("AC1", "oracle equivalence", OracleEquivalence);
  report("AC2", "distance dot-product identity", DotIdentity);
  report("AC3", "worked example round-trip", FriendExampleRoundTrip);
  {
    // Informational: the same weights with l taken as ln 6.4 / ln 4.
    WeightSet w = LoadWeights(testing::DataPath("friend-weights.json"));
    w.l = std::log(6.4) / std::log(4.0);
    std::printf("    note: with l = ln 6.4/ln 4 the 5-phone reference gives "
                "compensation %.4f and score %.4f\n",
                LengthCompensation(w, 5), MapScore(w, 2.30, 5));
  }
  report("AC4", "mapping properties", MappingProperties);

  RecoveryRuns runs;
  bool have_runs = false;
  std::string run_error;
  try {
    runs = RunRecovery();
    have_runs = true;
  } catch (const std::exception &e) {
    run_error = e.what();
  }
  auto needs_runs = [&](Outcome (*fn)(const RecoveryRuns &)) {
    return [&, fn]() -> Outcome {
      if (!have_runs) return {false, "training failed: " + run_error};
      return fn(runs);
    };
  };
  report("AC5", "planted-weight recovery", needs_runs(PlantedRecovery));
  report("AC6", "shuffled-label control", needs_runs(ShuffledControl));
  report("AC7", "outlier protocol", needs_runs(OutlierProtocol));
  report("AC8", "determinism", Determinism);
  report("AC9", "argmin scale invariance", ScaleInvariance);

  std::printf("%d of 9 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}

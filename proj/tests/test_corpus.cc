// tests/test_corpus.cc

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

#include <filesystem>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "pwld/corpus.h"
#include "pwld/error.h"
#include "pwld/scoring.h"

namespace pwld {
namespace {

using testing::Starter;

const char *kThreeLines =
    "{\"id\": \"a\", \"reference\": \"f ɹ ɛ n d\", \"hypotheses\": [\"p r ɛ nː t\", \"f ɹ ɛ n\"], \"annotation\": 2.8}\n"
    "{\"id\": \"b\", \"reference\": \"k a t\", \"hypotheses\": [\"k a t\"], \"annotation\": 5}\n"
    "\n"
    "{\"id\": \"c\", \"reference\": \"k a t\", \"hypotheses\": [\"k a d\"]}\n";

SynthConfig BaseConfig() {
  SynthConfig cfg;
  cfg.n_utterances = 50;
  cfg.n_best_depth = 3;
  cfg.error_rate = {0.15, 0.05, 0.05};
  cfg.planted_weights = testing::PlantedWeights(Starter().space(), 9);
  cfg.seed = 77;
  return cfg;
}

TEST_CASE("parse a small corpus") {
  auto loaded = ParseCorpus(kThreeLines, Starter());
  REQUIRE(loaded.records.size() == 3);
  CHECK(loaded.records[0].id == "a");
  CHECK(loaded.records[0].hypotheses.size() == 2);
  CHECK(loaded.records[0].annotation == 2.8);
  CHECK_FALSE(loaded.records[2].annotation.has_value());
  CHECK(loaded.skipped.empty());
}

TEST_CASE("bad lines name their line number") {
  std::string text = std::string(kThreeLines) +
      "{\"id\": \"d\", \"reference\": \"k a t\", \"hypotheses\": [\"k a t\"], \"annotation\": 7.2}\n";
  try {
    ParseCorpus(text, Starter());
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kRange);
    CHECK(std::string(e.what()).find("line 5") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseCorpus("{\"id\": \"x\"\n", Starter()), Error);
}

TEST_CASE("lenient loading skips unknown phones") {
  std::string text = std::string(kThreeLines) +
      "{\"id\": \"e\", \"reference\": \"k ǂ t\", \"hypotheses\": [\"k a t\"], \"annotation\": 3}\n";
  CHECK_THROWS_AS(ParseCorpus(text, Starter()), Error);
  CorpusLoadOptions lenient;
  lenient.strict = false;
  auto loaded = ParseCorpus(text, Starter(), lenient);
  CHECK(loaded.records.size() == 3);
  REQUIRE(loaded.skipped.size() == 1);
  CHECK(loaded.skipped[0].line == 5);
}

TEST_CASE("corpus files round-trip") {
  auto records = ParseCorpus(kThreeLines, Starter()).records;
  auto again = ParseCorpus(CorpusToJsonl(records), Starter()).records;
  REQUIRE(again.size() == records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    CHECK(again[i].id == records[i].id);
    CHECK(again[i].reference == records[i].reference);
    CHECK(again[i].hypotheses == records[i].hypotheses);
    CHECK(again[i].annotation == records[i].annotation);
  }
  auto path = (std::filesystem::temp_directory_path() / "pwld_corpus_rt.jsonl").string();
  WriteCorpus(records, path);
  CHECK(LoadCorpus(path, Starter()).records.size() == 3);
  auto ann = ReadAnnotations(path);
  REQUIRE(ann.size() == 3);
  CHECK(ann[1].annotation == 5.0);
  CHECK_FALSE(ann[2].annotation.has_value());
  std::filesystem::remove(path);
}

TEST_CASE("zero error rate gives perfect hypotheses") {
  auto cfg = BaseConfig();
  cfg.error_rate = {0, 0, 0};
  for (const auto &r : GenerateSynthetic(cfg, Starter())) {
    for (const auto &h : r.hypotheses) CHECK(h == r.reference);
    CHECK(r.annotation == 5.0);
  }
}

TEST_CASE("noise-free annotations are the planted scores") {
  auto cfg = BaseConfig();
  auto records = GenerateSynthetic(cfg, Starter());
  CHECK(records.size() == 50);
  CHECK(records[0].id == "synth-000001");
  for (const auto &r : records) {
    CHECK(r.hypotheses.size() == 3);
    CHECK(r.reference.size() >= 3);
    CHECK(r.reference.size() <= 8);
    double best = 1e300;
    for (const auto &h : r.hypotheses)
      best = std::min(best, testing::BruteForceWeighted(cfg.planted_weights,
                                                        r.reference, 0, h, 0));
    double expected = MapScore(cfg.planted_weights, best,
                               static_cast<int>(r.reference.size()));
    CHECK(*r.annotation == doctest::Approx(expected).epsilon(1e-9));
  }
}

TEST_CASE("noisy annotations stay in range") {
  auto cfg = BaseConfig();
  cfg.n_utterances = 300;
  cfg.label_noise_std = 2.0;
  for (const auto &r : GenerateSynthetic(cfg, Starter())) {
    CHECK(*r.annotation >= 0.0);
    CHECK(*r.annotation <= 5.0);
  }
}

TEST_CASE("same seed, same bytes") {
  auto cfg = BaseConfig();
  cfg.label_noise_std = 0.5;
  CHECK(CorpusToJsonl(GenerateSynthetic(cfg, Starter())) ==
        CorpusToJsonl(GenerateSynthetic(cfg, Starter())));
  auto other = cfg;
  other.seed = 78;
  CHECK(CorpusToJsonl(GenerateSynthetic(cfg, Starter())) !=
        CorpusToJsonl(GenerateSynthetic(other, Starter())));
}

TEST_CASE("corruption rates are respected") {
  Corrupter corrupter(Starter());
  std::mt19937_64 rng(5);
  ErrorRates rates{0.2, 0.1, 0.05};
  CorruptionCounts counts;
  auto alphabet = testing::Alphabet(60, 1);
  while (counts.phones < 10000) {
    auto ref = testing::RandomSequence(alphabet, 10, rng);
    corrupter.Corrupt(ref, rates, rng, &counts);
  }
  double n = counts.phones;
  CHECK(counts.substituted / n == doctest::Approx(0.2).epsilon(0.2));
  CHECK(counts.inserted / n == doctest::Approx(0.1).epsilon(0.2));
  CHECK(counts.removed / n == doctest::Approx(0.05).epsilon(0.2));

  auto tiny = PhoneInventory::ParseTsv("#features: nasal\nn\tnasal\n");
  CHECK_THROWS_AS(Corrupter{tiny}, Error);
}

TEST_CASE("substitutions favour close phones") {
  Corrupter corrupter(Starter());
  std::mt19937_64 rng(6);
  PhoneSequence ref(1, Starter().at("t"));
  int close = 0, far = 0;
  for (int i = 0; i < 2000; ++i) {
    auto out = corrupter.Corrupt(ref, {1.0, 0, 0}, rng);
    REQUIRE(out.size() == 1);
    CHECK_FALSE(out[0] == ref[0]);
    int diff = 0;
    for (std::size_t k = 0; k < out[0].features.size(); ++k)
      diff += out[0].features[k] != ref[0].features[k];
    (diff <= 3 ? close : far) += 1;
  }
  CHECK(close > far);
}

TEST_CASE("synthetic config json") {
  auto cfg = BaseConfig();
  auto back = ParseSynthConfig(SynthConfigToJson(cfg));
  CHECK(back.n_utterances == cfg.n_utterances);
  CHECK(back.seed == cfg.seed);
  CHECK(back.error_rate.remove == cfg.error_rate.remove);
  CHECK(back.planted_weights.f_sub == cfg.planted_weights.f_sub);

  auto file = ParseSynthConfig(
      "{\"n_utterances\": 5, \"phrase_length_range\": [2, 4], \"n_best_depth\": 1,"
      " \"error_rate\": {\"substitute\": 0.1, \"insert\": 0, \"delete\": 0},"
      " \"planted_weights_file\": \"friend-weights.json\", \"seed\": 3}",
      PWLD_DATA_DIR);
  CHECK(file.min_length == 2);
  CHECK(file.planted_weights.a == doctest::Approx(1.31403).epsilon(1e-4));
  CHECK_THROWS_AS(ParseSynthConfig("{\"n_utterances\": -1}"), Error);
}

}  // namespace
}  // namespace pwld

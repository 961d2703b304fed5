// tests/test_nbest.cc

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

#include <algorithm>
#include <random>

#include "doctest.h"
#include "oracles.h"
#include "pwld/error.h"
#include "pwld/nbest.h"

namespace pwld {
namespace {

using testing::Starter;

PhoneSequence Seq(const char *text) { return Tokenize(Starter(), text); }

TEST_CASE("exact match wins") {
  auto w = FontanWeights(Starter());
  UtteranceRecord r{"u1", Seq("k a t"), {Seq("k a t"), Seq("k a d")}, 4.0};
  auto sel = SelectBest(w, r);
  CHECK(sel.index == 0);
  CHECK(sel.script.total_cost == 0.0);

  r.hypotheses = {Seq("p a t"), Seq("k a t"), Seq("k a")};
  CHECK(SelectBest(w, r).index == 1);
}

TEST_CASE("selection is the argmin over the list") {
  std::mt19937_64 rng(31);
  auto alphabet = testing::Alphabet(20, 10);
  for (int trial = 0; trial < 200; ++trial) {
    auto w = testing::RandomWeights(Starter().space(), rng);
    UtteranceRecord r;
    r.reference = testing::RandomSequence(alphabet, 6, rng);
    std::uniform_int_distribution<int> depth(1, 5);
    for (int k = depth(rng); k > 0; --k)
      r.hypotheses.push_back(testing::RandomSequence(alphabet, 6, rng));
    auto sel = SelectBest(w, r);
    double best = 1e300;
    std::size_t best_index = 0;
    for (std::size_t k = 0; k < r.hypotheses.size(); ++k) {
      double c = testing::BruteForceWeighted(w, r.reference, 0, r.hypotheses[k], 0);
      if (c < best - 1e-9) best = c, best_index = k;
    }
    CHECK(sel.script.total_cost == doctest::Approx(best).epsilon(1e-12));
    CHECK(sel.index == best_index);
  }
}

TEST_CASE("selected hypothesis does not depend on list order") {
  std::mt19937_64 rng(32);
  auto alphabet = testing::Alphabet(20, 11);
  auto w = FontanWeights(Starter());
  for (int trial = 0; trial < 100; ++trial) {
    UtteranceRecord r;
    r.reference = testing::RandomSequence(alphabet, 6, rng);
    for (int k = 0; k < 4; ++k)
      r.hypotheses.push_back(testing::RandomSequence(alphabet, 6, rng));
    auto sel = SelectBest(w, r);
    auto shuffled = r;
    std::shuffle(shuffled.hypotheses.begin(), shuffled.hypotheses.end(), rng);
    auto other = SelectBest(w, shuffled);
    CHECK(other.script.total_cost == doctest::Approx(sel.script.total_cost));
  }
}

TEST_CASE("baseline weights") {
  auto w = FontanWeights(Starter());
  const Phone &d = Starter().at("d");
  const Phone &t = Starter().at("t");
  CHECK(OpCost(w, OpKind::kSubstitute, &d, &t) == 4.0);
  CHECK(w.f_sub[w.space->bias_index()] == 0.0);
  CHECK(w.a == 1.0);
  CHECK(w.l == 1.0);
  CHECK(w.r == 5.0);

  // Mean substitution cost recomputed from raw feature vectors.
  const auto &phones = Starter().phones();
  double total = 0;
  long pairs = 0;
  for (std::size_t i = 0; i < phones.size(); ++i)
    for (std::size_t j = i + 1; j < phones.size(); ++j, ++pairs)
      for (std::size_t k = 0; k < phones[i].features.size(); ++k)
        total += phones[i].features[k] != phones[j].features[k];
  double mean = total / pairs;
  for (const char *s : {"t", "a", "nː", "oɑ"}) {
    CHECK(OpCost(w, OpKind::kInsert, nullptr, &Starter().at(s)) ==
          doctest::Approx(mean));
    CHECK(OpCost(w, OpKind::kDelete, &Starter().at(s), nullptr) ==
          doctest::Approx(mean));
  }
}

TEST_CASE("unknown phones in single hypotheses are collected") {
  auto w = FontanWeights(Starter());
  auto sel = SelectBestFromText(w, Starter(), Seq("k a t"),
                                {"k ǂ t", "k a d", "q q q"});
  CHECK(sel.index == 1);
  CHECK(sel.hypothesis_errors.size() == 2);
  CHECK(sel.hypothesis_errors[0].find("hypothesis 0") != std::string::npos);

  try {
    SelectBestFromText(w, Starter(), Seq("k a t"), {"k ǂ t"});
    FAIL("expected an error");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::kUnknownSymbol);
  }
}

TEST_CASE("record validation") {
  UtteranceRecord r{"u", Seq("k a t"), {Seq("k a t")}, 2.5};
  CHECK_NOTHROW(r.Validate(5.0));
  r.annotation = 7.2;
  CHECK_THROWS_AS(r.Validate(5.0), Error);
  r.annotation = std::nullopt;
  CHECK_NOTHROW(r.Validate(5.0));
  r.hypotheses.clear();
  CHECK_THROWS_AS(r.Validate(5.0), Error);
  r.hypotheses = {Seq("k")};
  r.reference.clear();
  CHECK_THROWS_AS(r.Validate(5.0), Error);
}

}  // namespace
}  // namespace pwld

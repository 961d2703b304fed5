// src/corpus.cc

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

#include "pwld/corpus.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pwld/error.h"
#include "pwld/scoring.h"

namespace pwld {

namespace {

UtteranceRecord ParseRecord(const std::string &line,
                            const PhoneInventory &inventory,
                            const CorpusLoadOptions &options) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(line);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorCode::kParse, std::string("bad JSON: ") + e.what());
  }
  UtteranceRecord rec;
  try {
    rec.id = doc.at("id").get<std::string>();
    rec.reference =
        Tokenize(inventory, doc.at("reference").get<std::string>(), options.mode);
    for (const auto &h : doc.at("hypotheses"))
      rec.hypotheses.push_back(Tokenize(inventory, h.get<std::string>(), options.mode));
    if (doc.contains("annotation") && !doc["annotation"].is_null())
      rec.annotation = doc["annotation"].get<double>();
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("bad record: ") + e.what());
  }
  rec.Validate(options.score_range);
  return rec;
}

}  // namespace

LoadedCorpus ParseCorpus(std::string_view text, const PhoneInventory &inventory,
                         const CorpusLoadOptions &options) {
  LoadedCorpus out;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    try {
      out.records.push_back(ParseRecord(line, inventory, options));
    } catch (const Error &e) {
      std::string msg = "line " + std::to_string(line_no) + ": " + e.what();
      if (options.strict) throw Error(e.code(), msg);
      out.skipped.push_back({line_no, msg});
    }
  }
  return out;
}

LoadedCorpus LoadCorpus(const std::string &path, const PhoneInventory &inventory,
                        const CorpusLoadOptions &options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open corpus " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseCorpus(buffer.str(), inventory, options);
}

std::vector<AnnotationEntry> ReadAnnotations(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open corpus " + path);
  std::vector<AnnotationEntry> out;
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      auto doc = nlohmann::json::parse(line);
      AnnotationEntry e{doc.at("id").get<std::string>(), std::nullopt};
      if (doc.contains("annotation") && !doc["annotation"].is_null())
        e.annotation = doc["annotation"].get<double>();
      out.push_back(std::move(e));
    } catch (const nlohmann::json::exception &e) {
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

std::string RecordToJson(const UtteranceRecord &record) {
  nlohmann::ordered_json doc;
  doc["id"] = record.id;
  doc["reference"] = JoinSymbols(record.reference);
  doc["hypotheses"] = nlohmann::ordered_json::array();
  for (const PhoneSequence &h : record.hypotheses)
    doc["hypotheses"].push_back(JoinSymbols(h));
  if (record.annotation) doc["annotation"] = *record.annotation;
  return doc.dump();
}

std::string CorpusToJsonl(const std::vector<UtteranceRecord> &records) {
  std::string out;
  for (const UtteranceRecord &r : records) out += RecordToJson(r) + "\n";
  return out;
}

void WriteCorpus(const std::vector<UtteranceRecord> &records,
                 const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write corpus " + path);
  out << CorpusToJsonl(records);
}

void SynthConfig::Validate() const {
  if (n_utterances < 0) throw Error(ErrorCode::kRange, "n_utterances must be >= 0");
  if (min_length < 1 || max_length < min_length)
    throw Error(ErrorCode::kRange, "phrase_length_range must satisfy 1 <= min <= max");
  if (n_best_depth < 1) throw Error(ErrorCode::kRange, "n_best_depth must be >= 1");
  for (double p : {error_rate.substitute, error_rate.insert, error_rate.remove})
    if (!(p >= 0.0 && p <= 1.0))
      throw Error(ErrorCode::kRange, "error rates must lie in [0, 1]");
  if (error_rate.substitute + error_rate.insert + error_rate.remove > 1.0 + 1e-12)
    throw Error(ErrorCode::kRange, "error rates must sum to at most 1");
  if (!(label_noise_std >= 0.0))
    throw Error(ErrorCode::kRange, "label_noise_std must be >= 0");
  planted_weights.Validate();
}

SynthConfig ParseSynthConfig(std::string_view json_text,
                             const std::string &base_dir) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorCode::kParse, std::string("synthetic config: ") + e.what());
  }
  SynthConfig c;
  try {
    c.n_utterances = doc.value("n_utterances", c.n_utterances);
    if (doc.contains("phrase_length_range")) {
      auto range = doc["phrase_length_range"].get<std::vector<int>>();
      if (range.size() != 2)
        throw Error(ErrorCode::kParse, "phrase_length_range needs two values");
      c.min_length = range[0];
      c.max_length = range[1];
    }
    c.n_best_depth = doc.value("n_best_depth", c.n_best_depth);
    if (doc.contains("error_rate")) {
      const auto &e = doc["error_rate"];
      c.error_rate.substitute = e.value("substitute", 0.0);
      c.error_rate.insert = e.value("insert", 0.0);
      c.error_rate.remove = e.value("delete", 0.0);
    }
    c.label_noise_std = doc.value("label_noise_std", 0.0);
    c.seed = doc.value("seed", std::uint64_t{0});
    if (doc.contains("planted_weights")) {
      c.planted_weights = ParseWeights(doc["planted_weights"].dump());
    } else if (doc.contains("planted_weights_file")) {
      std::filesystem::path p = doc["planted_weights_file"].get<std::string>();
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      c.planted_weights = LoadWeights(p.string());
    } else {
      throw Error(ErrorCode::kParse,
                  "synthetic config needs planted_weights or planted_weights_file");
    }
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("synthetic config: ") + e.what());
  }
  c.Validate();
  return c;
}

std::string SynthConfigToJson(const SynthConfig &config) {
  nlohmann::ordered_json doc;
  doc["n_utterances"] = config.n_utterances;
  doc["phrase_length_range"] = {config.min_length, config.max_length};
  doc["n_best_depth"] = config.n_best_depth;
  doc["error_rate"] = {{"substitute", config.error_rate.substitute},
                       {"insert", config.error_rate.insert},
                       {"delete", config.error_rate.remove}};
  doc["planted_weights"] = nlohmann::ordered_json::parse(WeightsToJson(config.planted_weights));
  doc["label_noise_std"] = config.label_noise_std;
  doc["seed"] = config.seed;
  return doc.dump(1) + "\n";
}

Corrupter::Corrupter(const PhoneInventory &inventory) : inventory_(inventory) {
  const auto &phones = inventory.phones();
  if (phones.size() < 2)
    throw Error(ErrorCode::kInvalidArgument,
                "inventory too small to sample from (need at least 2 phones)");
  neighbour_cdf_.resize(phones.size());
  for (std::size_t i = 0; i < phones.size(); ++i) {
    auto &cdf = neighbour_cdf_[i];
    cdf.resize(phones.size());
    double total = 0.0;
    for (std::size_t j = 0; j < phones.size(); ++j) {
      if (i != j) {
        FeatureVector diff = FeatureDiff(phones[i], phones[j]);
        int distance = -1;  // op-bias is always set
        for (auto d : diff) distance += d;
        total += std::exp(-static_cast<double>(distance));
      }
      cdf[j] = total;
    }
    for (double &v : cdf) v /= total;
  }
}

std::size_t Corrupter::IndexOf(const Phone &phone) const {
  const Phone &known = inventory_.at(phone.symbol);
  return static_cast<std::size_t>(&known - inventory_.phones().data());
}

PhoneSequence Corrupter::Corrupt(const PhoneSequence &reference,
                                 const ErrorRates &rates, std::mt19937_64 &rng,
                                 CorruptionCounts *counts) const {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> any(0, inventory_.size() - 1);
  const auto &phones = inventory_.phones();
  PhoneSequence out;
  for (const Phone &phone : reference) {
    double u = unit(rng);
    if (counts) ++counts->phones;
    if (u < rates.substitute) {
      const auto &cdf = neighbour_cdf_[IndexOf(phone)];
      double v = unit(rng);
      std::size_t j = std::upper_bound(cdf.begin(), cdf.end(), v) - cdf.begin();
      j = std::min(j, phones.size() - 1);
      out.push_back(phones[j]);
      if (counts) ++counts->substituted;
    } else if (u < rates.substitute + rates.remove) {
      if (counts) ++counts->removed;
    } else if (u < rates.substitute + rates.remove + rates.insert) {
      out.push_back(phone);
      out.push_back(phones[any(rng)]);
      if (counts) ++counts->inserted;
    } else {
      out.push_back(phone);
    }
  }
  return out;
}

std::vector<UtteranceRecord> GenerateSynthetic(const SynthConfig &config,
                                               const PhoneInventory &inventory) {
  config.Validate();
  CheckSameSpace(config.planted_weights.space, inventory.space());
  Corrupter corrupter(inventory);
  std::mt19937_64 rng(config.seed);
  std::uniform_int_distribution<int> length(config.min_length, config.max_length);
  std::uniform_int_distribution<std::size_t> any(0, inventory.size() - 1);
  std::normal_distribution<double> noise(0.0, 1.0);
  const double r = config.planted_weights.r;

  std::vector<UtteranceRecord> out;
  out.reserve(config.n_utterances);
  for (int u = 0; u < config.n_utterances; ++u) {
    UtteranceRecord rec;
    char id[32];
    std::snprintf(id, sizeof id, "synth-%06d", u + 1);
    rec.id = id;
    int len = length(rng);
    for (int i = 0; i < len; ++i) rec.reference.push_back(inventory.phones()[any(rng)]);
    for (int k = 0; k < config.n_best_depth; ++k) {
      // Deeper hypotheses are corrupted more on average.
      ErrorRates rates = config.error_rate;
      double scale = 1.0 + 0.5 * k;
      double sum = (rates.substitute + rates.insert + rates.remove) * scale;
      if (sum > 1.0) scale /= sum;
      rates.substitute *= scale;
      rates.insert *= scale;
      rates.remove *= scale;
      rec.hypotheses.push_back(corrupter.Corrupt(rec.reference, rates, rng));
    }
    Selection best = SelectBest(config.planted_weights, rec);
    double score = MapScore(config.planted_weights, best.script.total_cost, len);
    // Drawn even without noise so the noise level leaves the rest of the
    // random stream, and thus the corpus, unchanged.
    double z = noise(rng);
    if (config.label_noise_std > 0.0) score += config.label_noise_std * z;
    rec.annotation = std::clamp(score, 0.0, r);
    out.push_back(std::move(rec));
  }
  return out;
}

}  // namespace pwld

// src/phoneset.cc

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

#include "pwld/phoneset.h"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include "json.hpp"
#include "pwld/error.h"

namespace pwld {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParse: return "parse-error";
    case ErrorCode::kDuplicateSymbol: return "duplicate-symbol";
    case ErrorCode::kDuplicateFeatureVector: return "duplicate-feature-vector";
    case ErrorCode::kUnknownFeature: return "unknown-feature";
    case ErrorCode::kUnknownSymbol: return "unknown-symbol";
    case ErrorCode::kSpaceMismatch: return "feature-space-mismatch";
    case ErrorCode::kDegenerateReference: return "degenerate-reference";
    case ErrorCode::kEmptyInput: return "empty-input";
    case ErrorCode::kUndefinedCorrelation: return "undefined-correlation";
    case ErrorCode::kRange: return "range-error";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kIo: return "io-error";
  }
  return "error";
}

namespace {

std::string_view Trim(std::string_view s) {
  const char *ws = " \t\r\n";
  std::size_t b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  std::size_t e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string> SplitCommas(std::string_view s) {
  std::vector<std::string> out;
  while (true) {
    std::size_t comma = s.find(',');
    std::string_view item = Trim(s.substr(0, comma));
    if (!item.empty()) out.emplace_back(item);
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

bool IsSpace(char c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r';
}

// Length of the UTF-8 sequence starting with lead byte c (1 for bad bytes).
std::size_t Utf8Length(unsigned char c) {
  if (c >= 0xF0) return 4;
  if (c >= 0xE0) return 3;
  if (c >= 0xC0) return 2;
  return 1;
}

}  // namespace

FeatureSpace::FeatureSpace(std::vector<std::string> names)
    : names_(std::move(names)) {
  if (std::find(names_.begin(), names_.end(), kOpBias) == names_.end())
    names_.emplace_back(kOpBias);
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i].empty())
      throw Error(ErrorCode::kParse, "empty feature name");
    if (!index_.emplace(names_[i], i).second)
      throw Error(ErrorCode::kParse, "repeated feature name '" + names_[i] + "'");
  }
  bias_index_ = index_.at(std::string(kOpBias));
}

std::shared_ptr<const FeatureSpace> FeatureSpace::Default() {
  static const auto space = std::make_shared<const FeatureSpace>(
      std::vector<std::string>{
          // vowels
          "diphthong", "long", "rhotic", "unround-schwa",
          "front", "nearfront", "central", "nearback", "back",
          "open", "nearopen", "openmid", "mid", "closemid", "nearclose",
          "close",
          "rounded", "unrounded",
          "diphthong-forward", "diphthong-backward",
          "diphthong-opening", "diphthong-closing",
          "diphthong-rounding", "diphthong-unrounding",
          // non-vowels
          "affricate", "approximant", "fricative", "plosive", "nasal", "trill",
          "alveolar", "bilabial", "coronal", "dental", "dorsal", "labial",
          "labiodental", "lateral", "postalveolar", "velar",
          "pulmonic", "retroflexed", "syllabic", "palatalized", "aspirated",
          "lenis", "fortis", "labialized", "voiced", "unvoiced", "geminated",
          // places and manners the list above cannot express
          "palatal", "glottal", "uvular", "flap",
          std::string(kOpBias)});
  return space;
}

std::optional<std::size_t> FeatureSpace::Find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t FeatureSpace::IndexOf(std::string_view name) const {
  auto i = Find(name);
  if (!i)
    throw Error(ErrorCode::kUnknownFeature,
                "unknown feature '" + std::string(name) + "'");
  return *i;
}

bool SameSpace(const FeatureSpacePtr &a, const FeatureSpacePtr &b) {
  if (a == b) return true;
  return a && b && *a == *b;
}

void CheckSameSpace(const FeatureSpacePtr &a, const FeatureSpacePtr &b) {
  if (!SameSpace(a, b))
    throw Error(ErrorCode::kSpaceMismatch, "feature spaces differ");
}

bool Phone::Has(std::string_view feature) const {
  auto i = space->Find(feature);
  return i && features[*i] != 0;
}

PhoneInventory::PhoneInventory(FeatureSpacePtr space,
                               const std::vector<Entry> &entries)
    : space_(std::move(space)) {
  std::map<FeatureVector, std::string> seen_vectors;
  phones_.reserve(entries.size());
  for (const Entry &entry : entries) {
    if (entry.symbol.empty())
      throw Error(ErrorCode::kParse, "empty phone symbol");
    Phone phone{entry.symbol, space_, FeatureVector(space_->size(), 0)};
    for (const std::string &f : entry.features) {
      std::size_t i = space_->Find(f).value_or(space_->size());
      if (i == space_->size())
        throw Error(ErrorCode::kUnknownFeature, "phone /" + entry.symbol +
                                                    "/: unknown feature '" +
                                                    f + "'");
      phone.features[i] = 1;
    }
    phone.features[space_->bias_index()] = 1;
    if (by_symbol_.count(entry.symbol))
      throw Error(ErrorCode::kDuplicateSymbol,
                  "duplicate phone symbol /" + entry.symbol + "/");
    auto [it, fresh] = seen_vectors.emplace(phone.features, entry.symbol);
    if (!fresh)
      throw Error(ErrorCode::kDuplicateFeatureVector,
                  "phones /" + it->second + "/ and /" + entry.symbol +
                      "/ have identical feature vectors");
    by_symbol_.emplace(entry.symbol, phones_.size());
    max_symbol_bytes_ = std::max(max_symbol_bytes_, entry.symbol.size());
    phones_.push_back(std::move(phone));
  }
}

PhoneInventory PhoneInventory::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open inventory " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

PhoneInventory PhoneInventory::Parse(std::string_view text) {
  std::string_view body = Trim(text);
  if (!body.empty() && body.front() == '{') return ParseJson(text);
  return ParseTsv(text);
}

PhoneInventory PhoneInventory::ParseTsv(std::string_view text) {
  std::optional<std::vector<std::string>> declared;
  std::vector<Entry> entries;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (Trim(line).empty()) continue;
    if (line.front() == '#') {
      constexpr std::string_view kHeader = "#features:";
      if (line.substr(0, kHeader.size()) == kHeader) {
        if (declared)
          throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                             ": second #features header");
        declared = SplitCommas(line.substr(kHeader.size()));
      }
      continue;
    }
    if (!declared)
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                         ": phone before #features header");
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw Error(ErrorCode::kParse, "line " + std::to_string(line_no) +
                                         ": expected <symbol>\\t<features>");
    Entry entry{std::string(Trim(line.substr(0, tab))),
                SplitCommas(line.substr(tab + 1))};
    if (entry.symbol.empty())
      throw Error(ErrorCode::kParse,
                  "line " + std::to_string(line_no) + ": empty symbol");
    entries.push_back(std::move(entry));
  }
  if (!declared) throw Error(ErrorCode::kParse, "missing #features header");
  return PhoneInventory(std::make_shared<const FeatureSpace>(*declared),
                        entries);
}

PhoneInventory PhoneInventory::ParseJson(std::string_view text) {
  nlohmann::ordered_json doc;
  try {
    doc = nlohmann::ordered_json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorCode::kParse, std::string("inventory JSON: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("features") || !doc.contains("phones") ||
      !doc["features"].is_array() || !doc["phones"].is_object())
    throw Error(ErrorCode::kParse,
                "inventory JSON needs a 'features' array and a 'phones' object");
  std::vector<Entry> entries;
  try {
    auto names = doc["features"].get<std::vector<std::string>>();
    for (const auto &[symbol, feats] : doc["phones"].items())
      entries.push_back({symbol, feats.get<std::vector<std::string>>()});
    return PhoneInventory(std::make_shared<const FeatureSpace>(names), entries);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("inventory JSON: ") + e.what());
  }
}

namespace {

std::vector<std::string> CarriedFeatures(const Phone &phone) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < phone.features.size(); ++i)
    if (phone.features[i] && i != phone.space->bias_index())
      out.push_back(phone.space->name(i));
  return out;
}

}  // namespace

std::string PhoneInventory::ToTsv() const {
  std::ostringstream out;
  out << "#features: ";
  for (std::size_t i = 0; i < space_->size(); ++i)
    out << (i ? "," : "") << space_->name(i);
  out << '\n';
  for (const Phone &phone : phones_) {
    out << phone.symbol << '\t';
    auto feats = CarriedFeatures(phone);
    for (std::size_t i = 0; i < feats.size(); ++i)
      out << (i ? "," : "") << feats[i];
    out << '\n';
  }
  return out.str();
}

std::string PhoneInventory::ToJson() const {
  nlohmann::ordered_json doc;
  doc["features"] = space_->names();
  doc["phones"] = nlohmann::ordered_json::object();
  for (const Phone &phone : phones_)
    doc["phones"][phone.symbol] = CarriedFeatures(phone);
  return doc.dump(1) + "\n";
}

const Phone *PhoneInventory::Find(std::string_view symbol) const {
  auto it = by_symbol_.find(std::string(symbol));
  return it == by_symbol_.end() ? nullptr : &phones_[it->second];
}

const Phone &PhoneInventory::at(std::string_view symbol) const {
  const Phone *p = Find(symbol);
  if (!p)
    throw Error(ErrorCode::kUnknownSymbol,
                "unknown phone /" + std::string(symbol) + "/");
  return *p;
}

std::vector<std::string> LintInventory(const PhoneInventory &inventory) {
  std::vector<std::string> warnings;
  bool space_has_long = inventory.space()->Find("long").has_value();
  for (const Phone &phone : inventory.phones()) {
    bool marked = phone.symbol.find(kLengthMark) != std::string::npos;
    bool is_long = space_has_long && phone.Has("long");
    // A geminate written with the length mark is also acceptable.
    bool geminated = phone.Has("geminated");
    if (is_long && !marked)
      warnings.push_back("/" + phone.symbol +
                         "/ carries 'long' but its symbol has no length mark");
    if (marked && !is_long && !geminated && space_has_long)
      warnings.push_back("/" + phone.symbol +
                         "/ has a length mark but does not carry 'long'");
  }
  return warnings;
}

PhoneSequence Tokenize(const PhoneInventory &inventory, std::string_view text,
                       TokenizeMode mode) {
  PhoneSequence out;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    if (IsSpace(text[i])) {
      ++i;
      continue;
    }
    if (mode == TokenizeMode::kSeparated) {
      std::size_t end = i;
      while (end < n && !IsSpace(text[end])) ++end;
      std::string_view token = text.substr(i, end - i);
      const Phone *phone = inventory.Find(token);
      if (!phone)
        throw Error(ErrorCode::kUnknownSymbol,
                    "unknown phone '" + std::string(token) + "' at byte " +
                        std::to_string(i));
      out.push_back(*phone);
      i = end;
      continue;
    }
    const Phone *match = nullptr;
    std::size_t len = std::min(inventory.max_symbol_bytes(), n - i);
    for (; len > 0; --len) {
      if ((match = inventory.Find(text.substr(i, len)))) break;
    }
    if (!match) {
      std::size_t bad = std::min(Utf8Length(text[i]), n - i);
      throw Error(ErrorCode::kUnknownSymbol,
                  "unknown phone '" + std::string(text.substr(i, bad)) +
                      "' at byte " + std::to_string(i));
    }
    out.push_back(*match);
    i += len;
  }
  return out;
}

std::string JoinSymbols(const PhoneSequence &phones,
                        std::string_view separator) {
  std::string out;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    if (i) out += separator;
    out += phones[i].symbol;
  }
  return out;
}

FeatureVector FeatureDiff(const Phone &a, const Phone &b) {
  CheckSameSpace(a.space, b.space);
  FeatureVector diff(a.features.size());
  for (std::size_t i = 0; i < diff.size(); ++i)
    diff[i] = a.features[i] ^ b.features[i];
  diff[a.space->bias_index()] = 1;
  return diff;
}

}  // namespace pwld

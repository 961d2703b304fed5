// src/scoring.cc

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

#include "pwld/scoring.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "default_descriptions.h"
#include "json.hpp"
#include "pwld/error.h"

namespace pwld {

double LengthCompensation(const WeightSet &weights, int ref_length) {
  if (ref_length < 1)
    throw Error(ErrorCode::kDegenerateReference,
                "reference length must be at least 1");
  return std::pow(static_cast<double>(ref_length), weights.l);
}

double MapScore(const WeightSet &weights, double distance, int ref_length) {
  if (!(distance >= 0.0))
    throw Error(ErrorCode::kRange, "distance must be non-negative");
  double x = weights.a * distance / LengthCompensation(weights, ref_length);
  return weights.r * (1.0 - std::tanh(x));
}

namespace {

std::vector<std::string> Words(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string JoinFrom(const std::vector<std::string> &words, std::size_t from) {
  std::string out;
  for (std::size_t i = from; i < words.size(); ++i) {
    if (i > from) out += ' ';
    out += words[i];
  }
  return out;
}

std::string Joined(const std::vector<std::string> &items, const char *sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += items[i];
  }
  return out;
}

std::string Capitalized(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = s[0] - 'a' + 'A';
  return s;
}

std::string Lowered(std::string s) {
  if (s.size() > 1 && s[0] >= 'A' && s[0] <= 'Z' && !(s[1] >= 'A' && s[1] <= 'Z'))
    s[0] = s[0] - 'A' + 'a';
  return s;
}

}  // namespace

DescriptionTable DescriptionTable::Parse(std::string_view text) {
  DescriptionTable table;
  std::istringstream in{std::string(text)};
  int line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto words = Words(line);
    if (words.empty()) continue;
    const std::string &directive = words[0];
    auto fail = [&](const std::string &what) {
      return Error(ErrorCode::kParse, "description table line " +
                                          std::to_string(line_no) + ": " + what);
    };
    if (directive == "group") {
      if (words.size() < 3) throw fail("group needs a name and features");
      table.groups_.push_back(
          {words[1], std::vector<std::string>(words.begin() + 2, words.end())});
    } else if (directive == "pair") {
      if (words.size() < 4) throw fail("pair needs two features and a phrase");
      table.pairs_.push_back({words[1], words[2], JoinFrom(words, 3)});
    } else if (directive == "add" || directive == "remove") {
      if (words.size() < 3) throw fail(directive + " needs a feature and a phrase");
      auto &target = directive == "add" ? table.added_ : table.removed_;
      target[words[1]] = JoinFrom(words, 2);
    } else {
      throw fail("unknown directive '" + directive + "'");
    }
  }
  return table;
}

const DescriptionTable &DescriptionTable::Default() {
  static const DescriptionTable table = Parse(kDefaultDescriptions);
  return table;
}

DescriptionTable DescriptionTable::Load(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open description table " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return Parse(buffer.str());
}

std::string DescriptionTable::Describe(const EditOp &op) const {
  switch (op.kind) {
    case OpKind::kMatch:
      return "Correct";
    case OpKind::kInsert:
      return "Extra /" + op.hyp->symbol + "/";
    case OpKind::kDelete:
      return "Missing /" + op.ref->symbol + "/";
    case OpKind::kSubstitute:
      break;
  }
  const Phone &ref = *op.ref;
  const Phone &hyp = *op.hyp;
  CheckSameSpace(ref.space, hyp.space);
  const FeatureSpace &space = *ref.space;

  // Groups in table order, then a catch-all for features no group lists.
  std::vector<std::vector<std::string>> groups;
  std::set<std::string> grouped;
  for (const Group &g : groups_) {
    groups.push_back(g.features);
    grouped.insert(g.features.begin(), g.features.end());
  }
  std::vector<std::string> rest;
  for (std::size_t i = 0; i < space.size(); ++i)
    if (i != space.bias_index() && !grouped.count(space.name(i)))
      rest.push_back(space.name(i));
  groups.push_back(rest);

  std::vector<std::string> phrases;
  for (const auto &features : groups) {
    std::vector<std::string> removed, added;
    for (const std::string &f : features) {
      auto i = space.Find(f);
      if (!i || ref.features[*i] == hyp.features[*i]) continue;
      (ref.features[*i] ? removed : added).push_back(f);
    }
    if (removed.empty() && added.empty()) continue;

    const PairRule *rule = nullptr;
    for (const PairRule &p : pairs_) {
      bool r = std::find(removed.begin(), removed.end(), p.ref_feature) != removed.end();
      bool a = std::find(added.begin(), added.end(), p.hyp_feature) != added.end();
      if (r && a) {
        rule = &p;
        break;
      }
    }
    if (rule) {
      phrases.push_back(rule->phrase);
    } else if (!removed.empty() && !added.empty()) {
      phrases.push_back(Joined(added, "/") + " instead of " + Joined(removed, "/"));
    } else {
      for (const std::string &f : added) {
        auto it = added_.find(f);
        phrases.push_back(it != added_.end() ? it->second : "added " + f);
      }
      for (const std::string &f : removed) {
        auto it = removed_.find(f);
        phrases.push_back(it != removed_.end() ? it->second : "not " + f);
      }
    }
  }
  if (phrases.empty())
    return "/" + hyp.symbol + "/ instead of /" + ref.symbol + "/";
  // Equivalent phrases can come from different groups ("Too long").
  std::vector<std::string> unique;
  for (std::string &p : phrases) {
    p = Lowered(p);
    if (std::find(unique.begin(), unique.end(), p) == unique.end())
      unique.push_back(p);
  }
  return Capitalized(Joined(unique, ", "));
}

std::string DescribeOp(const EditOp &op, const DescriptionTable &table) {
  return table.Describe(op);
}

ScoreResult ScoreUtterance(const WeightSet &weights,
                           const PhoneInventory &inventory,
                           const PhoneSequence &reference,
                           const PhoneSequence &hypothesis,
                           const DescriptionTable &table) {
  if (reference.empty())
    throw Error(ErrorCode::kDegenerateReference, "empty reference");
  CheckSameSpace(weights.space, inventory.space());
  for (const PhoneSequence *seq : {&reference, &hypothesis})
    for (const Phone &p : *seq) {
      const Phone *known = inventory.Find(p.symbol);
      if (!known || !(*known == p))
        throw Error(ErrorCode::kUnknownSymbol,
                    "phone /" + p.symbol + "/ is not in the inventory");
    }

  ScoreResult result;
  result.reference = reference;
  result.hypothesis = hypothesis;
  result.script = Align(weights, reference, hypothesis);
  result.distance = result.script.total_cost;
  result.ref_length = static_cast<int>(reference.size());
  result.compensation = LengthCompensation(weights, result.ref_length);
  result.score = MapScore(weights, result.distance, result.ref_length);
  for (const EditOp &op : result.script.ops) {
    if (op.kind == OpKind::kMatch) continue;
    result.breakdown.push_back({op, table.Describe(op), op.cost});
  }
  return result;
}

namespace {

// Terminal columns taken by a UTF-8 string; combining marks take none.
std::size_t DisplayWidth(std::string_view s) {
  std::size_t width = 0;
  for (std::size_t i = 0; i < s.size();) {
    unsigned char c = s[i];
    std::size_t len = c >= 0xF0 ? 4 : c >= 0xE0 ? 3 : c >= 0xC0 ? 2 : 1;
    char32_t cp = c;
    if (len == 2 && i + 1 < s.size())
      cp = ((c & 0x1F) << 6) | (s[i + 1] & 0x3F);
    else if (len == 3 && i + 2 < s.size())
      cp = ((c & 0x0F) << 12) | ((s[i + 1] & 0x3F) << 6) | (s[i + 2] & 0x3F);
    bool combining = (cp >= 0x0300 && cp <= 0x036F);
    if (!combining) ++width;
    i += len;
  }
  return width;
}

std::string Padded(const std::string &s, std::size_t width) {
  std::size_t w = DisplayWidth(s);
  return w >= width ? s : s + std::string(width - w, ' ');
}

std::string Fixed(double x, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

std::string Slashed(const std::optional<Phone> &p) {
  return p ? "/" + p->symbol + "/" : "/∅/";
}

}  // namespace

std::string RenderText(const ScoreResult &result) {
  std::ostringstream out;
  const std::size_t label = 34;
  out << Padded("Target pronunciation:", label) << "/"
      << JoinSymbols(result.reference) << "/\n";
  out << Padded("Your attempt:", label) << "/"
      << JoinSymbols(result.hypothesis) << "/\n";
  out << Padded("Total errors:", label) << Fixed(result.distance, 2) << "\n";
  out << Padded("Length compensation multiplier:", label)
      << Fixed(result.compensation, 2) << "\n";
  out << Padded("Mapped score:", label) << Fixed(result.score, 2) << "\n";
  out << "Breakdown:\n";
  std::size_t pair_width = 0, desc_width = 0;
  std::vector<std::string> pairs;
  for (const BreakdownEntry &e : result.breakdown) {
    pairs.push_back(Slashed(e.op.ref) + " → " + Slashed(e.op.hyp));
    pair_width = std::max(pair_width, DisplayWidth(pairs.back()));
    desc_width = std::max(desc_width, DisplayWidth(e.description));
  }
  for (std::size_t i = 0; i < result.breakdown.size(); ++i) {
    const BreakdownEntry &e = result.breakdown[i];
    out << "  " << Padded(pairs[i], pair_width) << "  "
        << Padded(e.description, desc_width) << "  " << Fixed(-e.cost, 2)
        << "\n";
  }
  return out.str();
}

std::string RenderJson(const ScoreResult &result) {
  nlohmann::ordered_json doc;
  auto symbols = [](const PhoneSequence &seq) {
    std::vector<std::string> out;
    for (const Phone &p : seq) out.push_back(p.symbol);
    return out;
  };
  doc["target"] = symbols(result.reference);
  doc["attempt"] = symbols(result.hypothesis);
  doc["total_errors"] = result.distance;
  doc["compensation"] = result.compensation;
  doc["score"] = result.score;
  doc["breakdown"] = nlohmann::ordered_json::array();
  for (const BreakdownEntry &e : result.breakdown) {
    nlohmann::ordered_json item;
    item["ref"] = e.op.ref ? nlohmann::ordered_json(e.op.ref->symbol) : nullptr;
    item["hyp"] = e.op.hyp ? nlohmann::ordered_json(e.op.hyp->symbol) : nullptr;
    item["description"] = e.description;
    item["cost"] = e.cost;
    doc["breakdown"].push_back(item);
  }
  return doc.dump();
}

}  // namespace pwld

// src/editdist.cc

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

#include "pwld/editdist.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "pwld/error.h"

namespace pwld {

const char *OpKindName(OpKind kind) {
  switch (kind) {
    case OpKind::kMatch: return "match";
    case OpKind::kSubstitute: return "substitute";
    case OpKind::kInsert: return "insert";
    case OpKind::kDelete: return "delete";
  }
  return "?";
}

WeightSet WeightSet::UnitCost(FeatureSpacePtr space) {
  WeightSet w;
  std::size_t n = space->size();
  w.f_sub.assign(n, 0.0);
  w.f_ins.assign(n, 0.0);
  w.f_del.assign(n, 0.0);
  w.f_sub[space->bias_index()] = 1.0;
  w.f_ins[space->bias_index()] = 1.0;
  w.f_del[space->bias_index()] = 1.0;
  w.space = std::move(space);
  return w;
}

void WeightSet::Validate() const {
  if (!space) throw Error(ErrorCode::kInvalidArgument, "weights have no feature space");
  std::size_t n = space->size();
  if (f_sub.size() != n || f_ins.size() != n || f_del.size() != n)
    throw Error(ErrorCode::kInvalidArgument,
                "weight vector length differs from the feature count " +
                    std::to_string(n));
  for (const auto *v : {&f_sub, &f_ins, &f_del})
    for (std::size_t i = 0; i < n; ++i)
      if (!(std::isfinite((*v)[i]) && (*v)[i] >= 0.0))
        throw Error(ErrorCode::kRange, "weight for '" + space->name(i) +
                                           "' must be finite and >= 0");
  if (!(a > 0.0 && std::isfinite(a)))
    throw Error(ErrorCode::kRange, "mapping scale a must be > 0");
  if (!(l >= 0.0 && l <= 2.0))
    throw Error(ErrorCode::kRange, "length exponent l must lie in [0, 2]");
  if (!(r > 0.0 && std::isfinite(r)))
    throw Error(ErrorCode::kRange, "score range r must be > 0");
}

WeightSet WeightSet::ScaledCosts(double k) const {
  WeightSet w = *this;
  for (auto *v : {&w.f_sub, &w.f_ins, &w.f_del})
    for (double &x : *v) x *= k;
  return w;
}

WeightSet ParseWeights(std::string_view json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error &e) {
    throw Error(ErrorCode::kParse, std::string("weight JSON: ") + e.what());
  }
  WeightSet w;
  try {
    w.space = std::make_shared<const FeatureSpace>(
        doc.at("features").get<std::vector<std::string>>());
    w.f_sub = doc.at("f_sub").get<std::vector<double>>();
    w.f_ins = doc.at("f_ins").get<std::vector<double>>();
    w.f_del = doc.at("f_del").get<std::vector<double>>();
    w.a = doc.at("a").get<double>();
    w.l = doc.at("l").get<double>();
    w.r = doc.value("r", 5.0);
  } catch (const nlohmann::json::exception &e) {
    throw Error(ErrorCode::kParse, std::string("weight JSON: ") + e.what());
  }
  w.Validate();
  return w;
}

WeightSet LoadWeights(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIo, "cannot open weight file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return ParseWeights(buffer.str());
}

std::string WeightsToJson(const WeightSet &weights) {
  nlohmann::ordered_json doc;
  doc["features"] = weights.space->names();
  doc["f_sub"] = weights.f_sub;
  doc["f_ins"] = weights.f_ins;
  doc["f_del"] = weights.f_del;
  doc["a"] = weights.a;
  doc["l"] = weights.l;
  doc["r"] = weights.r;
  return doc.dump(1) + "\n";
}

void SaveWeights(const WeightSet &weights, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot write weight file " + path);
  out << WeightsToJson(weights);
}

std::size_t EditScript::CountOf(OpKind kind) const {
  return std::count_if(ops.begin(), ops.end(),
                       [kind](const EditOp &op) { return op.kind == kind; });
}

namespace {

double Dot(const std::vector<double> &w, const FeatureVector &f) {
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i]) s += w[i];
  return s;
}

double SubstitutionCost(const WeightSet &weights, const Phone &ref,
                        const Phone &hyp) {
  // Same as Dot(f_sub, FeatureDiff(ref, hyp)) without the allocation.
  const std::size_t bias = weights.space->bias_index();
  double s = 0.0;
  for (std::size_t i = 0; i < ref.features.size(); ++i)
    if (i == bias || ref.features[i] != hyp.features[i]) s += weights.f_sub[i];
  return s;
}

// Candidate `c` beats `best` only if it is lower by more than rounding noise;
// the tolerance is relative so rescaling all costs keeps the same choices.
bool Lower(double c, double best) {
  return c < best - 1e-9 * std::max(std::abs(c), std::abs(best));
}

enum class Step : unsigned char { kNone, kDiag, kDelete, kInsert };

}  // namespace

double OpCost(const WeightSet &weights, OpKind kind, const Phone *ref,
              const Phone *hyp) {
  switch (kind) {
    case OpKind::kMatch:
      if (!ref || !hyp)
        throw Error(ErrorCode::kInvalidArgument, "match needs both phones");
      return 0.0;
    case OpKind::kSubstitute:
      if (!ref || !hyp)
        throw Error(ErrorCode::kInvalidArgument, "substitute needs both phones");
      CheckSameSpace(weights.space, ref->space);
      CheckSameSpace(ref->space, hyp->space);
      return Dot(weights.f_sub, FeatureDiff(*ref, *hyp));
    case OpKind::kInsert:
      if (!hyp)
        throw Error(ErrorCode::kInvalidArgument, "insert needs a hypothesis phone");
      CheckSameSpace(weights.space, hyp->space);
      return Dot(weights.f_ins, hyp->features);
    case OpKind::kDelete:
      if (!ref)
        throw Error(ErrorCode::kInvalidArgument, "delete needs a reference phone");
      CheckSameSpace(weights.space, ref->space);
      return Dot(weights.f_del, ref->features);
  }
  return 0.0;
}

EditScript Align(const WeightSet &weights, const PhoneSequence &reference,
                 const PhoneSequence &hypothesis) {
  for (const Phone &p : reference) CheckSameSpace(weights.space, p.space);
  for (const Phone &p : hypothesis) CheckSameSpace(weights.space, p.space);

  const std::size_t n = reference.size();
  const std::size_t m = hypothesis.size();
  const std::size_t width = m + 1;
  std::vector<double> del_cost(n), ins_cost(m);
  for (std::size_t i = 0; i < n; ++i)
    del_cost[i] = Dot(weights.f_del, reference[i].features);
  for (std::size_t j = 0; j < m; ++j)
    ins_cost[j] = Dot(weights.f_ins, hypothesis[j].features);

  std::vector<double> cost((n + 1) * width, 0.0);
  std::vector<double> diag_cost((n + 1) * width, 0.0);
  std::vector<Step> step((n + 1) * width, Step::kNone);
  for (std::size_t i = 1; i <= n; ++i) {
    cost[i * width] = cost[(i - 1) * width] + del_cost[i - 1];
    step[i * width] = Step::kDelete;
  }
  for (std::size_t j = 1; j <= m; ++j) {
    cost[j] = cost[j - 1] + ins_cost[j - 1];
    step[j] = Step::kInsert;
  }
  for (std::size_t i = 1; i <= n; ++i) {
    const Phone &r = reference[i - 1];
    for (std::size_t j = 1; j <= m; ++j) {
      const Phone &h = hypothesis[j - 1];
      double d = (r == h) ? 0.0 : SubstitutionCost(weights, r, h);
      double best = cost[(i - 1) * width + j - 1] + d;
      Step choice = Step::kDiag;
      double c = cost[(i - 1) * width + j] + del_cost[i - 1];
      if (Lower(c, best)) best = c, choice = Step::kDelete;
      c = cost[i * width + j - 1] + ins_cost[j - 1];
      if (Lower(c, best)) best = c, choice = Step::kInsert;
      cost[i * width + j] = best;
      diag_cost[i * width + j] = d;
      step[i * width + j] = choice;
    }
  }

  EditScript script;
  std::size_t i = n, j = m;
  while (i > 0 || j > 0) {
    EditOp op;
    switch (step[i * width + j]) {
      case Step::kDiag: {
        const Phone &r = reference[i - 1];
        const Phone &h = hypothesis[j - 1];
        op.kind = (r == h) ? OpKind::kMatch : OpKind::kSubstitute;
        op.ref = r;
        op.hyp = h;
        op.cost = diag_cost[i * width + j];
        --i, --j;
        break;
      }
      case Step::kDelete:
        op.kind = OpKind::kDelete;
        op.ref = reference[i - 1];
        op.cost = del_cost[i - 1];
        --i;
        break;
      case Step::kInsert:
        op.kind = OpKind::kInsert;
        op.hyp = hypothesis[j - 1];
        op.cost = ins_cost[j - 1];
        --j;
        break;
      case Step::kNone:
        throw Error(ErrorCode::kInvalidArgument, "alignment backtrace failed");
    }
    script.ops.push_back(std::move(op));
  }
  std::reverse(script.ops.begin(), script.ops.end());
  for (const EditOp &op : script.ops) script.total_cost += op.cost;
  return script;
}

OperationFeatures ExtractFeatures(const EditScript &script,
                                  const FeatureSpace &space) {
  const std::size_t n = space.size();
  OperationFeatures out{std::vector<int>(n, 0), std::vector<int>(n, 0),
                        std::vector<int>(n, 0)};
  for (const EditOp &op : script.ops) {
    switch (op.kind) {
      case OpKind::kMatch:
        break;
      case OpKind::kSubstitute: {
        FeatureVector diff = FeatureDiff(*op.ref, *op.hyp);
        for (std::size_t i = 0; i < n; ++i) out.o_sub[i] += diff[i];
        break;
      }
      case OpKind::kInsert:
        for (std::size_t i = 0; i < n; ++i) out.o_ins[i] += op.hyp->features[i];
        break;
      case OpKind::kDelete:
        for (std::size_t i = 0; i < n; ++i) out.o_del[i] += op.ref->features[i];
        break;
    }
  }
  return out;
}

double WeightedDistance(const WeightSet &weights,
                        const OperationFeatures &features) {
  double s = 0.0;
  for (std::size_t i = 0; i < features.o_sub.size(); ++i) {
    s += weights.f_sub[i] * features.o_sub[i];
    s += weights.f_ins[i] * features.o_ins[i];
    s += weights.f_del[i] * features.o_del[i];
  }
  return s;
}

PhoneSequence Replay(const PhoneSequence &reference, const EditScript &script) {
  PhoneSequence out;
  std::size_t i = 0;
  auto take_ref = [&](const EditOp &op) {
    if (i >= reference.size() || !op.ref || !(reference[i] == *op.ref))
      throw Error(ErrorCode::kInvalidArgument,
                  "edit script does not match the reference at position " +
                      std::to_string(i));
    ++i;
  };
  for (const EditOp &op : script.ops) {
    switch (op.kind) {
      case OpKind::kMatch:
      case OpKind::kSubstitute:
        take_ref(op);
        out.push_back(*op.hyp);
        break;
      case OpKind::kDelete:
        take_ref(op);
        break;
      case OpKind::kInsert:
        out.push_back(*op.hyp);
        break;
    }
  }
  if (i != reference.size())
    throw Error(ErrorCode::kInvalidArgument,
                "edit script leaves reference phones unconsumed");
  return out;
}

}  // namespace pwld

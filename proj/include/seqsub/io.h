// Copyright 2026 The Authors.
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

// JSON formats. Products are 1-based in files; subset masks are hex strings
// with bit 0 standing for product 1.

#ifndef SEQSUB_IO_H_
#define SEQSUB_IO_H_

#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "seqsub/core.h"
#include "seqsub/coverage.h"
#include "seqsub/error.h"
#include "seqsub/matrix.h"
#include "seqsub/matroid.h"
#include "seqsub/policy.h"

namespace seqsub {

using Json = nlohmann::ordered_json;

inline std::string MaskToHex(ProductSet s) {
  std::ostringstream out;
  out << "0x" << std::hex << s;
  return out.str();
}

inline ProductSet HexToMask(const std::string& text) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(text, &used, 16);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || text.empty()) {
    throw Error(ErrorCode::kParse, "io", "bad hex subset mask: " + text);
  }
  return static_cast<ProductSet>(v);
}

namespace internal_io {

template <typename T>
T Get(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::kParse, "io",
                std::string("missing key \"") + key + "\"");
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "io",
                std::string("bad value for \"") + key + "\": " + e.what());
  }
}

template <typename T>
T GetOr(const Json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  return Get<T>(j, key);
}

inline Json Payload(const ClickModel& model) {
  return std::visit(
      [](const auto& m) -> Json {
        using M = std::decay_t<decltype(m)>;
        Json out = Json::object();
        if constexpr (std::is_same_v<M, ExplicitTable>) {
          for (const auto& [mask, value] : m.Entries()) {
            out[MaskToHex(mask)] = value;
          }
        } else if constexpr (std::is_same_v<M, CoverageFunction>) {
          out["weights"] = m.weights();
          out["covers"] = m.covers();
          out["normalized"] = m.normalized();
        } else {
          out["weights"] = m.weights();
          out["outside_weight"] = m.outside_weight();
        }
        return out;
      },
      model.variant());
}

inline ClickModel ParsePayload(const std::string& type, const Json& p, int n) {
  if (type == "explicit") {
    if (!p.is_object()) {
      throw Error(ErrorCode::kParse, "io", "explicit table must be an object");
    }
    std::vector<std::pair<ProductSet, double>> entries;
    for (const auto& [key, value] : p.items()) {
      if (!value.is_number()) {
        throw Error(ErrorCode::kParse, "io", "table value must be a number");
      }
      entries.emplace_back(HexToMask(key), value.get<double>());
    }
    return ExplicitTable(n, std::move(entries));
  }
  if (type == "coverage") {
    return CoverageFunction(
        Get<std::vector<double>>(p, "weights"),
        Get<std::vector<std::vector<int>>>(p, "covers"),
        GetOr<bool>(p, "normalized", false));
  }
  if (type == "mnl") {
    return MnlFunction(Get<std::vector<double>>(p, "weights"),
                       Get<double>(p, "outside_weight"));
  }
  throw Error(ErrorCode::kParse, "io", "unknown click model type: " + type);
}

}  // namespace internal_io

inline Json ClickModelsToJson(const Instance& inst) {
  Json out = Json::object();
  out["type"] = std::string(inst.f(0).kind());
  bool shared = true;
  for (int i = 1; i < inst.n(); ++i) {
    shared = shared && inst.f_ptr(i) == inst.f_ptr(0);
  }
  if (shared) {
    if (inst.f(0).kind() == "explicit") {
      out["table"] = internal_io::Payload(inst.f(0));
    } else {
      out.update(internal_io::Payload(inst.f(0)));
    }
  } else {
    Json levels = Json::array();
    for (int i = 0; i < inst.n(); ++i) {
      if (inst.f(i).kind() != inst.f(0).kind()) {
        throw Error(ErrorCode::kInvalidInstance, "io",
                    "all patience levels must use one click model type");
      }
      levels.push_back(internal_io::Payload(inst.f(i)));
    }
    out["per_patience"] = std::move(levels);
  }
  return out;
}

inline Json MatrixToJson(const SquareMatrix& m) {
  Json rows = Json::array();
  for (int i = 0; i < m.n(); ++i) {
    rows.push_back(std::vector<double>(m.row(i).begin(), m.row(i).end()));
  }
  return rows;
}

inline SquareMatrix MatrixFromJson(const Json& j, int n) {
  std::vector<std::vector<double>> rows;
  try {
    rows = j.get<std::vector<std::vector<double>>>();
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "io", std::string("bad matrix: ") + e.what());
  }
  if (rows.size() != static_cast<std::size_t>(n)) {
    throw Error(ErrorCode::kDimensionMismatch, "io", "matrix needs n rows");
  }
  SquareMatrix m(n);
  for (int i = 0; i < n; ++i) {
    if (rows[i].size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::kDimensionMismatch, "io", "matrix needs n columns");
    }
    for (int j2 = 0; j2 < n; ++j2) m(i, j2) = rows[i][j2];
  }
  return m;
}

inline Json InstanceToJson(const Instance& inst) {
  Json out = Json::object();
  out["n"] = inst.n();
  out["lambda"] = inst.lambdas();
  out["K"] = inst.per_click();
  out["T"] = inst.threshold();
  out["r"] = MatrixToJson(inst.placement());
  out["click_model"] = ClickModelsToJson(inst);
  return out;
}

inline Instance InstanceFromJson(const Json& j) {
  using internal_io::Get;
  using internal_io::GetOr;
  const int n = Get<int>(j, "n");
  if (n < 1 || n > kMaxProducts) {
    throw Error(ErrorCode::kInvalidInstance, "io", "n must be in [1, 64]");
  }
  auto lambda = Get<std::vector<double>>(j, "lambda");
  const SquareMatrix r =
      j.contains("r") ? MatrixFromJson(j.at("r"), n) : SquareMatrix(n);
  if (!j.contains("click_model")) {
    throw Error(ErrorCode::kParse, "io", "missing key \"click_model\"");
  }
  const Json& cm = j.at("click_model");
  const auto type = Get<std::string>(cm, "type");
  std::vector<std::shared_ptr<const ClickModel>> f;
  if (cm.contains("per_patience")) {
    const Json& levels = cm.at("per_patience");
    if (!levels.is_array() || levels.size() != static_cast<std::size_t>(n)) {
      throw Error(ErrorCode::kDimensionMismatch, "io",
                  "per_patience needs one entry per patience level");
    }
    for (const auto& level : levels) {
      f.push_back(std::make_shared<const ClickModel>(
          internal_io::ParsePayload(type, level, n)));
    }
  } else {
    if (type == "explicit" && !cm.contains("table")) {
      throw Error(ErrorCode::kParse, "io", "missing key \"table\"");
    }
    const Json& payload = type == "explicit" ? cm.at("table") : cm;
    f.assign(n, std::make_shared<const ClickModel>(
                    internal_io::ParsePayload(type, payload, n)));
  }
  return Instance(n, std::move(lambda), std::move(f), r,
                  GetOr<double>(j, "K", 0.0), GetOr<double>(j, "T", 0.0));
}

inline bool IsCoverageInstanceJson(const Json& j) {
  return j.is_object() && j.contains("interest_sets");
}

inline Json CoverageInstanceToJson(const CoverageInstance& ci) {
  Json sets = Json::array();
  for (ProductSet s : ci.interest_sets()) {
    std::vector<int> labels;
    for (int j = 0; j < ci.n(); ++j) {
      if (Contains(s, j)) labels.push_back(j + 1);
    }
    sets.push_back(labels);
  }
  Json out = Json::object();
  out["n"] = ci.n();
  out["interest_sets"] = std::move(sets);
  return out;
}

inline CoverageInstance CoverageInstanceFromJson(const Json& j) {
  const int n = internal_io::Get<int>(j, "n");
  const auto sets =
      internal_io::Get<std::vector<std::vector<int>>>(j, "interest_sets");
  std::vector<ProductSet> masks;
  for (const auto& labels : sets) {
    ProductSet s = 0;
    for (int p : labels) {
      if (p < 1 || p > n) {
        throw Error(ErrorCode::kInvalidInstance, "io",
                    "interest set product out of range");
      }
      s |= Singleton(p - 1);
    }
    masks.push_back(s);
  }
  return CoverageInstance(n, std::move(masks));
}

// Core instance from either file format; coverage instances are adapted.
inline Instance AnyInstanceFromJson(const Json& j) {
  if (IsCoverageInstanceJson(j)) {
    return CoverageToInstance(CoverageInstanceFromJson(j));
  }
  return InstanceFromJson(j);
}

// Array of layers, each an array of {"set", "p"}.
inline Json PolicyToJson(const PolicyVector& pv) {
  Json layers = Json::array();
  for (int k = 1; k <= pv.n(); ++k) {
    Json layer = Json::array();
    for (const auto& [s, p] : pv.layer(k)) {
      Json e = Json::object();
      e["set"] = MaskToHex(s);
      e["p"] = p;
      layer.push_back(std::move(e));
    }
    layers.push_back(std::move(layer));
  }
  return layers;
}

// Accepts the bare array or an object with "layers".
inline PolicyVector PolicyFromJson(const Json& j) {
  const Json& layers = j.is_object() && j.contains("layers") ? j.at("layers") : j;
  if (!layers.is_array() || layers.empty()) {
    throw Error(ErrorCode::kParse, "io", "policy must be a nonempty array");
  }
  PolicyVector pv(static_cast<int>(layers.size()));
  for (std::size_t k = 0; k < layers.size(); ++k) {
    if (!layers[k].is_array()) {
      throw Error(ErrorCode::kParse, "io", "policy layer must be an array");
    }
    for (const auto& e : layers[k]) {
      pv.Add(static_cast<int>(k) + 1,
             HexToMask(internal_io::Get<std::string>(e, "set")),
             internal_io::Get<double>(e, "p"));
    }
  }
  return pv;
}

inline bool IsPolicyJson(const Json& j) {
  if (j.is_object()) return j.contains("layers");
  return j.is_array() && !j.empty() && j.front().is_array();
}

// {"x": [[...]]}; a bare matrix is accepted too.
inline FractionalPoint PointFromJson(const Json& j) {
  const Json& m = j.is_object() && j.contains("x") ? j.at("x") : j;
  if (!m.is_array()) throw Error(ErrorCode::kParse, "io", "bad point");
  return FractionalPoint(MatrixFromJson(m, static_cast<int>(m.size())));
}

inline Json PointToJson(const FractionalPoint& x) {
  Json out = Json::object();
  out["x"] = MatrixToJson(x.matrix());
  return out;
}

inline Json PermutationToJson(const Permutation& pi) { return pi.OneBased(); }

inline Permutation PermutationFromJson(const Json& j) {
  try {
    return Permutation::FromOneBased(j.get<std::vector<int>>());
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "io",
                std::string("bad permutation: ") + e.what());
  }
}

inline Json ReadJsonFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kParse, "io", "cannot open " + path);
  try {
    return Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::kParse, "io", path + ": " + e.what());
  }
}

inline void WriteJsonFile(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::kParse, "io", "cannot write " + path);
  out << j.dump(2) << "\n";
}

}  // namespace seqsub

#endif  // SEQSUB_IO_H_

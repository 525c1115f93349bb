// Copyright 2026 The skbmlfx Authors
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

#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "skbmlfx/extractor.hpp"
#include "skbmlfx/planner.hpp"

namespace skbmlfx::io {

// Locale-independent decimal with 17 significant digits (round-trips).
std::string format_double(double x);
double parse_double(std::string_view text);

// Feature file:
//   # dv=<int> ds=<int> n=<int>
//   label,v_1,...,v_dv          (one row per sample)
struct FeatureTable {
  std::size_t d_v = 0;
  std::size_t d_s = 0;
  Matrix visual{1, 1};  // d_v x n
  std::vector<int> labels;
};

void write_feature_table(const std::filesystem::path& path, const Matrix& visual, const std::vector<int>& labels,
                         std::size_t d_s);
FeatureTable read_feature_table(const std::filesystem::path& path);

void save_features(const std::filesystem::path& path, const TrainingSet& train);
TrainingSet load_features(const std::filesystem::path& path, const SemanticPrototypes& prototypes);

// Prototype file: same header with dv=0, then class_id,s_1,...,s_ds.
void save_prototypes(const std::filesystem::path& path, const SemanticPrototypes& prototypes);
SemanticPrototypes load_prototypes(const std::filesystem::path& path);

// Instance file:
//   # tau=<seconds>
//   m,loss1,loss2,loss3,loss4,latency1,latency2,latency3,latency4
//   0,...
void save_instance(const std::filesystem::path& path, const Instance& inst);
Instance load_instance(const std::filesystem::path& path);

nlohmann::json to_json(const ExtractorModel& model);
ExtractorModel model_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PlannerReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace skbmlfx::io

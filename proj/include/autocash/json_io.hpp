// Copyright 2026 The autocash Authors.
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

#include <span>
#include <vector>

#include <json.hpp>

#include "autocash/ga.hpp"
#include "autocash/meta_learner.hpp"
#include "autocash/metafeatures.hpp"
#include "autocash/metrics.hpp"
#include "autocash/portfolio.hpp"
#include "autocash/rewards.hpp"

// JSON views of the library's value types. Readers throw DataError on
// malformed documents.
namespace autocash {

using Json = nlohmann::json;

Json domain_to_json(const Domain& d);
Domain domain_from_json(const Json& j);

Json param_value_to_json(const ParamValue& v);
/// Interprets `j` according to the domain of `p`.
ParamValue param_value_from_json(const HyperparamSpec& p, const Json& j);

Json config_to_json(const Config& c);
Config config_from_json(const AlgorithmSpec& spec, const Json& j);

Json algorithm_to_json(const AlgorithmSpec& spec);
AlgorithmSpec algorithm_from_json(const Json& j);

Json portfolio_to_json(const Portfolio& p);
Portfolio portfolio_from_json(const Json& j);

/// {"algorithm": {"param": bool}} as written by the screen command.
Json tunable_flags_to_json(const Portfolio& p);
/// Applies flags; unknown algorithms or parameters are a DataError.
void apply_tunable_flags(Portfolio& p, const Json& flags);

Json outcome_to_json(const EvaluationOutcome& o);
Json history_to_json(std::span<const GenerationStats> history);

Json meta_features_to_json(const MetaFeatureVector& v);
MetaFeatureVector meta_features_from_json(const Json& j);

Json feature_list_to_json(const MetaFeatureList& m);
MetaFeatureList feature_list_from_json(const Json& j);

Json labels_to_json(std::span<const LabelResult> labels, const Portfolio& p);

Json meta_dataset_to_json(const MetaDataset& md);
MetaDataset meta_dataset_from_json(const Json& j);

Json reward_table_to_json(const RewardTable& t);
RewardTable reward_table_from_json(const Json& j);

Json forest_to_json(const Forest& f);
Forest forest_from_json(const Json& j);

}  // namespace autocash

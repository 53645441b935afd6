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

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "autocash/dqn.hpp"
#include "autocash/ga.hpp"
#include "autocash/json_io.hpp"
#include "autocash/meta_learner.hpp"
#include "autocash/metrics.hpp"
#include "autocash/portfolio.hpp"
#include "autocash/rewards.hpp"
#include "autocash/tabular.hpp"

namespace autocash {

inline constexpr int kArtifactVersion = 1;

/// Seeds of the training stages, each derived from the root seed and the
/// stage name.
struct StageSeeds {
    std::uint64_t impute = 0;
    std::uint64_t label = 0;
    std::uint64_t rewards = 0;
    std::uint64_t dqn = 0;
    std::uint64_t forest = 0;

    static StageSeeds from_root(std::uint64_t root);
};

struct TrainParams {
    std::uint64_t seed = 0;
    std::size_t reward_repeats = 5;
    std::size_t reward_trees = 100;
    std::size_t folds = 5;
    DQNParams dqn;
    ForestParams forest;
    Exec exec = Exec::parallel;
};

/// Everything recommend() needs, persisted as one checksummed JSON file.
struct ModelArtifact {
    int version = kArtifactVersion;
    MetaFeatureList m_list;
    Forest forest;
    std::string portfolio_fingerprint;
    Json provenance;

    bool operator==(const ModelArtifact&) const = default;
};

/// Loads every *.csv in `dir` in name order. Targets come from manifest.json
/// (file name -> column name) when present, else the last column.
std::vector<Dataset> load_corpus(const std::filesystem::path& dir, const CsvOptions& csv = {});

/// Imputes each dataset; dataset k uses derive_seed(seed, k).
std::vector<Dataset> impute_all(const std::vector<Dataset>& datasets, std::uint64_t seed);

/// Intermediate results of a training run, kept for inspection.
struct TrainOutputs {
    std::vector<LabelResult> labels;
    MetaDataset meta;
    RewardTable rewards;
    DQNResult selection;
    ModelArtifact artifact;
};

/// Reuse points for running the stages piecemeal.
struct StageInputs {
    std::optional<MetaDataset> meta;
    std::optional<RewardTable> rewards;
    std::optional<MetaFeatureList> m_list;
};

/// label -> meta-dataset -> rewards -> feature selection -> forest. Errors are
/// rethrown with the failing stage name prepended.
TrainOutputs train_pipeline(const std::vector<Dataset>& datasets, const Portfolio& portfolio,
                            const TrainParams& params, const StageInputs& reuse = {});

RewardOptions reward_options(const TrainParams& params, std::uint64_t seed);
MaskScorer pipeline_scorer(const MetaDataset& md, const TrainParams& params, std::uint64_t seed);

std::string artifact_to_string(const ModelArtifact& a);
ModelArtifact artifact_from_string(const std::string& text);
void save_artifact(const ModelArtifact& a, const std::filesystem::path& path);
ModelArtifact load_artifact(const std::filesystem::path& path);

struct Recommendation {
    std::string algorithm;
    Config config;
    EvaluationOutcome outcome;
    EvaluationOutcome default_outcome;
    OptimizeResult search;
};

/// Imputes `d`, predicts an algorithm from its projected meta-features and
/// tunes it with the GA. DataError when the portfolio fingerprint differs.
Recommendation recommend(const ModelArtifact& artifact, const Portfolio& portfolio,
                         const Dataset& d, const GAParams& ga);

}  // namespace autocash

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

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "autocash/meta_learner.hpp"
#include "autocash/metafeatures.hpp"
#include "autocash/parallel.hpp"
#include "autocash/portfolio.hpp"
#include "autocash/tabular.hpp"

namespace autocash {

/// Default-config scores of every portfolio algorithm on one dataset.
struct LabelResult {
    std::string dataset;
    std::string algorithm;
    /// Portfolio order; failed algorithms hold -1.
    std::vector<double> f_scores;
};

/// Evaluates every algorithm at its default configuration and labels each
/// dataset with the best f_score (earlier portfolio entry on ties). Algorithms
/// that fail on a dataset are skipped for it; if all fail, DataError.
std::vector<LabelResult> label_optimal(std::span<const Dataset> datasets,
                                       const Portfolio& portfolio, std::uint64_t seed,
                                       Exec exec = Exec::parallel);

/// One row per dataset: compute_all(dataset) and its label.
MetaDataset build_meta_dataset(std::span<const Dataset> datasets,
                               std::span<const LabelResult> labels);

struct RewardTable {
    std::array<double, kMetaFeatureCount> rewards{};

    double operator[](std::size_t i) const { return rewards[i]; }
    bool operator==(const RewardTable&) const = default;
};

struct RewardOptions {
    std::size_t min_batch = 2;
    std::size_t max_batch = 8;
    std::size_t repeats = 5;
    std::size_t folds = 5;
    std::uint64_t seed = 0;
    /// Trees per subset forest; its seed is replaced per subset.
    ForestParams forest;
    Exec exec = Exec::parallel;
};

struct RewardEstimate {
    RewardTable table;
    /// Subsets scored per meta-feature: (max_batch - min_batch + 1) * repeats.
    std::size_t subsets_per_feature = 0;
};

/// reward[f] is the mean cross-validated meta-learner accuracy over random
/// feature subsets that contain f, `repeats` subsets per batch size.
RewardEstimate estimate_rewards(const MetaDataset& md, const RewardOptions& options);

}  // namespace autocash

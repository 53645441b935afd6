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

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "autocash/cart.hpp"
#include "autocash/metafeatures.hpp"
#include "autocash/parallel.hpp"

namespace autocash {

/// One training dataset summarized: its meta-features and best algorithm.
struct MetaRow {
    std::string dataset;
    MetaFeatureVector features;
    std::string label;

    bool operator==(const MetaRow&) const = default;
};

struct MetaDataset {
    std::vector<MetaRow> rows;

    std::size_t size() const { return rows.size(); }
    /// Sorted distinct labels.
    std::vector<std::string> label_set() const;

    bool operator==(const MetaDataset&) const = default;
};

struct ForestParams {
    std::size_t trees = 100;
    int max_depth = 12;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

/// Random-forest classifier over projected meta-feature vectors. Class k of
/// every tree is labels()[k].
class Forest {
public:
    Forest() = default;
    /// Throws DataError when the parts are inconsistent.
    Forest(std::vector<cart::Tree> trees, std::vector<std::string> labels,
           MetaFeatureList features);

    const std::vector<cart::Tree>& trees() const { return trees_; }
    const std::vector<std::string>& labels() const { return labels_; }
    const MetaFeatureList& features() const { return features_; }
    std::size_t arity() const { return features_.size(); }

    /// Averaged leaf distribution over labels(); `v` is already projected.
    std::vector<double> predict_proba(std::span<const double> v) const;
    /// Most probable label, lower class index on ties.
    const std::string& predict(std::span<const double> v) const;
    /// Projects a full vector onto features() first.
    const std::string& predict(const MetaFeatureVector& v) const;

    bool operator==(const Forest&) const = default;

private:
    std::vector<cart::Tree> trees_;
    std::vector<std::string> labels_;
    MetaFeatureList features_;
};

/// Bagged Gini trees on `md` projected onto `m`, drawing ceil(sqrt(|m|))
/// candidate features per split.
Forest train_rf(const MetaDataset& md, const MetaFeatureList& m, const ForestParams& params);

/// Mean k-fold accuracy of train_rf on `md` projected onto `m`. Rows are
/// shuffled under `fold_seed`; shuffled position p goes to fold p mod k.
double cross_validated_accuracy(const MetaDataset& md, const MetaFeatureList& m,
                                const ForestParams& params, std::size_t folds,
                                std::uint64_t fold_seed);
/// Same, over any list of catalogue indices (no size cap).
double cross_validated_accuracy(const MetaDataset& md, std::span<const int> m,
                                const ForestParams& params, std::size_t folds,
                                std::uint64_t fold_seed);

}  // namespace autocash

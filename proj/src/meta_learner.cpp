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


#include "autocash/meta_learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include "autocash/errors.hpp"
#include "autocash/random.hpp"

namespace autocash {

namespace {

cart::FeatureMatrix design(const MetaDataset& md, std::span<const std::size_t> rows,
                           std::span<const int> m) {
    cart::FeatureMatrix x(rows.size(), m.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        const auto v = project(md.rows[rows[r]].features, m);
        std::copy(v.begin(), v.end(), x.values.begin() + static_cast<std::ptrdiff_t>(r * m.size()));
    }
    return x;
}

struct Fitted {
    std::vector<cart::Tree> trees;
    std::vector<std::string> labels;
};

Fitted train_on(const MetaDataset& md, std::span<const std::size_t> rows, std::span<const int> m,
                const ForestParams& params) {
    if (rows.empty()) throw DataError("meta-learner: empty meta-dataset");
    if (m.empty()) throw ContractError("meta-learner: empty feature list");
    if (params.trees < 1) throw ContractError("meta-learner: at least one tree required");

    std::set<std::string> distinct;
    for (auto r : rows) distinct.insert(md.rows[r].label);
    std::vector<std::string> labels(distinct.begin(), distinct.end());
    std::vector<int> y(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        y[i] = static_cast<int>(std::lower_bound(labels.begin(), labels.end(),
                                                 md.rows[rows[i]].label) -
                                labels.begin());
    }

    cart::ForestTrainParams fp;
    fp.trees = params.trees;
    fp.tree.max_depth = params.max_depth;
    fp.tree.max_features =
        static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(m.size()))));
    fp.seed = params.seed;
    fp.exec = params.exec;
    auto trees = cart::fit_forest(design(md, rows, m), y, labels.size(), fp);
    return {std::move(trees), std::move(labels)};
}

}  // namespace

std::vector<std::string> MetaDataset::label_set() const {
    std::set<std::string> s;
    for (const auto& r : rows) s.insert(r.label);
    return {s.begin(), s.end()};
}

Forest::Forest(std::vector<cart::Tree> trees, std::vector<std::string> labels,
               MetaFeatureList features)
    : trees_(std::move(trees)), labels_(std::move(labels)), features_(std::move(features)) {
    if (trees_.empty()) throw DataError("forest: no trees");
    if (labels_.empty()) throw DataError("forest: empty label map");
    if (!std::is_sorted(labels_.begin(), labels_.end()) ||
        std::adjacent_find(labels_.begin(), labels_.end()) != labels_.end()) {
        throw DataError("forest: label map must be sorted and unique");
    }
    for (const auto& t : trees_) {
        if (t.classes() != labels_.size()) throw DataError("forest: tree class count mismatch");
        if (t.arity() != features_.size()) throw DataError("forest: tree arity mismatch");
    }
}

std::vector<double> Forest::predict_proba(std::span<const double> v) const {
    if (v.size() != arity()) {
        throw ContractError("forest: expected " + std::to_string(arity()) + " inputs, got " +
                            std::to_string(v.size()));
    }
    return cart::forest_distribution(trees_, v);
}

const std::string& Forest::predict(std::span<const double> v) const {
    return labels_[cart::argmax(predict_proba(v))];
}

const std::string& Forest::predict(const MetaFeatureVector& v) const {
    return predict(project(v, features_));
}

Forest train_rf(const MetaDataset& md, const MetaFeatureList& m, const ForestParams& params) {
    std::vector<std::size_t> rows(md.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    auto fitted = train_on(md, rows, m.indices(), params);
    return Forest(std::move(fitted.trees), std::move(fitted.labels), m);
}

double cross_validated_accuracy(const MetaDataset& md, const MetaFeatureList& m,
                                const ForestParams& params, std::size_t folds,
                                std::uint64_t fold_seed) {
    return cross_validated_accuracy(md, std::span<const int>(m.indices()), params, folds,
                                    fold_seed);
}

double cross_validated_accuracy(const MetaDataset& md, std::span<const int> m,
                                const ForestParams& params, std::size_t folds,
                                std::uint64_t fold_seed) {
    if (folds < 2) throw ContractError("cross-validation needs at least 2 folds");
    if (md.size() < folds) {
        throw DataError("cross-validation: " + std::to_string(md.size()) + " rows for " +
                        std::to_string(folds) + " folds");
    }
    std::vector<std::size_t> order(md.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(fold_seed);
    shuffle(std::span(order), rng);

    double total = 0.0;
    for (std::size_t k = 0; k < folds; ++k) {
        std::vector<std::size_t> train, test;
        for (std::size_t p = 0; p < order.size(); ++p) (p % folds == k ? test : train).push_back(order[p]);
        ForestParams fold_params = params;
        fold_params.seed = derive_seed(params.seed, static_cast<std::uint64_t>(k));
        const Fitted f = train_on(md, train, m, fold_params);
        std::size_t hits = 0;
        for (auto r : test) {
            const auto v = project(md.rows[r].features, m);
            const auto k_hat = cart::argmax(cart::forest_distribution(f.trees, v));
            hits += f.labels[k_hat] == md.rows[r].label ? 1 : 0;
        }
        total += static_cast<double>(hits) / static_cast<double>(test.size());
    }
    return total / static_cast<double>(folds);
}

}  // namespace autocash

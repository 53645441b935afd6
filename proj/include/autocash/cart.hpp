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
#include <vector>

#include "autocash/parallel.hpp"
#include "autocash/random.hpp"

// Gini-impurity classification trees shared by the portfolio's tree learners
// and the meta-learner forest.
namespace autocash::cart {

/// Row-major design matrix. Categorical columns hold integer level codes.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<bool> categorical;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t rows, std::size_t cols);

    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return {values.data() + r * cols, cols};
    }
};

struct TreeParams {
    int max_depth = 32;
    std::size_t min_split = 2;
    /// Features drawn (without replacement) at each split; 0 means all.
    std::size_t max_features = 0;
};

/// Internal nodes route `x <= threshold` (numeric) or `x == threshold`
/// (categorical) to the left child. Leaves have feature == -1 and point at
/// their class distribution.
struct Node {
    int feature = -1;
    double threshold = 0.0;
    bool categorical = false;
    int left = -1;
    int right = -1;
    std::uint32_t leaf = 0;

    bool is_leaf() const { return feature < 0; }
    bool operator==(const Node&) const = default;
};

class Tree {
public:
    Tree() = default;
    /// Rebuilds a tree from serialized parts; throws DataError if inconsistent.
    Tree(std::vector<Node> nodes, std::vector<double> distributions, std::size_t classes,
         std::size_t arity);

    /// Grows a tree on the rows listed in `sample` (duplicates allowed, as in
    /// a bootstrap). The rng is only consumed when max_features subsamples.
    static Tree fit(const FeatureMatrix& x, std::span<const int> labels,
                    std::span<const std::size_t> sample, std::size_t classes,
                    const TreeParams& params, Rng& rng);

    /// Class distribution of the leaf reached by `row`.
    std::span<const double> predict(std::span<const double> row) const;

    const std::vector<Node>& nodes() const { return nodes_; }
    const std::vector<double>& distributions() const { return distributions_; }
    std::size_t classes() const { return classes_; }
    std::size_t arity() const { return arity_; }
    std::size_t depth() const;

    bool operator==(const Tree&) const = default;

private:
    std::vector<Node> nodes_;
    std::vector<double> distributions_;
    std::size_t classes_ = 0;
    std::size_t arity_ = 0;
};

struct ForestTrainParams {
    std::size_t trees = 100;
    TreeParams tree;
    std::uint64_t seed = 0;
    Exec exec = Exec::parallel;
};

/// Bagged trees: tree t sees a bootstrap resample drawn from
/// Rng(derive_seed(seed, t)). Tree-parallel under Exec::parallel.
std::vector<Tree> fit_forest(const FeatureMatrix& x, std::span<const int> labels,
                             std::size_t classes, const ForestTrainParams& params);

/// Mean of the trees' leaf distributions.
std::vector<double> forest_distribution(std::span<const Tree> trees, std::span<const double> row);

/// Index of the largest entry, lowest index on ties.
std::size_t argmax(std::span<const double> values);

}  // namespace autocash::cart

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

#include "autocash/cart.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <string>

#include "autocash/errors.hpp"

namespace autocash::cart {

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    bool categorical = false;
    double impurity = 0.0;  // weighted child impurity
};

// n * gini, i.e. n - sum(count^2) / n, kept unnormalized to save divisions.
double scaled_gini(std::span<const double> counts, double n) {
    if (n <= 0) return 0.0;
    double sq = 0;
    for (double c : counts) sq += c * c;
    return n - sq / n;
}

class Grower {
public:
    Grower(const FeatureMatrix& x, std::span<const int> labels, std::size_t classes,
           const TreeParams& params, Rng& rng)
        : x_(x), labels_(labels), classes_(classes), params_(params), rng_(rng) {
        features_.resize(x.cols);
        std::iota(features_.begin(), features_.end(), std::size_t{0});
    }

    void grow(std::vector<std::size_t>& rows, int depth) {
        const auto node_index = nodes_.size();
        nodes_.emplace_back();

        std::vector<double> counts(classes_, 0.0);
        for (auto r : rows) counts[static_cast<std::size_t>(labels_[r])] += 1.0;
        const double n = static_cast<double>(rows.size());
        const double parent = scaled_gini(counts, n);

        Split best;
        if (depth < params_.max_depth && rows.size() >= params_.min_split && parent > 1e-12) {
            best = find_split(rows);
        }
        if (best.feature < 0) {
            make_leaf(node_index, counts, n);
            return;
        }

        std::vector<std::size_t> left;
        std::vector<std::size_t> right;
        for (auto r : rows) {
            const double v = x_.at(r, static_cast<std::size_t>(best.feature));
            const bool go_left = best.categorical ? v == best.threshold : v <= best.threshold;
            (go_left ? left : right).push_back(r);
        }
        rows.clear();
        rows.shrink_to_fit();

        nodes_[node_index].feature = best.feature;
        nodes_[node_index].threshold = best.threshold;
        nodes_[node_index].categorical = best.categorical;
        nodes_[node_index].left = static_cast<int>(nodes_.size());
        grow(left, depth + 1);
        nodes_[node_index].right = static_cast<int>(nodes_.size());
        grow(right, depth + 1);
    }

    std::vector<Node> nodes_;
    std::vector<double> distributions_;

private:
    void make_leaf(std::size_t node_index, const std::vector<double>& counts, double n) {
        nodes_[node_index].leaf = static_cast<std::uint32_t>(distributions_.size() / classes_);
        for (double c : counts) distributions_.push_back(c / n);
    }

    // Candidate features are drawn in a random order when subsampling; the
    // first strictly best split found wins.
    Split find_split(const std::vector<std::size_t>& rows) {
        std::size_t k = x_.cols;
        if (params_.max_features > 0 && params_.max_features < x_.cols) {
            k = params_.max_features;
            for (std::size_t i = 0; i < k; ++i) {
                const auto j = i + static_cast<std::size_t>(uniform_index(rng_, x_.cols - i));
                std::swap(features_[i], features_[j]);
            }
        }
        Split best;
        best.impurity = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < k; ++i) {
            const auto f = features_[i];
            if (x_.categorical[f]) {
                categorical_split(rows, f, best);
            } else {
                numeric_split(rows, f, best);
            }
        }
        return best;
    }

    void numeric_split(const std::vector<std::size_t>& rows, std::size_t f, Split& best) {
        order_.assign(rows.begin(), rows.end());
        std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
            return x_.at(a, f) < x_.at(b, f);
        });
        const double n = static_cast<double>(rows.size());
        std::vector<double> left(classes_, 0.0);
        std::vector<double> right(classes_, 0.0);
        for (auto r : order_) right[static_cast<std::size_t>(labels_[r])] += 1.0;
        for (std::size_t i = 0; i + 1 < order_.size(); ++i) {
            const auto c = static_cast<std::size_t>(labels_[order_[i]]);
            left[c] += 1.0;
            right[c] -= 1.0;
            const double a = x_.at(order_[i], f);
            const double b = x_.at(order_[i + 1], f);
            if (!(a < b)) continue;
            const double nl = static_cast<double>(i + 1);
            const double impurity = (scaled_gini(left, nl) + scaled_gini(right, n - nl)) / n;
            if (impurity < best.impurity) {
                best.impurity = impurity;
                best.feature = static_cast<int>(f);
                best.categorical = false;
                double mid = a + (b - a) / 2.0;
                if (!(mid < b)) mid = a;
                best.threshold = mid;
            }
        }
    }

    void categorical_split(const std::vector<std::size_t>& rows, std::size_t f, Split& best) {
        // counts per level, ordered by level code
        std::vector<std::pair<double, std::vector<double>>> levels;
        std::vector<double> total(classes_, 0.0);
        std::vector<std::pair<double, std::size_t>> seen;
        for (auto r : rows) {
            const double v = x_.at(r, f);
            auto it = std::find_if(seen.begin(), seen.end(), [&](const auto& s) {
                return s.first == v;
            });
            std::size_t slot;
            if (it == seen.end()) {
                slot = levels.size();
                seen.emplace_back(v, slot);
                levels.emplace_back(v, std::vector<double>(classes_, 0.0));
            } else {
                slot = it->second;
            }
            levels[slot].second[static_cast<std::size_t>(labels_[r])] += 1.0;
            total[static_cast<std::size_t>(labels_[r])] += 1.0;
        }
        if (levels.size() < 2) return;
        std::sort(levels.begin(), levels.end(),
                  [](const auto& a, const auto& b) { return a.first < b.first; });
        const double n = static_cast<double>(rows.size());
        std::vector<double> rest(classes_);
        for (const auto& [value, counts] : levels) {
            const double nl = std::accumulate(counts.begin(), counts.end(), 0.0);
            for (std::size_t c = 0; c < classes_; ++c) rest[c] = total[c] - counts[c];
            const double impurity = (scaled_gini(counts, nl) + scaled_gini(rest, n - nl)) / n;
            if (impurity < best.impurity) {
                best.impurity = impurity;
                best.feature = static_cast<int>(f);
                best.categorical = true;
                best.threshold = value;
            }
        }
    }

    const FeatureMatrix& x_;
    std::span<const int> labels_;
    std::size_t classes_;
    TreeParams params_;
    Rng& rng_;
    std::vector<std::size_t> features_;
    std::vector<std::size_t> order_;
};

}  // namespace

FeatureMatrix::FeatureMatrix(std::size_t r, std::size_t c)
    : rows(r), cols(c), values(r * c, 0.0), categorical(c, false) {}

Tree::Tree(std::vector<Node> nodes, std::vector<double> distributions, std::size_t classes,
           std::size_t arity)
    : nodes_(std::move(nodes)),
      distributions_(std::move(distributions)),
      classes_(classes),
      arity_(arity) {
    if (nodes_.empty() || classes_ == 0 || distributions_.size() % classes_ != 0) {
        throw DataError("tree: inconsistent node or distribution tables");
    }
    const auto leaves = distributions_.size() / classes_;
    const auto count = static_cast<int>(nodes_.size());
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        const Node& node = nodes_[i];
        if (node.is_leaf()) {
            if (node.leaf >= leaves) throw DataError("tree: leaf index out of range");
        } else if (node.feature >= static_cast<int>(arity_) ||
                   node.left <= static_cast<int>(i) || node.right <= static_cast<int>(i) ||
                   node.left >= count || node.right >= count) {
            throw DataError("tree: malformed internal node");
        }
    }
}

Tree Tree::fit(const FeatureMatrix& x, std::span<const int> labels,
               std::span<const std::size_t> sample, std::size_t classes, const TreeParams& params,
               Rng& rng) {
    if (sample.empty()) throw ContractError("tree: empty training sample");
    if (classes == 0) throw ContractError("tree: no classes");
    if (labels.size() != x.rows) throw ContractError("tree: label count differs from row count");
    Grower grower(x, labels, classes, params, rng);
    std::vector<std::size_t> rows(sample.begin(), sample.end());
    grower.grow(rows, 0);
    Tree t;
    t.nodes_ = std::move(grower.nodes_);
    t.distributions_ = std::move(grower.distributions_);
    t.classes_ = classes;
    t.arity_ = x.cols;
    return t;
}

std::span<const double> Tree::predict(std::span<const double> row) const {
    if (row.size() != arity_) {
        throw ContractError("tree: expected " + std::to_string(arity_) + " features, got " +
                            std::to_string(row.size()));
    }
    std::size_t i = 0;
    while (!nodes_[i].is_leaf()) {
        const Node& node = nodes_[i];
        const double v = row[static_cast<std::size_t>(node.feature)];
        const bool left = node.categorical ? v == node.threshold : v <= node.threshold;
        i = static_cast<std::size_t>(left ? node.left : node.right);
    }
    return {distributions_.data() + nodes_[i].leaf * classes_, classes_};
}

std::size_t Tree::depth() const {
    std::vector<std::size_t> depth(nodes_.size(), 0);
    std::size_t deepest = 0;
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
        deepest = std::max(deepest, depth[i]);
        if (!nodes_[i].is_leaf()) {
            depth[static_cast<std::size_t>(nodes_[i].left)] = depth[i] + 1;
            depth[static_cast<std::size_t>(nodes_[i].right)] = depth[i] + 1;
        }
    }
    return deepest;
}

std::vector<Tree> fit_forest(const FeatureMatrix& x, std::span<const int> labels,
                             std::size_t classes, const ForestTrainParams& params) {
    if (params.trees == 0) throw ContractError("forest: needs at least one tree");
    if (x.rows == 0) throw ContractError("forest: empty training data");
    std::vector<Tree> trees(params.trees);
    for_each_index(params.exec, params.trees, [&](std::size_t t) {
        Rng rng(derive_seed(params.seed, static_cast<std::uint64_t>(t)));
        std::vector<std::size_t> sample(x.rows);
        for (auto& s : sample) s = static_cast<std::size_t>(uniform_index(rng, x.rows));
        trees[t] = Tree::fit(x, labels, sample, classes, params.tree, rng);
    });
    return trees;
}

std::vector<double> forest_distribution(std::span<const Tree> trees, std::span<const double> row) {
    if (trees.empty()) throw ContractError("forest: no trees");
    std::vector<double> out(trees.front().classes(), 0.0);
    for (const Tree& t : trees) {
        const auto dist = t.predict(row);
        for (std::size_t c = 0; c < out.size(); ++c) out[c] += dist[c];
    }
    for (double& p : out) p /= static_cast<double>(trees.size());
    return out;
}

std::size_t argmax(std::span<const double> values) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        if (values[i] > values[best]) best = i;
    }
    return best;
}

}  // namespace autocash::cart

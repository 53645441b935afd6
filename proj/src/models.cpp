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

// Native implementations of the portfolio classifiers.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "autocash/cart.hpp"
#include "autocash/errors.hpp"
#include "autocash/kernels.hpp"
#include "autocash/portfolio.hpp"
#include "autocash/random.hpp"

namespace autocash {

namespace {

struct ColumnShape {
    std::string name;
    AttributeKind kind;
    std::vector<std::string> levels;
    bool operator==(const ColumnShape&) const = default;
};

class Schema {
public:
    explicit Schema(const Dataset& d) : target_(d.target_index()) {
        for (const auto& c : d.columns()) columns_.push_back({c.name, c.kind, c.levels});
    }

    void check(const Dataset& d) const {
        bool ok = d.target_index() == target_ && d.column_count() == columns_.size();
        for (std::size_t c = 0; ok && c < columns_.size(); ++c) {
            const auto& col = d.column(c);
            ok = columns_[c] == ColumnShape{col.name, col.kind, col.levels};
        }
        if (!ok) throw DataError(d.name() + ": rows do not match the training schema");
        if (d.has_missing()) throw DataError(d.name() + ": rows contain missing cells");
    }

    std::size_t classes() const { return columns_[target_].levels.size(); }

private:
    std::vector<ColumnShape> columns_;
    std::size_t target_;
};

std::int64_t int_param(const Config& c, const std::string& name) {
    return std::get<std::int64_t>(c.at(name));
}

Prediction make_prediction(std::vector<double> probabilities, std::size_t classes) {
    Prediction p;
    p.classes = classes;
    p.probabilities = std::move(probabilities);
    const std::size_t rows = classes == 0 ? 0 : p.probabilities.size() / classes;
    p.labels.resize(rows);
    for (std::size_t r = 0; r < rows; ++r) {
        p.labels[r] = static_cast<int>(cart::argmax(p.row(r)));
    }
    return p;
}

std::vector<double> class_frequencies(std::span<const int> labels, std::size_t classes) {
    std::vector<double> f(classes, 0.0);
    for (int y : labels) f[static_cast<std::size_t>(y)] += 1.0;
    for (double& v : f) v /= static_cast<double>(labels.size());
    return f;
}

// Dense numeric design: numeric columns as one feature each, categorical
// columns one-hot over their level lists. Numeric features are rescaled
// from training statistics.
class DenseEncoder {
public:
    enum class Scaling { min_max, z_score };

    DenseEncoder(const Dataset& train, Scaling scaling) : scaling_(scaling) {
        for (std::size_t c = 0; c < train.column_count(); ++c) {
            if (c == train.target_index()) continue;
            const Column& col = train.column(c);
            Slot s{c, col.kind, width_, 0.0, 1.0};
            if (col.kind == AttributeKind::numeric) {
                const auto& xs = col.numbers;
                if (scaling_ == Scaling::min_max) {
                    const auto [lo, hi] = std::minmax_element(xs.begin(), xs.end());
                    s.offset = *lo;
                    s.scale = *hi > *lo ? 1.0 / (*hi - *lo) : 0.0;
                } else {
                    const double mean =
                        std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
                    double var = 0;
                    for (double x : xs) var += (x - mean) * (x - mean);
                    const double sd = std::sqrt(var / static_cast<double>(xs.size()));
                    s.offset = mean;
                    s.scale = sd > 0 ? 1.0 / sd : 0.0;
                }
                width_ += 1;
            } else {
                width_ += col.levels.size();
            }
            slots_.push_back(s);
        }
    }

    std::size_t width() const { return width_; }

    std::vector<double> encode(const Dataset& d) const {
        std::vector<double> out(d.row_count() * width_, 0.0);
        for (const Slot& s : slots_) {
            const Column& col = d.column(s.column);
            for (std::size_t r = 0; r < d.row_count(); ++r) {
                double* row = out.data() + r * width_;
                if (s.kind == AttributeKind::numeric) {
                    row[s.start] = (col.numbers[r] - s.offset) * s.scale;
                } else {
                    row[s.start + static_cast<std::size_t>(col.codes[r])] = 1.0;
                }
            }
        }
        return out;
    }

private:
    struct Slot {
        std::size_t column;
        AttributeKind kind;
        std::size_t start;
        double offset;
        double scale;
    };
    Scaling scaling_;
    std::vector<Slot> slots_;
    std::size_t width_ = 0;
};

// Non-target columns as they are; categorical codes become doubles.
cart::FeatureMatrix tree_features(const Dataset& d) {
    std::vector<std::size_t> cols;
    for (std::size_t c = 0; c < d.column_count(); ++c) {
        if (c != d.target_index()) cols.push_back(c);
    }
    cart::FeatureMatrix x(d.row_count(), cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        const Column& col = d.column(cols[j]);
        x.categorical[j] = col.kind == AttributeKind::categorical;
        for (std::size_t r = 0; r < d.row_count(); ++r) {
            x.at(r, j) = col.kind == AttributeKind::numeric ? col.numbers[r]
                                                            : static_cast<double>(col.codes[r]);
        }
    }
    return x;
}

class ModelBase : public FittedModel {
public:
    ModelBase(std::string id, const Dataset& train) : id_(std::move(id)), schema_(train) {}
    const std::string& algorithm() const override { return id_; }

    Prediction predict_with_scores(const Dataset& rows) const override {
        schema_.check(rows);
        return make_prediction(probabilities(rows), schema_.classes());
    }

protected:
    virtual std::vector<double> probabilities(const Dataset& rows) const = 0;
    std::size_t classes() const { return schema_.classes(); }

private:
    std::string id_;
    Schema schema_;
};

class MajorityModel final : public ModelBase {
public:
    MajorityModel(const Dataset& train, std::span<const int> labels)
        : ModelBase(algorithm_ids::kMajority, train),
          frequencies_(class_frequencies(labels, train.class_count())) {}

private:
    std::vector<double> probabilities(const Dataset& rows) const override {
        std::vector<double> out;
        out.reserve(rows.row_count() * frequencies_.size());
        for (std::size_t r = 0; r < rows.row_count(); ++r) {
            out.insert(out.end(), frequencies_.begin(), frequencies_.end());
        }
        return out;
    }

    std::vector<double> frequencies_;
};

class KnnModel final : public ModelBase {
public:
    KnnModel(const Dataset& train, std::span<const int> labels, std::size_t k, bool inverse,
             Exec exec)
        : ModelBase(algorithm_ids::kKnn, train),
          encoder_(train, DenseEncoder::Scaling::min_max),
          points_(encoder_.encode(train)),
          labels_(labels.begin(), labels.end()),
          k_(std::min(k, labels.size())),
          inverse_(inverse),
          exec_(exec) {}

private:
    std::vector<double> probabilities(const Dataset& rows) const override {
        const std::size_t n = labels_.size();
        const std::size_t classes = this->classes();
        std::vector<double> out(rows.row_count() * classes, 0.0);
        if (rows.row_count() == 0) return out;
        const std::size_t dims = std::max<std::size_t>(encoder_.width(), 1);
        std::vector<double> queries = encoder_.encode(rows);
        std::vector<double> refs = points_;
        if (encoder_.width() == 0) {
            queries.assign(rows.row_count(), 0.0);
            refs.assign(n, 0.0);
        }
        const auto dist = kernels::squared_distances(queries, refs, dims, exec_);

        std::vector<std::size_t> order(n);
        for (std::size_t q = 0; q < rows.row_count(); ++q) {
            const double* dq = dist.data() + q * n;
            std::iota(order.begin(), order.end(), std::size_t{0});
            std::partial_sort(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(k_),
                              order.end(), [&](std::size_t a, std::size_t b) {
                                  return dq[a] < dq[b] || (dq[a] == dq[b] && a < b);
                              });
            double* p = out.data() + q * classes;
            // An exact match outweighs everything under inverse weighting.
            const bool exact = inverse_ && dq[order[0]] == 0.0;
            double total = 0.0;
            for (std::size_t i = 0; i < k_; ++i) {
                const double d = std::sqrt(dq[order[i]]);
                double w = 1.0;
                if (inverse_) w = exact ? (d == 0.0 ? 1.0 : 0.0) : 1.0 / d;
                p[static_cast<std::size_t>(labels_[order[i]])] += w;
                total += w;
            }
            for (std::size_t c = 0; c < classes; ++c) p[c] /= total;
        }
        return out;
    }

    DenseEncoder encoder_;
    std::vector<double> points_;
    std::vector<int> labels_;
    std::size_t k_;
    bool inverse_;
    Exec exec_;
};

class TreeModel final : public ModelBase {
public:
    TreeModel(std::string id, const Dataset& train, std::vector<cart::Tree> trees)
        : ModelBase(std::move(id), train), trees_(std::move(trees)) {}

private:
    std::vector<double> probabilities(const Dataset& rows) const override {
        const auto x = tree_features(rows);
        std::vector<double> out;
        out.reserve(rows.row_count() * classes());
        for (std::size_t r = 0; r < rows.row_count(); ++r) {
            const auto dist = cart::forest_distribution(trees_, x.row(r));
            out.insert(out.end(), dist.begin(), dist.end());
        }
        return out;
    }

    std::vector<cart::Tree> trees_;
};

// Per-class Gaussian likelihoods for numeric columns and Laplace-smoothed
// frequencies for categorical ones.
class NaiveBayesModel final : public ModelBase {
public:
    NaiveBayesModel(const Dataset& train, std::span<const int> labels, int smoothing_exp)
        : ModelBase(algorithm_ids::kNaiveBayes, train), target_(train.target_index()) {
        const std::size_t k = train.class_count();
        const auto n = static_cast<double>(labels.size());
        counts_.assign(k, 0.0);
        for (int y : labels) counts_[static_cast<std::size_t>(y)] += 1.0;
        log_prior_.resize(k);
        for (std::size_t c = 0; c < k; ++c) {
            log_prior_[c] = counts_[c] > 0 ? std::log(counts_[c] / n)
                                           : -std::numeric_limits<double>::infinity();
        }

        double max_var = 0.0;
        for (std::size_t col = 0; col < train.column_count(); ++col) {
            if (col == target_) continue;
            const Column& column = train.column(col);
            Feature f;
            f.column = col;
            f.kind = column.kind;
            if (column.kind == AttributeKind::numeric) {
                f.mean.assign(k, 0.0);
                f.var.assign(k, 0.0);
                double all_mean = 0;
                for (std::size_t r = 0; r < labels.size(); ++r) {
                    f.mean[static_cast<std::size_t>(labels[r])] += column.numbers[r];
                    all_mean += column.numbers[r];
                }
                all_mean /= n;
                double all_var = 0;
                for (std::size_t r = 0; r < labels.size(); ++r) {
                    all_var += (column.numbers[r] - all_mean) * (column.numbers[r] - all_mean);
                }
                max_var = std::max(max_var, all_var / n);
                for (std::size_t c = 0; c < k; ++c) {
                    if (counts_[c] > 0) f.mean[c] /= counts_[c];
                }
                for (std::size_t r = 0; r < labels.size(); ++r) {
                    const auto c = static_cast<std::size_t>(labels[r]);
                    const double d = column.numbers[r] - f.mean[c];
                    f.var[c] += d * d;
                }
                for (std::size_t c = 0; c < k; ++c) {
                    if (counts_[c] > 0) f.var[c] /= counts_[c];
                }
            } else {
                const std::size_t levels = column.levels.size();
                f.log_freq.assign(k * levels, 0.0);
                std::vector<double> hits(k * levels, 0.0);
                for (std::size_t r = 0; r < labels.size(); ++r) {
                    hits[static_cast<std::size_t>(labels[r]) * levels +
                         static_cast<std::size_t>(column.codes[r])] += 1.0;
                }
                for (std::size_t c = 0; c < k; ++c) {
                    for (std::size_t v = 0; v < levels; ++v) {
                        f.log_freq[c * levels + v] =
                            std::log((hits[c * levels + v] + 1.0) /
                                     (counts_[c] + static_cast<double>(levels)));
                    }
                }
                f.levels = levels;
            }
            features_.push_back(std::move(f));
        }
        const double epsilon = std::pow(10.0, smoothing_exp) * (max_var > 0 ? max_var : 1.0);
        for (auto& f : features_) {
            for (double& v : f.var) v += epsilon;
        }
    }

private:
    struct Feature {
        std::size_t column = 0;
        AttributeKind kind = AttributeKind::numeric;
        std::vector<double> mean;
        std::vector<double> var;
        std::vector<double> log_freq;
        std::size_t levels = 0;
    };

    std::vector<double> probabilities(const Dataset& rows) const override {
        constexpr double kLog2Pi = 1.8378770664093453;
        const std::size_t k = counts_.size();
        std::vector<double> out(rows.row_count() * k);
        std::vector<double> score(k);
        for (std::size_t r = 0; r < rows.row_count(); ++r) {
            for (std::size_t c = 0; c < k; ++c) score[c] = log_prior_[c];
            for (const Feature& f : features_) {
                const Column& col = rows.column(f.column);
                for (std::size_t c = 0; c < k; ++c) {
                    if (counts_[c] == 0) continue;
                    if (f.kind == AttributeKind::numeric) {
                        const double d = col.numbers[r] - f.mean[c];
                        score[c] += -0.5 * (kLog2Pi + std::log(f.var[c]) + d * d / f.var[c]);
                    } else {
                        score[c] += f.log_freq[c * f.levels + static_cast<std::size_t>(col.codes[r])];
                    }
                }
            }
            const double top = *std::max_element(score.begin(), score.end());
            double total = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double e = counts_[c] > 0 ? std::exp(score[c] - top) : 0.0;
                out[r * k + c] = e;
                total += e;
            }
            for (std::size_t c = 0; c < k; ++c) out[r * k + c] /= total;
        }
        return out;
    }

    std::size_t target_;
    std::vector<double> counts_;
    std::vector<double> log_prior_;
    std::vector<Feature> features_;
};

// One-vs-rest logistic regression fitted by full-batch gradient descent on
// z-scored inputs. The bias is not penalized.
class LogisticModel final : public ModelBase {
public:
    static constexpr int kIterations = 500;
    static constexpr double kStep = 0.1;

    LogisticModel(const Dataset& train, std::span<const int> labels, double l2)
        : ModelBase(algorithm_ids::kLogistic, train),
          encoder_(train, DenseEncoder::Scaling::z_score) {
        const std::size_t n = labels.size();
        const std::size_t d = encoder_.width();
        const std::size_t k = train.class_count();
        const auto x = encoder_.encode(train);
        weights_.assign(k * (d + 1), 0.0);
        std::vector<double> grad(d + 1);
        std::vector<double> residual(n);
        const double inv_n = 1.0 / static_cast<double>(n);
        for (std::size_t c = 0; c < k; ++c) {
            double* w = weights_.data() + c * (d + 1);
            for (int it = 0; it < kIterations; ++it) {
                for (std::size_t r = 0; r < n; ++r) {
                    const double z = linear(w, x.data() + r * d, d);
                    residual[r] = sigmoid(z) - (labels[r] == static_cast<int>(c) ? 1.0 : 0.0);
                }
                std::fill(grad.begin(), grad.end(), 0.0);
                for (std::size_t r = 0; r < n; ++r) {
                    const double* xr = x.data() + r * d;
                    for (std::size_t j = 0; j < d; ++j) grad[j] += residual[r] * xr[j];
                    grad[d] += residual[r];
                }
                for (std::size_t j = 0; j < d; ++j) {
                    w[j] -= kStep * (grad[j] * inv_n + l2 * inv_n * w[j]);
                }
                w[d] -= kStep * grad[d] * inv_n;
            }
        }
    }

private:
    static double sigmoid(double z) {
        return z >= 0 ? 1.0 / (1.0 + std::exp(-z)) : std::exp(z) / (1.0 + std::exp(z));
    }

    static double linear(const double* w, const double* x, std::size_t d) {
        double z = w[d];
        for (std::size_t j = 0; j < d; ++j) z += w[j] * x[j];
        return z;
    }

    std::vector<double> probabilities(const Dataset& rows) const override {
        const std::size_t d = encoder_.width();
        const std::size_t k = classes();
        const auto x = encoder_.encode(rows);
        std::vector<double> out(rows.row_count() * k);
        for (std::size_t r = 0; r < rows.row_count(); ++r) {
            double total = 0;
            for (std::size_t c = 0; c < k; ++c) {
                const double p = sigmoid(linear(weights_.data() + c * (d + 1), x.data() + r * d, d));
                out[r * k + c] = p;
                total += p;
            }
            for (std::size_t c = 0; c < k; ++c) out[r * k + c] /= total;
        }
        return out;
    }

    DenseEncoder encoder_;
    std::vector<double> weights_;
};

}  // namespace

std::unique_ptr<FittedModel> fit(const AlgorithmSpec& spec, const Config& config,
                                 const Dataset& train, std::uint64_t seed, Exec exec) {
    namespace ids = algorithm_ids;
    const Config cfg = spec.complete(config);
    if (train.row_count() == 0) throw DataError(spec.id + ": empty training data");
    if (train.has_missing()) throw DataError(spec.id + ": training data has missing cells");
    const auto labels = train.labels();

    if (spec.id == ids::kMajority) return std::make_unique<MajorityModel>(train, labels);
    if (spec.id == ids::kKnn) {
        return std::make_unique<KnnModel>(train, labels,
                                          static_cast<std::size_t>(int_param(cfg, "k")),
                                          std::get<std::string>(cfg.at("weighting")) ==
                                              "inverse-distance",
                                          exec);
    }
    if (spec.id == ids::kDecisionTree || spec.id == ids::kRandomForest) {
        const auto x = tree_features(train);
        cart::TreeParams tp;
        tp.max_depth = static_cast<int>(int_param(cfg, "max_depth"));
        if (spec.id == ids::kDecisionTree) {
            tp.min_split = static_cast<std::size_t>(int_param(cfg, "min_split"));
            std::vector<std::size_t> all(train.row_count());
            std::iota(all.begin(), all.end(), std::size_t{0});
            Rng rng(seed);
            std::vector<cart::Tree> trees;
            trees.push_back(cart::Tree::fit(x, labels, all, train.class_count(), tp, rng));
            return std::make_unique<TreeModel>(spec.id, train, std::move(trees));
        }
        tp.max_features = static_cast<std::size_t>(
            std::ceil(std::sqrt(static_cast<double>(std::max<std::size_t>(x.cols, 1)))));
        cart::ForestTrainParams fp;
        fp.trees = static_cast<std::size_t>(int_param(cfg, "trees"));
        fp.tree = tp;
        fp.seed = seed;
        fp.exec = exec;
        return std::make_unique<TreeModel>(spec.id, train,
                                           cart::fit_forest(x, labels, train.class_count(), fp));
    }
    if (spec.id == ids::kNaiveBayes) {
        return std::make_unique<NaiveBayesModel>(
            train, labels, static_cast<int>(int_param(cfg, "var_smoothing_exp")));
    }
    if (spec.id == ids::kLogistic) {
        return std::make_unique<LogisticModel>(train, labels, std::get<double>(cfg.at("l2")));
    }
    throw ContractError("no implementation for algorithm '" + spec.id + "'");
}

}  // namespace autocash

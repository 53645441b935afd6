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
#include <map>
#include <memory>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "autocash/parallel.hpp"
#include "autocash/tabular.hpp"

namespace autocash {

/// Integers lo..hi inclusive.
struct IntegerRange {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    bool operator==(const IntegerRange&) const = default;
};

/// A fixed set of tokens.
struct CategoricalSet {
    std::vector<std::string> values;
    bool operator==(const CategoricalSet&) const = default;
};

/// Reals 2^e for integer exponents e in lo..hi inclusive.
struct Log2Grid {
    int lo = 0;
    int hi = 0;
    bool operator==(const Log2Grid&) const = default;
};

using Domain = std::variant<IntegerRange, CategoricalSet, Log2Grid>;

/// Integer ranges hold int64, categorical sets hold strings, log2 grids hold
/// the real value 2^e.
using ParamValue = std::variant<std::int64_t, double, std::string>;

using Config = std::map<std::string, ParamValue>;

std::string to_string(const ParamValue& v);

struct HyperparamSpec {
    std::string name;
    Domain domain;
    int bits = 1;
    bool tunable = true;

    /// Number of distinct values in the domain.
    std::size_t cardinality() const;
    bool contains(const ParamValue& v) const;

    bool operator==(const HyperparamSpec&) const = default;
};

/// Smallest field width whose code space covers the whole domain.
int bits_for(const Domain& domain);

struct AlgorithmSpec {
    std::string id;
    std::vector<HyperparamSpec> hyperparameters;
    Config default_config;

    const HyperparamSpec& hyperparameter(const std::string& name) const;
    std::size_t tunable_count() const;

    /// Fills unset entries from the defaults; throws ContractError on unknown
    /// names or out-of-domain values.
    Config complete(const Config& partial) const;

    bool operator==(const AlgorithmSpec&) const = default;
};

namespace algorithm_ids {
inline constexpr const char* kMajority = "majority-baseline";
inline constexpr const char* kKnn = "k-nearest-neighbors";
inline constexpr const char* kDecisionTree = "decision-tree";
inline constexpr const char* kRandomForest = "random-forest";
inline constexpr const char* kNaiveBayes = "gaussian-naive-bayes";
inline constexpr const char* kLogistic = "logistic-regression";
}  // namespace algorithm_ids

/// The six built-in algorithms, every hyperparameter marked tunable.
std::vector<AlgorithmSpec> list_algorithms();

/// Ordered algorithm set with per-hyperparameter tunable flags.
class Portfolio {
public:
    Portfolio() = default;
    explicit Portfolio(std::vector<AlgorithmSpec> algorithms);

    static Portfolio standard() { return Portfolio(list_algorithms()); }

    const std::vector<AlgorithmSpec>& algorithms() const { return algorithms_; }
    const AlgorithmSpec& at(const std::string& id) const;
    bool contains(const std::string& id) const;
    std::size_t index_of(const std::string& id) const;
    void set_tunable(const std::string& id, const std::string& param, bool tunable);
    void replace(const AlgorithmSpec& spec);

    /// FNV-1a of the canonical JSON of ids, domains, defaults and flags.
    std::string fingerprint() const;

    bool operator==(const Portfolio&) const = default;

private:
    std::vector<AlgorithmSpec> algorithms_;
};

/// Labels plus a row-major (rows x classes) probability table.
struct Prediction {
    std::vector<int> labels;
    std::vector<double> probabilities;
    std::size_t classes = 0;

    std::span<const double> row(std::size_t i) const {
        return {probabilities.data() + i * classes, classes};
    }
};

/// A trained classifier. Immutable after fit; safe for concurrent predicts.
class FittedModel {
public:
    virtual ~FittedModel() = default;
    virtual const std::string& algorithm() const = 0;
    /// Throws DataError when `rows` does not share the training schema.
    virtual Prediction predict_with_scores(const Dataset& rows) const = 0;
};

std::unique_ptr<FittedModel> fit(const AlgorithmSpec& spec, const Config& config,
                                 const Dataset& train, std::uint64_t seed,
                                 Exec exec = Exec::parallel);

}  // namespace autocash

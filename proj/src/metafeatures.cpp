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

#include "autocash/metafeatures.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <string>

#include "autocash/errors.hpp"

namespace autocash {

namespace {

using T = MetaFeatureType;

constexpr std::array<MetaFeatureType, kMetaFeatureCount> kTypes = {
    T::count,      T::entropy,    T::proportion, T::proportion, T::count,    T::count,
    T::proportion, T::count,      T::count,      T::count,      T::entropy,  T::proportion,
    T::proportion, T::count,      T::entropy,    T::proportion, T::proportion, T::average,
    T::average,    T::variance,   T::variance,   T::variance,   T::variance,
};

constexpr std::array<std::string_view, kMetaFeatureCount> kLabels = {
    "target class count",
    "target class entropy",
    "target max class proportion",
    "target min class proportion",
    "numeric attribute count",
    "categorical attribute count",
    "numeric attribute proportion",
    "attribute count",
    "record count",
    "fewest-class categorical: class count",
    "fewest-class categorical: entropy",
    "fewest-class categorical: max proportion",
    "fewest-class categorical: min proportion",
    "most-class categorical: class count",
    "most-class categorical: entropy",
    "most-class categorical: max proportion",
    "most-class categorical: min proportion",
    "min numeric mean",
    "max numeric mean",
    "min numeric variance",
    "max numeric variance",
    "variance of numeric means",
    "variance of numeric variances",
};

struct ClassSummary {
    double classes = 0;
    double entropy = 0;
    double max_prop = 0;
    double min_prop = 0;
};

// Distribution of the present levels of a categorical column.
ClassSummary summarize(const Column& c) {
    std::vector<double> counts(c.levels.size(), 0.0);
    double total = 0;
    for (auto code : c.codes) {
        if (code < 0) continue;
        counts[static_cast<std::size_t>(code)] += 1.0;
        total += 1.0;
    }
    std::vector<double> props;
    for (double n : counts) {
        if (n > 0) props.push_back(n / total);
    }
    ClassSummary s;
    if (props.empty()) return s;
    s.classes = static_cast<double>(props.size());
    s.entropy = entropy(props);
    s.max_prop = *std::max_element(props.begin(), props.end());
    s.min_prop = *std::min_element(props.begin(), props.end());
    return s;
}

double mean_of(const std::vector<double>& xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_variance(const std::vector<double>& xs) {
    const double m = mean_of(xs);
    double acc = 0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size());
}

}  // namespace

MetaFeatureType meta_feature_type(std::size_t index) { return kTypes.at(index); }

std::string_view meta_feature_label(std::size_t index) { return kLabels.at(index); }

MetaFeatureList::MetaFeatureList(std::vector<int> indices) : indices_(std::move(indices)) {
    if (indices_.size() > kMaxSelected) {
        throw ContractError("meta-feature list longer than " + std::to_string(kMaxSelected));
    }
    for (std::size_t k = 0; k < indices_.size(); ++k) {
        const int i = indices_[k];
        if (i < 0 || i >= static_cast<int>(kMetaFeatureCount)) {
            throw ContractError("meta-feature index " + std::to_string(i) + " out of range");
        }
        if (k > 0 && indices_[k - 1] >= i) {
            throw ContractError("meta-feature indices must be strictly increasing");
        }
    }
}

MetaFeatureList MetaFeatureList::from_mask(std::uint32_t mask) {
    std::vector<int> out;
    for (int i = 0; i < static_cast<int>(kMetaFeatureCount); ++i) {
        if (mask & (1u << i)) out.push_back(i);
    }
    return MetaFeatureList(std::move(out));
}

std::uint32_t MetaFeatureList::mask() const {
    std::uint32_t m = 0;
    for (int i : indices_) m |= 1u << i;
    return m;
}

double entropy(std::span<const double> proportions) {
    double sum = 0;
    for (double p : proportions) {
        if (!(p >= 0.0)) throw ContractError("entropy: proportions must be non-negative");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ContractError("entropy: proportions must sum to 1");
    double h = 0;
    for (double p : proportions) {
        if (p > 0) h -= p * std::log2(p);
    }
    return h;
}

MetaFeatureVector compute_all(const Dataset& d) {
    MetaFeatureVector v;
    auto& mf = v.values;

    const ClassSummary target = summarize(d.target());
    mf[0] = target.classes;
    mf[1] = target.entropy;
    mf[2] = target.max_prop;
    mf[3] = target.min_prop;

    std::vector<const Column*> numeric;
    std::vector<const Column*> categorical;
    for (std::size_t c = 0; c < d.column_count(); ++c) {
        if (c == d.target_index()) continue;
        const Column& col = d.column(c);
        (col.kind == AttributeKind::numeric ? numeric : categorical).push_back(&col);
    }
    const double total = static_cast<double>(numeric.size() + categorical.size());
    mf[4] = static_cast<double>(numeric.size());
    mf[5] = static_cast<double>(categorical.size());
    mf[6] = numeric.empty() ? 0.0 : mf[4] / total;
    mf[7] = total;
    mf[8] = static_cast<double>(d.row_count());

    if (!categorical.empty()) {
        std::vector<ClassSummary> summaries;
        for (const Column* c : categorical) summaries.push_back(summarize(*c));
        // First attribute wins ties in both directions.
        std::size_t fewest = 0;
        std::size_t most = 0;
        for (std::size_t i = 1; i < summaries.size(); ++i) {
            if (summaries[i].classes < summaries[fewest].classes) fewest = i;
            if (summaries[i].classes > summaries[most].classes) most = i;
        }
        const ClassSummary& lo = summaries[fewest];
        const ClassSummary& hi = summaries[most];
        mf[9] = lo.classes;
        mf[10] = lo.entropy;
        mf[11] = lo.max_prop;
        mf[12] = lo.min_prop;
        mf[13] = hi.classes;
        mf[14] = hi.entropy;
        mf[15] = hi.max_prop;
        mf[16] = hi.min_prop;
    }

    if (!numeric.empty()) {
        std::vector<double> means;
        std::vector<double> variances;
        for (const Column* c : numeric) {
            std::vector<double> xs;
            for (double x : c->numbers) {
                if (!std::isnan(x)) xs.push_back(x);
            }
            if (xs.empty()) xs.push_back(0.0);
            // Sorted summation makes the result independent of row order.
            std::sort(xs.begin(), xs.end());
            means.push_back(mean_of(xs));
            variances.push_back(population_variance(xs));
        }
        mf[17] = *std::min_element(means.begin(), means.end());
        mf[18] = *std::max_element(means.begin(), means.end());
        mf[19] = *std::min_element(variances.begin(), variances.end());
        mf[20] = *std::max_element(variances.begin(), variances.end());
        mf[21] = population_variance(means);
        mf[22] = population_variance(variances);
    }
    return v;
}

std::vector<double> project(const MetaFeatureVector& v, std::span<const int> indices) {
    std::vector<double> out;
    out.reserve(indices.size());
    for (int i : indices) {
        if (i < 0 || i >= static_cast<int>(kMetaFeatureCount)) {
            throw ContractError("project: meta-feature index " + std::to_string(i) +
                                " out of range");
        }
        out.push_back(v.values[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<double> project(const MetaFeatureVector& v, const MetaFeatureList& m) {
    return project(v, std::span<const int>(m.indices()));
}

}  // namespace autocash

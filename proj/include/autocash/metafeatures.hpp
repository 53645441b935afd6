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
#include <string_view>
#include <vector>

#include "autocash/tabular.hpp"

namespace autocash {

/// Size of the meta-feature catalogue.
inline constexpr std::size_t kMetaFeatureCount = 23;
/// Upper bound on the number of meta-features kept for the meta-learner.
inline constexpr std::size_t kMaxSelected = 8;

enum class MetaFeatureType {
    entropy = 1,
    proportion = 2,
    average = 3,
    variance = 4,
    count = 5,
};

MetaFeatureType meta_feature_type(std::size_t index);
/// Short human-readable description of catalogue entry `index`.
std::string_view meta_feature_label(std::size_t index);

struct MetaFeatureVector {
    std::array<double, kMetaFeatureCount> values{};

    double operator[](std::size_t i) const { return values[i]; }
    bool operator==(const MetaFeatureVector&) const = default;
};

/// A validated, strictly increasing subset of catalogue indices with at most
/// kMaxSelected entries.
class MetaFeatureList {
public:
    MetaFeatureList() = default;
    explicit MetaFeatureList(std::vector<int> indices);

    /// Every catalogue index whose bit is set in `mask`.
    static MetaFeatureList from_mask(std::uint32_t mask);

    const std::vector<int>& indices() const { return indices_; }
    std::size_t size() const { return indices_.size(); }
    bool empty() const { return indices_.empty(); }
    std::uint32_t mask() const;

    bool operator==(const MetaFeatureList&) const = default;

private:
    std::vector<int> indices_;
};

/// Shannon entropy in bits. Proportions must be non-negative and sum to 1.
double entropy(std::span<const double> proportions);

/// Computes mf0..mf22 for an imputed dataset.
MetaFeatureVector compute_all(const Dataset& d);

/// Selects v[indices[k]] for each k. Accepts any list of valid catalogue
/// indices (duplicates and order are honoured).
std::vector<double> project(const MetaFeatureVector& v, std::span<const int> indices);
std::vector<double> project(const MetaFeatureVector& v, const MetaFeatureList& m);

}  // namespace autocash
